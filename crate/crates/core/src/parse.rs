//! Text input for scalars and matrices.
//!
//! ```text
//! scalar   := term (("+" | "-") term)*
//! term     := unary (("*" | "/") unary)*
//! unary    := "-" unary | factor
//! factor   := rational | "sqrt" "(" scalar ")" | "X" ("^" "(" rational ")")?
//!           | "O" "(" "X" ("^" "(" rational ")")? ")" | "(" scalar ")"
//! rational := int ("/" posint)?
//! ```
//!
//! Matrices separate rows by `;` or newlines and entries by `,`. `O(X^(e))`
//! is accepted so that printed Puiseux values read back.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::puiseux::{PuiseuxScalar, Tail, Truncation};
use crate::scalar::{Rational, Scalar};
use crate::tower::TowerScalar;

/// Scalars that can be built from parsed text.
pub trait ParseScalar: Scalar {
    /// `X^e`, or `None` when the field has no indeterminate.
    fn x_pow(e: Rational) -> Option<Self>;
    /// `O(X^e)`, or `None` when the field has no indeterminate.
    fn big_o(e: Rational) -> Option<Self>;
}

impl ParseScalar for TowerScalar {
    fn x_pow(_e: Rational) -> Option<Self> {
        None
    }
    fn big_o(_e: Rational) -> Option<Self> {
        None
    }
}

impl ParseScalar for PuiseuxScalar {
    fn x_pow(e: Rational) -> Option<Self> {
        Some(PuiseuxScalar::x_pow(e))
    }
    fn big_o(e: Rational) -> Option<Self> {
        Some(PuiseuxScalar::from_terms(Vec::new(), Tail::Below(e)))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Sqrt,
    X,
    BigO,
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

impl Lexer {
    fn new(text: &str, line: usize, col0: usize) -> Result<Self> {
        let chars: Vec<char> = text.chars().collect();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = col0 + i;
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let simple = match c {
                '+' => Some(Tok::Plus),
                '-' => Some(Tok::Minus),
                '*' => Some(Tok::Star),
                '/' => Some(Tok::Slash),
                '^' => Some(Tok::Caret),
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                'X' => Some(Tok::X),
                'O' => Some(Tok::BigO),
                _ => None,
            };
            if let Some(t) = simple {
                toks.push((t, line, col));
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                toks.push((Tok::Int(s.parse().expect("digits")), line, col));
            } else if chars[i..].starts_with(&['s', 'q', 'r', 't']) {
                toks.push((Tok::Sqrt, line, col));
                i += 4;
            } else {
                return Err(parse_err(line, col, format!("unexpected character '{c}'")));
            }
        }
        toks.push((Tok::End, line, col0 + chars.len()));
        Ok(Lexer { toks })
    }
}

struct Parser<'a, S: ParseScalar> {
    toks: &'a [(Tok, usize, usize)],
    pos: usize,
    prec: &'a S::Precision,
}

impl<S: ParseScalar> Parser<'_, S> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn here(&self) -> (usize, usize) {
        let (_, l, c) = &self.toks[self.pos];
        (*l, *c)
    }

    fn err(&self, message: impl Into<String>) -> Error {
        let (l, c) = self.here();
        parse_err(l, c, message)
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn scalar(&mut self) -> Result<S> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.pos += 1;
                    acc = acc.add_ref(&self.term()?);
                }
                Tok::Minus => {
                    self.pos += 1;
                    acc = acc.sub_ref(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<S> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.pos += 1;
                    acc = acc.mul_ref(&self.unary()?);
                }
                Tok::Slash => {
                    self.pos += 1;
                    let (l, c) = self.here();
                    let d = self.unary()?;
                    if d.is_exact_zero() {
                        return Err(parse_err(l, c, "division by zero"));
                    }
                    acc = acc.div_ref(&d, self.prec)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<S> {
        if *self.peek() == Tok::Minus {
            self.pos += 1;
            return Ok(self.unary()?.neg_ref());
        }
        self.factor()
    }

    fn int(&mut self) -> Result<BigInt> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.err("expected an integer")),
        }
    }

    /// `int ("/" posint)?`, with an optional leading minus.
    fn rational(&mut self) -> Result<Rational> {
        let neg = if *self.peek() == Tok::Minus {
            self.pos += 1;
            true
        } else {
            false
        };
        let num = self.int()?;
        let den = if *self.peek() == Tok::Slash {
            self.pos += 1;
            let d = self.int()?;
            if d.is_zero() {
                return Err(self.err("zero denominator"));
            }
            d
        } else {
            BigInt::one()
        };
        let r = Rational::new(num, den);
        Ok(if neg { -r } else { r })
    }

    fn exponent(&mut self) -> Result<Rational> {
        if *self.peek() != Tok::Caret {
            return Ok(Rational::one());
        }
        self.pos += 1;
        self.expect(Tok::LParen, "'(' after '^'")?;
        let e = self.rational()?;
        self.expect(Tok::RParen, "')'")?;
        Ok(e)
    }

    fn factor(&mut self) -> Result<S> {
        let (l, c) = self.here();
        match self.peek().clone() {
            Tok::Int(_) => {
                let num = self.int()?;
                Ok(S::from_rational(Rational::from_integer(num)))
            }
            Tok::Sqrt => {
                self.pos += 1;
                self.expect(Tok::LParen, "'(' after sqrt")?;
                let v = self.scalar()?;
                self.expect(Tok::RParen, "')'")?;
                if v.is_exact_zero() {
                    return Ok(v);
                }
                v.sqrt(self.prec)
            }
            Tok::X => {
                self.pos += 1;
                let e = self.exponent()?;
                S::x_pow(e).ok_or_else(|| parse_err(l, c, "X is only available over the Puiseux field"))
            }
            Tok::BigO => {
                self.pos += 1;
                self.expect(Tok::LParen, "'(' after O")?;
                self.expect(Tok::X, "X")?;
                let e = self.exponent()?;
                self.expect(Tok::RParen, "')'")?;
                S::big_o(e).ok_or_else(|| parse_err(l, c, "O(...) is only available over the Puiseux field"))
            }
            Tok::LParen => {
                self.pos += 1;
                let v = self.scalar()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(v)
            }
            Tok::End => Err(self.err("unexpected end of input")),
            _ => Err(self.err("expected a number, sqrt, X or '('")),
        }
    }
}

fn parse_at<S: ParseScalar>(text: &str, line: usize, col0: usize, prec: &S::Precision) -> Result<S> {
    let lexer = Lexer::new(text, line, col0)?;
    let mut p = Parser::<S> {
        toks: &lexer.toks,
        pos: 0,
        prec,
    };
    let v = p.scalar()?;
    if *p.peek() != Tok::End {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

/// Parses one scalar.
pub fn parse_scalar<S: ParseScalar>(text: &str, prec: &S::Precision) -> Result<S> {
    parse_at(text, 1, 1, prec)
}

/// Parses a matrix: rows separated by `;` or newlines, entries by `,`.
pub fn parse_matrix<S: ParseScalar>(text: &str, prec: &S::Precision) -> Result<Matrix<S>> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut rows: Vec<Vec<S>> = Vec::new();
    let mut width: Option<usize> = None;
    for (li, line) in text.lines().enumerate() {
        let mut offset = 0;
        for chunk in line.split(';') {
            let col_start = offset;
            offset += chunk.chars().count() + 1;
            if chunk.trim().is_empty() {
                continue;
            }
            let mut row = Vec::new();
            let mut entry_off = col_start;
            for entry in chunk.split(',') {
                let start = entry_off;
                entry_off += entry.chars().count() + 1;
                if entry.trim().is_empty() {
                    return Err(parse_err(li + 1, start + 1, "empty matrix entry"));
                }
                row.push(parse_at::<S>(entry, li + 1, start + 1, prec)?);
            }
            match width {
                None => width = Some(row.len()),
                Some(w) if w != row.len() => {
                    return Err(parse_err(
                        li + 1,
                        col_start + 1,
                        format!("row has {} entries, expected {w}", row.len()),
                    ))
                }
                _ => {}
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return Err(parse_err(1, 1, "empty matrix"));
    }
    Matrix::from_rows(rows)
}

pub fn parse_tower(text: &str) -> Result<TowerScalar> {
    parse_scalar(text, &())
}

pub fn parse_puiseux(text: &str) -> Result<PuiseuxScalar> {
    parse_scalar(text, &Truncation::default())
}
