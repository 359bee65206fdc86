//! Truncated Puiseux series `Σ c_k X^{e_k}` over the quadratic tower, ordered
//! with `X` larger than every constant: the term of largest exponent leads.
//!
//! A value is a finite list of known terms plus a tail. `Tail::Exact` means the
//! list is the whole series. `Tail::Below(e)` means every coefficient at an
//! exponent `≤ e` is unknown; all stored exponents are then `> e`.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{q, Rational, Scalar, Sign};
use crate::tower::TowerScalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tail {
    Exact,
    Below(Rational),
}

/// How far `invert` and `sqrt` expand, in units of the input's leading gap
/// (the distance between its two largest exponents).
#[derive(Debug, Clone, PartialEq)]
pub struct Truncation {
    pub order: Rational,
}

pub const DEFAULT_ORDER: i64 = 8;

impl Default for Truncation {
    fn default() -> Self {
        Truncation {
            order: q(DEFAULT_ORDER),
        }
    }
}

impl Truncation {
    pub fn new(order: Rational) -> Self {
        Truncation { order }
    }
}

#[derive(Clone, PartialEq)]
pub struct PuiseuxScalar {
    terms: Vec<(Rational, TowerScalar)>,
    tail: Tail,
}

fn max_opt(a: Option<Rational>, b: Option<Rational>) -> Option<Rational> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if x >= y { x } else { y }),
        (x, None) => x,
        (None, y) => y,
    }
}

impl PuiseuxScalar {
    fn build(mut terms: Vec<(Rational, TowerScalar)>, tail: Tail) -> Self {
        terms.retain(|(_, c)| !c.is_zero());
        if let Tail::Below(e) = &tail {
            terms.retain(|(x, _)| x > e);
        }
        PuiseuxScalar { terms, tail }
    }

    pub fn zero() -> Self {
        PuiseuxScalar {
            terms: Vec::new(),
            tail: Tail::Exact,
        }
    }

    pub fn from_tower(c: TowerScalar) -> Self {
        Self::monomial(c, Rational::zero())
    }

    pub fn from_rational(c: Rational) -> Self {
        Self::from_tower(TowerScalar::from_rational(c))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(q(n))
    }

    pub fn monomial(c: TowerScalar, exponent: Rational) -> Self {
        Self::build(vec![(exponent, c)], Tail::Exact)
    }

    /// The infinite element `X`.
    pub fn x() -> Self {
        Self::monomial(TowerScalar::one(), Rational::one())
    }

    /// `X^e`.
    pub fn x_pow(e: Rational) -> Self {
        Self::monomial(TowerScalar::one(), e)
    }

    /// Builds a series from `(exponent, coefficient)` pairs in any order;
    /// repeated exponents are summed.
    pub fn from_terms(pairs: Vec<(Rational, TowerScalar)>, tail: Tail) -> Self {
        let mut acc = Self::zero();
        for (e, c) in pairs {
            acc = acc.add(&Self::monomial(c, e));
        }
        acc.tail = tail;
        Self::build(acc.terms, acc.tail)
    }

    /// Known terms, largest exponent first.
    pub fn terms(&self) -> &[(Rational, TowerScalar)] {
        &self.terms
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn is_exact(&self) -> bool {
        self.tail == Tail::Exact
    }

    pub fn bound(&self) -> Option<&Rational> {
        match &self.tail {
            Tail::Exact => None,
            Tail::Below(e) => Some(e),
        }
    }

    pub fn lead(&self) -> Option<(&Rational, &TowerScalar)> {
        self.terms.first().map(|(e, c)| (e, c))
    }

    pub fn lead_exponent(&self) -> Option<&Rational> {
        self.terms.first().map(|(e, _)| e)
    }

    /// Least common denominator of the stored exponents.
    pub fn ramification(&self) -> u64 {
        let mut m = num_bigint::BigInt::one();
        for (e, _) in &self.terms {
            m = m.lcm(e.denom());
        }
        if let Tail::Below(e) = &self.tail {
            m = m.lcm(e.denom());
        }
        m.try_into().unwrap_or(u64::MAX)
    }

    /// Largest exponent carrying information: the leading term or the tail
    /// bound. `None` for the exact zero.
    fn top(&self) -> Option<Rational> {
        max_opt(self.lead_exponent().cloned(), self.bound().cloned())
    }

    /// Forgets every coefficient at an exponent `≤ bound`.
    pub fn truncate(&self, bound: &Rational) -> Self {
        let tail = match &self.tail {
            Tail::Below(e) if e >= bound => Tail::Below(e.clone()),
            _ => Tail::Below(bound.clone()),
        };
        Self::build(self.terms.clone(), tail)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                Ordering::Less
            } else if j == b.len() {
                Ordering::Greater
            } else {
                a[i].0.cmp(&b[j].0)
            };
            match ord {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1.add(&b[j].1)));
                    i += 1;
                    j += 1;
                }
            }
        }
        let tail = match max_opt(self.bound().cloned(), other.bound().cloned()) {
            Some(e) => Tail::Below(e),
            None => Tail::Exact,
        };
        Self::build(out, tail)
    }

    pub fn neg(&self) -> Self {
        PuiseuxScalar {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
            tail: self.tail.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (ta, tb) = match (self.top(), other.top()) {
            (Some(x), Some(y)) => (x, y),
            _ => return Self::zero(),
        };
        let mut bound: Option<Rational> = None;
        if let Some(e2) = other.bound() {
            bound = max_opt(bound, Some(&ta + e2));
        }
        if let Some(e1) = self.bound() {
            bound = max_opt(bound, Some(&tb + e1));
        }
        let mut acc: Vec<(Rational, TowerScalar)> = Vec::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if let Some(bd) = &bound {
                    if &e <= bd {
                        break;
                    }
                }
                acc.push((e, ca.mul(cb)));
            }
        }
        acc.sort_by(|x, y| y.0.cmp(&x.0));
        let mut merged: Vec<(Rational, TowerScalar)> = Vec::with_capacity(acc.len());
        for (e, c) in acc {
            match merged.last_mut() {
                Some((le, lc)) if *le == e => *lc = lc.add(&c),
                _ => merged.push((e, c)),
            }
        }
        let tail = match bound {
            Some(e) => Tail::Below(e),
            None => Tail::Exact,
        };
        Self::build(merged, tail)
    }

    pub fn scale_tower(&self, c: &TowerScalar) -> Self {
        Self::build(
            self.terms.iter().map(|(e, x)| (e.clone(), x.mul(c))).collect(),
            self.tail.clone(),
        )
    }

    /// Multiplies by `X^s`.
    pub fn shift(&self, s: &Rational) -> Self {
        PuiseuxScalar {
            terms: self.terms.iter().map(|(e, c)| (e + s, c.clone())).collect(),
            tail: match &self.tail {
                Tail::Exact => Tail::Exact,
                Tail::Below(e) => Tail::Below(e + s),
            },
        }
    }

    pub fn sign(&self) -> Result<Sign> {
        match self.terms.first() {
            Some((_, c)) => Ok(c.sign()),
            None if self.is_exact() => Ok(Sign::Zero),
            None => Err(Error::IndeterminateSign),
        }
    }

    /// Splits a nonzero value as `c₀ X^{e₀} (1 + r)`; returns `(c₀, e₀, r, gap)`
    /// where `gap` is the distance from `e₀` to the next exponent carrying
    /// information (`None` for an exact monomial).
    fn normalize_lead(&self) -> Result<(TowerScalar, Rational, Self, Option<Rational>)> {
        let (e0, c0) = match self.terms.first() {
            Some((e, c)) => (e.clone(), c.clone()),
            None if self.is_exact() => return Err(Error::DivisionByZero),
            None => return Err(Error::IndeterminateSign),
        };
        let inv_c0 = c0.invert()?;
        let rest = PuiseuxScalar {
            terms: self.terms[1..].to_vec(),
            tail: self.tail.clone(),
        };
        let r = rest.scale_tower(&inv_c0).shift(&-&e0);
        let gap = r.top().map(|t| -t);
        Ok((c0, e0, r, gap))
    }

    /// `Σ coeff_k r^k` truncated below relative exponent `cutoff`.
    fn power_series(r: &Self, coeff: impl Fn(usize) -> Rational, cutoff: &Rational) -> Self {
        let mut acc = Self::from_int(1).truncate(cutoff);
        let mut power = Self::from_int(1);
        let mut k = 0;
        loop {
            k += 1;
            power = power.mul(r).truncate(cutoff);
            if power.terms.is_empty() {
                break;
            }
            let c = coeff(k);
            if !c.is_zero() {
                acc = acc.add(&power.scale_tower(&TowerScalar::from_rational(c)));
            }
        }
        acc
    }

    /// Inverse carried to relative exponent `cutoff` (negative), below the
    /// leading term of the result.
    pub fn invert_with_cutoff(&self, cutoff: &Rational) -> Result<Self> {
        let (c0, e0, r, gap) = self.normalize_lead()?;
        let inv_c0 = c0.invert()?;
        if gap.is_none() {
            return Ok(Self::monomial(inv_c0, -e0));
        }
        let series = Self::power_series(
            &r,
            |k| if k % 2 == 0 { q(1) } else { q(-1) },
            cutoff,
        );
        Ok(series.scale_tower(&inv_c0).shift(&-e0))
    }

    /// `1/self`, expanded through `order` multiples of the leading gap.
    pub fn invert(&self, order: &Rational) -> Result<Self> {
        let (_, _, _, gap) = self.normalize_lead()?;
        let cutoff = match gap {
            Some(g) => -(order * g),
            None => Rational::zero(),
        };
        self.invert_with_cutoff(&cutoff)
    }

    /// Positive square root carried to relative exponent `cutoff`.
    pub fn sqrt_with_cutoff(&self, cutoff: &Rational) -> Result<Self> {
        match self.sign()? {
            Sign::Positive => {}
            _ => return Err(Error::NotPositive),
        }
        let (c0, e0, r, gap) = self.normalize_lead()?;
        let root_c0 = c0.sqrt_positive()?;
        let half_e0 = &e0 / q(2);
        if gap.is_none() {
            return Ok(Self::monomial(root_c0, half_e0));
        }
        let coeff = binomial_half;
        if self.is_exact() {
            // An exact square has a root spanning half the exponent range.
            let lowest = self.terms.last().map(|(e, _)| e.clone()).unwrap();
            let span = (&lowest - &e0) / q(2);
            let probe = Self::power_series(&r, coeff, &(&span - q(1)));
            let candidate = PuiseuxScalar::build(
                probe.terms.into_iter().filter(|(e, _)| e >= &span).collect(),
                Tail::Exact,
            )
            .scale_tower(&root_c0)
            .shift(&half_e0);
            if candidate.mul(&candidate) == *self {
                return Ok(candidate);
            }
        }
        let series = Self::power_series(&r, coeff, cutoff);
        Ok(series.scale_tower(&root_c0).shift(&half_e0))
    }

    /// Positive square root, expanded through `order` multiples of the
    /// leading gap. Exact squares of finite sums come back exact.
    pub fn sqrt_positive(&self, order: &Rational) -> Result<Self> {
        match self.sign()? {
            Sign::Positive => {}
            _ => return Err(Error::NotPositive),
        }
        let (_, _, _, gap) = self.normalize_lead()?;
        let cutoff = match gap {
            Some(g) => -(order * g),
            None => Rational::zero(),
        };
        self.sqrt_with_cutoff(&cutoff)
    }

    /// Evaluates the known terms at `X = t`. Exponents must have power-of-two
    /// denominators so that `t^e` stays inside the tower.
    pub fn specialize(&self, t: &Rational) -> Result<TowerScalar> {
        if !t.is_positive() {
            return Err(Error::NotPositive);
        }
        let base = TowerScalar::from_rational(t.clone());
        let mut acc = TowerScalar::zero();
        for (e, c) in &self.terms {
            let d = e.denom();
            let mut levels = 0u32;
            let mut dd = d.clone();
            while dd.is_even() {
                dd >>= 1;
                levels += 1;
            }
            if !dd.is_one() {
                return Err(Error::UnsupportedExponent(e.to_string()));
            }
            let mut root = base.clone();
            for _ in 0..levels {
                root = root.sqrt_positive()?;
            }
            let p: i64 = e
                .numer()
                .try_into()
                .map_err(|_| Error::UnsupportedExponent(e.to_string()))?;
            acc = acc.add(&c.mul(&root.pow(p)?));
        }
        Ok(acc)
    }

    pub fn to_f64_at(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c.to_f64() * t.powf(crate::interval::to_f64(e)))
            .sum()
    }
}

fn binomial_half(k: usize) -> Rational {
    // C(1/2, k) = Π_{i<k} (1/2 - i) / k!
    let mut c = q(1);
    for i in 0..k {
        c = c * (Rational::new(1.into(), 2.into()) - q(i as i64)) / q(i as i64 + 1);
    }
    c
}

fn write_exponent(f: &mut fmt::Formatter<'_>, e: &Rational) -> fmt::Result {
    if e.is_one() {
        write!(f, "X")
    } else if e.denom().is_one() {
        write!(f, "X^({})", e.numer())
    } else {
        write!(f, "X^({}/{})", e.numer(), e.denom())
    }
}

impl fmt::Display for PuiseuxScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            let (neg, mag) = if c.sign() == Sign::Negative && !c.is_compound_sum() {
                (true, c.neg())
            } else {
                (false, c.clone())
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let leading = first;
            first = false;
            if e.is_zero() {
                if mag.is_compound_sum() && !leading {
                    write!(f, "({mag})")?;
                } else {
                    write!(f, "{mag}")?;
                }
                continue;
            }
            if mag != TowerScalar::one() {
                if mag.is_compound_sum() {
                    write!(f, "({mag})*")?;
                } else {
                    write!(f, "{mag}*")?;
                }
            }
            write_exponent(f, e)?;
        }
        if let Tail::Below(e) = &self.tail {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "O(")?;
            write_exponent(f, e)?;
            write!(f, ")")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PuiseuxScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PuiseuxScalar({self})")
    }
}

impl From<TowerScalar> for PuiseuxScalar {
    fn from(c: TowerScalar) -> Self {
        PuiseuxScalar::from_tower(c)
    }
}

impl From<i64> for PuiseuxScalar {
    fn from(n: i64) -> Self {
        PuiseuxScalar::from_int(n)
    }
}

impl Scalar for PuiseuxScalar {
    type Precision = Truncation;

    fn zero() -> Self {
        PuiseuxScalar::zero()
    }
    fn one() -> Self {
        PuiseuxScalar::from_int(1)
    }
    fn from_rational(value: Rational) -> Self {
        PuiseuxScalar::from_rational(value)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn sign(&self) -> Result<Sign> {
        PuiseuxScalar::sign(self)
    }
    fn vanishes(&self) -> bool {
        self.terms.is_empty()
    }
    fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.is_exact()
    }
    fn inv(&self, prec: &Truncation) -> Result<Self> {
        self.invert(&prec.order)
    }
    fn sqrt(&self, prec: &Truncation) -> Result<Self> {
        self.sqrt_positive(&prec.order)
    }
    /// The leading coefficient's value; `X` has no real value.
    fn to_f64(&self) -> f64 {
        self.terms.first().map(|(_, c)| c.to_f64()).unwrap_or(0.0)
    }
    fn scale(&self, c: &Rational) -> Self {
        self.scale_tower(&TowerScalar::from_rational(c.clone()))
    }
}
