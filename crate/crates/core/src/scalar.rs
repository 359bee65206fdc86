//! The ordered-field interface shared by the two scalar backends.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::Result;

pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num/den`.
pub fn qf(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn to_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }

    pub fn is_positive(self) -> bool {
        self == Sign::Positive
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        match self.to_i8() * rhs.to_i8() {
            -1 => Sign::Negative,
            0 => Sign::Zero,
            _ => Sign::Positive,
        }
    }
}

/// An ordered field in which positive elements have square roots, with the
/// exactness contract needed by the matrix algorithms.
///
/// Arithmetic goes through `*_ref` methods so generic code never has to clone
/// operands. `Precision` is the knob that controls how far inverses and square
/// roots are expanded; it is `()` for exact backends.
pub trait Scalar: Clone + fmt::Debug + fmt::Display + PartialEq {
    type Precision: Clone + fmt::Debug + Default;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(value: Rational) -> Self;

    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;

    /// Exact sign, or `IndeterminateSign` when the value carries no information.
    fn sign(&self) -> Result<Sign>;

    /// True when no known part of the value is nonzero. For exact backends this
    /// is the exact zero test; for truncated values it means "zero through the
    /// truncation".
    fn vanishes(&self) -> bool;

    /// True only for a value known to be exactly zero.
    fn is_exact_zero(&self) -> bool;

    fn inv(&self, prec: &Self::Precision) -> Result<Self>;

    /// Positive square root of a positive element.
    fn sqrt(&self, prec: &Self::Precision) -> Result<Self>;

    /// Best-effort `f64` value for reports and plots.
    fn to_f64(&self) -> f64;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(q(n))
    }

    fn div_ref(&self, other: &Self, prec: &Self::Precision) -> Result<Self> {
        Ok(self.mul_ref(&other.inv(prec)?))
    }

    fn scale(&self, c: &Rational) -> Self {
        self.mul_ref(&Self::from_rational(c.clone()))
    }

    fn is_zero_strict(&self) -> Result<bool> {
        Ok(self.sign()?.is_zero())
    }

    /// Agreement through truncation.
    fn agrees(&self, other: &Self) -> bool {
        self.sub_ref(other).vanishes()
    }

    /// Sign of `self - other`.
    fn cmp_to(&self, other: &Self) -> Result<Sign> {
        self.sub_ref(other).sign()
    }
}

