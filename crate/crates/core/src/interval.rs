//! Closed rational intervals with outward dyadic rounding.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::scalar::{q, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits
}

/// Largest dyadic `k / 2^bits` not above `x`.
pub fn floor_dyadic(x: &Rational, bits: u32) -> Rational {
    let scaled = x * Rational::from_integer(pow2(bits));
    Rational::new(scaled.floor().to_integer(), pow2(bits))
}

/// Smallest dyadic `k / 2^bits` not below `x`.
pub fn ceil_dyadic(x: &Rational, bits: u32) -> Rational {
    let scaled = x * Rational::from_integer(pow2(bits));
    Rational::new(scaled.ceil().to_integer(), pow2(bits))
}

impl Interval {
    pub fn point(x: Rational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / q(2)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn neg(&self) -> Interval {
        Interval::new(-&self.hi, -&self.lo)
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }

    pub fn scale(&self, c: &Rational) -> Interval {
        if c.is_negative() {
            Interval::new(&self.hi * c, &self.lo * c)
        } else {
            Interval::new(&self.lo * c, &self.hi * c)
        }
    }

    /// Reciprocal of an interval that excludes zero.
    pub fn recip(&self) -> Option<Interval> {
        if self.contains_zero() {
            return None;
        }
        Some(Interval::new(self.hi.recip(), self.lo.recip()))
    }

    pub fn abs_max(&self) -> Rational {
        std::cmp::max(self.lo.abs(), self.hi.abs())
    }

    /// Widen to dyadic endpoints with denominator `2^bits`.
    pub fn round(&self, bits: u32) -> Interval {
        Interval::new(floor_dyadic(&self.lo, bits), ceil_dyadic(&self.hi, bits))
    }

    /// Enclosure of the square root, clamping negative lower ends to zero.
    pub fn sqrt(&self, bits: u32) -> Interval {
        let scale = Rational::from_integer(pow2(2 * bits));
        let lo = if self.lo.is_positive() {
            let n = (&self.lo * &scale).floor().to_integer();
            Rational::new(n.sqrt(), pow2(bits))
        } else {
            Rational::zero()
        };
        let hi = if self.hi.is_positive() {
            let n = (&self.hi * &scale).ceil().to_integer();
            let mut r = n.sqrt();
            if &r * &r < n {
                r += 1;
            }
            Rational::new(r, pow2(bits))
        } else {
            Rational::zero()
        };
        Interval::new(lo, hi)
    }
}

/// Exact square root of a non-negative rational, if it has one.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer();
    let d = x.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        Some(Rational::new(rn, rd))
    } else {
        None
    }
}

/// `2 * artanh(z)` enclosed by its Taylor series; requires `|z| <= 1/3`.
///
/// Runs in fixed point with `guard` fractional bits: the truncated power
/// `p_k` is within `k + 1` units of `2^guard z^(2k+1)`, and each truncated
/// term adds one more unit of error.
fn two_artanh(z: &Rational, bits: u32) -> Interval {
    let guard = bits + 24;
    let (a, b) = (z.numer(), z.denom());
    let (a2, b2) = (a * a, b * b);
    let mut p: BigInt = (BigInt::one() << guard) * a / b;
    let mut sum = BigInt::zero();
    let mut err = BigInt::zero();
    let mut k: u64 = 0;
    loop {
        sum += &p * 2 / (2 * k + 1);
        err += k + 2;
        if p.abs() <= BigInt::one() {
            // remaining terms are at most 3 |z|^(2k+1) in total
            err += (p.abs() + (k + 1)) * 3;
            break;
        }
        p = p * &a2 / &b2;
        k += 1;
    }
    let scale = pow2(guard);
    Interval::new(Rational::new(&sum - &err, scale.clone()), Rational::new(sum + err, scale))
}

/// Certified enclosure of `ln(x)` for a positive rational `x`.
pub fn ln_interval(x: &Rational, bits: u32) -> Interval {
    assert!(x.is_positive(), "ln of non-positive rational");
    // x = 2^k * r with r in [2/3, 4/3]
    let mut r = x.clone();
    let mut k: i64 = 0;
    let two = q(2);
    let hi = Rational::new(BigInt::from(4), BigInt::from(3));
    let lo = Rational::new(BigInt::from(2), BigInt::from(3));
    let nb = x.numer().bits() as i64 - x.denom().bits() as i64;
    if nb.abs() > 2 {
        let shift = nb - 1;
        if shift > 0 {
            r /= Rational::from_integer(pow2(shift as u32));
        } else {
            r *= Rational::from_integer(pow2((-shift) as u32));
        }
        k += shift;
    }
    while r > hi {
        r /= &two;
        k += 1;
    }
    while r < lo {
        r *= &two;
        k -= 1;
    }
    let z = (&r - Rational::one()) / (&r + Rational::one());
    let ln_r = two_artanh(&z, bits + 8);
    if k == 0 {
        return ln_r.round(bits);
    }
    let ln2 = two_artanh(&Rational::new(BigInt::one(), BigInt::from(3)), bits + 8 + 64);
    ln_r.add(&ln2.scale(&q(k))).round(bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qf;

    #[test]
    fn sqrt_enclosure_contains_root() {
        let iv = Interval::point(q(2)).sqrt(40);
        assert!(&iv.lo * &iv.lo <= q(2));
        assert!(&iv.hi * &iv.hi >= q(2));
        assert!(iv.width() <= Rational::new(BigInt::one(), pow2(38)));
    }

    #[test]
    fn rational_sqrt_detects_squares() {
        assert_eq!(rational_sqrt(&qf(9, 4)), Some(qf(3, 2)));
        assert_eq!(rational_sqrt(&q(2)), None);
        assert_eq!(rational_sqrt(&q(-4)), None);
    }

    #[test]
    fn ln_enclosures_match_f64() {
        for (n, d) in [(2, 1), (1, 3), (1000, 7), (5, 4), (1, 1), (7, 1000)] {
            let x = qf(n, d);
            let iv = ln_interval(&x, 100);
            let f = (n as f64 / d as f64).ln();
            let mid = crate::interval::to_f64(&iv.midpoint());
            assert!((mid - f).abs() < 1e-12, "ln({n}/{d}) = {mid}, expected {f}");
            assert!(iv.width() < Rational::new(BigInt::one(), pow2(90)));
        }
    }

    #[test]
    fn ln2_enclosure_contains_reference_digits() {
        let digits: BigInt = "693147180559945309417232121458176568075500134360255254120680"
            .parse()
            .unwrap();
        let ten60 = num_traits::pow(BigInt::from(10), 60);
        let lo = Rational::new(digits.clone(), ten60.clone());
        let hi = Rational::new(digits + 1, ten60);
        let iv = ln_interval(&q(2), 512);
        assert!(iv.lo <= hi && lo <= iv.hi);
        assert!(iv.width() < Rational::new(BigInt::one(), pow2(500)));
    }

    #[test]
    fn ln_is_additive_within_enclosures() {
        // ln(6) = ln(2) + ln(3)
        let a = ln_interval(&q(6), 120);
        let b = ln_interval(&q(2), 120).add(&ln_interval(&q(3), 120));
        assert!(a.lo <= b.hi && b.lo <= a.hi);
    }
}

pub fn to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or_else(|| {
        let n = x.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}
