//! Exact arithmetic in real quadratic towers `Q(√r₁, √r₂, …)` where every
//! radicand `rᵢ` is a positive non-square of the field generated by the
//! previous roots.
//!
//! An element of a depth-`k` tower is stored as `2^k` rational coordinates
//! over the monomial basis `∏ √rᵢ^{bᵢ}`; bit `i` of a coordinate index is the
//! exponent of `√rᵢ`. Because each level is a genuine degree-two extension the
//! coordinates are unique, so zero testing and equality are coordinate tests.
//! Signs of nonzero elements come from interval evaluation at increasing
//! precision.
//!
//! Towers are values: adjoining a root builds a new tower, and binary
//! operations on elements of different towers first build a common tower
//! (re-using roots that already exist in the other tower).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::interval::{rational_sqrt, to_f64, Interval};
use crate::scalar::{q, Rational, Scalar, Sign};

/// The radicands of a tower; `gens[i]` has `2^i` coordinates over `gens[..i]`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Tower {
    gens: Vec<Vec<Rational>>,
}

impl Tower {
    pub fn depth(&self) -> usize {
        self.gens.len()
    }

    /// The `i`-th radicand as an element of the prefix tower.
    pub fn radicand(self: &Arc<Self>, i: usize) -> TowerScalar {
        TowerScalar::normalized(self.clone(), i, self.gens[i].clone())
    }
}

#[derive(Clone)]
pub struct TowerScalar {
    tower: Arc<Tower>,
    depth: usize,
    coords: Vec<Rational>,
}

fn zero_slice(a: &[Rational]) -> bool {
    a.iter().all(Zero::is_zero)
}

fn zeros(n: usize) -> Vec<Rational> {
    vec![Rational::zero(); n]
}

fn pad(a: &[Rational], len: usize) -> Vec<Rational> {
    let mut v = a.to_vec();
    v.resize(len, Rational::zero());
    v
}

fn v_add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn v_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn v_scale(a: &[Rational], c: &Rational) -> Vec<Rational> {
    a.iter().map(|x| x * c).collect()
}

fn t_mul(gens: &[Vec<Rational>], k: usize, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if k == 0 {
        return vec![&a[0] * &b[0]];
    }
    let h = 1 << (k - 1);
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let z0a = zero_slice(a0);
    let z1a = zero_slice(a1);
    let z0b = zero_slice(b0);
    let z1b = zero_slice(b1);
    let mut lo = zeros(h);
    let mut hi = zeros(h);
    if !z0a && !z0b {
        lo = t_mul(gens, k - 1, a0, b0);
    }
    if !z1a && !z1b {
        let p = t_mul(gens, k - 1, a1, b1);
        let pr = t_mul(gens, k - 1, &p, &gens[k - 1]);
        lo = v_add(&lo, &pr);
    }
    if !z0a && !z1b {
        hi = t_mul(gens, k - 1, a0, b1);
    }
    if !z1a && !z0b {
        hi = v_add(&hi, &t_mul(gens, k - 1, a1, b0));
    }
    lo.extend(hi);
    lo
}

/// Inverse of a nonzero element.
fn t_inv(gens: &[Vec<Rational>], k: usize, a: &[Rational]) -> Vec<Rational> {
    if k == 0 {
        return vec![a[0].recip()];
    }
    let h = 1 << (k - 1);
    let (a0, a1) = a.split_at(h);
    if zero_slice(a1) {
        let mut r = t_inv(gens, k - 1, a0);
        r.extend(zeros(h));
        return r;
    }
    // (a0 + a1 s)^-1 = (a0 - a1 s) / (a0² - a1² r)
    let a0sq = t_mul(gens, k - 1, a0, a0);
    let a1sq = t_mul(gens, k - 1, a1, a1);
    let norm = v_sub(&a0sq, &t_mul(gens, k - 1, &a1sq, &gens[k - 1]));
    let ninv = t_inv(gens, k - 1, &norm);
    let mut r = t_mul(gens, k - 1, a0, &ninv);
    let neg_a1: Vec<Rational> = a1.iter().map(|x| -x).collect();
    r.extend(t_mul(gens, k - 1, &neg_a1, &ninv));
    r
}

/// Some square root of `a` inside the depth-`k` tower, if one exists.
///
/// Writing a root as `c + d·√r`, the defining equations are
/// `c² + d²r = a₀` and `2cd = a₁`, which reduce to square roots one level down.
fn t_sqrt(gens: &[Vec<Rational>], k: usize, a: &[Rational]) -> Option<Vec<Rational>> {
    if k == 0 {
        return rational_sqrt(&a[0]).map(|r| vec![r]);
    }
    let h = 1 << (k - 1);
    let (a0, a1) = a.split_at(h);
    let r = &gens[k - 1];
    if zero_slice(a1) {
        if let Some(c) = t_sqrt(gens, k - 1, a0) {
            let mut v = c;
            v.extend(zeros(h));
            return Some(v);
        }
        // a0 = d² r
        let rinv = t_inv(gens, k - 1, r);
        let ratio = t_mul(gens, k - 1, a0, &rinv);
        return t_sqrt(gens, k - 1, &ratio).map(|d| {
            let mut v = zeros(h);
            v.extend(d);
            v
        });
    }
    let a0sq = t_mul(gens, k - 1, a0, a0);
    let a1sq = t_mul(gens, k - 1, a1, a1);
    let disc = v_sub(&a0sq, &t_mul(gens, k - 1, &a1sq, r));
    let n = t_sqrt(gens, k - 1, &disc)?;
    let half = Rational::new(1.into(), 2.into());
    for cand in [v_add(a0, &n), v_sub(a0, &n)] {
        let c2 = v_scale(&cand, &half);
        if zero_slice(&c2) {
            continue;
        }
        if let Some(c) = t_sqrt(gens, k - 1, &c2) {
            let two_c = v_scale(&c, &q(2));
            let d = t_mul(gens, k - 1, a1, &t_inv(gens, k - 1, &two_c));
            let mut v = c;
            v.extend(d);
            return Some(v);
        }
    }
    None
}

fn t_interval(gen_iv: &[Interval], k: usize, a: &[Rational]) -> Interval {
    if k == 0 {
        return Interval::point(a[0].clone());
    }
    let h = 1 << (k - 1);
    let (a0, a1) = a.split_at(h);
    let lo = t_interval(gen_iv, k - 1, a0);
    if zero_slice(a1) {
        return lo;
    }
    let hi = t_interval(gen_iv, k - 1, a1);
    lo.add(&hi.mul(&gen_iv[k - 1]))
}

/// Enclosures of `√rᵢ` for `i < depth`, each roughly `2^-bits` wide.
fn gen_intervals(gens: &[Vec<Rational>], depth: usize, bits: u32) -> Vec<Interval> {
    let mut ivs: Vec<Interval> = Vec::with_capacity(depth);
    for (i, g) in gens.iter().enumerate().take(depth) {
        let rad = t_interval(&ivs, i, g).round(bits + 8);
        ivs.push(rad.sqrt(bits + 4 * (depth - i) as u32));
    }
    ivs
}

fn t_enclose(gens: &[Vec<Rational>], k: usize, a: &[Rational], bits: u32) -> Interval {
    let ivs = gen_intervals(gens, k, bits);
    t_interval(&ivs, k, a)
}

fn t_sign(gens: &[Vec<Rational>], k: usize, a: &[Rational]) -> Sign {
    if zero_slice(a) {
        return Sign::Zero;
    }
    if zero_slice(&a[1..]) {
        return match a[0].cmp(&Rational::zero()) {
            Ordering::Less => Sign::Negative,
            _ => Sign::Positive,
        };
    }
    let mut bits = 32;
    loop {
        let iv = t_enclose(gens, k, a, bits);
        if iv.lo.is_positive() {
            return Sign::Positive;
        }
        if iv.hi.is_negative() {
            return Sign::Negative;
        }
        bits *= 2;
    }
}

/// Image of an element of a foreign tower under `√sᵢ ↦ imgs[i]`.
fn embed(
    gens: &[Vec<Rational>],
    depth: usize,
    imgs: &[Vec<Rational>],
    k: usize,
    c: &[Rational],
) -> Vec<Rational> {
    if k == 0 {
        return pad(&c[..1], 1 << depth);
    }
    let h = 1 << (k - 1);
    let lo = embed(gens, depth, imgs, k - 1, &c[..h]);
    if zero_slice(&c[h..]) {
        return lo;
    }
    let hi = embed(gens, depth, imgs, k - 1, &c[h..]);
    v_add(&lo, &t_mul(gens, depth, &hi, &imgs[k - 1]))
}

fn is_prefix(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> bool {
    a.len() <= b.len() && a.iter().zip(b).all(|(x, y)| x == y)
}

impl TowerScalar {
    fn normalized(tower: Arc<Tower>, mut depth: usize, mut coords: Vec<Rational>) -> Self {
        debug_assert_eq!(coords.len(), 1 << depth);
        while depth > 0 && zero_slice(&coords[1 << (depth - 1)..]) {
            depth -= 1;
            coords.truncate(1 << depth);
        }
        let tower = if depth == 0 && tower.depth() > 0 {
            Arc::new(Tower::default())
        } else {
            tower
        };
        TowerScalar {
            tower,
            depth,
            coords,
        }
    }

    pub fn from_rational(x: Rational) -> Self {
        TowerScalar {
            tower: Arc::new(Tower::default()),
            depth: 0,
            coords: vec![x],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(q(n))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    fn gens(&self) -> &[Vec<Rational>] {
        &self.tower.gens[..self.depth]
    }

    /// Number of adjoined square roots the element actually uses.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// The radicands of the element's tower, outermost last.
    pub fn radicands(&self) -> Vec<TowerScalar> {
        (0..self.depth).map(|i| self.tower.radicand(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        zero_slice(&self.coords)
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.depth == 0 {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    /// Lifts both operands into one tower.
    fn unify(&self, other: &Self) -> (Arc<Tower>, usize, Vec<Rational>, Vec<Rational>) {
        let (a, b) = (self, other);
        if b.depth == 0 {
            return (a.tower.clone(), a.depth, a.coords.clone(), pad(&b.coords, 1 << a.depth));
        }
        if a.depth == 0 {
            return (b.tower.clone(), b.depth, pad(&a.coords, 1 << b.depth), b.coords.clone());
        }
        if Arc::ptr_eq(&a.tower, &b.tower) || is_prefix(a.gens(), b.gens()) || is_prefix(b.gens(), a.gens()) {
            let (tower, depth) = if a.depth >= b.depth {
                (a.tower.clone(), a.depth)
            } else {
                (b.tower.clone(), b.depth)
            };
            return (tower, depth, pad(&a.coords, 1 << depth), pad(&b.coords, 1 << depth));
        }
        // Adjoin the shallower tower's roots onto the deeper one.
        let swap = a.depth < b.depth;
        let (base, other) = if swap { (b, a) } else { (a, b) };
        let mut gens: Vec<Vec<Rational>> = base.gens().to_vec();
        let mut imgs: Vec<Vec<Rational>> = Vec::new();
        for i in 0..other.depth {
            let depth = gens.len();
            let rad = embed(&gens, depth, &imgs, i, &other.tower.gens[i]);
            match t_sqrt(&gens, depth, &rad) {
                Some(mut root) => {
                    if t_sign(&gens, depth, &root) == Sign::Negative {
                        root = root.iter().map(|x| -x).collect();
                    }
                    imgs.push(root);
                }
                None => {
                    let len = 1 << depth;
                    gens.push(rad);
                    for img in imgs.iter_mut() {
                        img.resize(2 * len, Rational::zero());
                    }
                    let mut g = zeros(2 * len);
                    g[len] = Rational::one();
                    imgs.push(g);
                }
            }
        }
        let depth = gens.len();
        let tower = if depth == base.depth {
            base.tower.clone()
        } else {
            Arc::new(Tower { gens: gens.clone() })
        };
        let base_c = pad(&base.coords, 1 << depth);
        let other_c = embed(&gens, depth, &imgs, other.depth, &other.coords);
        if swap {
            (tower, depth, other_c, base_c)
        } else {
            (tower, depth, base_c, other_c)
        }
    }

    fn binop(&self, other: &Self, f: impl Fn(&[Vec<Rational>], usize, &[Rational], &[Rational]) -> Vec<Rational>) -> Self {
        let (tower, depth, a, b) = self.unify(other);
        let c = f(&tower.gens[..depth], depth, &a, &b);
        Self::normalized(tower, depth, c)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.binop(other, |_, _, a, b| v_add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.binop(other, |_, _, a, b| v_sub(a, b))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.binop(other, t_mul)
    }

    pub fn neg(&self) -> Self {
        TowerScalar {
            tower: self.tower.clone(),
            depth: self.depth,
            coords: self.coords.iter().map(|x| -x).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::normalized(self.tower.clone(), self.depth, v_scale(&self.coords, c))
    }

    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let c = t_inv(self.gens(), self.depth, &self.coords);
        Ok(Self::normalized(self.tower.clone(), self.depth, c))
    }

    pub fn sign(&self) -> Sign {
        t_sign(self.gens(), self.depth, &self.coords)
    }

    /// Square root inside the element's own tower, without adjoining anything.
    pub fn sqrt_in_tower(&self) -> Option<Self> {
        let root = t_sqrt(self.gens(), self.depth, &self.coords)?;
        let r = Self::normalized(self.tower.clone(), self.depth, root);
        Some(if r.sign() == Sign::Negative { r.neg() } else { r })
    }

    /// The positive square root; extends the tower by `self` when `self` is
    /// not already a square.
    pub fn sqrt_positive(&self) -> Result<Self> {
        if self.sign() != Sign::Positive {
            return Err(Error::NotPositive);
        }
        if let Some(r) = self.sqrt_in_tower() {
            return Ok(r);
        }
        let mut gens = self.gens().to_vec();
        gens.push(self.coords.clone());
        let depth = gens.len();
        let mut coords = zeros(1 << depth);
        coords[1 << (depth - 1)] = Rational::one();
        Ok(TowerScalar {
            tower: Arc::new(Tower { gens }),
            depth,
            coords,
        })
    }

    /// A rational interval containing `self`, at most `width` wide.
    pub fn approx(&self, width: &Rational) -> Interval {
        assert!(width.is_positive(), "approx width must be positive");
        if self.depth == 0 {
            return Interval::point(self.coords[0].clone());
        }
        let mut bits = 32;
        loop {
            let iv = t_enclose(self.gens(), self.depth, &self.coords, bits);
            if &iv.width() <= width {
                return iv;
            }
            bits *= 2;
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.depth == 0 {
            return to_f64(&self.coords[0]);
        }
        let iv = t_enclose(self.gens(), self.depth, &self.coords, 64);
        to_f64(&iv.midpoint())
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        match self.sub(other).sign() {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }

    /// Integer power (negative powers invert).
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = TowerScalar::mul(&acc, &base);
        }
        Ok(acc)
    }

    /// True when the printed form is a sum of several terms.
    pub fn is_compound_sum(&self) -> bool {
        self.coords.iter().filter(|c| !c.is_zero()).count() > 1
    }
}

impl PartialEq for TowerScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.depth == 0 && other.depth == 0 {
            return self.coords[0] == other.coords[0];
        }
        let (_, _, a, b) = self.unify(other);
        a == b
    }
}

impl fmt::Debug for TowerScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TowerScalar({self})")
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, x: &Rational) -> fmt::Result {
    if x.denom().is_one() {
        write!(f, "{}", x.numer())
    } else {
        write!(f, "{}/{}", x.numer(), x.denom())
    }
}

impl fmt::Display for TowerScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let radicands = self.radicands();
        let mut first = true;
        for (idx, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let roots: Vec<usize> = (0..self.depth).filter(|b| idx >> b & 1 == 1).collect();
            let mut need_star = false;
            if roots.is_empty() || !mag.is_one() {
                write_rational(f, &mag)?;
                need_star = true;
            }
            for b in roots {
                if need_star {
                    write!(f, "*")?;
                }
                write!(f, "sqrt({})", radicands[b])?;
                need_star = true;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

macro_rules! tower_ops {
    ($tr:ident, $m:ident, $call:ident) => {
        impl $tr for TowerScalar {
            type Output = TowerScalar;
            fn $m(self, rhs: TowerScalar) -> TowerScalar {
                TowerScalar::$call(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a TowerScalar> for &'a TowerScalar {
            type Output = TowerScalar;
            fn $m(self, rhs: &'a TowerScalar) -> TowerScalar {
                TowerScalar::$call(self, rhs)
            }
        }
    };
}

tower_ops!(Add, add, add);
tower_ops!(Sub, sub, sub);
tower_ops!(Mul, mul, mul);

impl Div for TowerScalar {
    type Output = TowerScalar;
    /// Panics on division by zero, like the primitive numeric types.
    fn div(self, rhs: TowerScalar) -> TowerScalar {
        TowerScalar::mul(&self, &rhs.invert().expect("division by zero"))
    }
}

impl Neg for TowerScalar {
    type Output = TowerScalar;
    fn neg(self) -> TowerScalar {
        TowerScalar::neg(&self)
    }
}

impl From<i64> for TowerScalar {
    fn from(n: i64) -> Self {
        TowerScalar::from_int(n)
    }
}

impl From<Rational> for TowerScalar {
    fn from(x: Rational) -> Self {
        TowerScalar::from_rational(x)
    }
}

impl Scalar for TowerScalar {
    type Precision = ();

    fn zero() -> Self {
        TowerScalar::zero()
    }
    fn one() -> Self {
        TowerScalar::one()
    }
    fn from_rational(value: Rational) -> Self {
        TowerScalar::from_rational(value)
    }
    fn add_ref(&self, other: &Self) -> Self {
        TowerScalar::add(self, other)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        TowerScalar::sub(self, other)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        TowerScalar::mul(self, other)
    }
    fn neg_ref(&self) -> Self {
        TowerScalar::neg(self)
    }
    fn sign(&self) -> Result<Sign> {
        Ok(TowerScalar::sign(self))
    }
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
    fn inv(&self, _: &()) -> Result<Self> {
        self.invert()
    }
    fn sqrt(&self, _: &()) -> Result<Self> {
        self.sqrt_positive()
    }
    fn to_f64(&self) -> f64 {
        TowerScalar::to_f64(self)
    }
    fn scale(&self, c: &Rational) -> Self {
        TowerScalar::scale(self, c)
    }
}

/// `(a)^(1/2)` shorthand for tests and examples.
pub fn sqrt_of(n: i64) -> TowerScalar {
    TowerScalar::from_int(n).sqrt_positive().expect("sqrt of positive integer")
}

/// Truncates an `f64`-sized rational for display purposes.
pub fn rational_to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qf;

    fn t(n: i64) -> TowerScalar {
        TowerScalar::from_int(n)
    }

    #[test]
    fn rational_arithmetic() {
        let a = TowerScalar::from_rational(qf(1, 2));
        let b = TowerScalar::from_rational(qf(1, 3));
        assert_eq!(a + b, TowerScalar::from_rational(qf(5, 6)));
    }

    #[test]
    fn adjunction_relations() {
        let s2 = sqrt_of(2);
        assert_eq!(&s2 * &s2, t(2));
        let one = t(1);
        assert_eq!((&one + &s2) * (&one - &s2), t(-1));
    }

    #[test]
    fn inverses() {
        assert_eq!(t(2).invert().unwrap(), TowerScalar::from_rational(qf(1, 2)));
        let s2 = sqrt_of(2);
        assert_eq!(s2.invert().unwrap(), s2.scale(&qf(1, 2)));
        let x = &t(1) + &s2;
        let xi = x.invert().unwrap();
        assert_eq!(xi, &s2 - &t(1));
        assert_eq!(&x * &xi, t(1));
        assert_eq!(t(0).invert(), Err(Error::DivisionByZero));
    }

    #[test]
    fn signs() {
        assert_eq!(t(0).sign(), Sign::Zero);
        assert_eq!((&sqrt_of(2) - &t(1)).sign(), Sign::Positive);
        let inner = &t(5) + &(&t(2) * &sqrt_of(6));
        let x = &(&sqrt_of(2) + &sqrt_of(3)) - &inner.sqrt_positive().unwrap();
        assert_eq!(x.sign(), Sign::Zero);
        assert!(x.is_zero());
        assert_eq!((&sqrt_of(3) - &sqrt_of(2)).sign(), Sign::Positive);
        // 1.41421356... vs 99/70 = 1.4142857
        let close = &sqrt_of(2) - &TowerScalar::from_rational(qf(99, 70));
        assert_eq!(close.sign(), Sign::Negative);
    }

    #[test]
    fn square_roots() {
        assert_eq!(t(4).sqrt_positive().unwrap(), t(2));
        let s2 = t(2).sqrt_positive().unwrap();
        assert_eq!(s2.depth(), 1);
        let x = &t(3) + &(&t(2) * &s2);
        let r = x.sqrt_positive().unwrap();
        assert_eq!(r, &t(1) + &s2);
        assert_eq!(r.depth(), 1);
        assert_eq!(t(-1).sqrt_positive(), Err(Error::NotPositive));
        assert_eq!(t(0).sqrt_positive(), Err(Error::NotPositive));
    }

    #[test]
    fn nested_root_squares_back() {
        let s5 = sqrt_of(5);
        let x = &s5 + &t(1);
        let r = x.sqrt_positive().unwrap();
        assert_eq!(r.depth(), 2);
        assert_eq!(&r * &r, x);
        assert_eq!(r.sign(), Sign::Positive);
    }

    #[test]
    fn merging_reuses_roots() {
        // sqrt(12) = 2 sqrt(3); sqrt(6) = sqrt(2) sqrt(3)
        let a = sqrt_of(12);
        let b = sqrt_of(3);
        assert_eq!(a, &t(2) * &b);
        let c = &sqrt_of(2) * &sqrt_of(3);
        assert_eq!(c, sqrt_of(6));
        assert_eq!(c.depth(), 2);
    }

    #[test]
    fn approx_widths() {
        let third = TowerScalar::from_rational(qf(1, 3));
        let iv = third.approx(&qf(1, 100));
        assert!(iv.contains(&qf(1, 3)));
        let iv = sqrt_of(2).approx(&qf(1, 1000));
        assert!(iv.lo >= qf(1414, 1000) && iv.hi <= qf(14143, 10000));
        let iv = t(0).approx(&qf(1, 10));
        assert_eq!(iv, Interval::point(Rational::zero()));
    }

    #[test]
    fn display_is_readable() {
        let x = &TowerScalar::from_rational(qf(1, 2)) + &(&t(3) * &sqrt_of(2));
        assert_eq!(x.to_string(), "1/2 + 3*sqrt(2)");
        assert_eq!((-sqrt_of(2)).to_string(), "-sqrt(2)");
        assert_eq!(t(0).to_string(), "0");
        let nested = (&t(1) + &sqrt_of(5)).sqrt_positive().unwrap();
        assert_eq!(nested.to_string(), "sqrt(1 + sqrt(5))");
    }
}
