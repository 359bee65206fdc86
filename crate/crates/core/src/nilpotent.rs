//! Exact exponential and logarithm on nilpotent and unipotent matrices, the
//! Baker–Campbell–Hausdorff and Zassenhaus series, factorization of
//! unipotent groups along root subgroups, Jacobson–Morozov triples, and the
//! rank-one `SL_2` embeddings.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg::{inverse, kernel, rank};
use crate::matrix::Matrix;
use crate::scalar::{Rational, Scalar};
use crate::slgroup::{killing_dual, killing_theta, theta, RootIndex};

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// True when `X^n = 0` for the size `n` of `X`.
pub fn is_nilpotent<S: Scalar>(x: &Matrix<S>) -> bool {
    x.is_square() && x.pow(x.rows()).vanishes()
}

pub fn is_strictly_upper<S: Scalar>(x: &Matrix<S>) -> bool {
    x.is_square() && (0..x.rows()).all(|i| (0..=i).all(|j| x.get(i, j).vanishes()))
}

/// `Σ_{k<n} X^k / k!`.
pub fn exp_nilpotent<S: Scalar>(x: &Matrix<S>) -> Result<Matrix<S>> {
    if !is_nilpotent(x) {
        return Err(Error::NotNilpotent);
    }
    let n = x.rows();
    let mut out = Matrix::identity(n);
    let mut power = Matrix::identity(n);
    for k in 1..n {
        power = power.mul(x);
        if power.vanishes() {
            break;
        }
        out = out.add(&power.scale(&Rational::new(BigInt::one(), factorial(k))));
    }
    Ok(out)
}

/// `Σ_{k<n} (-1)^{k+1} (u - I)^k / k`.
pub fn log_unipotent<S: Scalar>(u: &Matrix<S>) -> Result<Matrix<S>> {
    if !u.is_square() {
        return Err(Error::NotUnipotent);
    }
    let n = u.rows();
    let nil = u.sub(&Matrix::identity(n));
    if !nil.pow(n).vanishes() {
        return Err(Error::NotUnipotent);
    }
    let mut out = Matrix::zeros(n, n);
    let mut power = Matrix::identity(n);
    for k in 1..n.max(2) {
        power = power.mul(&nil);
        if power.vanishes() {
            break;
        }
        let sign = if k % 2 == 1 { 1 } else { -1 };
        out = out.add(&power.scale(&Rational::new(BigInt::from(sign), BigInt::from(k))));
    }
    Ok(out)
}

fn require_upper_pair<S: Scalar>(x: &Matrix<S>, y: &Matrix<S>) -> Result<()> {
    if x.rows() != y.rows() || !is_strictly_upper(x) || !is_strictly_upper(y) {
        return Err(Error::NotNilpotent);
    }
    Ok(())
}

/// `Z = log(exp(X) exp(Y))` for strictly upper triangular `X`, `Y`.
pub fn bch<S: Scalar>(x: &Matrix<S>, y: &Matrix<S>) -> Result<Matrix<S>> {
    require_upper_pair(x, y)?;
    log_unipotent(&exp_nilpotent(x)?.mul(&exp_nilpotent(y)?))
}

/// Right-nested bracket `[w_1, [w_2, … [w_{d-1}, w_d]]]` of a word in `X`, `Y`.
fn nested_bracket<S: Scalar>(word: &[bool], x: &Matrix<S>, y: &Matrix<S>) -> Matrix<S> {
    let pick = |b: bool| if b { y } else { x };
    let mut acc = pick(*word.last().expect("nonempty word")).clone();
    for &letter in word[..word.len() - 1].iter().rev() {
        acc = pick(letter).bracket(&acc);
    }
    acc
}

/// All sequences of pairs `(r_i, s_i)`, `r_i + s_i ≥ 1`, with total degree `d`.
fn pair_sequences(d: usize) -> Vec<Vec<(usize, usize)>> {
    if d == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=d {
        for rest in pair_sequences(d - first) {
            for r in 0..=first {
                let mut seq = vec![(r, first - r)];
                seq.extend(rest.iter().copied());
                out.push(seq);
            }
        }
    }
    out
}

/// Homogeneous components of the Dynkin series for `log(exp X exp Y)`:
/// element `k` is the degree `k + 1` part, up to `degree`.
pub fn bch_series_terms<S: Scalar>(x: &Matrix<S>, y: &Matrix<S>, degree: usize) -> Vec<Matrix<S>> {
    let n = x.rows();
    (1..=degree)
        .map(|d| {
            let mut acc = Matrix::zeros(n, n);
            for seq in pair_sequences(d) {
                let k = seq.len();
                let mut word = Vec::with_capacity(d);
                let mut denom = BigInt::from(k * d);
                for &(r, s) in &seq {
                    word.extend(std::iter::repeat(false).take(r));
                    word.extend(std::iter::repeat(true).take(s));
                    denom *= factorial(r) * factorial(s);
                }
                let sign = if k % 2 == 1 { 1 } else { -1 };
                let term = nested_bracket(&word, x, y);
                if !term.vanishes() {
                    acc = acc.add(&term.scale(&Rational::new(BigInt::from(sign), denom)));
                }
            }
            acc
        })
        .collect()
}

/// Factors `[X, Y, C_2, C_3, …]` with `exp(X+Y) = Π exp(factor)`.
/// `C_2 = -½[X,Y]` and `C_3 = ⅓[Y,[X,Y]] + ⅙[X,[X,Y]]`; later factors peel
/// the residual one superdiagonal at a time.
pub fn zassenhaus<S: Scalar>(x: &Matrix<S>, y: &Matrix<S>) -> Result<Vec<Matrix<S>>> {
    require_upper_pair(x, y)?;
    let n = x.rows();
    let xy = x.bracket(y);
    let c2 = xy.scale(&Rational::new(BigInt::from(-1), BigInt::from(2)));
    let c3 = y
        .bracket(&xy)
        .scale(&Rational::new(BigInt::one(), BigInt::from(3)))
        .add(&x.bracket(&xy).scale(&Rational::new(BigInt::one(), BigInt::from(6))));
    let mut factors = vec![x.clone(), y.clone(), c2, c3];
    let target = exp_nilpotent(&x.add(y))?;
    let mut prefix = Matrix::identity(n);
    for f in &factors {
        prefix = prefix.mul(&exp_nilpotent(f)?);
    }
    let mut residual = inverse_unipotent(&prefix)?.mul(&target);
    for level in 1..n {
        let log = log_unipotent(&residual)?;
        if log.vanishes() {
            break;
        }
        let mut part = Matrix::zeros(n, n);
        for i in 0..n - level {
            part.set(i, i + level, log.get(i, i + level).clone());
        }
        if part.vanishes() {
            continue;
        }
        residual = exp_nilpotent(&part.neg())?.mul(&residual);
        factors.push(part);
    }
    if !residual.agrees(&Matrix::identity(n)) {
        return Err(Error::CertificationFailed("Zassenhaus residual did not reach I".into()));
    }
    Ok(factors)
}

/// `u⁻¹ = exp(-log u)`.
pub fn inverse_unipotent<S: Scalar>(u: &Matrix<S>) -> Result<Matrix<S>> {
    exp_nilpotent(&log_unipotent(u)?.neg())
}

/// A set of positive roots of `sl_n` closed under addition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaSet {
    n: usize,
    roots: BTreeSet<RootIndex>,
}

impl ThetaSet {
    pub fn new(n: usize, roots: impl IntoIterator<Item = RootIndex>) -> Result<Self> {
        let roots: BTreeSet<RootIndex> = roots.into_iter().collect();
        for r in &roots {
            if !r.is_positive() || r.j >= n {
                return Err(Error::DimensionMismatch(format!("{r} is not a positive root of sl_{n}")));
            }
        }
        for a in &roots {
            for b in &roots {
                if a.j == b.i && !roots.contains(&RootIndex { i: a.i, j: b.j }) {
                    return Err(Error::DimensionMismatch(format!(
                        "{a} + {b} is a root outside the set"
                    )));
                }
            }
        }
        Ok(ThetaSet { n, roots })
    }

    pub fn all_positive(n: usize) -> Self {
        ThetaSet {
            n,
            roots: RootIndex::positive(n).into_iter().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, r: RootIndex) -> bool {
        self.roots.contains(&r)
    }

    /// Roots in lexicographic order of `(i, j)`.
    pub fn roots(&self) -> Vec<RootIndex> {
        self.roots.iter().copied().collect()
    }

    /// True when `u` is unipotent upper triangular with entries only on
    /// the diagonal and in the root spaces of the set.
    pub fn contains_element<S: Scalar>(&self, u: &Matrix<S>) -> bool {
        u.rows() == self.n
            && u.is_square()
            && (0..self.n).all(|i| {
                (0..self.n).all(|j| {
                    let x = u.get(i, j);
                    if i == j {
                        x.agrees(&S::one())
                    } else if i < j && self.contains(RootIndex { i, j }) {
                        true
                    } else {
                        x.vanishes()
                    }
                })
            })
    }
}

/// One factor `exp(c E_ij)` of a root-subgroup factorization.
#[derive(Debug, Clone)]
pub struct RootFactor<S: Scalar> {
    pub root: RootIndex,
    pub coefficient: S,
}

impl<S: Scalar> RootFactor<S> {
    pub fn log(&self, n: usize) -> Matrix<S> {
        Matrix::unit(n, self.root.i, self.root.j).scale_by(&self.coefficient)
    }

    pub fn exp(&self, n: usize) -> Matrix<S> {
        Matrix::identity(n).add(&self.log(n))
    }
}

pub fn product_of_factors<S: Scalar>(n: usize, factors: &[RootFactor<S>]) -> Matrix<S> {
    factors
        .iter()
        .fold(Matrix::identity(n), |acc, f| acc.mul(&f.exp(n)))
}

/// Writes `u` as `Π exp(c_β E_β)` over `order` (each root once). Entries of
/// height `h` of the product are `c_β` plus a polynomial in coefficients of
/// lower height, so the coefficients are solved height by height.
pub fn ordered_root_factorize<S: Scalar>(
    u: &Matrix<S>,
    order: &[RootIndex],
) -> Result<Vec<RootFactor<S>>> {
    let n = u.rows();
    let theta = ThetaSet::new(n, order.iter().copied()).map_err(|_| Error::NotInUTheta)?;
    if !theta.contains_element(u) {
        return Err(Error::NotInUTheta);
    }
    let mut factors: Vec<RootFactor<S>> = order
        .iter()
        .map(|&root| RootFactor { root, coefficient: S::zero() })
        .collect();
    for height in 1..n {
        let current = product_of_factors(n, &factors);
        for f in factors.iter_mut() {
            if f.root.j - f.root.i == height {
                f.coefficient = u.get(f.root.i, f.root.j).sub_ref(current.get(f.root.i, f.root.j));
            }
        }
    }
    if !product_of_factors(n, &factors).agrees(u) {
        return Err(Error::CertificationFailed("root factorization does not reconstruct".into()));
    }
    Ok(factors)
}

/// Factorization of `u ∈ U_Θ` over the roots of `Θ` in lexicographic order.
pub fn u_theta_factorize<S: Scalar>(u: &Matrix<S>, theta: &ThetaSet) -> Result<Vec<RootFactor<S>>> {
    if u.rows() != theta.n() {
        return Err(Error::NotInUTheta);
    }
    ordered_root_factorize(u, &theta.roots())
}

/// `u = u' u''` with `u'` a product over `Θ ∩ Ψ` and `u''` over `Θ \ Ψ`.
pub fn psi_split<S: Scalar>(
    u: &Matrix<S>,
    theta: &ThetaSet,
    psi: &BTreeSet<RootIndex>,
) -> Result<(Matrix<S>, Matrix<S>)> {
    let (inside, outside): (Vec<RootIndex>, Vec<RootIndex>) =
        theta.roots().into_iter().partition(|r| psi.contains(r));
    let order: Vec<RootIndex> = inside.iter().chain(&outside).copied().collect();
    let factors = ordered_root_factorize(u, &order)?;
    let n = theta.n();
    let (first, second) = factors.split_at(inside.len());
    Ok((product_of_factors(n, first), product_of_factors(n, second)))
}

/// `(X, H, Y)` with `[H,X] = 2X`, `[H,Y] = -2Y`, `[X,Y] = H`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sl2Triple<S: Scalar> {
    pub x: Matrix<S>,
    pub h: Matrix<S>,
    pub y: Matrix<S>,
}

impl<S: Scalar> Sl2Triple<S> {
    pub fn is_valid(&self) -> bool {
        self.h.bracket(&self.x).agrees(&self.x.scale(&Rational::from_integer(2.into())))
            && self.h.bracket(&self.y).agrees(&self.y.scale(&Rational::from_integer((-2).into())))
            && self.x.bracket(&self.y).agrees(&self.h)
    }

    fn certified(self) -> Result<Self> {
        if self.is_valid() {
            Ok(self)
        } else {
            Err(Error::CertificationFailed("sl2 bracket relations fail".into()))
        }
    }
}

/// Jordan chains of a nilpotent `X`: `(top vector, length)`, longest first.
pub fn jordan_chains<S: Scalar>(x: &Matrix<S>, prec: &S::Precision) -> Result<Vec<(Vec<S>, usize)>> {
    if !is_nilpotent(x) {
        return Err(Error::NotNilpotent);
    }
    let n = x.rows();
    let mut p = 0;
    let mut power = Matrix::identity(n);
    let mut kernels = vec![Vec::new()];
    while !power.vanishes() {
        power = power.mul(x);
        p += 1;
        kernels.push(kernel(&power, prec)?);
    }
    let rank_of = |vs: &[Vec<S>]| -> Result<usize> {
        if vs.is_empty() {
            return Ok(0);
        }
        rank(&Matrix::from_rows(vs.to_vec())?, prec)
    };
    let mut chains: Vec<(Vec<S>, usize)> = Vec::new();
    for m in (1..=p).rev() {
        let mut span = kernels[m - 1].clone();
        for (v, l) in &chains {
            span.push(x.pow(l - m).mul_vec(v));
        }
        let mut r = rank_of(&span)?;
        for b in &kernels[m] {
            span.push(b.clone());
            let r2 = rank_of(&span)?;
            if r2 > r {
                r = r2;
                chains.push((b.clone(), m));
            } else {
                span.pop();
            }
        }
    }
    Ok(chains)
}

/// Jordan type (block sizes, descending) of a nilpotent matrix.
pub fn jordan_type<S: Scalar>(x: &Matrix<S>, prec: &S::Precision) -> Result<Vec<usize>> {
    Ok(jordan_chains(x, prec)?.into_iter().map(|(_, l)| l).collect())
}

/// An `sl_2`-triple through `X`, built in a Jordan basis of `X` from the
/// standard weights `l-1, l-3, …, 1-l` on each block and conjugated back.
pub fn jacobson_morozov<S: Scalar>(x: &Matrix<S>, prec: &S::Precision) -> Result<Sl2Triple<S>> {
    if !x.is_square() {
        return Err(Error::NotNilpotent);
    }
    if x.vanishes() {
        return Err(Error::ZeroInput);
    }
    let chains = jordan_chains(x, prec)?;
    let n = x.rows();
    let mut cols = Vec::with_capacity(n);
    let mut h_diag = Vec::with_capacity(n);
    let mut y0 = Matrix::zeros(n, n);
    for (v, l) in &chains {
        let start = cols.len();
        for t in 0..*l {
            cols.push(x.pow(l - 1 - t).mul_vec(v));
            h_diag.push(S::from_i64(*l as i64 - 1 - 2 * t as i64));
            if t > 0 {
                y0.set(start + t, start + t - 1, S::from_i64((t * (l - t)) as i64));
            }
        }
    }
    let p = Matrix::from_cols(&cols)?;
    let p_inv = inverse(&p, prec)?;
    Sl2Triple {
        x: x.clone(),
        h: p.mul(&Matrix::diag(&h_diag)).mul(&p_inv),
        y: p.mul(&y0).mul(&p_inv),
    }
    .certified()
}

/// The triple `(X, [X,Y], Y)` with `Y = -2 / (B_θ(X,X) α(H_α)) · θ(X)`,
/// where `H_α` is dual to `α` under the Killing form.
pub fn jm_basic_triple<S: Scalar>(
    alpha: RootIndex,
    x: &Matrix<S>,
    prec: &S::Precision,
) -> Result<Sl2Triple<S>> {
    let n = x.rows();
    for i in 0..n {
        for j in 0..n {
            if (i, j) != (alpha.i, alpha.j) && !x.get(i, j).vanishes() {
                return Err(Error::DimensionMismatch(format!("X is not in the root space of {alpha}")));
            }
        }
    }
    if x.get(alpha.i, alpha.j).is_zero_strict()? {
        return Err(Error::ZeroInput);
    }
    let h_alpha = killing_dual::<S>(n, alpha, prec)?;
    let denom = killing_theta(x, x).mul_ref(&alpha.eval(&h_alpha));
    let coeff = S::from_i64(-2).div_ref(&denom, prec)?;
    let y = theta(x).scale_by(&coeff);
    Sl2Triple {
        x: x.clone(),
        h: x.bracket(&y),
        y,
    }
    .certified()
}

/// The `SL_2` embedding into the `(i, j)` block for `α = e_i - e_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sl2Embedding {
    pub n: usize,
    pub alpha: RootIndex,
}

impl Sl2Embedding {
    pub fn new(n: usize, alpha: RootIndex) -> Result<Self> {
        if alpha.i >= n || alpha.j >= n {
            return Err(Error::DimensionMismatch(format!("{alpha} is not a root of sl_{n}")));
        }
        Ok(Sl2Embedding { n, alpha })
    }

    fn slots(&self) -> [(usize, usize); 4] {
        let (i, j) = (self.alpha.i, self.alpha.j);
        [(i, i), (i, j), (j, i), (j, j)]
    }

    pub fn apply<S: Scalar>(&self, h: &Matrix<S>) -> Result<Matrix<S>> {
        if h.rows() != 2 || h.cols() != 2 {
            return Err(Error::DimensionMismatch("embedding takes a 2x2 matrix".into()));
        }
        let mut g = Matrix::identity(self.n);
        for (k, (r, c)) in self.slots().into_iter().enumerate() {
            g.set(r, c, h.get(k / 2, k % 2).clone());
        }
        Ok(g)
    }

    /// The 2x2 block of `g`, if `g` is the identity outside it.
    pub fn preimage<S: Scalar>(&self, g: &Matrix<S>) -> Option<Matrix<S>> {
        if g.rows() != self.n || !g.is_square() {
            return None;
        }
        let slots = self.slots();
        for r in 0..self.n {
            for c in 0..self.n {
                if slots.contains(&(r, c)) {
                    continue;
                }
                let expected = if r == c { S::one() } else { S::zero() };
                if !g.get(r, c).agrees(&expected) {
                    return None;
                }
            }
        }
        let entries: Vec<S> = slots.iter().map(|&(r, c)| g.get(r, c).clone()).collect();
        Matrix::new(2, 2, entries).ok()
    }
}

/// `m(u) = φ([[0, t], [-1/t, 0]])` for `u = exp(t E_ij)`.
pub fn m_element<S: Scalar>(u: &Matrix<S>, alpha: RootIndex, prec: &S::Precision) -> Result<Matrix<S>> {
    let n = u.rows();
    let phi = Sl2Embedding::new(n, alpha)?;
    let t = u.get(alpha.i, alpha.j).clone();
    let expected = Matrix::identity(n).add(&Matrix::unit(n, alpha.i, alpha.j).scale_by(&t));
    if !u.agrees(&expected) {
        return Err(Error::NotInGroup(format!("not in the root subgroup of {alpha}")));
    }
    if t.is_zero_strict()? {
        return Err(Error::ZeroParameter);
    }
    let block = Matrix::new(2, 2, vec![S::zero(), t.clone(), t.inv(prec)?.neg_ref(), S::zero()])?;
    phi.apply(&block)
}

/// The two cells of the image of `φ`.
#[derive(Debug, Clone, PartialEq)]
pub enum RankOneCell<S: Scalar> {
    /// `g` lies in `φ(B_2)`.
    Borel { b: Matrix<S> },
    /// `g = b1 · m · b2` with `m = φ([[0,1],[-1,0]])`.
    Big {
        b1: Matrix<S>,
        m: Matrix<S>,
        b2: Matrix<S>,
    },
}

pub fn rank1_bruhat_certify<S: Scalar>(
    g: &Matrix<S>,
    alpha: RootIndex,
    prec: &S::Precision,
) -> Result<RankOneCell<S>> {
    let phi = Sl2Embedding::new(g.rows(), alpha)?;
    let h = phi.preimage(g).ok_or(Error::NotInImage)?;
    let (a, b, c, d) = (h.get(0, 0), h.get(0, 1), h.get(1, 0), h.get(1, 1));
    if !a.mul_ref(d).sub_ref(&b.mul_ref(c)).agrees(&S::one()) {
        return Err(Error::NotInImage);
    }
    if c.is_zero_strict()? {
        return Ok(RankOneCell::Borel { b: g.clone() });
    }
    let c_inv = c.inv(prec)?;
    let b1 = Matrix::new(2, 2, vec![S::one(), a.mul_ref(&c_inv), S::zero(), S::one()])?;
    let m = Matrix::from_i64(&[&[0, 1], &[-1, 0]]);
    let b2 = Matrix::new(2, 2, vec![c.neg_ref(), d.neg_ref(), S::zero(), c_inv.neg_ref()])?;
    let (b1, m, b2) = (phi.apply(&b1)?, phi.apply(&m)?, phi.apply(&b2)?);
    if !b1.mul(&m).mul(&b2).agrees(g) {
        return Err(Error::CertificationFailed("rank-one Bruhat witnesses".into()));
    }
    Ok(RankOneCell::Big { b1, m, b2 })
}
