//! Kostant convexity for `SL_n`: `a` lies in the `A`-parts of `K b` exactly
//! when `χ_j(a) ≤ χ_j(b)` for the characters `χ_j(a) = a_1 ⋯ a_j`.
//!
//! Two independent checks back the character test: a convex-hull oracle on
//! logarithms (rational inputs, `n ≤ 3`) and sampling of `a(k b)` over
//! random rational rotations `k`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use rand::Rng;
use serde::Serialize;

use crate::decomp::{a_component, rational_rotation};
use crate::error::{Error, Result};
use crate::interval::{ln_interval, to_f64, Interval};
use crate::matrix::Matrix;
use crate::rootsys::{RootSystem, RootType};
use crate::scalar::{Rational, Scalar, Sign};
use crate::slgroup::member_a;
use crate::tower::TowerScalar;

/// Exponent vectors `w` over the diagonal entries with `χ_j(a) = Π a_k^{w_k}`,
/// derived from the cone data of `A_{n-1}`.
///
/// `γ = Σ c_m δ_m` acts on `a` by `Π a_m^{c_m - c_{m-1}}`; using
/// `det a = 1` the last exponent is shifted to zero, and the vector is
/// divided by its content. Positive powers do not change the inequalities.
pub fn kostant_chars(n: usize) -> Result<Vec<Vec<i64>>> {
    if n < 2 {
        return Err(Error::DimensionMismatch("need n >= 2".into()));
    }
    let sys = RootSystem::build(RootType::A(n - 1))?;
    let cone = sys.cone_data();
    let mut out: Vec<Vec<i64>> = cone
        .gamma
        .iter()
        .map(|c| {
            let coeff = |m: usize| if m == 0 || m > n - 1 { 0 } else { c[m - 1] };
            let mut w: Vec<i64> = (1..=n).map(|m| coeff(m) - coeff(m - 1)).collect();
            let shift = -w[n - 1];
            for x in w.iter_mut() {
                *x += shift;
            }
            let g = w.iter().fold(0i64, |acc, &x| acc.gcd(&x));
            if g > 1 {
                for x in w.iter_mut() {
                    *x /= g;
                }
            }
            w
        })
        .collect();
    out.sort_by_key(|w| w.iter().sum::<i64>());
    Ok(out)
}

/// A point of the closed chamber `A⁺`: positive diagonal, determinant one,
/// non-increasing entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ChamberPoint<S: Scalar> {
    a: Matrix<S>,
}

impl<S: Scalar> ChamberPoint<S> {
    pub fn new(a: Matrix<S>) -> Result<Self> {
        if !member_a(&a)? {
            return Err(Error::NotInGroup("chamber point must lie in A".into()));
        }
        let d = a.diagonal();
        for w in d.windows(2) {
            if w[0].cmp_to(&w[1])? == Sign::Negative {
                return Err(Error::NotInChamber);
            }
        }
        Ok(ChamberPoint { a })
    }

    pub fn from_diagonal(d: Vec<S>) -> Result<Self> {
        Self::new(Matrix::diag(&d))
    }

    /// Sorts the diagonal of `a ∈ A` into non-increasing order.
    pub fn project(a: &Matrix<S>) -> Result<Self> {
        let mut d = a.diagonal();
        let mut err = None;
        d.sort_by(|x, y| match y.cmp_to(x) {
            Ok(s) => s.to_i8().cmp(&0),
            Err(e) => {
                err = Some(e);
                std::cmp::Ordering::Equal
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        Self::from_diagonal(d)
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.a
    }

    pub fn diagonal(&self) -> Vec<S> {
        self.a.diagonal()
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }
}

/// `Π a_k^{w_k}` for non-negative exponents.
pub fn char_value<S: Scalar>(w: &[i64], a: &Matrix<S>) -> S {
    let mut acc = S::one();
    for (k, &e) in w.iter().enumerate() {
        for _ in 0..e {
            acc = acc.mul_ref(a.get(k, k));
        }
    }
    acc
}

/// Per-character comparison `χ_j(b) - χ_j(a)`.
#[derive(Debug, Clone, Serialize)]
pub struct KostantReport {
    pub member: bool,
    pub characters: Vec<Vec<i64>>,
    /// `χ_j(b) - χ_j(a)`, printed.
    pub slacks: Vec<String>,
    pub slack_signs: Vec<i8>,
}

pub fn kostant_report<S: Scalar>(a: &ChamberPoint<S>, b: &ChamberPoint<S>) -> Result<KostantReport> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch("chamber points of different size".into()));
    }
    let chars = kostant_chars(a.n())?;
    let mut slacks = Vec::with_capacity(chars.len());
    let mut signs = Vec::with_capacity(chars.len());
    for w in &chars {
        let d = char_value(w, b.matrix()).sub_ref(&char_value(w, a.matrix()));
        signs.push(d.sign()?.to_i8());
        slacks.push(d.to_string());
    }
    Ok(KostantReport {
        member: signs.iter().all(|&s| s >= 0),
        characters: chars,
        slacks,
        slack_signs: signs,
    })
}

/// `χ_j(a) ≤ χ_j(b)` for every character.
pub fn kostant_member<S: Scalar>(a: &ChamberPoint<S>, b: &ChamberPoint<S>) -> Result<bool> {
    Ok(kostant_report(a, b)?.member)
}

const HULL_BITS: [u32; 4] = [96, 192, 320, 512];

fn rational_diagonal(p: &ChamberPoint<TowerScalar>) -> Result<Vec<Rational>> {
    p.diagonal()
        .iter()
        .map(|x| x.as_rational().cloned().ok_or(Error::NotRational))
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = vec![p.clone()];
    while crate::decomp::next_permutation(&mut p) {
        out.push(p.clone());
    }
    out
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Counter-clockwise hull of planar points (indices), monotone chain.
fn hull_order(pts: &[(f64, f64)]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&i, &j| pts[i].partial_cmp(&pts[j]).expect("finite"));
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2
            && cross(pts[lower[lower.len() - 2]], pts[lower[lower.len() - 1]], pts[i]) <= 0.0
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2
            && cross(pts[upper[upper.len() - 2]], pts[upper[upper.len() - 1]], pts[i]) <= 0.0
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Decides `log a ∈ conv(W · log b)` from certified logarithm enclosures.
/// Supports `n = 2, 3` with rational entries.
pub fn hull_oracle(a: &ChamberPoint<TowerScalar>, b: &ChamberPoint<TowerScalar>) -> Result<bool> {
    let n = a.n();
    if n != b.n() || !(2..=3).contains(&n) {
        return Err(Error::DimensionMismatch("hull oracle handles SL2 and SL3".into()));
    }
    let da = rational_diagonal(a)?;
    let db = rational_diagonal(b)?;
    let mut orbit: Vec<Vec<Rational>> = Vec::new();
    for p in permutations(n) {
        let v: Vec<Rational> = p.iter().map(|&i| db[i].clone()).collect();
        if !orbit.contains(&v) {
            orbit.push(v);
        }
    }
    if orbit.contains(&da) {
        return Ok(true);
    }
    if orbit.len() == 1 {
        // b is central, the hull is a single point
        return Ok(false);
    }
    for bits in HULL_BITS {
        let z: Vec<Interval> = da.iter().map(|x| ln_interval(x, bits)).collect();
        let logs: Vec<Vec<Interval>> = orbit
            .iter()
            .map(|v| v.iter().map(|x| ln_interval(x, bits)).collect())
            .collect();
        let signs: Vec<Interval> = if n == 2 {
            // the orbit is the segment between ±log b_1 on the first axis
            let x = &logs[0][0];
            vec![x.sub(&z[0]), x.add(&z[0])]
        } else {
            // trace-zero plane, charted by the first two coordinates
            let mid: Vec<(f64, f64)> = logs
                .iter()
                .map(|l| (to_f64(&l[0].midpoint()), to_f64(&l[1].midpoint())))
                .collect();
            let order = hull_order(&mid);
            (0..order.len())
                .map(|k| {
                    let p = &logs[order[k]];
                    let q = &logs[order[(k + 1) % order.len()]];
                    let e0 = q[0].sub(&p[0]);
                    let e1 = q[1].sub(&p[1]);
                    let r0 = z[0].sub(&p[0]);
                    let r1 = z[1].sub(&p[1]);
                    e0.mul(&r1).sub(&e1.mul(&r0))
                })
                .collect()
        };
        if signs.iter().any(|s| s.hi.is_negative()) {
            return Ok(false);
        }
        if signs.iter().all(|s| s.lo.is_positive()) {
            return Ok(true);
        }
    }
    Err(Error::PrecisionExhausted)
}

/// Outcome of [`orbit_sample_check`].
#[derive(Debug, Clone, Serialize)]
pub struct OrbitReport {
    pub samples: usize,
    pub violations: usize,
    /// Smallest `ln χ_j(b) - ln χ_j(a)` over all samples and characters.
    pub min_log_slack: f64,
    /// Largest such value.
    pub max_log_slack: f64,
}

/// A random rational rotation: one Givens factor per coordinate plane.
pub fn random_rotation<S: Scalar>(n: usize, rng: &mut impl Rng) -> Matrix<S> {
    let mut k = Matrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            let t = Rational::new(BigInt::from(rng.gen_range(-9i64..=9)), BigInt::from(rng.gen_range(1i64..=9)));
            k = k.mul(&rational_rotation(n, i, j, &t));
        }
    }
    k
}

/// Samples `a(k b)` for random rotations `k` and checks each chamber
/// projection against the character inequalities.
pub fn orbit_sample_check<S: Scalar>(
    b: &ChamberPoint<S>,
    trials: usize,
    rng: &mut impl Rng,
    prec: &S::Precision,
) -> Result<OrbitReport> {
    let n = b.n();
    let chars = kostant_chars(n)?;
    let mut report = OrbitReport {
        samples: 0,
        violations: 0,
        min_log_slack: f64::INFINITY,
        max_log_slack: f64::NEG_INFINITY,
    };
    for trial in 0..trials {
        let k = if trial == 0 { Matrix::identity(n) } else { random_rotation(n, rng) };
        let a = ChamberPoint::project(&a_component(&k.mul(b.matrix()), prec)?)?;
        if !kostant_member(&a, b)? {
            report.violations += 1;
        }
        for w in &chars {
            let s = char_value(w, b.matrix()).to_f64().ln() - char_value(w, a.matrix()).to_f64().ln();
            report.min_log_slack = report.min_log_slack.min(s);
            report.max_log_slack = report.max_log_slack.max(s);
        }
        report.samples += 1;
    }
    Ok(report)
}
