//! Exact elimination, characteristic polynomials, and symmetric eigenproblems.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::puiseux::PuiseuxScalar;
use crate::scalar::{q, Rational, Scalar, Sign};
use crate::tower::TowerScalar;

/// True when `x` is certainly nonzero; errors when the sign is unknowable.
/// Index of the first certainly-nonzero entry in column `c` from row `from`
/// on; entries of undecidable sign are passed over, and only matter when no
/// certain pivot exists.
fn find_pivot<S: Scalar>(a: &Matrix<S>, c: usize, from: usize) -> Result<Option<usize>> {
    let mut undecided = None;
    for i in from..a.rows() {
        let x = a.get(i, c);
        if x.is_exact_zero() {
            continue;
        }
        match x.sign() {
            Ok(s) if !s.is_zero() => return Ok(Some(i)),
            Ok(_) => {}
            Err(e) if e.is_indeterminate() => undecided = Some(e),
            Err(e) => return Err(e),
        }
    }
    match undecided {
        Some(e) => Err(e),
        None => Ok(None),
    }
}

pub struct Rref<S> {
    pub matrix: Matrix<S>,
    pub pivots: Vec<usize>,
    /// `+1` or `-1` from row swaps.
    pub swap_sign: i8,
    /// Pivot values before normalization, in pivot order.
    pub pivot_values: Vec<S>,
}

/// Reduced row echelon form by Gauss–Jordan elimination, taking the first
/// certainly-nonzero entry of each column as pivot.
pub fn rref<S: Scalar>(m: &Matrix<S>, prec: &S::Precision) -> Result<Rref<S>> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut pivot_values = Vec::new();
    let mut swap_sign = 1i8;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = find_pivot(&a, c, r)? else { continue };
        if p != r {
            for j in 0..cols {
                let t = a.get(p, j).clone();
                a.set(p, j, a.get(r, j).clone());
                a.set(r, j, t);
            }
            swap_sign = -swap_sign;
        }
        let pv = a.get(r, c).clone();
        let inv = pv.inv(prec)?;
        for j in 0..cols {
            let v = a.get(r, j).mul_ref(&inv);
            a.set(r, j, v);
        }
        a.set(r, c, S::one());
        for i in 0..rows {
            if i == r || a.get(i, c).is_exact_zero() {
                continue;
            }
            let f = a.get(i, c).clone();
            for j in 0..cols {
                let v = a.get(i, j).sub_ref(&f.mul_ref(a.get(r, j)));
                a.set(i, j, v);
            }
            a.set(i, c, S::zero());
        }
        pivots.push(c);
        pivot_values.push(pv);
        r += 1;
    }
    Ok(Rref {
        matrix: a,
        pivots,
        swap_sign,
        pivot_values,
    })
}

pub fn rank<S: Scalar>(m: &Matrix<S>, prec: &S::Precision) -> Result<usize> {
    Ok(rref(m, prec)?.pivots.len())
}

/// Determinant as the signed product of elimination pivots.
pub fn det<S: Scalar>(m: &Matrix<S>, prec: &S::Precision) -> Result<S> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
    }
    let r = rref(m, prec)?;
    if r.pivots.len() < m.rows() {
        return Ok(S::zero());
    }
    let mut d = r.pivot_values.iter().fold(S::one(), |acc, p| acc.mul_ref(p));
    if r.swap_sign < 0 {
        d = d.neg_ref();
    }
    Ok(d)
}

/// A basis of the null space, one vector per free column.
pub fn kernel<S: Scalar>(m: &Matrix<S>, prec: &S::Precision) -> Result<Vec<Vec<S>>> {
    let r = rref(m, prec)?;
    let cols = m.cols();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !r.pivots.contains(c)) {
        let mut v = vec![S::zero(); cols];
        v[free] = S::one();
        for (row, &pc) in r.pivots.iter().enumerate() {
            v[pc] = r.matrix.get(row, free).neg_ref();
        }
        basis.push(v);
    }
    Ok(basis)
}

/// The unique `x` with `m x = rhs`.
pub fn solve<S: Scalar>(m: &Matrix<S>, rhs: &[S], prec: &S::Precision) -> Result<Vec<S>> {
    let n = m.rows();
    if !m.is_square() || rhs.len() != n {
        return Err(Error::DimensionMismatch("solve needs a square system".into()));
    }
    let mut aug = Matrix::zeros(n, n + 1);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, n, rhs[i].clone());
    }
    let r = rref(&aug, prec)?;
    if r.pivots.len() < n || r.pivots[n - 1] != n - 1 {
        return Err(Error::SingularMatrix);
    }
    Ok((0..n).map(|i| r.matrix.get(i, n).clone()).collect())
}

pub fn inverse<S: Scalar>(m: &Matrix<S>, prec: &S::Precision) -> Result<Matrix<S>> {
    let n = m.rows();
    if !m.is_square() {
        return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
    }
    let mut aug = Matrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, n + i, S::one());
    }
    let r = rref(&aug, prec)?;
    if r.pivots.len() < n || r.pivots[n - 1] != n - 1 {
        return Err(Error::SingularMatrix);
    }
    let mut inv = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            inv.set(i, j, r.matrix.get(i, n + j).clone());
        }
    }
    Ok(inv)
}

/// Monic characteristic polynomial `det(λI - M)` by Faddeev–LeVerrier,
/// coefficients from `λ^n` down to the constant.
pub fn char_poly<S: Scalar>(m: &Matrix<S>) -> Vec<S> {
    assert!(m.is_square(), "char_poly of a non-square matrix");
    let n = m.rows();
    let mut coeffs = vec![S::one()];
    let mut mk = Matrix::<S>::zeros(n, n);
    for k in 1..=n {
        let prev = coeffs.last().unwrap().clone();
        mk = m.mul(&mk).add(&Matrix::identity(n).scale_by(&prev));
        let c = m.mul(&mk).trace().scale(&-Rational::new(BigInt::one(), BigInt::from(k)));
        coeffs.push(c);
    }
    coeffs
}

/// Positive integer divisors of `n`, or `None` when `n` is too large to
/// factor by trial division.
fn divisors(n: &BigInt) -> Option<Vec<u128>> {
    let n = n.abs().to_u128()?;
    if n > 1u128 << 60 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u128;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    Some(out)
}

fn horner(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Synthetic division by `(λ - r)`.
fn deflate(coeffs: &[Rational], r: &Rational) -> Vec<Rational> {
    let mut out = Vec::with_capacity(coeffs.len() - 1);
    let mut acc = Rational::zero();
    for c in &coeffs[..coeffs.len() - 1] {
        acc = acc * r + c;
        out.push(acc.clone());
    }
    out
}

fn quadratic_roots(a: &TowerScalar, b: &TowerScalar, c: &TowerScalar) -> Result<Vec<TowerScalar>> {
    let disc = b.mul(b).sub(&a.mul(c).scale(&q(4)));
    let two_a_inv = a.scale(&q(2)).invert()?;
    match disc.sign() {
        Sign::Negative => Err(Error::UnsolvableSpectrum),
        Sign::Zero => {
            let r = b.neg().mul(&two_a_inv);
            Ok(vec![r.clone(), r])
        }
        Sign::Positive => {
            let s = disc.sqrt_positive()?;
            Ok(vec![
                b.neg().add(&s).mul(&two_a_inv),
                b.neg().sub(&s).mul(&two_a_inv),
            ])
        }
    }
}

/// Real roots (with multiplicity) of a polynomial given by descending
/// coefficients, when it splits via rational roots and one final quadratic.
pub fn tower_roots(coeffs: &[TowerScalar]) -> Result<Vec<TowerScalar>> {
    let deg = coeffs.len() - 1;
    match deg {
        0 => return Ok(vec![]),
        1 => return Ok(vec![coeffs[1].neg().mul(&coeffs[0].invert()?)]),
        2 => return quadratic_roots(&coeffs[0], &coeffs[1], &coeffs[2]),
        _ => {}
    }
    let mut rat: Vec<Rational> = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        rat.push(c.as_rational().cloned().ok_or(Error::UnsolvableSpectrum)?);
    }
    let mut roots = Vec::new();
    while rat.len() > 3 {
        if rat.last().unwrap().is_zero() {
            rat.pop();
            roots.push(TowerScalar::zero());
            continue;
        }
        let l = rat.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = rat
            .iter()
            .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
            .collect();
        let ps = divisors(ints.last().unwrap()).ok_or(Error::UnsolvableSpectrum)?;
        let qs = divisors(&ints[0]).ok_or(Error::UnsolvableSpectrum)?;
        let mut found = None;
        'search: for p in &ps {
            for qq in &qs {
                for s in [1i64, -1] {
                    let cand = Rational::new(BigInt::from(*p) * s, BigInt::from(*qq));
                    if horner(&rat, &cand).is_zero() {
                        found = Some(cand);
                        break 'search;
                    }
                }
            }
        }
        let r = found.ok_or(Error::UnsolvableSpectrum)?;
        rat = deflate(&rat, &r);
        roots.push(TowerScalar::from_rational(r));
    }
    let rest: Vec<TowerScalar> = rat.into_iter().map(TowerScalar::from_rational).collect();
    roots.extend(tower_roots(&rest)?);
    Ok(roots)
}

/// Exact spectral decomposition `S = V diag(values) Vᵀ`.
#[derive(Debug, Clone)]
pub struct SymEigen {
    /// Eigenvalues in non-increasing order.
    pub values: Vec<TowerScalar>,
    /// Orthonormal eigenvector columns with determinant `+1`.
    pub vectors: Matrix<TowerScalar>,
}

/// Scales `v` to unit length and makes its first nonzero entry positive.
fn normalize_tower(v: &[TowerScalar]) -> Result<Vec<TowerScalar>> {
    let norm2 = v.iter().fold(TowerScalar::zero(), |acc, x| acc.add(&x.mul(x)));
    let inv = norm2.sqrt_positive()?.invert()?;
    let mut out: Vec<TowerScalar> = v.iter().map(|x| x.mul(&inv)).collect();
    if let Some(first) = out.iter().find(|x| !x.is_zero()) {
        if first.sign() == Sign::Negative {
            out = out.iter().map(TowerScalar::neg).collect();
        }
    }
    Ok(out)
}

pub fn sym_eigen_tower(s: &Matrix<TowerScalar>) -> Result<SymEigen> {
    if !s.is_symmetric() {
        return Err(Error::DimensionMismatch("matrix is not symmetric".into()));
    }
    let n = s.rows();
    let mut values = tower_roots(&char_poly(s))?;
    values.sort_by(|a, b| b.cmp_value(a));
    if values.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::RepeatedEigenvalue);
    }
    let mut cols = Vec::with_capacity(n);
    for lam in &values {
        let shifted = s.sub(&Matrix::identity(n).scale_by(lam));
        let ker = kernel(&shifted, &())?;
        let v = ker.first().ok_or(Error::UnsolvableSpectrum)?;
        cols.push(normalize_tower(v)?);
    }
    let mut vectors = Matrix::from_cols(&cols)?;
    if det(&vectors, &())?.sign() == Sign::Negative {
        for i in 0..n {
            let v = vectors.get(i, n - 1).neg();
            vectors.set(i, n - 1, v);
        }
    }
    Ok(SymEigen { values, vectors })
}

/// Eigen-pairs of a symmetric Puiseux matrix expanded order by order.
#[derive(Debug, Clone)]
pub struct SymEigenLift {
    /// Eigenvalues, ordered by their leading-order coefficients (descending).
    pub eigenvalues: Vec<PuiseuxScalar>,
    /// Eigenvector columns, orthonormal through the certified order.
    pub eigenvectors: Matrix<PuiseuxScalar>,
    /// Residuals `S v - λ v` and `vᵀw - δ` vanish above
    /// `X^{top - certified_order·gap}` after scaling by the matrix size
    /// `X^top`, where `gap` is the distance from the top exponent to the next
    /// exponent of `S` written in the eigenbasis of its leading coefficients.
    pub certified_order: Rational,
}

/// Largest exponent at which `x` carries information; `None` for exact zero.
fn info_exponent(x: &PuiseuxScalar) -> Option<Rational> {
    match (x.lead_exponent(), x.bound()) {
        (Some(e), _) => Some(e.clone()),
        (None, Some(b)) => Some(b.clone()),
        (None, None) => None,
    }
}

fn coefficient_at(x: &PuiseuxScalar, e: &Rational) -> TowerScalar {
    x.terms()
        .iter()
        .find(|(ex, _)| ex == e)
        .map(|(_, c)| c.clone())
        .unwrap_or_else(TowerScalar::zero)
}

pub fn sym_eigen_lift(s: &Matrix<PuiseuxScalar>, order: &Rational) -> Result<SymEigenLift> {
    if !s.is_symmetric() {
        return Err(Error::DimensionMismatch("matrix is not symmetric".into()));
    }
    let n = s.rows();
    let top = s
        .entries()
        .iter()
        .filter_map(|x| x.lead_exponent().cloned())
        .max()
        .ok_or(Error::DegenerateLeadingSpectrum)?;
    if s.entries().iter().any(|x| x.bound().is_some_and(|b| b >= &top)) {
        return Err(Error::IndeterminateSign);
    }
    let lead = s.map(|x| coefficient_at(x, &top));
    let eig0 = sym_eigen_tower(&lead).map_err(|e| match e {
        Error::RepeatedEigenvalue => Error::DegenerateLeadingSpectrum,
        other => other,
    })?;
    let v0 = eig0.vectors.map(|x| PuiseuxScalar::from_tower(x.clone()));
    let t_full = v0.transpose().mul(s).mul(&v0);

    let mut next: Option<Rational> = None;
    for x in t_full.entries() {
        for (e, _) in x.terms() {
            if e < &top && next.as_ref().is_none_or(|m| e > m) {
                next = Some(e.clone());
            }
        }
        if let Some(b) = x.bound() {
            if next.as_ref().is_none_or(|m| b > m) {
                next = Some(b.clone());
            }
        }
    }
    let gap = match &next {
        Some(e) => &top - e,
        None => q(1),
    };
    let beta_v = -((order + q(1)) * &gap);
    let beta_l = &top + &beta_v;
    let t = t_full.map(|x| x.truncate(&beta_l));
    let max_iter = (order + q(4)).ceil().to_integer().to_usize().unwrap_or(64);

    let mut values = Vec::with_capacity(n);
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        let mut c = vec![PuiseuxScalar::zero(); n];
        c[i] = PuiseuxScalar::from_int(1);
        let mut lam = t.get(i, i).clone();
        for _ in 0..max_iter {
            let mut next_c = c.clone();
            for j in (0..n).filter(|&j| j != i) {
                let mut num = t.get(j, i).clone();
                for k in (0..n).filter(|&k| k != i && k != j) {
                    num = num.add(&t.get(j, k).mul(&c[k]));
                }
                let num = num.truncate(&beta_l);
                next_c[j] = match num.lead_exponent() {
                    None => PuiseuxScalar::zero().truncate(&beta_v),
                    Some(top_num) => {
                        let d = lam.sub(t.get(j, j));
                        let rel = &beta_v - top_num;
                        let dinv = d.invert_with_cutoff(&rel)?;
                        num.mul(&dinv).truncate(&beta_v)
                    }
                };
            }
            let mut next_lam = t.get(i, i).clone();
            for j in (0..n).filter(|&j| j != i) {
                next_lam = next_lam.add(&t.get(i, j).mul(&next_c[j]));
            }
            let next_lam = next_lam.truncate(&beta_l);
            let done = next_c == c && next_lam == lam;
            c = next_c;
            lam = next_lam;
            if done {
                break;
            }
        }
        if lam.terms().is_empty() {
            // no leading term can be assigned to this eigenvalue
            return Err(Error::DegenerateLeadingSpectrum);
        }
        let norm2 = c.iter().fold(PuiseuxScalar::zero(), |acc, x| acc.add(&x.mul(x)));
        let inv_norm = norm2
            .truncate(&beta_v)
            .sqrt_with_cutoff(&beta_v)?
            .invert_with_cutoff(&beta_v)?;
        let v: Vec<PuiseuxScalar> = c.iter().map(|x| x.mul(&inv_norm).truncate(&beta_v)).collect();
        cols.push(v0.mul_vec(&v));
        values.push(lam);
    }
    let vectors = Matrix::from_cols(&cols)?;

    let mut worst: Option<Rational> = None;
    let mut note = |x: &PuiseuxScalar, scale: &Rational| {
        if let Some(e) = info_exponent(x) {
            let rel = e - scale;
            if worst.as_ref().is_none_or(|w| &rel > w) {
                worst = Some(rel);
            }
        }
    };
    for i in 0..n {
        let v = vectors.col(i);
        let sv = s.mul_vec(&v);
        for (a, b) in sv.iter().zip(&v) {
            note(&a.sub(&values[i].mul(b)), &top);
        }
        for j in i..n {
            let w = vectors.col(j);
            let mut dot = v.iter().zip(&w).fold(PuiseuxScalar::zero(), |acc, (a, b)| acc.add(&a.mul(b)));
            if i == j {
                dot = dot.sub(&PuiseuxScalar::from_int(1));
            }
            note(&dot, &Rational::zero());
        }
    }
    let worst = match worst {
        Some(w) if w > beta_v => w,
        _ => beta_v,
    };
    Ok(SymEigenLift {
        eigenvalues: values,
        eigenvectors: vectors,
        certified_order: -worst / gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qf;
    use crate::tower::sqrt_of;

    type M = Matrix<TowerScalar>;

    fn t(n: i64) -> TowerScalar {
        TowerScalar::from_int(n)
    }

    #[test]
    fn determinants_and_rank() {
        assert_eq!(det(&M::identity(3), &()).unwrap(), t(1));
        assert_eq!(det(&M::from_i64(&[&[0, -1], &[1, 0]]), &()).unwrap(), t(1));
        assert_eq!(rank(&M::from_i64(&[&[1, 2], &[2, 4]]), &()).unwrap(), 1);
        assert_eq!(det(&M::from_i64(&[&[1, 2], &[2, 4]]), &()).unwrap(), t(0));
    }

    #[test]
    fn solve_and_inverse() {
        let m = M::from_i64(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let b = vec![t(1), t(2), t(3)];
        let x = solve(&m, &b, &()).unwrap();
        assert_eq!(m.mul_vec(&x), b);
        let inv = inverse(&m, &()).unwrap();
        assert_eq!(m.mul(&inv), M::identity(3));
        let sing = M::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(solve(&sing, &[t(1), t(1)], &()), Err(Error::SingularMatrix));
    }

    #[test]
    fn kernels() {
        let m = M::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel(&m, &()).unwrap();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(TowerScalar::is_zero));
        }
    }

    #[test]
    fn characteristic_polynomials() {
        let half = TowerScalar::from_rational(qf(1, 2));
        let d = M::diag(&[t(2), half]);
        assert_eq!(
            char_poly(&d),
            vec![t(1), TowerScalar::from_rational(qf(-5, 2)), t(1)]
        );
        assert_eq!(char_poly(&M::zeros(2, 2)), vec![t(1), t(0), t(0)]);
        assert_eq!(
            char_poly(&M::from_i64(&[&[2, 1], &[1, 1]])),
            vec![t(1), t(-3), t(1)]
        );
    }

    #[test]
    fn rational_root_splitting() {
        // (λ-1)(λ-2)(λ²-2)
        let p = [1, -3, 0, 6, -4].map(t);
        let mut roots = tower_roots(&p).unwrap();
        roots.sort_by(|a, b| a.cmp_value(b));
        assert_eq!(roots, vec![sqrt_of(2).neg(), t(1), sqrt_of(2), t(2)]);
        // λ³ - 2 has no rational root
        assert_eq!(tower_roots(&[1, 0, 0, -2].map(t)), Err(Error::UnsolvableSpectrum));
    }

    #[test]
    fn symmetric_eigen_tower() {
        let e = sym_eigen_tower(&M::diag(&[t(4), t(1)])).unwrap();
        assert_eq!(e.values, vec![t(4), t(1)]);
        assert_eq!(e.vectors, M::identity(2));

        let s = M::from_i64(&[&[2, 1], &[1, 1]]);
        let e = sym_eigen_tower(&s).unwrap();
        let half = qf(1, 2);
        let s5 = sqrt_of(5);
        assert_eq!(e.values[0], t(3).add(&s5).scale(&half));
        assert_eq!(e.values[1], t(3).sub(&s5).scale(&half));
        let v = &e.vectors;
        assert_eq!(v.transpose().mul(v), M::identity(2));
        assert_eq!(s.mul(v), v.mul(&M::diag(&e.values)));
        assert_eq!(det(v, &()).unwrap(), t(1));

        assert_eq!(
            sym_eigen_tower(&M::identity(2)).unwrap_err(),
            Error::RepeatedEigenvalue
        );
    }

    #[test]
    fn eigen_lift() {
        type P = Matrix<PuiseuxScalar>;
        let x = PuiseuxScalar::x();
        let x2 = x.mul(&x);
        let one = PuiseuxScalar::from_int(1);
        let d = P::diag(&[x2.clone(), one.clone()]);
        let e = sym_eigen_lift(&d, &q(6)).unwrap();
        assert!(e.eigenvalues[0].agrees(&x2) && e.eigenvalues[1].agrees(&one));
        assert!(e.eigenvectors.agrees(&P::identity(2)));

        let s = P::from_rows(vec![vec![x2.clone(), one.clone()], vec![one.clone(), one.clone()]]).unwrap();
        let e = sym_eigen_lift(&s, &q(6)).unwrap();
        assert!(e.certified_order >= q(6), "certified {}", e.certified_order);
        let (l1, l2) = (&e.eigenvalues[0], &e.eigenvalues[1]);
        let xm2 = PuiseuxScalar::x_pow(q(-2));
        // λ₁ = X² + X⁻² + O(X⁻⁴), forced by the trace once λ₂ is known
        assert!(l1.sub(&x2).sub(&xm2).truncate(&q(-4)).terms().is_empty());
        assert!(l2.sub(&one).add(&xm2).truncate(&q(-4)).terms().is_empty());
        // trace and determinant through the certified range
        assert!(l1.add(l2).sub(&x2).sub(&one).terms().is_empty());
        assert!(l1.mul(l2).sub(&x2).add(&one).terms().is_empty());

        let xx = P::from_rows(vec![vec![x.clone(), x.clone()], vec![x.clone(), x.clone()]]).unwrap();
        assert_eq!(
            sym_eigen_lift(&xx, &q(6)).unwrap_err(),
            Error::DegenerateLeadingSpectrum
        );
    }
}
