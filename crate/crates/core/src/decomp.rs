//! Iwasawa, Cartan and Bruhat decompositions of `SL_n` with exact
//! reconstruction certificates.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{rank, sym_eigen_lift, sym_eigen_tower, det};
use crate::matrix::Matrix;
use crate::puiseux::{PuiseuxScalar, Truncation};
use crate::scalar::{Rational, Scalar, Sign};
use crate::slgroup::{check_sl, member_a, member_b, member_k, member_n, member_u, permutation_sign, signed_permutation};
use crate::tower::TowerScalar;

/// `g = k · a · u`.
#[derive(Debug, Clone, PartialEq)]
pub struct KauResult<S: Scalar> {
    pub k: Matrix<S>,
    pub a: Matrix<S>,
    pub u: Matrix<S>,
}

/// `g = u · a · k`.
#[derive(Debug, Clone, PartialEq)]
pub struct UakResult<S: Scalar> {
    pub u: Matrix<S>,
    pub a: Matrix<S>,
    pub k: Matrix<S>,
}

/// `g = k1 · a · k2` with `a` non-increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct KakResult<S: Scalar> {
    pub k1: Matrix<S>,
    pub a: Matrix<S>,
    pub k2: Matrix<S>,
}

/// `g = b1 · w · b2`.
#[derive(Debug, Clone, PartialEq)]
pub struct BruhatResult<S: Scalar> {
    pub b1: Matrix<S>,
    pub w: Matrix<S>,
    pub b2: Matrix<S>,
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc.add_ref(&x.mul_ref(y)))
}

fn certify<S: Scalar>(product: &Matrix<S>, g: &Matrix<S>, what: &str) -> Result<()> {
    if product.agrees(g) {
        Ok(())
    } else {
        Err(Error::CertificationFailed(format!("{what} does not reconstruct the input")))
    }
}

/// Gram–Schmidt on the columns of `g` without normalization, so that the
/// only square roots taken are the column norms.
pub fn iwasawa_kau<S: Scalar>(g: &Matrix<S>, prec: &S::Precision) -> Result<KauResult<S>> {
    check_sl(g, prec)?;
    let n = g.rows();
    let mut vs: Vec<Vec<S>> = Vec::with_capacity(n);
    let mut norms2: Vec<S> = Vec::with_capacity(n);
    let mut u = Matrix::identity(n);
    for j in 0..n {
        let col = g.col(j);
        let mut v = col.clone();
        for (i, (vi, ni)) in vs.iter().zip(&norms2).enumerate() {
            let mu = dot(&col, vi).div_ref(ni, prec)?;
            for (x, y) in v.iter_mut().zip(vi) {
                *x = x.sub_ref(&mu.mul_ref(y));
            }
            u.set(i, j, mu);
        }
        let nn = dot(&v, &v);
        if nn.sign()? != Sign::Positive {
            return Err(Error::SingularMatrix);
        }
        norms2.push(nn);
        vs.push(v);
    }
    let norms: Vec<S> = norms2.iter().map(|x| x.sqrt(prec)).collect::<Result<_>>()?;
    let inv: Vec<S> = norms.iter().map(|x| x.inv(prec)).collect::<Result<_>>()?;
    let cols: Vec<Vec<S>> = vs
        .iter()
        .zip(&inv)
        .map(|(v, c)| v.iter().map(|x| x.mul_ref(c)).collect())
        .collect();
    let k = Matrix::from_cols(&cols)?;
    let a = Matrix::diag(&norms);
    certify(&k.mul(&a).mul(&u), g, "k a u")?;
    Ok(KauResult { k, a, u })
}

/// `J M J` for the antidiagonal `J`: reverses rows and columns.
fn flip<S: Scalar>(m: &Matrix<S>) -> Matrix<S> {
    let (r, c) = (m.rows(), m.cols());
    let mut out = Matrix::zeros(r, c);
    for i in 0..r {
        for j in 0..c {
            out.set(i, j, m.get(r - 1 - i, c - 1 - j).clone());
        }
    }
    out
}

/// `g = u a k`, from the KAU decomposition of `J gᵀ J`.
pub fn iwasawa_uak<S: Scalar>(g: &Matrix<S>, prec: &S::Precision) -> Result<UakResult<S>> {
    let inner = iwasawa_kau(&flip(&g.transpose()), prec)?;
    let u = flip(&inner.u.transpose());
    let a = flip(&inner.a);
    let k = flip(&inner.k.transpose());
    certify(&u.mul(&a).mul(&k), g, "u a k")?;
    Ok(UakResult { u, a, k })
}

/// The `A` part of `g = u a k`.
pub fn a_component<S: Scalar>(g: &Matrix<S>, prec: &S::Precision) -> Result<Matrix<S>> {
    Ok(iwasawa_uak(g, prec)?.a)
}

/// Fields whose symmetric matrices can be diagonalized by an orthogonal
/// matrix with the spectrum in non-increasing order.
pub trait SpectralField: Scalar {
    fn spectral(s: &Matrix<Self>, prec: &Self::Precision) -> Result<(Vec<Self>, Matrix<Self>)>;
}

impl SpectralField for TowerScalar {
    fn spectral(s: &Matrix<Self>, _prec: &()) -> Result<(Vec<Self>, Matrix<Self>)> {
        let e = sym_eigen_tower(s)?;
        Ok((e.values, e.vectors))
    }
}

impl SpectralField for PuiseuxScalar {
    fn spectral(s: &Matrix<Self>, prec: &Truncation) -> Result<(Vec<Self>, Matrix<Self>)> {
        let e = sym_eigen_lift(s, &prec.order)?;
        Ok((e.eigenvalues, e.eigenvectors))
    }
}

/// Cartan decomposition from the spectrum of `gᵀg`: `a = √Λ`, `k2 = Vᵀ`,
/// `k1 = g V a⁻¹`.
pub fn cartan_kak<S: SpectralField>(g: &Matrix<S>, prec: &S::Precision) -> Result<KakResult<S>> {
    check_sl(g, prec)?;
    let n = g.rows();
    let s = g.transpose().mul(g);
    let (values, vectors) = S::spectral(&s, prec)?;
    let mut order: Vec<usize> = (0..n).collect();
    let mut cmp_err = None;
    order.sort_by(|&x, &y| match values[y].cmp_to(&values[x]) {
        Ok(Sign::Negative) => std::cmp::Ordering::Less,
        Ok(Sign::Positive) => std::cmp::Ordering::Greater,
        Ok(Sign::Zero) => std::cmp::Ordering::Equal,
        Err(e) => {
            cmp_err = Some(e);
            std::cmp::Ordering::Equal
        }
    });
    if let Some(e) = cmp_err {
        return Err(e);
    }
    let cols: Vec<Vec<S>> = order.iter().map(|&i| vectors.col(i)).collect();
    let mut v = Matrix::from_cols(&cols)?;
    if det(&v, prec)?.sign()? == Sign::Negative {
        for i in 0..n {
            let x = v.get(i, n - 1).neg_ref();
            v.set(i, n - 1, x);
        }
    }
    let roots: Vec<S> = order
        .iter()
        .map(|&i| values[i].sqrt(prec))
        .collect::<Result<_>>()?;
    let inv: Vec<S> = roots.iter().map(|x| x.inv(prec)).collect::<Result<_>>()?;
    let a = Matrix::diag(&roots);
    let k2 = v.transpose();
    let k1 = g.mul(&v).mul(&Matrix::diag(&inv));
    certify(&k1.mul(&a).mul(&k2), g, "k1 a k2")?;
    Ok(KakResult { k1, a, k2 })
}

/// Finds a signed permutation `w ∈ N` with `a2 = w a1 w⁻¹` after checking
/// that both results reconstruct `g`.
pub fn kak_uniqueness_check<S: Scalar>(
    g: &Matrix<S>,
    r1: &KakResult<S>,
    r2: &KakResult<S>,
) -> Result<Matrix<S>> {
    certify(&r1.k1.mul(&r1.a).mul(&r1.k2), g, "first KAK result")?;
    certify(&r2.k1.mul(&r2.a).mul(&r2.k2), g, "second KAK result")?;
    let n = g.rows();
    let d1 = r1.a.diagonal();
    let d2 = r2.a.diagonal();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        // w a1 w⁻¹ has (w a1 w⁻¹)_ii = a1_{π(i)} for w_{i,π(i)} = ±1
        if perm.iter().enumerate().all(|(i, &p)| d2[i].agrees(&d1[p])) {
            let mut w: Matrix<S> = crate::slgroup::permutation_matrix(&perm);
            if permutation_sign(&perm) < 0 {
                let j = perm[0];
                w.set(0, j, S::from_i64(-1));
            }
            return Ok(w);
        }
        if !next_permutation(&mut perm) {
            return Err(Error::NoRelatingElement);
        }
    }
}

/// Advances to the next permutation in lexicographic order.
pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Bruhat decomposition by two-sided elimination: rows bottom to top, the
/// leftmost nonzero entry of each row is the pivot, entries to its right
/// are cleared by column operations and entries above by row operations.
/// Both kinds of operation are upper unitriangular.
pub fn bruhat<S: Scalar>(g: &Matrix<S>, prec: &S::Precision) -> Result<BruhatResult<S>> {
    check_sl(g, prec)?;
    let n = g.rows();
    let mut m = g.clone();
    // inverses of the accumulated row and column operations
    let mut l_inv: Matrix<S> = Matrix::identity(n);
    let mut r_inv: Matrix<S> = Matrix::identity(n);
    let mut perm = vec![usize::MAX; n];
    for i in (0..n).rev() {
        let mut pivot = None;
        for j in 0..n {
            if !m.get(i, j).is_zero_strict()? {
                pivot = Some(j);
                break;
            }
        }
        let j = pivot.ok_or(Error::SingularMatrix)?;
        perm[i] = j;
        let p_inv = m.get(i, j).inv(prec)?;
        for k in j + 1..n {
            if m.get(i, k).is_exact_zero() {
                continue;
            }
            let f = m.get(i, k).mul_ref(&p_inv);
            for r in 0..n {
                let x = m.get(r, k).sub_ref(&f.mul_ref(m.get(r, j)));
                m.set(r, k, x);
            }
            for c in 0..n {
                let x = r_inv.get(j, c).add_ref(&f.mul_ref(r_inv.get(k, c)));
                r_inv.set(j, c, x);
            }
        }
        for r in 0..i {
            if m.get(r, j).is_exact_zero() {
                continue;
            }
            let f = m.get(r, j).mul_ref(&p_inv);
            for c in 0..n {
                let x = m.get(r, c).sub_ref(&f.mul_ref(m.get(i, c)));
                m.set(r, c, x);
            }
            for rr in 0..n {
                let x = l_inv.get(rr, i).add_ref(&f.mul_ref(l_inv.get(rr, r)));
                l_inv.set(rr, i, x);
            }
        }
    }
    let w = weyl_representative::<S>(&perm);
    // m = w D with D diagonal; wᵀ = w⁻¹ for signed permutations
    let d = w.transpose().mul(&m);
    let b1 = l_inv;
    let b2 = d.mul(&r_inv);
    certify(&b1.mul(&w).mul(&b2), g, "b1 w b2")?;
    if rank_profile(g, prec)? != rank_profile(&w, prec)? {
        return Err(Error::CertificationFailed("rank profile of g differs from w".into()));
    }
    Ok(BruhatResult { b1, w, b2 })
}

/// The permutation matrix with `w[i][perm[i]] = 1`, with the entry in the
/// first non-fixed row negated when the permutation is odd.
pub fn weyl_representative<S: Scalar>(perm: &[usize]) -> Matrix<S> {
    let mut w: Matrix<S> = crate::slgroup::permutation_matrix(perm);
    if permutation_sign(perm) < 0 {
        let i = perm.iter().enumerate().position(|(i, &p)| i != p).expect("odd permutation moves a point");
        w.set(i, perm[i], S::from_i64(-1));
    }
    w
}

/// `r(i, j) = rank g[i.., ..=j]`, the Bruhat cell invariant.
pub fn rank_profile<S: Scalar>(g: &Matrix<S>, prec: &S::Precision) -> Result<Vec<Vec<usize>>> {
    let n = g.rows();
    let mut out = vec![vec![0; n]; n];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            let rows: Vec<Vec<S>> = (i..n).map(|r| g.row(r)[..=j].to_vec()).collect();
            *slot = rank(&Matrix::from_rows(rows)?, prec)?;
        }
    }
    Ok(out)
}

/// The permutation of the Bruhat cell containing `g`.
pub fn bruhat_cell<S: Scalar>(g: &Matrix<S>, prec: &S::Precision) -> Result<Vec<usize>> {
    let w = bruhat(g, prec)?.w;
    Ok(signed_permutation(&w).expect("Weyl representative").0)
}

/// Membership flags `[k ∈ K, a ∈ A, u ∈ U]` of a KAU result.
pub fn kau_memberships<S: Scalar>(r: &KauResult<S>, prec: &S::Precision) -> Result<[bool; 3]> {
    Ok([member_k(&r.k, prec)?, member_a(&r.a)?, member_u(&r.u)?])
}

/// Checks the membership contracts of a Bruhat result.
pub fn bruhat_memberships<S: Scalar>(r: &BruhatResult<S>) -> Result<[bool; 3]> {
    Ok([member_b(&r.b1)?, member_n(&r.w)?, member_b(&r.b2)?])
}

/// True when the diagonal of `a` is non-increasing.
pub fn is_dominant<S: Scalar>(a: &Matrix<S>) -> Result<bool> {
    let d = a.diagonal();
    for w in d.windows(2) {
        if w[0].cmp_to(&w[1])? == Sign::Negative {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rational rotation in the `(i, j)` plane with `c = (1-t²)/(1+t²)`,
/// `s = 2t/(1+t²)`.
pub fn rational_rotation<S: Scalar>(n: usize, i: usize, j: usize, t: &Rational) -> Matrix<S> {
    let one = Rational::from_integer(1.into());
    let den = &one + t * t;
    let c = S::from_rational((&one - t * t) / &den);
    let s = S::from_rational(Rational::from_integer(2.into()) * t / &den);
    let mut m = Matrix::identity(n);
    m.set(i, i, c.clone());
    m.set(j, j, c);
    m.set(i, j, s.neg_ref());
    m.set(j, i, s);
    m
}

/// Serializable summary of a decomposition, entries as printed strings.
#[derive(Debug, Clone, Serialize)]
pub struct Factors {
    pub names: Vec<String>,
    pub matrices: Vec<Vec<Vec<String>>>,
}

impl Factors {
    pub fn new<S: Scalar>(parts: &[(&str, &Matrix<S>)]) -> Self {
        Factors {
            names: parts.iter().map(|(n, _)| n.to_string()).collect(),
            matrices: parts.iter().map(|(_, m)| m.to_strings()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qf;
    use crate::slgroup::weyl_reps_sl3;

    type M = Matrix<TowerScalar>;

    fn t(n: i64) -> TowerScalar {
        TowerScalar::from_int(n)
    }

    #[test]
    fn kau_examples() {
        let r = iwasawa_kau(&M::identity(3), &()).unwrap();
        assert_eq!((r.k, r.a, r.u), (M::identity(3), M::identity(3), M::identity(3)));
        let g = M::from_i64(&[&[1, 1], &[0, 1]]);
        let r = iwasawa_kau(&g, &()).unwrap();
        assert_eq!((r.k, r.a, r.u.clone()), (M::identity(2), M::identity(2), g));
        let g = M::from_i64(&[&[1, 0], &[1, 1]]);
        let r = iwasawa_kau(&g, &()).unwrap();
        let s = crate::tower::sqrt_of(2);
        let h = s.inv(&()).unwrap();
        assert_eq!(r.k, M::from_rows(vec![vec![h.clone(), h.neg()], vec![h.clone(), h.clone()]]).unwrap());
        assert_eq!(r.a, M::diag(&[s, h]));
        assert_eq!(r.u, M::from_rows(vec![vec![t(1), TowerScalar::from_rational(qf(1, 2))], vec![t(0), t(1)]]).unwrap());
        assert_eq!(kau_memberships(&r, &()).unwrap(), [true; 3]);
    }

    #[test]
    fn uak_examples() {
        let a = M::diag(&[t(2), t(1), TowerScalar::from_rational(qf(1, 2))]);
        let r = iwasawa_uak(&a, &()).unwrap();
        assert_eq!((r.u, r.a, r.k), (M::identity(3), a.clone(), M::identity(3)));
        let k = rational_rotation::<TowerScalar>(3, 0, 2, &qf(1, 3));
        assert_eq!(a_component(&k, &()).unwrap(), M::identity(3));
        assert_eq!(a_component(&a.mul(&k), &()).unwrap(), a);
        let g = M::from_i64(&[&[2, 1, 0], &[1, 1, 3], &[0, 0, 1]]);
        let r = iwasawa_uak(&g, &()).unwrap();
        assert!(member_u(&r.u).unwrap() && member_a(&r.a).unwrap() && member_k(&r.k, &()).unwrap());
    }

    #[test]
    fn kak_examples() {
        let d = M::diag(&[t(3), TowerScalar::from_rational(qf(1, 3))]);
        let r = cartan_kak(&d, &()).unwrap();
        assert_eq!((r.k1, r.a, r.k2), (M::identity(2), d.clone(), M::identity(2)));
        let g = M::from_i64(&[&[1, 1], &[0, 1]]);
        let r = cartan_kak(&g, &()).unwrap();
        let s5 = crate::tower::sqrt_of(5);
        let half = TowerScalar::from_rational(qf(1, 2));
        let a1 = t(1).add(&s5).mul(&half);
        let a2 = s5.sub(&t(1)).mul(&half);
        assert_eq!(r.a, M::diag(&[a1, a2]));
        assert!(member_k(&r.k1, &()).unwrap() && member_k(&r.k2, &()).unwrap());
        assert!(is_dominant(&r.a).unwrap());
        let w = kak_uniqueness_check(&g, &r, &r).unwrap();
        assert_eq!(w, M::identity(2));
    }

    #[test]
    fn kak_relating_element() {
        let g = M::from_i64(&[&[2, 1], &[1, 1]]);
        let r1 = cartan_kak(&g, &()).unwrap();
        let w = M::from_i64(&[&[0, -1], &[1, 0]]);
        let r2 = KakResult {
            k1: r1.k1.mul(&w.transpose()),
            a: w.mul(&r1.a).mul(&w.transpose()),
            k2: w.mul(&r1.k2),
        };
        let found = kak_uniqueness_check(&g, &r1, &r2).unwrap();
        assert_eq!(found.mul(&r1.a).mul(&found.transpose()), r2.a);
    }

    #[test]
    fn bruhat_examples() {
        let g = M::from_i64(&[&[1, 0], &[1, 1]]);
        let r = bruhat(&g, &()).unwrap();
        assert_eq!(r.w, M::from_i64(&[&[0, -1], &[1, 0]]));
        assert_eq!(r.b1, M::from_i64(&[&[1, 1], &[0, 1]]));
        assert_eq!(r.b2, M::from_i64(&[&[1, 1], &[0, 1]]));
        let upper = M::from_i64(&[&[1, 2, 3], &[0, 1, 4], &[0, 0, 1]]);
        let r = bruhat(&upper, &()).unwrap();
        assert_eq!((r.b1, r.w, r.b2), (upper, M::identity(3), M::identity(3)));
        let anti = M::from_i64(&[&[0, 0, -1], &[0, 1, 0], &[1, 0, 0]]);
        let r = bruhat(&anti, &()).unwrap();
        assert_eq!((r.b1, r.w, r.b2), (M::identity(3), anti, M::identity(3)));
    }

    #[test]
    fn bruhat_representatives_match_weyl_list() {
        for w in weyl_reps_sl3::<TowerScalar>() {
            let (perm, _) = signed_permutation(&w).unwrap();
            assert_eq!(weyl_representative::<TowerScalar>(&perm), w);
            assert_eq!(bruhat(&w, &()).unwrap().w, w);
        }
    }

    #[test]
    fn permutations_enumerate() {
        let mut p = vec![0, 1, 2];
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!(count, 6);
    }
}
