//! `SL_n` over an ordered field: the subgroups K, A, U, M, N, B, the Cartan
//! involution, root spaces of `sl_n`, the Killing form, and characters of the
//! diagonal torus.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linalg::{det, solve};
use crate::matrix::Matrix;
use crate::nilpotent::exp_nilpotent;
use crate::scalar::{Rational, Scalar, Sign};

/// The root `e_i - e_j` of `sl_n` (zero-based indices).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootIndex {
    pub i: usize,
    pub j: usize,
}

impl RootIndex {
    pub fn new(i: usize, j: usize) -> Result<Self> {
        if i == j {
            return Err(Error::DimensionMismatch(format!("root e{0} - e{0} is zero", i + 1)));
        }
        Ok(RootIndex { i, j })
    }

    pub fn is_positive(&self) -> bool {
        self.i < self.j
    }

    pub fn negate(&self) -> Self {
        RootIndex { i: self.j, j: self.i }
    }

    /// `α(H) = H_ii - H_jj` for diagonal `H`.
    pub fn eval<S: Scalar>(&self, h: &Matrix<S>) -> S {
        h.get(self.i, self.i).sub_ref(h.get(self.j, self.j))
    }

    /// Positive roots of `sl_n` in lexicographic order.
    pub fn positive(n: usize) -> Vec<RootIndex> {
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                out.push(RootIndex { i, j });
            }
        }
        out
    }
}

impl fmt::Display for RootIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}-e{}", self.i + 1, self.j + 1)
    }
}

fn agrees_int<S: Scalar>(x: &S, n: i64) -> bool {
    x.agrees(&S::from_i64(n))
}

fn det_is_one<S: Scalar>(g: &Matrix<S>, prec: &S::Precision) -> Result<bool> {
    Ok(g.is_square() && agrees_int(&det(g, prec)?, 1))
}

/// Errors unless `g` is square with determinant one.
pub fn check_sl<S: Scalar>(g: &Matrix<S>, prec: &S::Precision) -> Result<()> {
    if !g.is_square() {
        return Err(Error::NotInGroup(format!("{}x{} matrix", g.rows(), g.cols())));
    }
    let d = det(g, prec)?;
    if !agrees_int(&d, 1) {
        return Err(Error::NotInGroup(format!("determinant is {d}")));
    }
    Ok(())
}

fn is_diagonal<S: Scalar>(g: &Matrix<S>) -> bool {
    (0..g.rows()).all(|i| (0..g.cols()).all(|j| i == j || g.get(i, j).vanishes()))
}

fn is_upper<S: Scalar>(g: &Matrix<S>) -> bool {
    (0..g.rows()).all(|i| (0..i.min(g.cols())).all(|j| g.get(i, j).vanishes()))
}

/// `K = SO_n`: `g gᵀ = I` and `det g = 1`.
pub fn member_k<S: Scalar>(g: &Matrix<S>, prec: &S::Precision) -> Result<bool> {
    if !g.is_square() || !g.mul(&g.transpose()).agrees(&Matrix::identity(g.rows())) {
        return Ok(false);
    }
    det_is_one(g, prec)
}

/// `A`: positive diagonal with determinant one.
pub fn member_a<S: Scalar>(g: &Matrix<S>) -> Result<bool> {
    if !g.is_square() || !is_diagonal(g) {
        return Ok(false);
    }
    for x in g.diagonal() {
        if x.sign()? != Sign::Positive {
            return Ok(false);
        }
    }
    let prod = g.diagonal().iter().fold(S::one(), |acc, x| acc.mul_ref(x));
    Ok(agrees_int(&prod, 1))
}

/// `U`: upper triangular with unit diagonal.
pub fn member_u<S: Scalar>(g: &Matrix<S>) -> Result<bool> {
    Ok(g.is_square() && is_upper(g) && g.diagonal().iter().all(|x| agrees_int(x, 1)))
}

/// `M`: diagonal with entries `±1` and determinant one.
pub fn member_m<S: Scalar>(g: &Matrix<S>) -> Result<bool> {
    if !g.is_square() || !is_diagonal(g) {
        return Ok(false);
    }
    let mut negatives = 0;
    for x in g.diagonal() {
        if agrees_int(&x, -1) {
            negatives += 1;
        } else if !agrees_int(&x, 1) {
            return Ok(false);
        }
    }
    Ok(negatives % 2 == 0)
}

/// The permutation `σ` and signs of a signed permutation matrix
/// (`g[i][σ(i)] = sign_i`), if `g` is one.
pub fn signed_permutation<S: Scalar>(g: &Matrix<S>) -> Option<(Vec<usize>, Vec<i8>)> {
    if !g.is_square() {
        return None;
    }
    let n = g.rows();
    let mut perm = Vec::with_capacity(n);
    let mut signs = Vec::with_capacity(n);
    let mut used = vec![false; n];
    for i in 0..n {
        let mut hit = None;
        for j in 0..n {
            let x = g.get(i, j);
            if x.vanishes() {
                continue;
            }
            if hit.is_some() || used[j] {
                return None;
            }
            let s = if agrees_int(x, 1) {
                1
            } else if agrees_int(x, -1) {
                -1
            } else {
                return None;
            };
            hit = Some((j, s));
        }
        let (j, s) = hit?;
        used[j] = true;
        perm.push(j);
        signs.push(s);
    }
    Some((perm, signs))
}

pub fn permutation_sign(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1i8;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = perm[k];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// `N`: signed permutation matrices with determinant one.
pub fn member_n<S: Scalar>(g: &Matrix<S>) -> Result<bool> {
    Ok(match signed_permutation(g) {
        Some((perm, signs)) => permutation_sign(&perm) * signs.iter().product::<i8>() == 1,
        None => false,
    })
}

/// `B`: upper triangular with determinant one.
pub fn member_b<S: Scalar>(g: &Matrix<S>) -> Result<bool> {
    if !g.is_square() || !is_upper(g) {
        return Ok(false);
    }
    let prod = g.diagonal().iter().fold(S::one(), |acc, x| acc.mul_ref(x));
    Ok(agrees_int(&prod, 1))
}

/// The six membership predicates in the order K, A, U, M, N, B.
pub fn memberships<S: Scalar>(g: &Matrix<S>, prec: &S::Precision) -> Result<[bool; 6]> {
    Ok([
        member_k(g, prec)?,
        member_a(g)?,
        member_u(g)?,
        member_m(g)?,
        member_n(g)?,
        member_b(g)?,
    ])
}

/// The permutation matrix `P` with `P[i][perm[i]] = 1`.
pub fn permutation_matrix<S: Scalar>(perm: &[usize]) -> Matrix<S> {
    let n = perm.len();
    let mut m = Matrix::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        m.set(i, j, S::one());
    }
    m
}

/// Cartan involution `X ↦ -Xᵀ`.
pub fn theta<S: Scalar>(x: &Matrix<S>) -> Matrix<S> {
    x.transpose().neg()
}

#[derive(Debug, Clone)]
pub struct RootSpaceDecomposition<S: Scalar> {
    /// The diagonal part, in `g_0 = a`.
    pub cartan: Matrix<S>,
    /// Nonzero components `X_ij E_ij` in the root spaces `g_{e_i - e_j}`.
    pub roots: Vec<(RootIndex, Matrix<S>)>,
}

impl<S: Scalar> RootSpaceDecomposition<S> {
    pub fn reconstruct(&self) -> Matrix<S> {
        self.roots.iter().fold(self.cartan.clone(), |acc, (_, m)| acc.add(m))
    }
}

pub fn root_space_decompose<S: Scalar>(x: &Matrix<S>) -> Result<RootSpaceDecomposition<S>> {
    if !x.is_square() {
        return Err(Error::DimensionMismatch("sl_n element must be square".into()));
    }
    if !x.trace().vanishes() {
        return Err(Error::NotInGroup("sl_n element must be trace free".into()));
    }
    let n = x.rows();
    let cartan = Matrix::diag(&x.diagonal());
    let mut roots = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && !x.get(i, j).is_exact_zero() {
                let mut m = Matrix::zeros(n, n);
                m.set(i, j, x.get(i, j).clone());
                roots.push((RootIndex { i, j }, m));
            }
        }
    }
    Ok(RootSpaceDecomposition { cartan, roots })
}

/// Basis of `sl_n`: the `E_ij` (`i ≠ j`, row-major) followed by
/// `h_k = E_kk - E_{k+1,k+1}`.
pub fn sl_basis<S: Scalar>(n: usize) -> Vec<Matrix<S>> {
    let mut out = Vec::with_capacity(n * n - 1);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push(Matrix::unit(n, i, j));
            }
        }
    }
    for k in 0..n - 1 {
        out.push(Matrix::unit(n, k, k).sub(&Matrix::unit(n, k + 1, k + 1)));
    }
    out
}

/// Coordinates of a trace-free `X` in [`sl_basis`].
pub fn sl_coords<S: Scalar>(x: &Matrix<S>) -> Vec<S> {
    let n = x.rows();
    let mut out = Vec::with_capacity(n * n - 1);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push(x.get(i, j).clone());
            }
        }
    }
    // diag = Σ c_k h_k gives c_k = d_1 + … + d_k
    let mut acc = S::zero();
    for k in 0..n - 1 {
        acc = acc.add_ref(x.get(k, k));
        out.push(acc.clone());
    }
    out
}

/// Matrix of `ad(X) = [X, ·]` on [`sl_basis`].
pub fn ad_matrix<S: Scalar>(x: &Matrix<S>) -> Matrix<S> {
    let basis = sl_basis::<S>(x.rows());
    let cols: Vec<Vec<S>> = basis.iter().map(|b| sl_coords(&x.bracket(b))).collect();
    Matrix::from_cols(&cols).expect("square ad matrix")
}

/// `B(X, Y) = tr(ad X ∘ ad Y)`, computed from the ad matrices.
pub fn killing_form<S: Scalar>(x: &Matrix<S>, y: &Matrix<S>) -> S {
    ad_matrix(x).mul(&ad_matrix(y)).trace()
}

/// `B_θ(X, Y) = -B(X, θY)`, positive definite on `sl_n(R)`.
pub fn killing_theta<S: Scalar>(x: &Matrix<S>, y: &Matrix<S>) -> S {
    killing_form(x, &theta(y)).neg_ref()
}

/// `χ_α(a) = a_i / a_j`.
pub fn chi<S: Scalar>(alpha: RootIndex, a: &Matrix<S>, prec: &S::Precision) -> Result<S> {
    if !member_a(a)? {
        return Err(Error::NotInGroup("character argument must lie in A".into()));
    }
    a.get(alpha.i, alpha.i).div_ref(a.get(alpha.j, alpha.j), prec)
}

/// `a exp(X) a⁻¹` for `X` in the root space of `α`, checked against
/// `exp(χ_α(a) X)`.
pub fn conj_root_vector<S: Scalar>(
    a: &Matrix<S>,
    alpha: RootIndex,
    x: &Matrix<S>,
    prec: &S::Precision,
) -> Result<Matrix<S>> {
    let n = x.rows();
    for i in 0..n {
        for j in 0..n {
            if (i, j) != (alpha.i, alpha.j) && !x.get(i, j).vanishes() {
                return Err(Error::DimensionMismatch(format!("X is not in the root space of {alpha}")));
            }
        }
    }
    let c = chi(alpha, a, prec)?;
    let a_inv = Matrix::diag(
        &a.diagonal()
            .iter()
            .map(|d| d.inv(prec))
            .collect::<Result<Vec<_>>>()?,
    );
    let conj = a.mul(&exp_nilpotent(x)?).mul(&a_inv);
    let expected = exp_nilpotent(&x.scale_by(&c))?;
    if !conj.agrees(&expected) {
        return Err(Error::CertificationFailed("a exp(X) a^-1 != exp(chi(a) X)".into()));
    }
    Ok(conj)
}

/// Representatives of the spherical Weyl group of `SL_3` as signed
/// permutation matrices.
pub fn weyl_reps_sl3<S: Scalar>() -> Vec<Matrix<S>> {
    [
        [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        [[0, -1, 0], [1, 0, 0], [0, 0, 1]],
        [[1, 0, 0], [0, 0, -1], [0, 1, 0]],
        [[0, 0, -1], [0, 1, 0], [1, 0, 0]],
        [[0, 0, 1], [1, 0, 0], [0, 1, 0]],
        [[0, 1, 0], [0, 0, 1], [1, 0, 0]],
    ]
    .iter()
    .map(|m| Matrix::from_i64(&[&m[0], &m[1], &m[2]]))
    .collect()
}

/// The quotient `N/M`: classes of signed permutation matrices modulo signs.
#[derive(Debug, Clone)]
pub struct NModM<S: Scalar> {
    /// One representative per class, first occurrence in the input order.
    pub reps: Vec<Matrix<S>>,
    /// The underlying permutation of each class.
    pub perms: Vec<Vec<usize>>,
    /// `table[a][b]` is the class of `reps[a] · reps[b]`.
    pub table: Vec<Vec<usize>>,
}

pub fn n_mod_m_classes<S: Scalar>(elements: &[Matrix<S>]) -> Result<NModM<S>> {
    let mut reps: Vec<Matrix<S>> = Vec::new();
    let mut perms: Vec<Vec<usize>> = Vec::new();
    for g in elements {
        if !member_n(g)? {
            return Err(Error::NotInGroup(format!("{g:?} is not in N")));
        }
        let (perm, _) = signed_permutation(g).expect("member of N");
        if !perms.contains(&perm) {
            perms.push(perm);
            reps.push(g.clone());
        }
    }
    let mut table = Vec::with_capacity(reps.len());
    for a in &reps {
        let mut row = Vec::with_capacity(reps.len());
        for b in &reps {
            let (perm, _) = signed_permutation(&a.mul(b)).expect("product of signed permutations");
            let idx = perms
                .iter()
                .position(|p| p == &perm)
                .ok_or_else(|| Error::CertificationFailed("classes are not closed under products".into()))?;
            row.push(idx);
        }
        table.push(row);
    }
    if let Some(id) = perms.iter().position(|p| p.iter().enumerate().all(|(i, &j)| i == j)) {
        if id != 0 {
            return Err(Error::CertificationFailed("identity class must come first".into()));
        }
    }
    Ok(NModM { reps, perms, table })
}

/// Solves `B(H, H_α) = α(H)` for `H_α` in the diagonal subalgebra.
pub fn killing_dual<S: Scalar>(n: usize, alpha: RootIndex, prec: &S::Precision) -> Result<Matrix<S>> {
    let hs: Vec<Matrix<S>> = (0..n - 1)
        .map(|k| Matrix::unit(n, k, k).sub(&Matrix::unit(n, k + 1, k + 1)))
        .collect();
    let gram: Vec<Vec<S>> = hs
        .iter()
        .map(|a| hs.iter().map(|b| killing_form(a, b)).collect())
        .collect();
    let rhs: Vec<S> = hs.iter().map(|h| alpha.eval(h)).collect();
    let c = solve(&Matrix::from_rows(gram)?, &rhs, prec)?;
    Ok(hs
        .iter()
        .zip(&c)
        .fold(Matrix::zeros(n, n), |acc, (h, ci)| acc.add(&h.scale_by(ci))))
}

/// `2n · tr(XY)`, the closed form of the Killing form on `sl_n`.
pub fn killing_shortcut<S: Scalar>(x: &Matrix<S>, y: &Matrix<S>) -> S {
    let n = x.rows() as i64;
    x.mul(y).trace().scale(&Rational::from_integer(BigInt::from(2 * n)))
}
