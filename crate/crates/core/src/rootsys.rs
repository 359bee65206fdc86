//! Finite crystallographic root systems in simple-root coordinates, their Weyl
//! groups, and the cone data used by the convexity test.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::kernel;
use crate::matrix::Matrix;
use crate::scalar::{q, Rational};
use crate::tower::TowerScalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RootType {
    /// `A_n`, the root system of `SL_{n+1}`.
    A(usize),
    B2,
    G2,
}

impl FromStr for RootType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().replace('_', "");
        let upper = t.to_ascii_uppercase();
        match upper.as_str() {
            "B2" => return Ok(RootType::B2),
            "G2" => return Ok(RootType::G2),
            _ => {}
        }
        if let Some(rest) = upper.strip_prefix('A') {
            if let Ok(n) = rest.parse::<usize>() {
                if n >= 1 {
                    return Ok(RootType::A(n));
                }
            }
        }
        Err(Error::UnsupportedType(s.to_string()))
    }
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootType::A(n) => write!(f, "A{n}"),
            RootType::B2 => write!(f, "B2"),
            RootType::G2 => write!(f, "G2"),
        }
    }
}

/// Roots are integer coefficient vectors over the simple roots.
pub type Root = Vec<i64>;

#[derive(Debug, Clone, Serialize)]
pub struct RootSystem {
    pub kind: RootType,
    pub rank: usize,
    /// `gram[i][j] = ⟨δ_i, δ_j⟩`.
    pub gram: Vec<Vec<i64>>,
    pub simple_roots: Vec<Root>,
    pub positive_roots: Vec<Root>,
    pub roots: Vec<Root>,
}

fn unit(r: usize, i: usize) -> Root {
    let mut v = vec![0; r];
    v[i] = 1;
    v
}

fn gram_for(kind: RootType) -> Vec<Vec<i64>> {
    match kind {
        RootType::A(n) => (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match i.abs_diff(j) {
                        0 => 2,
                        1 => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect(),
        RootType::B2 => vec![vec![2, -1], vec![-1, 1]],
        RootType::G2 => vec![vec![2, -3], vec![-3, 6]],
    }
}

impl RootSystem {
    pub fn build(kind: RootType) -> Result<Self> {
        let gram = gram_for(kind);
        let rank = gram.len();
        let simple: Vec<Root> = (0..rank).map(|i| unit(rank, i)).collect();
        let mut rs = RootSystem {
            kind,
            rank,
            gram,
            simple_roots: simple.clone(),
            positive_roots: Vec::new(),
            roots: Vec::new(),
        };
        let mut seen: Vec<Root> = simple.clone();
        let mut queue: VecDeque<Root> = simple.into();
        while let Some(r) = queue.pop_front() {
            for d in 0..rank {
                let img = rs.reflect(&rs.simple_roots[d], &r);
                if !seen.contains(&img) {
                    seen.push(img.clone());
                    queue.push_back(img);
                }
            }
            if seen.len() > 1000 {
                return Err(Error::UnsupportedType(kind.to_string()));
            }
        }
        seen.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            hb.cmp(&ha).then_with(|| b.cmp(a))
        });
        rs.positive_roots = seen.iter().filter(|r| r.iter().all(|&c| c >= 0)).cloned().collect();
        rs.roots = seen;
        rs.verify_axioms()?;
        Ok(rs)
    }

    pub fn inner(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..self.rank {
            for j in 0..self.rank {
                s += a[i] * self.gram[i][j] * b[j];
            }
        }
        s
    }

    /// `2⟨β, α⟩ / ⟨α, α⟩`, an integer for roots.
    pub fn cartan_integer(&self, beta: &[i64], alpha: &[i64]) -> i64 {
        2 * self.inner(beta, alpha) / self.inner(alpha, alpha)
    }

    /// The reflection of `beta` in the hyperplane orthogonal to `alpha`.
    pub fn reflect(&self, alpha: &[i64], beta: &[i64]) -> Root {
        let c = self.cartan_integer(beta, alpha);
        beta.iter().zip(alpha).map(|(b, a)| b - c * a).collect()
    }

    fn verify_axioms(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::CertificationFailed(format!("{}: {m}", self.kind)));
        if self.roots.iter().any(|r| r.iter().all(|&c| c == 0)) {
            return fail("zero root");
        }
        if self.positive_roots.len() * 2 != self.roots.len() {
            return fail("roots are not split into positive and negative");
        }
        for a in &self.roots {
            let neg: Root = a.iter().map(|c| -c).collect();
            if !self.roots.contains(&neg) {
                return fail("not symmetric");
            }
            for b in &self.roots {
                if (2 * self.inner(b, a)) % self.inner(a, a) != 0 {
                    return fail("not crystallographic");
                }
                if !self.roots.contains(&self.reflect(a, b)) {
                    return fail("not reflection stable");
                }
            }
        }
        Ok(())
    }

    /// Checks crystallographic integrality for every pair of roots.
    pub fn is_crystallographic(&self) -> bool {
        self.roots.iter().all(|a| {
            self.roots
                .iter()
                .all(|b| (2 * self.inner(b, a)) % self.inner(a, a) == 0)
        })
    }

    /// Matrix (columns = images of simple roots) of the simple reflection `s_i`.
    fn simple_reflection_matrix(&self, i: usize) -> Vec<Vec<i64>> {
        let cols: Vec<Root> = (0..self.rank)
            .map(|j| self.reflect(&self.simple_roots[i], &self.simple_roots[j]))
            .collect();
        (0..self.rank)
            .map(|r| (0..self.rank).map(|c| cols[c][r]).collect())
            .collect()
    }

    pub fn weyl(&self) -> WeylGroup {
        let r = self.rank;
        let gens: Vec<Vec<Vec<i64>>> = (0..r).map(|i| self.simple_reflection_matrix(i)).collect();
        let id: Vec<Vec<i64>> = (0..r).map(|i| unit(r, i)).collect();
        let mut elements = vec![id.clone()];
        let mut words = vec![Vec::new()];
        let mut index: HashMap<Vec<Vec<i64>>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            for (g, gen) in gens.iter().enumerate() {
                let m = int_mat_mul(&elements[k], gen);
                if !index.contains_key(&m) {
                    let mut w = words[k].clone();
                    w.push(g);
                    index.insert(m.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(m);
                    words.push(w);
                }
            }
        }
        WeylGroup {
            elements,
            words,
            index,
        }
    }

    /// Primitive lattice vectors `γ_j` with `⟨γ_j, δ_i⟩ = 0` for `i ≠ j` and
    /// `⟨γ_j, δ_j⟩ > 0`, together with the coroot generators `x_i`.
    pub fn cone_data(&self) -> ConeData {
        let r = self.rank;
        let mut gamma = Vec::with_capacity(r);
        for j in 0..r {
            let v = if r == 1 {
                vec![1]
            } else {
                let rows: Vec<Vec<TowerScalar>> = (0..r)
                    .filter(|&i| i != j)
                    .map(|i| self.gram[i].iter().map(|&x| TowerScalar::from_int(x)).collect())
                    .collect();
                let m = Matrix::from_rows(rows).expect("gram rows");
                let ker = kernel(&m, &()).expect("exact rational kernel");
                let rat: Vec<Rational> = ker[0]
                    .iter()
                    .map(|x| x.as_rational().cloned().expect("rational kernel"))
                    .collect();
                primitive_integer(&rat)
            };
            let v = if self.inner(&v, &self.simple_roots[j]) < 0 {
                v.iter().map(|c| -c).collect()
            } else {
                v
            };
            gamma.push(v);
        }
        let x = (0..r)
            .map(|i| {
                let s = Rational::new(BigInt::from(2), BigInt::from(self.gram[i][i]));
                self.simple_roots[i].iter().map(|&c| q(c) * &s).collect()
            })
            .collect();
        ConeData {
            x,
            e: gamma.clone(),
            gamma,
        }
    }

    /// Coefficients of `η` over the `γ_ℓ`: `⟨η, δ_ℓ⟩ / ⟨γ_ℓ, δ_ℓ⟩`.
    pub fn gamma_expansion(&self, cone: &ConeData, eta: &[i64]) -> Vec<Rational> {
        (0..self.rank)
            .map(|l| {
                let d = &self.simple_roots[l];
                Rational::new(
                    BigInt::from(self.inner(eta, d)),
                    BigInt::from(self.inner(&cone.gamma[l], d)),
                )
            })
            .collect()
    }

    /// Sum of the positive roots.
    pub fn eta_plus(&self) -> Root {
        let mut s = vec![0; self.rank];
        for r in &self.positive_roots {
            for (a, b) in s.iter_mut().zip(r) {
                *a += b;
            }
        }
        s
    }

    pub fn eta_plus_expansion(&self) -> Vec<Rational> {
        let cone = self.cone_data();
        self.gamma_expansion(&cone, &self.eta_plus())
    }

    /// Planar (or general Euclidean) coordinates realizing the gram matrix,
    /// via a Cholesky factorization; for plotting.
    pub fn euclidean(&self, v: &[i64]) -> Vec<f64> {
        let l = cholesky(&self.gram);
        (0..self.rank)
            .map(|k| (0..self.rank).map(|i| v[i] as f64 * l[i][k]).collect::<Vec<_>>())
            .map(|row| row.iter().sum())
            .collect()
    }
}

fn cholesky(g: &[Vec<i64>]) -> Vec<Vec<f64>> {
    let n = g.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                l[i][j] = (g[i][i] as f64 - s).sqrt();
            } else {
                l[i][j] = (g[i][j] as f64 - s) / l[j][j];
            }
        }
    }
    l
}

/// Smallest integer multiple of a rational vector, up to sign.
fn primitive_integer(v: &[Rational]) -> Root {
    let l = v.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.iter()
        .map(|x| (x / &g).to_i64().expect("small lattice vector"))
        .collect()
}

fn int_mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

#[derive(Debug, Clone)]
pub struct ConeData {
    /// `x_i = 2δ_i / ⟨δ_i, δ_i⟩` in simple-root coordinates.
    pub x: Vec<Vec<Rational>>,
    /// Primitive normals `e_j` of the cone; with the gram matrix identifying
    /// both sides these have the same coordinates as `gamma`.
    pub e: Vec<Root>,
    pub gamma: Vec<Root>,
}

/// A Weyl group as integer matrices acting on simple-root coordinates.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    pub elements: Vec<Vec<Vec<i64>>>,
    /// A reduced word in the simple reflections for each element.
    pub words: Vec<Vec<usize>>,
    index: HashMap<Vec<Vec<i64>>, usize>,
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, m: &[Vec<i64>]) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn compose(&self, a: usize, b: usize) -> usize {
        let m = int_mat_mul(&self.elements[a], &self.elements[b]);
        self.index[&m]
    }

    pub fn multiplication_table(&self) -> Vec<Vec<usize>> {
        (0..self.order())
            .map(|a| (0..self.order()).map(|b| self.compose(a, b)).collect())
            .collect()
    }

    pub fn apply(&self, w: usize, v: &[i64]) -> Root {
        let m = &self.elements[w];
        (0..v.len())
            .map(|i| (0..v.len()).map(|j| m[i][j] * v[j]).sum())
            .collect()
    }
}

/// A bijection `f` with `f(a·b) = f(a)·f(b)` between two multiplication
/// tables (index 0 must be the identity in both), if one exists.
pub fn find_isomorphism(t1: &[Vec<usize>], t2: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = t1.len();
    if t2.len() != n {
        return None;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    map[0] = 0;
    used[0] = true;
    fn consistent(t1: &[Vec<usize>], t2: &[Vec<usize>], map: &[usize]) -> bool {
        let n = t1.len();
        for a in 0..n {
            for b in 0..n {
                let (fa, fb, fab) = (map[a], map[b], map[t1[a][b]]);
                if fa != usize::MAX && fb != usize::MAX && fab != usize::MAX && t2[fa][fb] != fab {
                    return false;
                }
            }
        }
        true
    }
    fn go(k: usize, t1: &[Vec<usize>], t2: &[Vec<usize>], map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let n = t1.len();
        if k == n {
            return true;
        }
        for cand in 0..n {
            if used[cand] {
                continue;
            }
            map[k] = cand;
            used[cand] = true;
            if consistent(t1, t2, map) && go(k + 1, t1, t2, map, used) {
                return true;
            }
            used[cand] = false;
            map[k] = usize::MAX;
        }
        false
    }
    if go(1, t1, t2, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} roots)", self.kind, self.roots.len())
    }
}

/// Writes `Σ c_i δ_i` compactly, e.g. `2d1 + d2`.
pub fn format_root(v: &[i64]) -> String {
    let mut s = String::new();
    for (i, &c) in v.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let sign = if c < 0 { "-" } else { "+" };
        if s.is_empty() {
            if c < 0 {
                s.push('-');
            }
        } else {
            s.push_str(&format!(" {sign} "));
        }
        if c.abs() != 1 {
            s.push_str(&c.abs().to_string());
        }
        s.push_str(&format!("d{}", i + 1));
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

pub fn all_positive(coeffs: &[Rational]) -> bool {
    coeffs.iter().all(Signed::is_positive)
}
