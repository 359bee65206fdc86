//! Seeded generators shared by the integration tests.

#![allow(dead_code)]

use num_bigint::BigInt;
use rand::Rng;
use semialg::decomp::rational_rotation;
use semialg::linalg::det;
use semialg::{Matrix, PuiseuxScalar, Rational, Scalar, TowerScalar};

pub type TM = Matrix<TowerScalar>;
pub type PM = Matrix<PuiseuxScalar>;

pub fn rat(rng: &mut impl Rng, num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(rng.gen_range(-num..=num)), BigInt::from(rng.gen_range(1..=den)))
}

pub fn pos_rat(rng: &mut impl Rng, num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(rng.gen_range(1..=num)), BigInt::from(rng.gen_range(1..=den)))
}

fn bounded(r: &Rational, bound: i64) -> bool {
    let b = BigInt::from(bound);
    r.numer().magnitude() <= b.magnitude() && r.denom() <= &b
}

pub fn rational_matrix<S: Scalar>(rows: &[Vec<Rational>]) -> Matrix<S> {
    Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().cloned().map(S::from_rational).collect())
            .collect(),
    )
    .unwrap()
}

/// A random element of `SL_n(Q)` with numerators and denominators at most
/// `bound`: all entries but the last are drawn, the last is solved for
/// `det = 1`, and out-of-range draws are rejected.
pub fn random_sl_rational(rng: &mut impl Rng, n: usize, bound: i64) -> Vec<Vec<Rational>> {
    loop {
        let mut rows: Vec<Vec<Rational>> = (0..n)
            .map(|_| (0..n).map(|_| rat(rng, bound.min(6), bound.min(4))).collect())
            .collect();
        rows[n - 1][n - 1] = Rational::from_integer(0.into());
        let m0: TM = rational_matrix(&rows);
        let base = det(&m0, &()).unwrap();
        rows[n - 1][n - 1] = Rational::from_integer(1.into());
        let m1: TM = rational_matrix(&rows);
        let slope = det(&m1, &()).unwrap().sub_ref(&base);
        let (Some(base), Some(slope)) = (base.as_rational().cloned(), slope.as_rational().cloned()) else {
            continue;
        };
        if slope == Rational::from_integer(0.into()) {
            continue;
        }
        let x = (Rational::from_integer(1.into()) - base) / slope;
        if !bounded(&x, bound) {
            continue;
        }
        rows[n - 1][n - 1] = x;
        return rows;
    }
}

pub fn random_sl<S: Scalar>(rng: &mut impl Rng, n: usize, bound: i64) -> Matrix<S> {
    rational_matrix(&random_sl_rational(rng, n, bound))
}

/// Upper triangular with determinant one and rational entries.
pub fn random_borel<S: Scalar>(rng: &mut impl Rng, n: usize) -> Matrix<S> {
    let mut m = Matrix::zeros(n, n);
    let mut prod = Rational::from_integer(1.into());
    for i in 0..n {
        for j in i + 1..n {
            m.set(i, j, S::from_rational(rat(rng, 5, 3)));
        }
        if i + 1 < n {
            let mut d = rat(rng, 4, 3);
            while d == Rational::from_integer(0.into()) {
                d = rat(rng, 4, 3);
            }
            prod *= &d;
            m.set(i, i, S::from_rational(d));
        }
    }
    m.set(n - 1, n - 1, S::from_rational(prod.recip()));
    m
}

/// Unipotent upper triangular with rational entries.
pub fn random_unipotent<S: Scalar>(rng: &mut impl Rng, n: usize) -> Matrix<S> {
    let mut m = Matrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            m.set(i, j, S::from_rational(rat(rng, 5, 3)));
        }
    }
    m
}

pub fn random_strictly_upper<S: Scalar>(rng: &mut impl Rng, n: usize) -> Matrix<S> {
    random_unipotent::<S>(rng, n).sub(&Matrix::identity(n))
}

/// Positive diagonal with determinant one.
pub fn random_torus<S: Scalar>(rng: &mut impl Rng, n: usize) -> Matrix<S> {
    let mut d = Vec::with_capacity(n);
    let mut prod = Rational::from_integer(1.into());
    for _ in 0..n - 1 {
        let x = pos_rat(rng, 6, 4);
        prod *= &x;
        d.push(S::from_rational(x));
    }
    d.push(S::from_rational(prod.recip()));
    Matrix::diag(&d)
}

/// Product of rational rotations, one per coordinate plane.
pub fn random_rotation<S: Scalar>(rng: &mut impl Rng, n: usize) -> Matrix<S> {
    let mut k = Matrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            k = k.mul(&rational_rotation(n, i, j, &rat(rng, 5, 5)));
        }
    }
    k
}

/// Dense random matrix with small integer entries.
pub fn random_dense<S: Scalar>(rng: &mut impl Rng, n: usize) -> Matrix<S> {
    let rows: Vec<Vec<S>> = (0..n)
        .map(|_| (0..n).map(|_| S::from_i64(rng.gen_range(-4..=4))).collect())
        .collect();
    Matrix::from_rows(rows).unwrap()
}

pub fn to_puiseux(m: &TM) -> PM {
    m.map(|x| PuiseuxScalar::from_tower(x.clone()))
}
