mod common;

use common::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use semialg::decomp::weyl_representative;
use semialg::kostant::{hull_oracle, kostant_chars, kostant_member, orbit_sample_check, ChamberPoint};
use semialg::{q, qf, Matrix, PuiseuxScalar, Rational, TowerScalar, Truncation};

fn point(d: Vec<Rational>) -> ChamberPoint<TowerScalar> {
    ChamberPoint::from_diagonal(d.into_iter().map(TowerScalar::from_rational).collect()).unwrap()
}

/// A random rational chamber point of size `n`.
fn chamber(rng: &mut ChaCha8Rng, n: usize, num: i64, den: i64) -> ChamberPoint<TowerScalar> {
    let mut d: Vec<Rational> = (0..n - 1).map(|_| pos_rat(rng, num, den)).collect();
    let prod = d.iter().fold(q(1), |acc, x| acc * x);
    d.push(prod.recip());
    d.sort_by(|a, b| b.cmp(a));
    point(d)
}

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_perms(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

#[test]
fn characters_by_rank() {
    assert_eq!(kostant_chars(2).unwrap(), vec![vec![1, 0]]);
    assert_eq!(kostant_chars(3).unwrap(), vec![vec![1, 0, 0], vec![1, 1, 0]]);
}

#[test]
fn oracle_agrees_with_characters() {
    let mut r = ChaCha8Rng::seed_from_u64(41);
    for n in [2, 3] {
        let (mut agreed, mut excluded) = (0, 0);
        for _ in 0..100 {
            let b = chamber(&mut r, n, 12, 2);
            let a = chamber(&mut r, n, 12, 3);
            let exact = kostant_member(&a, &b).unwrap();
            match hull_oracle(&a, &b) {
                Ok(h) => {
                    assert_eq!(h, exact, "a = {:?}, b = {:?}", a.diagonal(), b.diagonal());
                    agreed += 1;
                }
                Err(e) => {
                    assert!(e.is_indeterminate(), "{e}");
                    excluded += 1;
                }
            }
        }
        assert!(excluded < 10 && agreed + excluded == 100, "n = {n}: {excluded} excluded");
    }
}

#[test]
fn membership_is_invariant_under_signed_permutations() {
    let mut r = ChaCha8Rng::seed_from_u64(42);
    let perms = all_perms(3);
    for _ in 0..60 {
        let b = chamber(&mut r, 3, 9, 2);
        let a = chamber(&mut r, 3, 9, 3);
        let before = kostant_member(&a, &b).unwrap();
        let w: TM = weyl_representative(perms.choose(&mut r).unwrap());
        let conj = w.mul(b.matrix()).mul(&w.transpose());
        let rep = ChamberPoint::project(&conj).unwrap();
        assert_eq!(rep, b);
        assert_eq!(kostant_member(&a, &rep).unwrap(), before);
    }
}

#[test]
fn membership_is_transitive() {
    let mut r = ChaCha8Rng::seed_from_u64(43);
    let mut chains = 0;
    for _ in 0..400 {
        let [a, b, c] = [0, 1, 2].map(|_| chamber(&mut r, 3, 6, 2));
        if kostant_member(&a, &b).unwrap() && kostant_member(&b, &c).unwrap() {
            chains += 1;
            assert!(kostant_member(&a, &c).unwrap());
        }
        assert!(kostant_member(&a, &a).unwrap());
    }
    assert!(chains > 10, "only {chains} chains sampled");
}

#[test]
fn outside_points_are_rejected_by_both_oracles() {
    let b = point(vec![q(4), q(2), qf(1, 8)]);
    let a = point(vec![q(5), qf(1, 2), qf(2, 5)]);
    assert!(!kostant_member(&a, &b).unwrap());
    assert!(!hull_oracle(&a, &b).unwrap());
    let id = point(vec![q(1), q(1), q(1)]);
    assert!(kostant_member(&id, &b).unwrap());
    assert!(hull_oracle(&id, &b).unwrap());
}

#[test]
fn orbit_samples_never_violate() {
    let mut r = ChaCha8Rng::seed_from_u64(44);
    for n in [2, 3] {
        let b = chamber(&mut r, n, 8, 2);
        let rep = orbit_sample_check(&b, 200, &mut r, &()).unwrap();
        assert_eq!((rep.samples, rep.violations), (200, 0));
        assert!(rep.min_log_slack > -1e-9);
    }
}

#[test]
fn puiseux_membership_and_orbit() {
    let prec = Truncation::default();
    let x = |e: Rational| PuiseuxScalar::monomial(TowerScalar::one(), e);
    let b = ChamberPoint::from_diagonal(vec![x(q(1)), x(q(-1))]).unwrap();
    let a = ChamberPoint::from_diagonal(vec![x(qf(1, 2)), x(qf(-1, 2))]).unwrap();
    assert!(kostant_member(&a, &b).unwrap());
    assert!(!kostant_member(&b, &a).unwrap());
    let mut r = ChaCha8Rng::seed_from_u64(45);
    let rep = orbit_sample_check(&b, 20, &mut r, &prec).unwrap();
    assert_eq!(rep.violations, 0);
    let two: PM = Matrix::diag(&[x(q(2)), x(q(-2))]);
    assert!(kostant_member(&b, &ChamberPoint::new(two).unwrap()).unwrap());
}
