mod common;

use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use semialg::decomp::{
    a_component, bruhat, cartan_kak, iwasawa_uak, kak_uniqueness_check, rank_profile, weyl_representative,
    KakResult,
};
use semialg::linalg::det;
use semialg::rootsys::{RootSystem, RootType};
use semialg::slgroup::{
    chi, killing_form, killing_shortcut, killing_theta, member_a, member_k, member_m, member_n, member_u,
    root_space_decompose, sl_basis, RootIndex,
};
use semialg::decomp::rational_rotation;
use semialg::{q, qf, Error, Matrix, PuiseuxScalar, Sign, TowerScalar, Truncation};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn traceless(rng: &mut ChaCha8Rng, n: usize) -> TM {
    let mut x: TM = random_dense(rng, n);
    let t = x.trace();
    let last = x.get(n - 1, n - 1).sub(&t);
    x.set(n - 1, n - 1, last);
    x
}

#[test]
fn chi_is_multiplicative() {
    let mut r = rng(21);
    for n in [2, 3, 4] {
        for _ in 0..30 {
            let a: TM = random_torus(&mut r, n);
            let b: TM = random_torus(&mut r, n);
            for alpha in RootIndex::positive(n) {
                for root in [alpha, alpha.negate()] {
                    let lhs = chi(root, &a.mul(&b), &()).unwrap();
                    let rhs = chi(root, &a, &()).unwrap().mul(&chi(root, &b, &()).unwrap());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}

#[test]
fn torus_normalizes_unipotent() {
    let mut r = rng(22);
    for n in [2, 3, 4] {
        for _ in 0..50 {
            let a: TM = random_torus(&mut r, n);
            let u: TM = random_unipotent(&mut r, n);
            let a_inv = Matrix::diag(&a.diagonal().iter().map(|x| x.invert().unwrap()).collect::<Vec<_>>());
            let c = a.mul(&u).mul(&a_inv);
            assert!(member_u(&c).unwrap());
            // entrywise: (a u a⁻¹)_ij = χ_{e_i - e_j}(a) u_ij
            for alpha in RootIndex::positive(n) {
                let expect = chi(alpha, &a, &()).unwrap().mul(u.get(alpha.i, alpha.j));
                assert_eq!(c.get(alpha.i, alpha.j), &expect);
            }
        }
    }
}

/// Sylvester's criterion on the Gram matrix of `B_θ` over the basis of `sl_3`.
#[test]
fn killing_theta_is_positive_definite_on_sl3() {
    let basis = sl_basis::<TowerScalar>(3);
    let m = basis.len();
    let gram: TM = Matrix::from_rows(
        basis
            .iter()
            .map(|x| basis.iter().map(|y| killing_theta(x, y)).collect())
            .collect(),
    )
    .unwrap();
    assert_eq!(gram, gram.transpose());
    for k in 1..=m {
        let minor: TM = Matrix::from_rows(
            (0..k).map(|i| (0..k).map(|j| gram.get(i, j).clone()).collect()).collect(),
        )
        .unwrap();
        assert_eq!(det(&minor, &()).unwrap().sign(), Sign::Positive, "minor {k}");
    }
}

#[test]
fn root_space_bracket_rule() {
    let mut r = rng(23);
    let n = 4;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k {
                    continue;
                }
                let x = Matrix::unit(n, i, j).scale(&rat(&mut r, 5, 3));
                let y = Matrix::unit(n, j, k).scale(&rat(&mut r, 5, 3));
                let z: TM = x.bracket(&y);
                let dec = root_space_decompose(&z).unwrap();
                assert!(dec.cartan.vanishes());
                assert!(dec.roots.iter().all(|(root, _)| *root == RootIndex::new(i, k).unwrap()));
                assert_eq!(dec.reconstruct(), z);
            }
        }
    }
}

#[test]
fn killing_form_matches_trace_shortcut() {
    let mut r = rng(24);
    for n in [2, 3] {
        for _ in 0..25 {
            let x = traceless(&mut r, n);
            let y = traceless(&mut r, n);
            assert_eq!(killing_form(&x, &y), killing_shortcut(&x, &y));
            assert_eq!(killing_shortcut(&x, &y), x.mul(&y).trace().scale(&q(2 * n as i64)));
        }
    }
}

#[test]
fn root_systems_are_reflection_stable() {
    for kind in [RootType::A(1), RootType::A(2), RootType::A(3), RootType::B2, RootType::G2] {
        let rs = RootSystem::build(kind).unwrap();
        assert!(rs.is_crystallographic());
        for a in &rs.roots {
            for b in &rs.roots {
                assert!(rs.roots.contains(&rs.reflect(a, b)), "{kind}");
            }
        }
        let expect = match kind {
            RootType::A(1) => 2,
            RootType::A(2) => 6,
            RootType::A(3) => 24,
            RootType::B2 => 8,
            RootType::G2 => 12,
            RootType::A(_) => unreachable!(),
        };
        assert_eq!(rs.weyl().order(), expect, "{kind}");
    }
}

#[test]
fn a_component_of_a_times_k() {
    let mut r = rng(25);
    for n in [2, 3] {
        for _ in 0..40 {
            let a: TM = random_torus(&mut r, n);
            let k: TM = random_rotation(&mut r, n);
            assert!(member_k(&k, &()).unwrap());
            assert_eq!(a_component(&a.mul(&k), &()).unwrap(), a);
        }
    }
}

#[test]
fn uak_reconstructs() {
    let mut r = rng(26);
    for _ in 0..100 {
        let g: TM = random_sl(&mut r, 3, 20);
        let d = iwasawa_uak(&g, &()).unwrap();
        assert_eq!(d.u.mul(&d.a).mul(&d.k), g);
        assert!(member_u(&d.u).unwrap() && member_a(&d.a).unwrap() && member_k(&d.k, &()).unwrap());
    }
}

/// A second KAK factorization obtained by moving a Weyl element through
/// `a` is related to the first by an element of `N`.
#[test]
fn kak_is_unique_up_to_weyl() {
    let mut r = rng(27);
    for _ in 0..40 {
        let g: TM = random_sl(&mut r, 2, 20);
        let Ok(first) = cartan_kak(&g, &()) else { continue };
        let w: TM = weyl_representative(&[1, 0]);
        let w_inv = w.transpose();
        let second = KakResult {
            k1: first.k1.mul(&w_inv),
            a: w.mul(&first.a).mul(&w_inv),
            k2: w.mul(&first.k2),
        };
        let found = kak_uniqueness_check(&g, &first, &second).unwrap();
        assert!(member_n(&found).unwrap());
        assert_eq!(found.mul(&first.a).mul(&found.transpose()), second.a);
    }
    let g: TM = Matrix::diag(&[TowerScalar::from_int(2), TowerScalar::from_rational(qf(1, 2))]);
    let ok = cartan_kak(&g, &()).unwrap();
    let mut other = ok.clone();
    other.a = Matrix::diag(&[TowerScalar::from_int(3), TowerScalar::from_rational(qf(1, 3))]);
    assert!(matches!(kak_uniqueness_check(&g, &ok, &other), Err(Error::CertificationFailed(_))));
}

#[test]
fn bruhat_of_random_sl3_reconstructs() {
    let mut r = rng(28);
    for _ in 0..100 {
        let g: TM = random_sl(&mut r, 3, 20);
        let d = bruhat(&g, &()).unwrap();
        assert_eq!(d.b1.mul(&d.w).mul(&d.b2), g);
        assert!(member_n(&d.w).unwrap());
        assert_eq!(rank_profile(&g, &()).unwrap(), rank_profile(&d.w, &()).unwrap());
    }
}

#[test]
fn sign_diagonals_form_m() {
    for signs in [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]] {
        let m: TM = Matrix::diag(&signs.map(TowerScalar::from_int));
        assert!(member_m(&m).unwrap());
        assert!(member_n(&m).unwrap());
        assert!(!member_a(&m).unwrap() || signs == [1, 1, 1]);
    }
}

/// Closed-form singular values of a real 2×2 matrix.
fn svd2(m: [[f64; 2]; 2]) -> (f64, f64) {
    let s = m.iter().flatten().map(|x| x * x).sum::<f64>();
    let d = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs();
    let r = (s * s - 4.0 * d * d).max(0.0).sqrt();
    let big = ((s + r) / 2.0).sqrt();
    (big, d / big)
}

/// Puiseux KAK factors evaluated at large `X` match a floating-point SVD.
#[test]
fn puiseux_kak_specializes_to_float_svd() {
    let prec = Truncation::default();
    let mut r = rng(29);
    for p in [qf(1, 2), q(1), qf(3, 2), qf(1, 3)] {
        for _ in 0..5 {
            let c = pos_rat(&mut r, 5, 3);
            let d = Matrix::diag(&[
                PuiseuxScalar::monomial(TowerScalar::from_rational(c.clone()), p.clone()),
                PuiseuxScalar::monomial(TowerScalar::from_rational(c.recip()), -p.clone()),
            ]);
            let r1: PM = rational_rotation(2, 0, 1, &rat(&mut r, 5, 5));
            let r2: PM = rational_rotation(2, 0, 1, &rat(&mut r, 5, 5));
            let g = r1.mul(&d).mul(&r2);
            let kak = cartan_kak(&g, &prec).unwrap();
            for t in [10.0f64, 100.0, 1000.0] {
                let at = |m: &PM| [0, 1].map(|i| [0, 1].map(|j| m.get(i, j).to_f64_at(t)));
                let (s1, s2) = svd2(at(&g));
                let a = at(&kak.a);
                assert!((a[0][0] - s1).abs() <= 1e-6 * s1, "p = {p}, T = {t}: {} vs {s1}", a[0][0]);
                assert!((a[1][1] - s2).abs() <= 1e-6 * s1, "p = {p}, T = {t}: {} vs {s2}", a[1][1]);
                let (k1, k2) = (at(&kak.k1), at(&kak.k2));
                for i in 0..2 {
                    for j in 0..2 {
                        let rebuilt = k1[i][0] * a[0][0] * k2[0][j] + k1[i][1] * a[1][1] * k2[1][j];
                        assert!((rebuilt - g.get(i, j).to_f64_at(t)).abs() <= 1e-6 * s1);
                    }
                }
            }
        }
    }
}
