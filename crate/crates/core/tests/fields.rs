use proptest::prelude::*;
use semialg::tower::sqrt_of;
use semialg::{q, qf, PuiseuxScalar, Rational, Scalar, Sign, Tail, TowerScalar, Truncation};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| qf(n, d))
}

/// `r0 + r1 √2 + r2 √3 + r3 √(2 + √2)`, depth at most 3.
fn tower_element() -> impl Strategy<Value = TowerScalar> {
    prop::array::uniform4(small_rational()).prop_map(|r| {
        let nested = TowerScalar::from_int(2).add(&sqrt_of(2)).sqrt_positive().unwrap();
        TowerScalar::from_rational(r[0].clone())
            .add(&sqrt_of(2).scale(&r[1]))
            .add(&sqrt_of(3).scale(&r[2]))
            .add(&nested.scale(&r[3]))
    })
}

fn exact_series() -> impl Strategy<Value = PuiseuxScalar> {
    prop::collection::vec((-6i64..=6, small_rational()), 1..5).prop_map(|terms| {
        let pairs = terms
            .into_iter()
            .map(|(e, c)| (qf(e, 2), TowerScalar::from_rational(c)))
            .collect();
        PuiseuxScalar::from_terms(pairs, Tail::Exact)
    })
}

fn sign_product(a: Sign, b: Sign) -> Sign {
    match a.to_i8() * b.to_i8() {
        1 => Sign::Positive,
        -1 => Sign::Negative,
        _ => Sign::Zero,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tower_field_axioms(a in tower_element(), b in tower_element(), c in tower_element()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.add(&a.neg()).is_zero());
        if !a.is_zero() {
            prop_assert_eq!(a.mul(&a.invert().unwrap()), TowerScalar::one());
        }
    }

    #[test]
    fn tower_order_compatibility(a in tower_element(), b in tower_element()) {
        prop_assert_eq!(a.mul(&b).sign(), sign_product(a.sign(), b.sign()));
        if a.sign() == Sign::Positive && b.sign() == Sign::Positive {
            prop_assert_eq!(a.add(&b).sign(), Sign::Positive);
        }
    }

    #[test]
    fn tower_approx_is_nested_and_sound(n in 2i64..50, k in 1u32..4) {
        let x = sqrt_of(n);
        let mut prev: Option<semialg::interval::Interval> = None;
        for bits in [8u32, 24, 64, 128].iter().map(|b| b * k) {
            let iv = x.approx(&Rational::new(1.into(), num_bigint::BigInt::from(1) << bits));
            prop_assert!(&iv.lo * &iv.lo <= q(n) && q(n) <= &iv.hi * &iv.hi);
            if let Some(p) = &prev {
                prop_assert!(p.lo <= iv.hi && iv.lo <= p.hi);
            }
            prev = Some(iv);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tower_sqrt_squares_back(a in tower_element(), c in 1i64..20) {
        let x = a.mul(&a).add(&TowerScalar::from_rational(qf(c, 7)));
        let r = x.sqrt_positive().unwrap();
        prop_assert_eq!(r.mul(&r), x);
        prop_assert_eq!(r.sign(), Sign::Positive);
    }

    #[test]
    fn puiseux_round_trips(a in exact_series()) {
        let prec = Truncation::default();
        if !a.vanishes() {
            let inv = a.inv(&prec).unwrap();
            prop_assert!(a.mul(&inv).agrees(&PuiseuxScalar::from_int(1)));
        }
        let pos = if a.sign().unwrap() == Sign::Negative { a.neg() } else { a.clone() };
        if !pos.vanishes() {
            let r = pos.sqrt(&prec).unwrap();
            prop_assert!(r.mul(&r).agrees(&pos));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn puiseux_ordered_field_laws(a in exact_series(), b in exact_series(), c in exact_series()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b).sign().unwrap(), sign_product(a.sign().unwrap(), b.sign().unwrap()));
    }

    #[test]
    fn puiseux_leading_term_is_multiplicative(a in exact_series(), b in exact_series()) {
        let ab = a.mul(&b);
        match (a.lead(), b.lead()) {
            (Some((ea, ca)), Some((eb, cb))) => {
                let (e, c) = ab.lead().unwrap();
                prop_assert_eq!(e, &(ea + eb));
                prop_assert_eq!(c, &ca.mul(cb));
            }
            _ => prop_assert!(ab.vanishes()),
        }
    }

    #[test]
    fn positive_series_specialize_positive(
        terms in prop::collection::btree_map(-6i64..=6, (1i64..=4, 1i64..=2, any::<bool>()), 1..5)
    ) {
        let pairs = terms
            .into_iter()
            .map(|(e, (n, d, neg))| (qf(e, 2), TowerScalar::from_rational(qf(if neg { -n } else { n }, d))))
            .collect();
        let a = PuiseuxScalar::from_terms(pairs, Tail::Exact);
        let a = if a.sign().unwrap() == Sign::Negative { a.neg() } else { a };
        let signs: Vec<Sign> = [10, 100, 1000]
            .iter()
            .map(|&t| a.specialize(&q(t)).unwrap().sign())
            .collect();
        // the leading coefficient is at least 1/2 and the others at most 4
        // with exponent steps of 1/2, so the leading term wins at T = 1000
        prop_assert!(signs.contains(&Sign::Positive));
        prop_assert_eq!(signs[2], Sign::Positive);
    }
}

#[test]
fn specialization_matches_floating_point() {
    let a = PuiseuxScalar::from_terms(
        vec![
            (qf(3, 2), TowerScalar::from_int(2)),
            (q(0), TowerScalar::from_int(-5)),
            (q(-1), sqrt_of(2)),
        ],
        Tail::Exact,
    );
    for t in [10.0f64, 100.0, 1000.0] {
        let expect = 2.0 * t.powf(1.5) - 5.0 + 2f64.sqrt() / t;
        let got = a.specialize(&q(t as i64)).unwrap().to_f64();
        assert!((got - expect).abs() < 1e-9 * expect.abs());
        assert!((a.to_f64_at(t) - expect).abs() < 1e-9 * expect.abs());
    }
}
