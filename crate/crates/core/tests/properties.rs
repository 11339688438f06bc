use proptest::prelude::*;
use surfval::explorer::{canonical_key, canonicalize};
use surfval::{
    asymptotic_lct, asymptotic_multiplicities, classify, fingen_degree, is_negative_definite,
    lct_ideal, mld_at_origin, rees_valuations, valuation_ideal, BaseGerm, Cluster, CompleteIdeal,
    DynkinType, ExcDivisor, LctValue, Mld, PairSpec, Rational, Verdict,
};

fn base_strategy() -> impl Strategy<Value = BaseGerm> {
    prop_oneof![
        4 => Just(BaseGerm::Smooth),
        1 => (1u32..4).prop_map(|n| BaseGerm::DuVal(DynkinType::A(n))),
        1 => Just(BaseGerm::DuVal(DynkinType::D(4))),
        1 => Just(BaseGerm::DuVal(DynkinType::E6)),
    ]
}

/// Grows a cluster by picking among the legal next steps.
fn cluster_strategy(max_steps: usize) -> impl Strategy<Value = Cluster> {
    (
        base_strategy(),
        prop::collection::vec(any::<prop::sample::Index>(), 1..=max_steps),
    )
        .prop_map(|(base, picks)| {
            let mut c = Cluster::base(base).unwrap();
            for pick in picks {
                let steps = c.possible_steps();
                c = c.extend(steps[pick.index(steps.len())]).unwrap();
            }
            c
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn intersection_form_negative_definite(c in cluster_strategy(7)) {
        prop_assert!(is_negative_definite(&c.intersection_matrix()));
        prop_assert!(c.curves().all(|i| c.self_intersection(i) <= -1));
    }

    #[test]
    fn json_round_trip(c in cluster_strategy(6)) {
        let back = Cluster::from_json(&c.to_json()).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn canonical_form_preserves_invariants(c in cluster_strategy(6)) {
        let canon = canonicalize(&c);
        prop_assert_eq!(canonical_key(&canon), canonical_key(&c));
        let mut a = c.canonical_coefficients().to_vec();
        let mut b = canon.canonical_coefficients().to_vec();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
        let mut la: Vec<_> = c.curves().map(|e| asymptotic_lct(&c, e).unwrap().value.to_string()).collect();
        let mut lb: Vec<_> = canon.curves().map(|e| asymptotic_lct(&canon, e).unwrap().value.to_string()).collect();
        la.sort();
        lb.sort();
        prop_assert_eq!(la, lb);
    }

    #[test]
    fn dstar_and_generator(c in cluster_strategy(6), pick in any::<prop::sample::Index>()) {
        let e = pick.index(c.num_curves());
        let x = asymptotic_multiplicities(&c, e).unwrap();
        prop_assert_eq!(&x[e], &Rational::one());
        prop_assert!(x.iter().all(Rational::is_positive));
        let m0 = fingen_degree(&c, e).unwrap();
        prop_assert_eq!(m0, x.denominator_lcm().to_string().parse::<u64>().unwrap());
        let d = valuation_ideal(&c, e, m0).unwrap();
        prop_assert_eq!(d.coeffs(), &x.scale(&Rational::from_int(m0 as i64)));
        prop_assert_eq!(rees_valuations(&c, &d).unwrap(), vec![e]);
        let report = asymptotic_lct(&c, e).unwrap();
        let LctValue::Finite(v) = report.value else { panic!("finite") };
        prop_assert!(v <= Rational::from_int(c.k(e) + 1));
    }

    #[test]
    fn valuation_ideals_grow(c in cluster_strategy(5), pick in any::<prop::sample::Index>(), m in 1u64..20) {
        let e = pick.index(c.num_curves());
        let a = valuation_ideal(&c, e, m).unwrap();
        let b = valuation_ideal(&c, e, m + 1).unwrap();
        prop_assert!(a.coeffs().le(b.coeffs()));
        prop_assert!(a.coeffs()[e] >= Rational::from_int(m as i64));
    }

    #[test]
    fn classification_on_smooth_bases_is_decided(c in cluster_strategy(6), pick in any::<prop::sample::Index>()) {
        prop_assume!(c.base_germ() == BaseGerm::Smooth);
        let e = pick.index(c.num_curves());
        let cl = classify(&c, e).unwrap();
        prop_assert_ne!(cl.verdict, Verdict::Indeterminate);
        prop_assert_eq!(cl.gap.is_zero(), cl.verdict == Verdict::ComputesLct);
    }

    #[test]
    fn lct_scales_inversely(c in cluster_strategy(5), coeffs in prop::collection::vec(0i64..4, 8), s in 1i64..5) {
        let n = c.num_curves();
        let z = ExcDivisor::from_ints(coeffs.into_iter().cycle().take(n)).unwrap();
        let a = surfval::unload(&c, &z).unwrap();
        let scaled = a.scale(&Rational::from_int(s));
        let la = lct_ideal(&c, &CompleteIdeal::new(&c, a).unwrap()).value;
        let ls = lct_ideal(&c, &CompleteIdeal::new(&c, scaled).unwrap()).value;
        match (la, ls) {
            (LctValue::Finite(x), LctValue::Finite(y)) => prop_assert_eq!(x / Rational::from_int(s), y),
            (LctValue::Infinite, LctValue::Infinite) => {}
            other => prop_assert!(false, "mismatch {:?}", other),
        }
    }

    #[test]
    fn mld_at_lct_is_zero(c in cluster_strategy(5), coeffs in prop::collection::vec(0i64..4, 8)) {
        let n = c.num_curves();
        let z = ExcDivisor::from_ints(coeffs.into_iter().cycle().take(n)).unwrap();
        let a = CompleteIdeal::new(&c, surfval::unload(&c, &z).unwrap()).unwrap();
        prop_assume!(!a.is_trivial());
        let lct = lct_ideal(&c, &a);
        let lambda = lct.value.finite().unwrap().clone();
        let p = PairSpec::new(a, lambda.clone()).unwrap();
        prop_assert_eq!(mld_at_origin(&c, &p).unwrap(), Mld::Finite(Rational::zero()));
        let past = PairSpec::new(p.ideal.clone(), lambda + Rational::new(1, 7)).unwrap();
        prop_assert_eq!(mld_at_origin(&c, &past).unwrap(), Mld::NegInfinity);
    }
}
