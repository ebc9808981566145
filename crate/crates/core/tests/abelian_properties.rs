use hausdorff_core::hausdorff::{
    abelian_index_log, abelian_trace, chain_rule_check, quotient_formula_check, realize_dimension,
    splice, CoordinateSubgroupSpec, ExponentSet,
};
use hausdorff_core::trace::Rational;
use proptest::prelude::*;

fn exponent_set() -> impl Strategy<Value = ExponentSet> {
    (
        prop::collection::vec(any::<bool>(), 0..6),
        prop::collection::vec(any::<bool>(), 1..7),
    )
        .prop_map(|(prefix, period)| ExponentSet::new(prefix, period).unwrap())
}

fn spec_pair() -> impl Strategy<Value = (CoordinateSubgroupSpec, CoordinateSubgroupSpec)> {
    (1usize..=3).prop_flat_map(|d| {
        (
            prop::collection::vec(exponent_set(), d),
            prop::collection::vec(exponent_set(), d),
        )
            .prop_map(|(big, mask)| {
                // small = big ∩ mask, as an explicit periodic set
                let small = big
                    .iter()
                    .zip(&mask)
                    .map(|(b, m)| {
                        let start = b.from().max(m.from());
                        let len = b.period().len() * m.period().len();
                        let mut bits: Vec<bool> =
                            (0..start + len).map(|n| b.contains(n) && m.contains(n)).collect();
                        let period = bits.split_off(start);
                        ExponentSet::new(bits, period).unwrap()
                    })
                    .collect();
                (
                    CoordinateSubgroupSpec::new(3, small).unwrap(),
                    CoordinateSubgroupSpec::new(3, big).unwrap(),
                )
            })
    })
}

fn abs(r: Rational) -> Rational {
    if r < Rational::from_integer(0) { -r } else { r }
}

proptest! {
    #[test]
    fn traces_converge_to_the_density((small, big) in spec_pair()) {
        let d = big.dim() as i64;
        let slack: usize = big.sets().iter().map(|s| s.from() + s.period().len()).sum();
        let tr = abelian_trace(&big, 200);
        for row in &tr.rows {
            prop_assert!(row.num_exp <= row.den_exp);
            let err = abs(row.ratio - big.density());
            prop_assert!(err <= Rational::new(slack as i64, d * row.level as i64));
            prop_assert!(abelian_index_log(&small, row.level) as u64 <= row.num_exp);
        }
    }

    #[test]
    fn lemma_identities_hold_on_nested_pairs((small, big) in spec_pair()) {
        prop_assert!(small.is_subgroup_of(&big));
        let chain = chain_rule_check(&big, &small, 300).unwrap();
        prop_assert!(chain.passed(), "{:?}", chain.failure);
        let quot = quotient_formula_check(&small, &big, 300).unwrap();
        prop_assert!(quot.passed(), "{:?}", quot.failure);
    }

    #[test]
    fn splicing_interpolates((small, big) in spec_pair(), a in 0i64..=7, b in 1i64..=7) {
        prop_assume!(a <= b);
        let theta = Rational::new(a, b);
        let k = splice(&small, &big, theta).unwrap();
        prop_assert!(small.is_subgroup_of(&k) && k.is_subgroup_of(&big));
        let (eta, kappa) = (small.density(), big.density());
        prop_assert_eq!(k.density(), (kappa - eta) * theta + eta);
    }

    #[test]
    fn realization_is_within_one_over_n(a in 0i64..=20, b in 1i64..=20) {
        prop_assume!(a <= b);
        let theta = Rational::new(a, b);
        let spec = realize_dimension(theta, 5).unwrap();
        for row in abelian_trace(&spec, 300).rows {
            prop_assert!(abs(row.ratio - theta) <= Rational::new(1, row.level as i64));
            // |S ∩ [0, n)| = floor(n θ)
            prop_assert_eq!(row.num_exp as i64, row.level as i64 * a / b);
        }
    }

    #[test]
    fn spec_text_round_trips((_small, big) in spec_pair()) {
        prop_assert_eq!(CoordinateSubgroupSpec::parse(&big.encode()).unwrap(), big);
    }
}
