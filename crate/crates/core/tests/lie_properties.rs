use hausdorff_core::groups::Family;
use hausdorff_core::lie::{
    congruence_family, density_trace, lie_from_spec, loop_subalgebra_closure, LieAlgebra,
    SimplicityVerdict,
};
use hausdorff_core::trace::Rational;
use proptest::prelude::*;

fn algebras() -> Vec<LieAlgebra> {
    vec![
        lie_from_spec(Family::SL, 2, 3).unwrap(),
        lie_from_spec(Family::SL, 3, 3).unwrap(),
        lie_from_spec(Family::Sp, 2, 3).unwrap(),
        lie_from_spec(Family::SOOdd, 2, 5).unwrap(),
        lie_from_spec(Family::SL, 2, 2).unwrap(),
    ]
}

fn vector(alg: &LieAlgebra, raw: &[u32]) -> Vec<u32> {
    (0..alg.dim()).map(|i| raw[i % raw.len()] % alg.p()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closures_satisfy_the_grading_law(
        which in 0usize..5,
        raws in prop::collection::vec((prop::collection::vec(0u32..5, 10), 1usize..=4), 0..4),
    ) {
        let alg = &algebras()[which];
        let gens: Vec<_> = raws.iter().map(|(r, deg)| (vector(alg, r), *deg)).collect();
        let k = loop_subalgebra_closure(alg, &gens, 8).unwrap();
        prop_assert!(k.satisfies_grading(alg));
        for (v, deg) in &gens {
            prop_assert!(k.layer(*deg).contains(v));
        }
        for r in density_trace(&k).ratios() {
            prop_assert!(r >= Rational::from_integer(0) && r <= Rational::from_integer(1));
        }
    }

    #[test]
    fn ideal_closures_are_ideals(which in 0usize..5, raw in prop::collection::vec(0u32..5, 10)) {
        let alg = &algebras()[which];
        let v = vector(alg, &raw);
        prop_assume!(v.iter().any(|&x| x != 0));
        let ideal = alg.ideal_closure(&v);
        prop_assert!(ideal.contains(&v));
        let unit = |j: usize| { let mut e = vec![0; alg.dim()]; e[j] = 1; e };
        for w in ideal.basis() {
            for j in 0..alg.dim() {
                prop_assert!(ideal.contains(&alg.bracket(w, &unit(j))));
            }
        }
    }

    #[test]
    fn centralizers_contain_the_element(which in 0usize..5, raw in prop::collection::vec(0u32..5, 10)) {
        let alg = &algebras()[which];
        let a = vector(alg, &raw);
        let c = alg.centralizer(&a).unwrap();
        prop_assert!(c.contains(&a));
        for x in c.basis() {
            prop_assert!(alg.bracket(&a, x).iter().all(|&v| v == 0));
        }
    }

    #[test]
    fn congruence_densities_are_exact(q in 1usize..=6) {
        let alg = &algebras()[2];
        let tr = density_trace(&congruence_family(alg, q, 24).unwrap());
        for row in &tr.rows {
            prop_assert_eq!(row.ratio, Rational::new((row.level / q) as i64, row.level as i64));
        }
    }
}

#[test]
fn perfect_algebras_fill_every_degree() {
    for alg in algebras() {
        let k = congruence_family(&alg, 1, 6).unwrap();
        if alg.is_perfect() {
            assert!(k.layer_dims().iter().all(|&d| d == alg.dim()));
        }
        assert!(alg.check_axioms().is_empty());
    }
}

#[test]
fn simplicity_matches_ideal_closures() {
    // sl_2 over F_3 has 13 projective classes; enumerate them independently.
    let alg = lie_from_spec(Family::SL, 2, 3).unwrap();
    let mut all_full = true;
    for a in 0..3u32 {
        for b in 0..3u32 {
            for c in 0..3u32 {
                if (a, b, c) != (0, 0, 0) {
                    all_full &= alg.ideal_closure(&[a, b, c]).is_full();
                }
            }
        }
    }
    assert_eq!(alg.is_simple_bruteforce().is_simple(), all_full);
    assert_eq!(alg.is_simple_bruteforce(), SimplicityVerdict::Simple { classes: 13 });
}

#[test]
fn corrupted_constants_are_caught() {
    let mut alg = lie_from_spec(Family::Sp, 2, 3).unwrap();
    let text = alg.dump();
    let back = LieAlgebra::parse_dump(&text).unwrap();
    assert!(back.check_axioms().is_empty());
    let (i, j, k) = (0, 1, 2);
    let c = alg.structure_constant(i, j, k);
    alg.set_structure_constant(i, j, k, c + 1);
    alg.set_structure_constant(j, i, k, (3 - (c + 1) % 3) % 3);
    let v = alg.check_axioms();
    assert!(!v.is_empty());
    assert!(v.iter().all(|x| x.axiom() == "jacobi"));
}
