mod common;

use luka::logic::{parse_formula, similarity_f64, truth_subtable, truth_subtable_over, values, SimilarityMode, TruthValue};
use proptest::prelude::*;

fn table(n: u32, len: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0..=n, len).prop_map(move |ks| ks.into_iter().map(|k| k as f64 / n as f64).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn printing_then_parsing_gives_the_same_tree(f in common::formula(4, 5)) {
        let text = f.to_string();
        prop_assert_eq!(parse_formula(&text).unwrap(), f, "{}", text);
    }

    #[test]
    fn exp_similarity_is_a_similarity(
        (a, b, c) in (1u32..=6, 1usize..12).prop_flat_map(|(n, len)| (table(n, len), table(n, len), table(n, len)))
    ) {
        let g = |x: &[f64], y: &[f64]| similarity_f64(x, y, SimilarityMode::Exp).unwrap();
        prop_assert!((g(&a, &a) - 1.0).abs() < 1e-12);
        prop_assert_eq!(g(&a, &b), g(&b, &a));
        // Γ(a,b) ⊗ Γ(b,c) ≤ Γ(a,c)
        let lhs = (g(&a, &b) + g(&b, &c) - 1.0).max(0.0);
        prop_assert!(lhs <= g(&a, &c) + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn dropping_double_negations_keeps_the_table(f in common::formula(3, 5)) {
        let g = f.without_double_negation();
        let vars = f.variables();
        prop_assert_eq!(truth_subtable_over(&g, &vars, 4).unwrap(), truth_subtable(&f, 4));
    }

    #[test]
    fn lattice_rewrite_keeps_the_table(f in common::formula(3, 4), n in 1u32..=4) {
        let vars = f.variables();
        prop_assert_eq!(truth_subtable_over(&f.without_lattice_ops(), &vars, n).unwrap(), truth_subtable(&f, n));
    }

    #[test]
    fn formulas_stay_in_the_fragment(f in common::formula(3, 4), n in 1u32..=6) {
        for v in truth_subtable(&f, n).entries {
            prop_assert_eq!(v.denominator(), n);
        }
    }
}

#[test]
fn de_morgan_and_closure_exhaustive() {
    for n in 1..=6 {
        for x in values(n) {
            for y in values(n) {
                let s = x.strong_sum(y).unwrap();
                assert_eq!(s, x.negation().fusion(y.negation()).unwrap().negation());
                for v in [s, x.fusion(y).unwrap(), x.residuum(y).unwrap(), x.equivalence(y).unwrap()] {
                    assert_eq!(v.denominator(), n);
                    assert!(TruthValue::new(v.numerator(), n).is_ok());
                }
            }
        }
    }
}
