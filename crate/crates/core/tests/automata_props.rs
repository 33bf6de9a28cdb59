mod common;

use luka::automata::{enumerate_words, formula_to_automaton};
use luka::fixtures::acyclic_automaton;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn injected_automaton_evaluates_the_formula(f in common::formula(3, 3)) {
        let inj = formula_to_automaton(&f, 2);
        for env in common::valuations(&f.variables(), 2) {
            let want = f.eval_with(&|x| env.get(x).copied(), Some(2)).unwrap();
            prop_assert_eq!(inj.evaluate(&env).unwrap(), want, "{} at {:?}", f, env);
        }
    }

    #[test]
    fn runs_are_deterministic(pick in 0usize..15625) {
        let aut = acyclic_automaton();
        let word = enumerate_words(4, 6, "a").nth(pick).unwrap();
        prop_assert_eq!(aut.run(&word).unwrap(), aut.run(&word).unwrap());
    }
}

#[test]
fn enumeration_has_every_word() {
    for n in 1..=4u32 {
        for len in 0..=4usize {
            assert_eq!(enumerate_words(n, len, "a").count(), (n as usize + 1).pow(len as u32));
        }
    }
}
