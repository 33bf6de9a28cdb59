mod common;

use luka::fixtures::{acyclic_automaton, cyclic_automaton, AUTOMATA_SPEC};
use luka::logic::SimilarityMode;
use luka::speckit::{automata_model, check, parse_spec};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn constraints_round_trip(f in common::formula(3, 4), lambda in proptest::option::of(0.05f64..1.0), target in any::<bool>()) {
        let head = match (target, lambda) {
            (true, None) => "1 = ".to_string(),
            (true, Some(l)) => format!("1 ~{l:.3} "),
            (false, Some(l)) => format!("~{l:.3} "),
            (false, None) => String::new(),
        };
        let text = format!("X : {{0, 1}};\nR : {{X, X, X -> X; R(x0, x1, x2) : {head}{f};}};\n");
        let spec = parse_spec(&text).unwrap();
        let printed = spec.to_string();
        let again = parse_spec(&printed).unwrap();
        prop_assert_eq!(again.to_string(), printed.clone());
        prop_assert_eq!(again.items(), spec.items());
    }
}

#[test]
fn checking_is_pure() {
    let spec = parse_spec(AUTOMATA_SPEC).unwrap();
    let model = automata_model(&acyclic_automaton(), &cyclic_automaton(), 6).unwrap();
    let a = check(&spec, &model, SimilarityMode::Inf).unwrap();
    let b = check(&spec, &model, SimilarityMode::Inf).unwrap();
    assert_eq!(a.to_json(), b.to_json());
}
