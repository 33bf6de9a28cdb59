//! Small reference objects used by the examples, tests and the CLI.

use crate::automata::{parse_automaton, FuzzyWord, OmegaAutomaton};
use crate::logic::TruthValue;
use crate::network::{CastroNetwork, Layer};

pub const EXAMPLE_AUTOMATON: &str = include_str!("../data/example.aut");
pub const ACYCLIC_AUTOMATON: &str = include_str!("../data/acyclic.aut");
pub const CYCLIC_AUTOMATON: &str = include_str!("../data/cyclic.aut");
pub const AUTOMATA_SPEC: &str = include_str!("../data/automata.lspec");

/// Eight-state automaton over the binary alphabet `a`, resolution 4.
pub fn example_automaton() -> OmegaAutomaton {
    parse_automaton(EXAMPLE_AUTOMATON, 4).expect("bundled automaton parses")
}

/// Eight-state automaton without cycles, states `A_0..A_7`.
pub fn acyclic_automaton() -> OmegaAutomaton {
    parse_automaton(ACYCLIC_AUTOMATON, 4).expect("bundled automaton parses")
}

/// The acyclic automaton with two feedback edges added.
pub fn cyclic_automaton() -> OmegaAutomaton {
    parse_automaton(CYCLIC_AUTOMATON, 4).expect("bundled automaton parses")
}

/// Twelve-position word over `a=1`, `a=0` for the example automaton.
pub fn example_word() -> FuzzyWord {
    let a1 = [4, 4, 2, 0, 1, 2, 4, 4, 2, 1, 0, 0];
    let a0 = [0, 0, 2, 4, 3, 2, 0, 0, 2, 3, 0, 4];
    let v = |k: u32| TruthValue::new(k, 4).unwrap();
    FuzzyWord {
        positions: a1
            .iter()
            .zip(&a0)
            .map(|(&x, &y)| [("a=1".to_string(), v(x)), ("a=0".to_string(), v(y))].into_iter().collect())
            .collect(),
    }
}

/// The eight crisp two-input connective neurons: formula, weights, bias.
pub fn connective_neurons() -> Vec<(&'static str, [i32; 2], i32)> {
    vec![
        ("~x + y", [-1, 1], 1),
        ("x * ~y", [1, -1], 0),
        ("x + y", [1, 1], 0),
        ("~x * ~y", [-1, -1], 1),
        ("x + ~y", [1, -1], 1),
        ("x * y", [1, 1], -1),
        ("~x * y", [-1, 1], 0),
        ("~x + ~y", [-1, -1], 2),
    ]
}

/// Two-layer crisp network over `A1..A7` with two unrepresentable neurons
/// in the first layer (`i1`, `i3`) and one in the output (`j1`).
pub fn unrepresentable_network() -> CastroNetwork {
    let inputs = (1..=7).map(|i| format!("A{i}")).collect();
    CastroNetwork::new(
        inputs,
        vec![
            Layer {
                weights: vec![
                    vec![-1., 1., -1., 1., 0., -1., 0.],
                    vec![0., 0., 0., 1., 1., 0., -1.],
                    vec![1., 1., 0., 0., 0., 0., -1.],
                ],
                biases: vec![0., 1., 0.],
            },
            Layer { weights: vec![vec![1., -1., 1.]], biases: vec![0.] },
        ],
    )
    .expect("consistent shapes")
}
