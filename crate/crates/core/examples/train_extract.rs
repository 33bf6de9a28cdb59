//! Train, crystallize, prune and translate: recover a formula from its
//! truth table, then from automaton transition data.

use luka::automata::{enumerate_words, transition_dataset, Transition};
use luka::fixtures::acyclic_automaton;
use luka::logic::parse_formula;
use luka::trainer::{reverse_engineer, TrainConfig, TrainData};

fn main() -> luka::Result<()> {
    let cfg = TrainConfig::default();
    let f = parse_formula("~x * y")?;
    let data = TrainData::from_formula(&f, 4, "out")?;
    let e = reverse_engineer(&data, &cfg)?;
    println!("{}\n", e.report);

    // the next value of A_7 in the acyclic automaton from three of its states
    let aut = acyclic_automaton();
    let words: Vec<_> = enumerate_words(4, 6, "a").collect();
    let ds = transition_dataset(&aut, &words, Transition::Last, "a")?;
    let inputs: Vec<String> = ["A_3", "A_4", "A_6"].map(String::from).to_vec();
    let data = TrainData::from_dataset(&ds, &inputs, &["A_7_next".to_string()])?;
    let e = reverse_engineer(&data, &cfg)?;
    println!("A_7(t+1) ~{:.4} {}  ({} distinct rows)", e.lambda, e.formula, data.len());
    Ok(())
}
