//! Run the example automaton on its word and build the word datasets.

use luka::automata::{enumerate_words, io_dataset, transition_dataset, Transition};
use luka::fixtures::{acyclic_automaton, example_automaton, example_word};

fn main() -> luka::Result<()> {
    let aut = example_automaton();
    let run = aut.run(&example_word())?;
    println!("     {}", aut.states.join("   "));
    for (k, e) in run.trace.iter().enumerate() {
        let row: Vec<String> = e.iter().map(|v| format!("{v:<3}")).collect();
        println!("e{:<3} {}", k + 1, row.join(" "));
    }
    let out: Vec<String> = run.output.iter().map(|v| v.to_string()).collect();
    println!("output [{}]", out.join(", "));

    let acyclic = acyclic_automaton();
    let words: Vec<_> = enumerate_words(4, 6, "a").collect();
    let io = io_dataset(&acyclic, &words, "a")?;
    let last = transition_dataset(&acyclic, &words, Transition::Last, "a")?;
    let all = transition_dataset(&acyclic, &words, Transition::All, "a")?;
    println!("io: {} rows x {} attributes", io.len(), io.columns.len());
    println!("last transition: {} rows x {} attributes", last.len(), last.columns.len());
    println!("every transition: {} rows", all.len());
    Ok(())
}
