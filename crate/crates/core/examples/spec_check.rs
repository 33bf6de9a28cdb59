//! Parse the bundled two-automata specification, check it against models
//! generated from the automata, enrich it with a formula and run a query.

use luka::fixtures::{acyclic_automaton, cyclic_automaton, AUTOMATA_SPEC};
use luka::logic::{parse_formula, SimilarityMode};
use luka::speckit::{automata_model, check, parse_spec, query, view_to_dataset, Constraint};

fn main() -> luka::Result<()> {
    let spec = parse_spec(AUTOMATA_SPEC)?;
    println!("{} sorts, {} signs, {} diagrams, {} marks", spec.sorts().len(), spec.signs().len(), spec.diagrams().len(), spec.marks().len());
    let model = automata_model(&acyclic_automaton(), &cyclic_automaton(), 6)?;
    println!("{}\n", check(&spec, &model, SimilarityMode::Inf)?);

    let vars: Vec<String> = (0..8).map(|i| format!("A_{i}")).collect();
    let rule = Constraint { vars, target: Some("A_7".into()), formula: parse_formula("A_6")? };
    let (enriched, added) = spec.integrate("T_a", rule, 1.0)?;
    println!("added: {added}");
    let report = check(&enriched, &model, SimilarityMode::Inf)?;
    for r in report.results.iter().filter(|r| r.kind == "formula") {
        println!("{} -> {:?} {:?}", r.mark, r.verdict, r.value);
    }

    let joint = view_to_dataset(&query(&spec, &model, "D_5")?)?;
    println!("\njoint query: {} rows, inputs {:?}", joint.len(), joint.meta.inputs);
    Ok(())
}
