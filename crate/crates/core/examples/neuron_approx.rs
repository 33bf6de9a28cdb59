//! Crisp neurons as formulas, rule-R rewrites of the ones that have no
//! direct formula, and translation of a small network.

use luka::fixtures::{connective_neurons, unrepresentable_network};
use luka::network::{
    approximation_candidates, classify_neuron, network_to_formula, neuron_to_formula, rule_r_expansions, NeuronConfig,
};

fn main() -> luka::Result<()> {
    for (text, w, b) in connective_neurons() {
        let c = NeuronConfig::anonymous(&w, b);
        println!("{c:<18} {:?}  {}  (expected {text})", classify_neuron(&c), neuron_to_formula(&c)?);
    }

    let c = NeuronConfig::anonymous(&[-1, 1, 1], 0);
    println!("\n{c} is {:?}; rule R gives", classify_neuron(&c));
    let names: Vec<String> = c.inputs.clone();
    for t in rule_r_expansions(&c, 1) {
        println!("  {}  =  {}", t.display(&names), t.to_formula(&names)?);
    }
    for (f, l) in approximation_candidates(&c, 4)?.iter().take(3) {
        println!("  ~{l:.4} {f}");
    }

    let net = unrepresentable_network();
    let t = network_to_formula(&net, 4)?;
    println!("\nnetwork over {:?}", net.inputs);
    println!("approximated {} neurons, lambda {:.4}", t.approximated, t.lambda);
    println!("{}", t.formula);
    Ok(())
}
