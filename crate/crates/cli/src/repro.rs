//! Reference results rerun end to end, one line per item.

use luka::automata::{enumerate_words, io_dataset, transition_dataset, Transition};
use luka::fixtures;
use luka::logic::{grid_points, parse_formula, truth_subtable_over, TruthValue};
use luka::network::{neuron_to_formula, rule_r_expansions, NeuronConfig};
use luka::trainer::{reverse_engineer, TrainConfig, TrainData};
use std::time::Instant;

struct Item {
    name: &'static str,
    ok: bool,
    detail: String,
}

fn table1() -> Item {
    let mut bad = Vec::new();
    for (text, w, b) in fixtures::connective_neurons() {
        let cfg = NeuronConfig::new(vec!["x".into(), "y".into()], w.to_vec(), b);
        let want = parse_formula(text).unwrap();
        let vars = cfg.inputs.clone();
        let got = neuron_to_formula(&cfg).unwrap();
        for n in [1, 2, 4] {
            if truth_subtable_over(&got, &vars, n).unwrap() != truth_subtable_over(&want, &vars, n).unwrap() {
                bad.push(format!("{text} at n={n}"));
            }
        }
    }
    Item { name: "neuron configurations", ok: bad.is_empty(), detail: format!("8 neurons on S_1, S_2, S_4 {bad:?}") }
}

fn expansion_similarity() -> Item {
    let cfg = NeuronConfig::anonymous(&[-1, 1, 1], 0);
    let target: Vec<f64> = grid_points(3, 1).map(|p| cfg.eval(&p.iter().map(|&k| k as f64).collect::<Vec<_>>())).collect();
    let lambdas: Vec<f64> = rule_r_expansions(&cfg, 1)
        .iter()
        .map(|t| {
            let d: f64 = grid_points(3, 1)
                .zip(&target)
                .map(|(p, y)| (t.eval(&p.iter().map(|&k| k as f64).collect::<Vec<_>>()) - y).abs())
                .sum();
            (-d / 8.0).exp()
        })
        .collect();
    let want = (-1.0f64 / 8.0).exp();
    let ok = lambdas.len() >= 3 && lambdas.iter().all(|l| (l - want).abs() < 1e-9);
    Item { name: "expansion similarity 0.883", ok, detail: format!("{} expansions at {want:.4}", lambdas.len()) }
}

fn composite() -> Item {
    let alpha = parse_formula("((~A1 * A4 + A2) * ~A3 * ~A6) * ~(A4 + A5 + ~A7) + (A1 + ~A7) * A2").unwrap();
    let net = fixtures::unrepresentable_network();
    let table = truth_subtable_over(&alpha, &net.inputs, 4).unwrap();
    let mut diff = 0u64;
    for (p, v) in grid_points(7, 4).zip(&table.entries) {
        let x: Vec<_> = p.iter().map(|&k| TruthValue::new(k, 4).unwrap()).collect();
        diff += net.forward_exact(&x, 4).unwrap()[0].numerator().abs_diff(v.numerator()) as u64;
    }
    let lambda = (-(diff as f64) / (4.0 * table.len() as f64)).exp();
    Item { name: "composite similarity 0.7323", ok: (lambda - 0.7323).abs() < 0.02, detail: format!("{lambda:.4}") }
}

fn trace() -> Item {
    let run = fixtures::example_automaton().run(&fixtures::example_word()).unwrap();
    let got: Vec<String> = run.output.iter().map(|v| v.to_string()).collect();
    Item { name: "automaton output", ok: got == ["1/2", "3/4", "1"], detail: format!("[{}]", got.join(", ")) }
}

fn shapes() -> Item {
    let aut = fixtures::acyclic_automaton();
    let words: Vec<_> = enumerate_words(4, 6, "a").collect();
    let io = io_dataset(&aut, &words, "a").unwrap();
    let tr = transition_dataset(&aut, &words, Transition::Last, "a").unwrap();
    let ok = io.len() == 15625 && tr.len() == 15625 && io.columns.len() == 14 && tr.columns.len() == 16;
    Item {
        name: "dataset shapes",
        ok,
        detail: format!("io {}x{}, transitions {}x{}", io.len(), io.columns.len(), tr.len(), tr.columns.len()),
    }
}

fn extraction(seed: u64) -> Item {
    let cfg = TrainConfig { seed, ..TrainConfig::default() };
    let vars = vec!["x".to_string(), "y".to_string()];
    let mut bad = Vec::new();
    for (text, _, _) in fixtures::connective_neurons() {
        let f = parse_formula(text).unwrap();
        let data = TrainData::from_formula(&f, 4, "out").unwrap();
        let e = reverse_engineer(&data, &cfg).unwrap();
        if truth_subtable_over(&e.formula, &vars, 4).unwrap() != truth_subtable_over(&f, &vars, 4).unwrap() {
            bad.push(format!("{text} -> {}", e.formula));
        }
    }
    Item { name: "extraction of the connectives", ok: bad.is_empty(), detail: format!("seed {seed} {bad:?}") }
}

/// Print one line per item; true when all pass.
pub fn run(seed: u64) -> bool {
    let checks: Vec<Box<dyn Fn() -> Item>> = vec![
        Box::new(table1),
        Box::new(expansion_similarity),
        Box::new(composite),
        Box::new(trace),
        Box::new(shapes),
        Box::new(move || extraction(seed)),
    ];
    let mut all = true;
    for check in checks {
        let start = Instant::now();
        let item = check();
        all &= item.ok;
        println!(
            "{} {:<30} {:>8.2?}  {}",
            if item.ok { "PASS" } else { "FAIL" },
            item.name,
            start.elapsed(),
            item.detail
        );
    }
    all
}
