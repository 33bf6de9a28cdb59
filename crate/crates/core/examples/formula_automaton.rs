//! Compile a formula into an automaton and into a crisp network, and check
//! both against direct evaluation.

use luka::automata::formula_to_automaton;
use luka::logic::{grid_points, parse_formula, TruthValue, Valuation};
use luka::network::formula_to_network;

fn main() -> luka::Result<()> {
    let f = parse_formula("(a * b + c) -> d")?;
    let n = 2;
    let inj = formula_to_automaton(&f, n);
    println!("{}", inj.automaton.to_text());
    println!("output state {} after {} iterations", inj.automaton.states[inj.output], inj.iterations);

    let net = formula_to_network(&f);
    let vars = f.variables();
    let mut agree = 0;
    let mut total = 0;
    for p in grid_points(vars.len(), n) {
        let x: Vec<TruthValue> = p.iter().map(|&k| TruthValue::new(k, n).unwrap()).collect();
        let env: Valuation = vars.iter().cloned().zip(x.iter().copied()).collect();
        let want = f.eval(&env)?;
        let by_net = net.forward_exact(&x, n)?[0];
        if inj.evaluate(&env)? == want && by_net == want {
            agree += 1;
        }
        total += 1;
    }
    println!("automaton and network agree with the formula on {agree}/{total} points");
    Ok(())
}
