use super::neuron::{classify_neuron, neuron_to_formula, NeuronClass, NeuronConfig};
use super::rule_r::best_representable_approx;
use super::{CastroNetwork, Layer};
use crate::error::{Error, Result};
use crate::logic::{grid_points, Formula, TruthValue};
use std::collections::BTreeMap;

/// Formula read off a crisp network and its similarity to the network.
#[derive(Debug, Clone, PartialEq)]
pub struct Translation {
    pub formula: Formula,
    /// `exp` similarity between formula and network over the `S_n` grid.
    pub lambda: f64,
    /// Neurons that had to be approximated.
    pub approximated: usize,
}

/// Translate one neuron whose inputs carry `signals`.
fn neuron_formula(weights: &[f64], bias: f64, signals: &[Formula], n: u32, approximated: &mut usize) -> Result<Formula> {
    let mut bias = bias as i32;
    let mut names = Vec::new();
    let mut ws = Vec::new();
    let mut subst = BTreeMap::new();
    for (w, s) in weights.iter().zip(signals) {
        let w = *w as i32;
        match (w, s) {
            (0, _) => {}
            (_, Formula::Zero) => {}
            (_, Formula::One) => bias += w,
            _ => {
                let name = format!("_{}", names.len());
                subst.insert(name.clone(), s.clone());
                names.push(name);
                ws.push(w);
            }
        }
    }
    let cfg = NeuronConfig::new(names, ws, bias);
    let f = match classify_neuron(&cfg) {
        NeuronClass::Constant0 => return Ok(Formula::Zero),
        NeuronClass::Constant1 => return Ok(Formula::One),
        NeuronClass::Conjunction | NeuronClass::Disjunction => neuron_to_formula(&cfg)?,
        NeuronClass::Unrepresentable => {
            *approximated += 1;
            best_representable_approx(&cfg, n)?.formula
        }
    };
    Ok(f.substitute(&subst).without_double_negation())
}

/// Formulas for every output of a crisp network, composed bottom-up.
/// Constant neurons fold into `0`/`1`; unrepresentable neurons are replaced
/// by their best rule-R approximation at resolution `n`.
pub fn network_to_formulas(net: &CastroNetwork, n: u32) -> Result<Vec<Translation>> {
    if !net.crisp {
        return Err(Error::Unsupported("translation needs a crisp network".into()));
    }
    let mut signals: Vec<Formula> = net.inputs.iter().map(Formula::var).collect();
    let mut approximated = 0;
    for layer in &net.layers {
        signals = layer
            .weights
            .iter()
            .zip(&layer.biases)
            .map(|(w, b)| neuron_formula(w, *b, &signals, n, &mut approximated))
            .collect::<Result<_>>()?;
    }
    // the grid only needs the inputs the first layer reads
    let used: Vec<usize> = (0..net.inputs.len())
        .filter(|&i| net.layers[0].weights.iter().any(|r| r[i] != 0.0))
        .collect();
    let used_names: Vec<String> = used.iter().map(|&i| net.inputs[i].clone()).collect();
    let mut diffs = vec![0u64; signals.len()];
    let mut count = 0u64;
    let mut x = vec![TruthValue::zero(n); net.inputs.len()];
    for p in grid_points(used.len(), n) {
        for (&i, &k) in used.iter().zip(&p) {
            x[i] = TruthValue::new(k, n)?;
        }
        let out = net.forward_exact(&x, n)?;
        let lookup = |name: &str| used_names.iter().position(|u| u == name).map(|j| TruthValue::new(p[j], n).unwrap());
        for (j, f) in signals.iter().enumerate() {
            let v = f.eval_with(&lookup, Some(n))?;
            diffs[j] += v.numerator().abs_diff(out[j].numerator()) as u64;
        }
        count += 1;
    }
    Ok(signals
        .into_iter()
        .zip(diffs)
        .map(|(formula, d)| Translation {
            formula,
            lambda: (-(d as f64) / (n as f64 * count as f64)).exp(),
            approximated,
        })
        .collect())
}

/// Single-output version of [`network_to_formulas`].
pub fn network_to_formula(net: &CastroNetwork, n: u32) -> Result<Translation> {
    if net.outputs() != 1 {
        return Err(Error::Shape(format!("expected one output, network has {}", net.outputs())));
    }
    Ok(network_to_formulas(net, n)?.remove(0))
}

/// Strip negations: the core formula and whether an odd number was removed.
fn literal(f: &Formula) -> (&Formula, bool) {
    match f {
        Formula::Neg(c) => {
            let (core, neg) = literal(c);
            (core, !neg)
        }
        _ => (f, false),
    }
}

/// Signed literals of a connective node and whether it is a conjunction.
fn node_literals(f: &Formula) -> (bool, [(&Formula, bool); 2]) {
    match f {
        Formula::Fusion(a, b) => (true, [literal(a), literal(b)]),
        Formula::StrongSum(a, b) => (false, [literal(a), literal(b)]),
        Formula::Implies(a, b) => {
            let (ca, na) = literal(a);
            (false, [(ca, !na), literal(b)])
        }
        _ => unreachable!("lattice operators are rewritten first"),
    }
}

fn is_const(f: &Formula) -> bool {
    matches!(f, Formula::Zero | Formula::One)
}

/// Layer at which the neuron computing the core formula `f` sits.
fn height(f: &Formula) -> usize {
    match f {
        Formula::Var(_) | Formula::Zero | Formula::One => 0,
        _ => {
            let (_, lits) = node_literals(f);
            let h = lits.iter().map(|(c, _)| height(c)).max().unwrap() + 1;
            // x ∘ x at the first layer would merge two weights into one
            let same_var = matches!((lits[0].0, lits[1].0), (Formula::Var(a), Formula::Var(b)) if a == b);
            if same_var {
                h + 1
            } else {
                h
            }
        }
    }
}

/// Sparse weight row and bias of one neuron.
type SparseNeuron = (Vec<(usize, i32)>, i32);

struct Builder {
    inputs: Vec<String>,
    /// per layer (index 0 = first hidden layer)
    layers: Vec<Vec<SparseNeuron>>,
}

impl Builder {
    fn push(&mut self, layer: usize, row: Vec<(usize, i32)>, bias: i32) -> usize {
        while self.layers.len() < layer {
            self.layers.push(vec![]);
        }
        let l = &mut self.layers[layer - 1];
        l.push((row, bias));
        l.len() - 1
    }

    /// Index of a unit at `layer` (0 = network inputs) computing core `f`.
    fn signal(&mut self, f: &Formula, layer: usize) -> usize {
        if layer == 0 {
            let Formula::Var(v) = f else { unreachable!("only variables live at the input layer") };
            return self.inputs.iter().position(|x| x == v).unwrap();
        }
        if height(f) < layer {
            let src = self.signal(f, layer - 1);
            return self.push(layer, vec![(src, 1)], 0);
        }
        let (conj, lits) = node_literals(f);
        self.connective(conj, &lits, layer)
    }

    /// A conjunction (`b = 1 - p`) or disjunction (`b = n`) neuron over signed
    /// literals; constant literals are folded into the bias.
    fn connective(&mut self, conj: bool, lits: &[(&Formula, bool)], layer: usize) -> usize {
        let p = lits.iter().filter(|(c, neg)| is_const(c) || !neg).count() as i32;
        let n = lits.len() as i32 - p;
        let mut bias = if conj { 1 - p } else { n };
        let mut row = Vec::new();
        for &(core, neg) in lits {
            if is_const(core) {
                let v = matches!(core, Formula::One) != neg;
                bias += v as i32;
            } else {
                let src = self.signal(core, layer - 1);
                row.push((src, if neg { -1 } else { 1 }));
            }
        }
        self.push(layer, row, bias)
    }
}

/// Crisp network computing `f` exactly: one neuron per connective, with
/// identity neurons carrying signals across layers.
pub fn formula_to_network(f: &Formula) -> CastroNetwork {
    let f = f.without_lattice_ops();
    let inputs = f.variables();
    let mut b = Builder { inputs: inputs.clone(), layers: vec![] };
    let (core, neg) = literal(&f);
    if neg || matches!(core, Formula::Var(_) | Formula::Zero | Formula::One) {
        // a single-literal neuron on top of the core
        b.connective(false, &[(core, neg)], height(core) + 1);
    } else {
        b.signal(core, height(core));
    }
    let mut width = inputs.len();
    let mut layers = Vec::new();
    for l in b.layers {
        let mut weights = vec![vec![0.0; width]; l.len()];
        let mut biases = Vec::with_capacity(l.len());
        for (i, (row, bias)) in l.iter().enumerate() {
            for &(src, w) in row {
                weights[i][src] += w as f64;
            }
            biases.push(*bias as f64);
        }
        width = l.len();
        layers.push(Layer { weights, biases });
    }
    CastroNetwork::new(inputs, layers).expect("builder produces consistent shapes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula, truth_subtable};

    fn net_table(net: &CastroNetwork, n: u32) -> Vec<TruthValue> {
        grid_points(net.inputs.len(), n)
            .map(|p| {
                let x: Vec<_> = p.iter().map(|&k| TruthValue::new(k, n).unwrap()).collect();
                net.forward_exact(&x, n).unwrap()[0]
            })
            .collect()
    }

    #[test]
    fn compiles_single_connectives() {
        let net = formula_to_network(&parse_formula("x * y").unwrap());
        assert_eq!(net.layers, vec![Layer { weights: vec![vec![1.0, 1.0]], biases: vec![-1.0] }]);
        let net = formula_to_network(&parse_formula("~x").unwrap());
        assert_eq!(net.layers, vec![Layer { weights: vec![vec![-1.0]], biases: vec![1.0] }]);
    }

    #[test]
    fn compiles_the_layered_example() {
        let net = formula_to_network(&parse_formula("(x * y -> z) + (z -> w)").unwrap());
        let l = |w: Vec<Vec<f64>>, b: Vec<f64>| Layer { weights: w, biases: b };
        assert_eq!(net.inputs, vec!["x", "y", "z", "w"]);
        assert_eq!(
            net.layers,
            vec![
                l(vec![vec![1., 1., 0., 0.], vec![0., 0., 1., 0.], vec![0., 0., -1., 1.]], vec![-1., 0., 1.]),
                l(vec![vec![-1., 1., 0.], vec![0., 0., 1.]], vec![1., 0.]),
                l(vec![vec![1., 1.]], vec![0.]),
            ]
        );
        assert_eq!(net.forward(&[1.0, 1.0, 0.0, 0.0]).unwrap(), vec![1.0]);
    }

    #[test]
    fn repeated_variables_and_constants() {
        for s in ["x * x", "x + ~x", "x -> x", "1 * x", "~0", "0", "x", "~~x", "max(x, y)", "min(x, ~x) + 1"] {
            let f = parse_formula(s).unwrap();
            let net = formula_to_network(&f);
            assert!(net.crisp);
            for n in [1, 2, 4] {
                if f.variables().is_empty() {
                    let v = f.eval_with(&|_| None, Some(n)).unwrap();
                    assert_eq!(net.forward_exact(&[], n).unwrap()[0], v, "{s}");
                } else {
                    assert_eq!(net_table(&net, n), truth_subtable(&f, n).entries, "{s} at {n}");
                }
            }
        }
    }

    #[test]
    fn translation_of_representable_net_is_exact() {
        let f = parse_formula("x * y").unwrap();
        let t = network_to_formula(&formula_to_network(&f), 4).unwrap();
        assert_eq!((t.formula, t.lambda), (f, 1.0));
    }

    #[test]
    fn translation_of_single_unrepresentable_neuron() {
        let net = CastroNetwork::new(
            vec!["x1".into(), "x2".into(), "x3".into()],
            vec![Layer { weights: vec![vec![-1.0, 1.0, 1.0]], biases: vec![0.0] }],
        )
        .unwrap();
        let t = network_to_formula(&net, 1).unwrap();
        let a = best_representable_approx(&crate::network::NeuronConfig::anonymous(&[-1, 1, 1], 0), 1).unwrap();
        assert_eq!(t.formula, a.formula);
        assert!((t.lambda - a.lambda).abs() < 1e-12);
        assert_eq!(t.approximated, 1);
    }
}
