use super::neuron::{classify_neuron, neuron_to_formula, NeuronClass, NeuronConfig};
use crate::error::{Error, Result};
use crate::logic::{grid_points, truth_subtable_over, Formula, TruthValue};
use std::fmt;

/// A tree of crisp neurons over the inputs of one original neuron.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NeuronTree {
    Input(usize),
    Neuron { bias: i32, inputs: Vec<(i32, NeuronTree)> },
}

impl NeuronTree {
    /// Formula of the tree; every neuron must be a connective or constant.
    pub fn to_formula(&self, names: &[String]) -> Result<Formula> {
        match self {
            NeuronTree::Input(i) => Ok(Formula::var(&names[*i])),
            NeuronTree::Neuron { bias, inputs } => {
                let kids: Vec<Formula> = inputs.iter().map(|(_, t)| t.to_formula(names)).collect::<Result<_>>()?;
                let placeholders: Vec<String> = (0..kids.len()).map(|i| format!("_{i}")).collect();
                let cfg = NeuronConfig::new(placeholders.clone(), inputs.iter().map(|(w, _)| *w).collect(), *bias);
                let f = match classify_neuron(&cfg) {
                    NeuronClass::Constant0 => Formula::Zero,
                    NeuronClass::Constant1 => Formula::One,
                    _ => neuron_to_formula(&cfg)?,
                };
                Ok(f.substitute(&placeholders.into_iter().zip(kids).collect()))
            }
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            NeuronTree::Input(i) => x[*i],
            NeuronTree::Neuron { bias, inputs } => {
                super::psi(inputs.iter().map(|(w, t)| *w as f64 * t.eval(x)).sum::<f64>() + *bias as f64)
            }
        }
    }

    /// Exact value on numerators over denominator `n`.
    fn eval_exact(&self, x: &[u32], n: i64) -> i64 {
        match self {
            NeuronTree::Input(i) => x[*i] as i64,
            NeuronTree::Neuron { bias, inputs } => {
                let s: i64 = inputs.iter().map(|(w, t)| *w as i64 * t.eval_exact(x, n)).sum();
                (s + *bias as i64 * n).clamp(0, n)
            }
        }
    }

    pub fn display(&self, names: &[String]) -> String {
        match self {
            NeuronTree::Input(i) => names[*i].clone(),
            NeuronTree::Neuron { bias, inputs } => {
                let args: Vec<String> = inputs
                    .iter()
                    .map(|(w, t)| if *w < 0 { format!("-{}", t.display(names)) } else { t.display(names) })
                    .collect();
                format!("ψ{bias}({})", args.join(", "))
            }
        }
    }
}

impl fmt::Display for NeuronTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=64).map(|i| format!("x{i}")).collect();
        f.write_str(&self.display(&names))
    }
}

/// Bias interval `[-p + 1, n]` on which a neuron is not constant.
fn non_constant(weights: &[i32], b: i32) -> bool {
    let n = weights.iter().filter(|w| **w < 0).count() as i32;
    let p = weights.iter().filter(|w| **w > 0).count() as i32;
    -p < b && b <= n
}

fn expand(lits: &[(usize, i32)], b: i32) -> Vec<NeuronTree> {
    if lits.len() <= 2 {
        let inputs = lits.iter().map(|&(i, w)| (w, NeuronTree::Input(i))).collect();
        return vec![NeuronTree::Neuron { bias: b, inputs }];
    }
    let mut out = Vec::new();
    for k in 0..lits.len() {
        let (i, w) = lits[k];
        let rest: Vec<(usize, i32)> = lits.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, l)| *l).collect();
        let rest_w: Vec<i32> = rest.iter().map(|l| l.1).collect();
        // the outer neuron has inputs (w, +1), so its bias lies in [-1, 1]
        for b1 in -1..=1 {
            let b0 = b - b1;
            if b1 > b0 || !non_constant(&[w, 1], b1) || !non_constant(&rest_w, b0) {
                continue;
            }
            for inner in expand(&rest, b0) {
                out.push(NeuronTree::Neuron { bias: b1, inputs: vec![(w, NeuronTree::Input(i)), (1, inner)] });
            }
        }
    }
    out
}

fn exact_table(tree: &NeuronTree, k: usize, n: u32) -> Vec<i64> {
    grid_points(k, n).map(|p| tree.eval_exact(&p, n as i64)).collect()
}

/// Binary trees reachable by repeatedly moving one input to an outer
/// neuron, splitting the bias as `b = b0 + b1` with `b1 <= b0` and keeping
/// both neurons non-constant. Leaves index the active (nonzero-weight)
/// inputs of `c`; trees with equal tables on `S_n` are kept once.
pub fn rule_r_expansions(c: &NeuronConfig, n: u32) -> Vec<NeuronTree> {
    let active = c.active();
    let lits: Vec<(usize, i32)> = active.weights.iter().copied().enumerate().collect();
    let mut seen: Vec<Vec<i64>> = Vec::new();
    let mut out = Vec::new();
    for t in expand(&lits, active.bias) {
        let table = exact_table(&t, lits.len(), n);
        if !seen.contains(&table) {
            seen.push(table);
            out.push(t);
        }
    }
    out
}

/// Chosen approximation of a neuron by a formula.
#[derive(Debug, Clone, PartialEq)]
pub struct Approximation {
    pub formula: Formula,
    pub lambda: f64,
    /// Distinct candidates considered.
    pub candidates: usize,
}

/// Every distinct rule-R candidate for an unrepresentable neuron with its
/// `exp` similarity to the neuron on `S_n`, best first. Ties are ordered by
/// fewer connectives, then by the smaller printed form.
pub fn approximation_candidates(c: &NeuronConfig, n: u32) -> Result<Vec<(Formula, f64)>> {
    let active = c.active();
    if !active.is_crisp() {
        return Err(Error::Unsupported(format!("{c} is not crisp")));
    }
    let k = active.inputs.len();
    let target: Vec<TruthValue> = grid_points(k, n)
        .map(|p| {
            let s: i64 = active.weights.iter().zip(&p).map(|(w, x)| *w as i64 * *x as i64).sum::<i64>()
                + active.bias as i64 * n as i64;
            TruthValue::new(s.clamp(0, n as i64) as u32, n).unwrap()
        })
        .collect();
    let mut out = Vec::new();
    for t in rule_r_expansions(&active, n) {
        let f = t.to_formula(&active.inputs)?;
        let table = truth_subtable_over(&f, &active.inputs, n)?;
        let diff: u64 = table.entries.iter().zip(&target).map(|(a, b)| a.numerator().abs_diff(b.numerator()) as u64).sum();
        let lambda = (-(diff as f64) / (n as f64 * target.len() as f64)).exp();
        out.push((f, lambda, diff));
    }
    // compare exact integer distances so ties are exact
    out.sort_by(|a, b| {
        a.2.cmp(&b.2)
            .then(a.0.connectives().cmp(&b.0.connectives()))
            .then_with(|| a.0.to_string().cmp(&b.0.to_string()))
    });
    Ok(out.into_iter().map(|(f, l, _)| (f, l)).collect())
}

/// The rule-R candidate whose table is most `exp`-similar to the neuron on
/// `S_n`; ties go to fewer connectives, then to the smaller printed form.
pub fn best_representable_approx(c: &NeuronConfig, n: u32) -> Result<Approximation> {
    let active = c.active();
    match classify_neuron(&active) {
        NeuronClass::Constant0 | NeuronClass::Constant1 => {
            return Err(Error::Unsupported(format!("{c} is constant")));
        }
        NeuronClass::Conjunction | NeuronClass::Disjunction => {
            return Ok(Approximation { formula: neuron_to_formula(&active)?, lambda: 1.0, candidates: 1 });
        }
        NeuronClass::Unrepresentable => {}
    }
    let all = approximation_candidates(&active, n)?;
    let candidates = all.len();
    let (formula, lambda) = all.into_iter().next().ok_or_else(|| Error::Unsupported(format!("{c} has no rule-R expansion")))?;
    Ok(Approximation { formula, lambda, candidates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn leaf(i: usize, w: i32) -> (i32, NeuronTree) {
        (w, NeuronTree::Input(i))
    }

    fn node(bias: i32, inputs: Vec<(i32, NeuronTree)>) -> NeuronTree {
        NeuronTree::Neuron { bias, inputs }
    }

    fn tables(trees: &[NeuronTree], k: usize, n: u32) -> Vec<Vec<i64>> {
        trees.iter().map(|t| exact_table(t, k, n)).collect()
    }

    #[test]
    fn unrepresentable_expansions_contain_the_three_configs() {
        let c = NeuronConfig::anonymous(&[-1, 1, 1], 0);
        let ex = rule_r_expansions(&c, 4);
        let have = tables(&ex, 3, 4);
        let printed = [
            node(0, vec![leaf(2, 1), (1, node(0, vec![leaf(0, -1), leaf(1, 1)]))]),
            node(-1, vec![leaf(2, 1), (1, node(1, vec![leaf(0, -1), leaf(1, 1)]))]),
            node(0, vec![leaf(0, -1), (1, node(0, vec![leaf(1, 1), leaf(2, 1)]))]),
        ];
        for p in &printed {
            assert!(have.contains(&exact_table(p, 3, 4)), "missing {p}");
        }
        let distinct: std::collections::HashSet<_> = tables(&printed, 3, 4).into_iter().collect();
        assert_eq!(distinct.len(), 3);
    }

    #[test]
    fn representable_expansions_are_equivalent() {
        let c = NeuronConfig::anonymous(&[-1, -1, 1], 2);
        let ex = rule_r_expansions(&c, 4);
        assert_eq!(ex.len(), 1);
        let a = node(0, vec![leaf(2, 1), (1, node(2, vec![leaf(0, -1), leaf(1, -1)]))]);
        let b = node(1, vec![leaf(1, -1), (1, node(1, vec![leaf(0, -1), leaf(2, 1)]))]);
        assert_eq!(exact_table(&a, 3, 4), exact_table(&ex[0], 3, 4));
        assert_eq!(exact_table(&b, 3, 4), exact_table(&ex[0], 3, 4));
    }

    #[test]
    fn binary_neuron_expands_to_itself() {
        let c = NeuronConfig::anonymous(&[1, -1], 0);
        assert_eq!(rule_r_expansions(&c, 4), vec![node(0, vec![leaf(0, 1), leaf(1, -1)])]);
    }

    #[test]
    fn approximation_examples() {
        let a = best_representable_approx(&NeuronConfig::anonymous(&[-1, 1, 1], 0), 1).unwrap();
        assert!((a.lambda - (-0.125f64).exp()).abs() < 1e-12);
        let exact = best_representable_approx(&NeuronConfig::anonymous(&[1, 1], -1), 4).unwrap();
        assert_eq!((exact.formula, exact.lambda), (parse_formula("x1 * x2").unwrap(), 1.0));
        let names = vec!["A1".to_string(), "A2".into(), "A7".into()];
        let i3 = best_representable_approx(&NeuronConfig::new(names, vec![1, 1, -1], 0), 4).unwrap();
        assert!((i3.lambda - 0.8781).abs() < 5e-5, "{}", i3.lambda);
        assert!(best_representable_approx(&NeuronConfig::anonymous(&[1, 1], 1), 4).is_err());
    }
}
