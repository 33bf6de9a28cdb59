use crate::error::{Error, Result};
use crate::logic::Formula;
use std::fmt;

/// A crisp neuron `ψ_b(Σ w_i x_i)` over named inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeuronConfig {
    pub inputs: Vec<String>,
    pub weights: Vec<i32>,
    pub bias: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NeuronClass {
    Conjunction,
    Disjunction,
    Constant0,
    Constant1,
    Unrepresentable,
}

impl NeuronConfig {
    pub fn new(inputs: Vec<String>, weights: Vec<i32>, bias: i32) -> Self {
        assert_eq!(inputs.len(), weights.len(), "one weight per input");
        NeuronConfig { inputs, weights, bias }
    }

    /// Inputs named `x1..xk`.
    pub fn anonymous(weights: &[i32], bias: i32) -> Self {
        let inputs = (1..=weights.len()).map(|i| format!("x{i}")).collect();
        NeuronConfig::new(inputs, weights.to_vec(), bias)
    }

    /// Count of negative weights.
    pub fn negatives(&self) -> i32 {
        self.weights.iter().filter(|w| **w < 0).count() as i32
    }

    /// Count of positive weights.
    pub fn positives(&self) -> i32 {
        self.weights.iter().filter(|w| **w > 0).count() as i32
    }

    pub fn is_crisp(&self) -> bool {
        self.weights.iter().all(|w| (-1..=1).contains(w))
    }

    /// Drop inputs with weight zero.
    pub fn active(&self) -> NeuronConfig {
        let (inputs, weights) = self
            .inputs
            .iter()
            .zip(&self.weights)
            .filter(|(_, w)| **w != 0)
            .map(|(i, w)| (i.clone(), *w))
            .unzip();
        NeuronConfig { inputs, weights, bias: self.bias }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        super::psi(self.weights.iter().zip(x).map(|(w, v)| *w as f64 * v).sum::<f64>() + self.bias as f64)
    }
}

impl fmt::Display for NeuronConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self
            .inputs
            .iter()
            .zip(&self.weights)
            .filter(|(_, w)| **w != 0)
            .map(|(x, w)| match w {
                1 => x.clone(),
                -1 => format!("-{x}"),
                w => format!("{w}{x}"),
            })
            .collect();
        write!(f, "ψ{}({})", self.bias, args.join(", "))
    }
}

/// Closed-form classification by negative count `n`, positive count `p`
/// and bias `b`.
pub fn classify_neuron(c: &NeuronConfig) -> NeuronClass {
    let (n, p, b) = (c.negatives(), c.positives(), c.bias);
    if !c.is_crisp() {
        NeuronClass::Unrepresentable
    } else if b > n {
        NeuronClass::Constant1
    } else if b <= -p {
        NeuronClass::Constant0
    } else if b == -p + 1 {
        NeuronClass::Conjunction
    } else if b == n {
        NeuronClass::Disjunction
    } else {
        NeuronClass::Unrepresentable
    }
}

/// Representable means a connective or a constant. `n` is accepted for
/// interface symmetry; the criterion does not depend on it.
pub fn is_representable(c: &NeuronConfig, _n: u32) -> bool {
    classify_neuron(c) != NeuronClass::Unrepresentable
}

/// The `⊗` or `⊕` of the signed literals of a connective neuron.
pub fn neuron_to_formula(c: &NeuronConfig) -> Result<Formula> {
    let lits = c.inputs.iter().zip(&c.weights).filter(|(_, w)| **w != 0).map(|(x, w)| {
        if *w < 0 {
            Formula::neg(Formula::var(x))
        } else {
            Formula::var(x)
        }
    });
    match classify_neuron(c) {
        NeuronClass::Conjunction => Ok(Formula::fusion_all(lits).expect("connective has inputs")),
        NeuronClass::Disjunction => Ok(Formula::sum_all(lits).expect("connective has inputs")),
        class => Err(Error::Unsupported(format!("{c} is {class:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{truth_subtable_over, TruthValue};
    use crate::logic::parse_formula;

    #[test]
    fn classification_examples() {
        assert_eq!(classify_neuron(&NeuronConfig::anonymous(&[1, 1], -1)), NeuronClass::Conjunction);
        assert_eq!(classify_neuron(&NeuronConfig::anonymous(&[-1, -1], 2)), NeuronClass::Disjunction);
        assert_eq!(classify_neuron(&NeuronConfig::anonymous(&[-1, 1, 1], 0)), NeuronClass::Unrepresentable);
        assert_eq!(classify_neuron(&NeuronConfig::anonymous(&[-1, -1, 1], 2)), NeuronClass::Disjunction);
        assert_eq!(classify_neuron(&NeuronConfig::anonymous(&[1, 1], 1)), NeuronClass::Constant1);
        assert_eq!(classify_neuron(&NeuronConfig::anonymous(&[1, -1], -1)), NeuronClass::Constant0);
    }

    #[test]
    fn formulas_from_neurons() {
        let c = |w: &[i32], b| neuron_to_formula(&NeuronConfig::new(vec!["x".into(), "y".into()], w.to_vec(), b)).unwrap();
        assert_eq!(c(&[-1, 1], 1), parse_formula("~x + y").unwrap());
        assert_eq!(c(&[-1, 1], 0), parse_formula("~x * y").unwrap());
        let id = NeuronConfig::new(vec!["x".into()], vec![1], 0);
        assert_eq!(neuron_to_formula(&id).unwrap(), parse_formula("x").unwrap());
        assert!(neuron_to_formula(&NeuronConfig::anonymous(&[-1, 1, 1], 0)).is_err());
    }

    // every connective neuron with up to four inputs equals its formula on S_4
    #[test]
    fn connective_neurons_match_formulas() {
        for k in 1..=4usize {
            for code in 0..3usize.pow(k as u32) {
                let w: Vec<i32> = (0..k).map(|i| (code / 3usize.pow(i as u32) % 3) as i32 - 1).collect();
                for b in -4..=4 {
                    let c = NeuronConfig::anonymous(&w, b);
                    let Ok(f) = neuron_to_formula(&c) else { continue };
                    let t = truth_subtable_over(&f, &c.inputs, 4).unwrap();
                    for (p, v) in crate::logic::grid_points(k, 4).zip(&t.entries) {
                        let x: Vec<f64> = p.iter().map(|&i| TruthValue::new(i, 4).unwrap().to_f64()).collect();
                        assert!((c.eval(&x) - v.to_f64()).abs() < 1e-12, "{c} at {p:?}");
                    }
                }
            }
        }
    }
}
