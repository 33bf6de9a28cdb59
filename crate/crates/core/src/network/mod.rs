//! Layered networks with the truncated identity `ψ(x) = min(1, max(0, x))`,
//! their neurons viewed as logic connectives, and translation in both
//! directions between networks and formulas.

mod neuron;
mod rule_r;
mod translate;

pub use neuron::{classify_neuron, is_representable, neuron_to_formula, NeuronClass, NeuronConfig};
pub use rule_r::{approximation_candidates, best_representable_approx, rule_r_expansions, Approximation, NeuronTree};
pub use translate::{formula_to_network, network_to_formula, network_to_formulas, Translation};

use crate::error::{Error, Result};
use crate::logic::TruthValue;
use serde_json::{json, Value};
use std::path::Path;

/// Truncated identity.
pub fn psi(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// One layer: a weight row and a bias per neuron.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<f64>,
}

impl Layer {
    pub fn width(&self) -> usize {
        self.biases.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CastroNetwork {
    pub inputs: Vec<String>,
    pub layers: Vec<Layer>,
    pub crisp: bool,
}

impl CastroNetwork {
    /// Build and validate shapes; `crisp` is derived from the parameters.
    pub fn new(inputs: Vec<String>, layers: Vec<Layer>) -> Result<Self> {
        let mut width = inputs.len();
        if layers.is_empty() || layers.last().unwrap().width() == 0 {
            return Err(Error::Shape("network needs a non-empty output layer".into()));
        }
        for (l, layer) in layers.iter().enumerate() {
            if layer.weights.len() != layer.biases.len() || layer.weights.iter().any(|r| r.len() != width) {
                return Err(Error::Shape(format!("layer {l} does not match width {width}")));
            }
            width = layer.width();
        }
        let mut net = CastroNetwork { inputs, layers, crisp: false };
        net.crisp = net.is_crisp_valued();
        Ok(net)
    }

    fn is_crisp_valued(&self) -> bool {
        self.layers.iter().all(|l| {
            l.weights.iter().flatten().all(|&w| w == -1.0 || w == 0.0 || w == 1.0)
                && l.biases.iter().all(|b| b.fract() == 0.0)
        })
    }

    pub fn outputs(&self) -> usize {
        self.layers.last().map_or(0, |l| l.width())
    }

    pub fn parameter_count(&self) -> usize {
        self.layers.iter().map(|l| l.width() * (l.weights.first().map_or(0, |r| r.len()) + 1)).sum()
    }

    pub fn nonzero_weights(&self) -> usize {
        self.layers.iter().flat_map(|l| l.weights.iter().flatten()).filter(|w| **w != 0.0).count()
    }

    /// All parameters flattened layer by layer, each neuron's weights followed by its bias.
    pub fn parameters(&self) -> Vec<f64> {
        let mut p = Vec::with_capacity(self.parameter_count());
        for l in &self.layers {
            for (row, b) in l.weights.iter().zip(&l.biases) {
                p.extend_from_slice(row);
                p.push(*b);
            }
        }
        p
    }

    /// Whether flat parameter `i` (in [`parameters`](Self::parameters) order) is a bias.
    pub fn is_bias_parameter(&self, mut i: usize) -> bool {
        for l in &self.layers {
            let stride = l.weights.first().map_or(0, |r| r.len()) + 1;
            if i < stride * l.width() {
                return i % stride == stride - 1;
            }
            i -= stride * l.width();
        }
        false
    }

    /// Same topology with new parameters; the crisp flag is recomputed.
    pub fn with_parameters(&self, p: &[f64]) -> Result<Self> {
        if p.len() != self.parameter_count() {
            return Err(Error::Shape(format!("expected {} parameters, got {}", self.parameter_count(), p.len())));
        }
        let mut net = self.clone();
        let mut it = p.iter();
        for l in &mut net.layers {
            for (row, b) in l.weights.iter_mut().zip(&mut l.biases) {
                for w in row.iter_mut() {
                    *w = *it.next().unwrap();
                }
                *b = *it.next().unwrap();
            }
        }
        net.crisp = net.is_crisp_valued();
        Ok(net)
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.inputs.len() {
            return Err(Error::Shape(format!("expected {} inputs, got {}", self.inputs.len(), x.len())));
        }
        let mut cur = x.to_vec();
        for layer in &self.layers {
            cur = layer
                .weights
                .iter()
                .zip(&layer.biases)
                .map(|(row, b)| psi(row.iter().zip(&cur).map(|(w, v)| w * v).sum::<f64>() + b))
                .collect();
        }
        Ok(cur)
    }

    /// Exact evaluation of a crisp network on `S_n` inputs.
    pub fn forward_exact(&self, x: &[TruthValue], n: u32) -> Result<Vec<TruthValue>> {
        if !self.crisp {
            return Err(Error::Unsupported("exact evaluation needs a crisp network".into()));
        }
        if x.len() != self.inputs.len() {
            return Err(Error::Shape(format!("expected {} inputs, got {}", self.inputs.len(), x.len())));
        }
        let n = n as i64;
        if let Some(v) = x.iter().find(|v| v.denominator() as i64 != n) {
            return Err(Error::ResolutionMismatch(n as u32, v.denominator()));
        }
        let mut cur: Vec<i64> = x.iter().map(|v| v.numerator() as i64).collect();
        for layer in &self.layers {
            cur = layer
                .weights
                .iter()
                .zip(&layer.biases)
                .map(|(row, b)| {
                    let s: i64 = row.iter().zip(&cur).map(|(w, v)| *w as i64 * v).sum::<i64>() + *b as i64 * n;
                    s.clamp(0, n)
                })
                .collect();
        }
        Ok(cur.into_iter().map(|k| TruthValue::new(k as u32, n as u32).unwrap()).collect())
    }

    pub fn to_json(&self) -> Value {
        let num = |x: f64| if self.crisp { json!(x as i64) } else { json!(x) };
        let layers: Vec<Value> = self
            .layers
            .iter()
            .map(|l| {
                json!({
                    "weights": l.weights.iter().map(|r| r.iter().map(|&w| num(w)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "biases": l.biases.iter().map(|&b| num(b)).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "inputs": self.inputs, "layers": layers, "crisp": self.crisp })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Shape(format!("network json: {what}"));
        let inputs = v["inputs"]
            .as_array()
            .ok_or_else(|| bad("missing inputs"))?
            .iter()
            .map(|s| s.as_str().map(String::from).ok_or_else(|| bad("input names must be strings")))
            .collect::<Result<Vec<_>>>()?;
        let nums = |v: &Value| -> Result<Vec<f64>> {
            v.as_array()
                .ok_or_else(|| bad("expected an array"))?
                .iter()
                .map(|x| x.as_f64().ok_or_else(|| bad("expected a number")))
                .collect()
        };
        let mut layers = Vec::new();
        for l in v["layers"].as_array().ok_or_else(|| bad("missing layers"))? {
            let weights = l["weights"].as_array().ok_or_else(|| bad("missing weights"))?.iter().map(nums).collect::<Result<_>>()?;
            layers.push(Layer { weights, biases: nums(&l["biases"])? });
        }
        let net = CastroNetwork::new(inputs, layers)?;
        if v["crisp"].as_bool() == Some(true) && !net.crisp {
            return Err(bad("marked crisp but has non-integer parameters"));
        }
        Ok(net)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(&self.to_json())?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        CastroNetwork::from_json(&serde_json::from_str(&text)?)
    }
}
