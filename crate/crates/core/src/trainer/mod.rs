//! Levenberg–Marquardt training with smooth crystallization, crisp
//! crystallization, Optimal Brain Surgeon pruning and the full extraction
//! pipeline from data to formula.

mod crystal;
mod lm;
mod obs;
mod pipeline;

pub use crystal::{crisp_crystallize, representation_error, soft_crystallize, soft_crystallize_network, ErrorConvention};
pub use lm::{lm_step, random_network, sse, train, train_restart, LmStep, Trained};
pub use obs::{obs_prune, saliencies, Pruned};
pub use pipeline::{reverse_engineer, Extraction, RestartOutcome, TopologyAttempt, TrainReport};

use crate::error::{Error, Result};
use crate::logic::{grid_points, Formula, SimilarityMode};
use crate::relation::Dataset;
use std::collections::HashMap;
use std::fmt;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    /// Resolution of the logic the data lives in.
    pub n: u32,
    pub seed: u64,
    /// Acceptance threshold on exp similarity against the data.
    pub tau: f64,
    /// Restarts per topology; `None` means `5 + 2 * inputs`.
    pub restarts: Option<usize>,
    /// Hidden-layer widths tried in order.
    pub topologies: Vec<Vec<usize>>,
    pub mu_init: f64,
    pub mu_factor: f64,
    pub mu_max: f64,
    pub max_epochs: usize,
    /// Exponent of the smooth crystallization map.
    pub exponent: i32,
    /// Training stops once the SSE falls below this.
    pub sse_tolerance: f64,
    /// Largest SSE increase a pruning step may cause.
    pub obs_tolerance: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            n: 4,
            seed: 42,
            tau: 0.95,
            restarts: None,
            topologies: vec![vec![2], vec![4], vec![4, 2], vec![6, 3]],
            mu_init: 0.01,
            mu_factor: 10.0,
            mu_max: 1e10,
            max_epochs: 500,
            exponent: 2,
            sse_tolerance: 1e-10,
            obs_tolerance: 1e-9,
        }
    }
}

impl TrainConfig {
    pub fn restarts_for(&self, inputs: usize) -> usize {
        self.restarts.unwrap_or(5 + 2 * inputs)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidValue("n must be at least 1".into()));
        }
        if !(self.tau > 0.0 && self.tau <= 1.0) {
            return Err(Error::InvalidValue(format!("tau must lie in (0, 1], got {}", self.tau)));
        }
        if self.mu_factor <= 1.0 {
            return Err(Error::InvalidValue("mu_factor must exceed 1".into()));
        }
        if self.topologies.is_empty() {
            return Err(Error::InvalidValue("at least one topology is required".into()));
        }
        Ok(())
    }

    /// Apply one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse().map_err(|_| Error::InvalidValue(format!("{key} = {v}")))
        }
        match key {
            "n" => self.n = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "tau" => self.tau = num(key, value)?,
            "restarts" => self.restarts = if value == "auto" { None } else { Some(num(key, value)?) },
            "topologies" => self.topologies = parse_topologies(value)?,
            "mu_init" => self.mu_init = num(key, value)?,
            "mu_factor" => self.mu_factor = num(key, value)?,
            "mu_max" => self.mu_max = num(key, value)?,
            "max_epochs" => self.max_epochs = num(key, value)?,
            "exponent" => self.exponent = num(key, value)?,
            "sse_tolerance" => self.sse_tolerance = num(key, value)?,
            "obs_tolerance" => self.obs_tolerance = num(key, value)?,
            _ => return Err(Error::UnknownName(key.into())),
        }
        Ok(())
    }

    /// Read `key = value` lines on top of the defaults; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = TrainConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::parse(i + 1, "expected key = value"))?;
            cfg.set(k.trim(), v.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        TrainConfig::parse(&std::fs::read_to_string(path)?)
    }
}

/// `"2; 4; 4,2"` → `[[2], [4], [4, 2]]`; `-` stands for no hidden layer.
fn parse_topologies(text: &str) -> Result<Vec<Vec<usize>>> {
    text.split(';')
        .map(|t| {
            let t = t.trim();
            if t == "-" {
                return Ok(vec![]);
            }
            t.split(',')
                .map(|w| w.trim().parse().map_err(|_| Error::InvalidValue(format!("topology `{t}`"))))
                .collect()
        })
        .collect()
}

impl fmt::Display for TrainConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let topo: Vec<String> = self
            .topologies
            .iter()
            .map(|t| if t.is_empty() { "-".into() } else { t.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(",") })
            .collect();
        writeln!(f, "n = {}", self.n)?;
        writeln!(f, "seed = {}", self.seed)?;
        writeln!(f, "tau = {}", self.tau)?;
        writeln!(f, "restarts = {}", self.restarts.map_or("auto".into(), |r| r.to_string()))?;
        writeln!(f, "topologies = {}", topo.join("; "))?;
        writeln!(f, "mu_init = {}", self.mu_init)?;
        writeln!(f, "mu_factor = {}", self.mu_factor)?;
        writeln!(f, "mu_max = {}", self.mu_max)?;
        writeln!(f, "max_epochs = {}", self.max_epochs)?;
        writeln!(f, "exponent = {}", self.exponent)?;
        writeln!(f, "sse_tolerance = {}", self.sse_tolerance)?;
        write!(f, "obs_tolerance = {}", self.obs_tolerance)
    }
}

/// Training rows with multiplicities. Identical rows are merged so large
/// enumerated datasets cost only as much as their distinct patterns.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainData {
    pub n: u32,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub x: Vec<Vec<f64>>,
    pub y: Vec<Vec<f64>>,
    pub weight: Vec<f64>,
}

impl TrainData {
    pub fn new(n: u32, inputs: Vec<String>, outputs: Vec<String>) -> Self {
        TrainData { n, inputs, outputs, x: vec![], y: vec![], weight: vec![] }
    }

    pub fn push(&mut self, x: Vec<f64>, y: Vec<f64>, weight: f64) -> Result<()> {
        if x.len() != self.inputs.len() || y.len() != self.outputs.len() {
            return Err(Error::Shape("row does not match the declared columns".into()));
        }
        self.x.push(x);
        self.y.push(y);
        self.weight.push(weight);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weight.iter().sum()
    }

    /// Columns of a dataset, with duplicate rows merged.
    pub fn from_dataset(ds: &Dataset, inputs: &[String], outputs: &[String]) -> Result<Self> {
        let xi: Vec<usize> = inputs.iter().map(|c| ds.column_index(c)).collect::<Result<_>>()?;
        let yi: Vec<usize> = outputs.iter().map(|c| ds.column_index(c)).collect::<Result<_>>()?;
        let mut data = TrainData::new(ds.n, inputs.to_vec(), outputs.to_vec());
        let mut seen: HashMap<Vec<u32>, usize> = HashMap::new();
        for row in &ds.rows {
            let key: Vec<u32> = xi.iter().chain(&yi).map(|&i| row[i].numerator()).collect();
            if let Some(&r) = seen.get(&key) {
                data.weight[r] += 1.0;
                continue;
            }
            seen.insert(key, data.len());
            data.push(xi.iter().map(|&i| row[i].to_f64()).collect(), yi.iter().map(|&i| row[i].to_f64()).collect(), 1.0)?;
        }
        Ok(data)
    }

    /// The full `S_n` truth table of a formula as a single-output dataset.
    pub fn from_formula(f: &Formula, n: u32, output: &str) -> Result<Self> {
        let vars = f.variables();
        let mut data = TrainData::new(n, vars.clone(), vec![output.to_string()]);
        for p in grid_points(vars.len(), n) {
            let x: Vec<f64> = p.iter().map(|&k| k as f64 / n as f64).collect();
            let y = f.eval_f64(&vars, &x)?;
            data.push(x, vec![y], 1.0)?;
        }
        Ok(data)
    }

    /// Keep only output column `j`.
    pub fn single_output(&self, j: usize) -> TrainData {
        TrainData {
            n: self.n,
            inputs: self.inputs.clone(),
            outputs: vec![self.outputs[j].clone()],
            x: self.x.clone(),
            y: self.y.iter().map(|r| vec![r[j]]).collect(),
            weight: self.weight.clone(),
        }
    }

    /// Weighted similarity between predictions and the targets, over all
    /// rows and outputs.
    pub fn similarity(&self, predicted: &[Vec<f64>], mode: SimilarityMode) -> f64 {
        let mut sum = 0.0;
        let mut count = 0.0;
        let mut worst: f64 = 0.0;
        for ((p, y), w) in predicted.iter().zip(&self.y).zip(&self.weight) {
            for (a, b) in p.iter().zip(y) {
                let d = (a - b).abs();
                sum += w * d;
                count += w;
                worst = worst.max(d);
            }
        }
        match mode {
            SimilarityMode::Exp => (-sum / count.max(f64::MIN_POSITIVE)).exp(),
            SimilarityMode::Inf => 1.0 - worst,
            SimilarityMode::And => (1.0 - sum).max(0.0),
        }
    }
}
