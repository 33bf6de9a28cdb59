use super::crystal::crisp_crystallize;
use super::lm::{data_lambda, train_restart};
use super::obs::obs_prune;
use super::{TrainConfig, TrainData};
use crate::error::{Error, Result};
use crate::logic::{Formula, SimilarityMode};
use crate::network::{network_to_formula, CastroNetwork};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;

/// Every stage of one restart.
#[derive(Debug, Clone, Serialize)]
pub struct RestartOutcome {
    pub restart: usize,
    pub epochs: usize,
    pub lambda_raw: f64,
    pub lambda_crisp: f64,
    pub lambda_pruned: f64,
    /// Formula against the pruned network over the `S_n` grid.
    pub lambda_translation: f64,
    /// Formula against the data.
    pub lambda_final: f64,
    pub pruned_weights: usize,
    pub approximated: usize,
    pub formula: String,
    /// Raw and crisp fits both reached the threshold.
    pub eligible: bool,
    #[serde(skip)]
    net: Option<CastroNetwork>,
    #[serde(skip)]
    parsed: Option<Formula>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TopologyAttempt {
    pub hidden: Vec<usize>,
    pub restarts: Vec<RestartOutcome>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrainReport {
    pub output: String,
    pub inputs: Vec<String>,
    pub n: u32,
    pub distinct_rows: usize,
    pub tau: f64,
    pub seed: u64,
    pub attempts: Vec<TopologyAttempt>,
    pub hidden: Vec<usize>,
    pub restart: usize,
    pub restarts_used: usize,
    pub epochs: usize,
    pub lambda_raw: f64,
    pub lambda_crisp: f64,
    pub lambda_pruned: f64,
    pub lambda_final: f64,
    pub formula: String,
    /// Whether the chosen restart passed every threshold.
    pub accepted: bool,
}

impl TrainReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for TrainReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "target {} from {} over S_{} ({} distinct rows)", self.output, self.inputs.join(", "), self.n, self.distinct_rows)?;
        for a in &self.attempts {
            writeln!(f, "topology {:?}", a.hidden)?;
            for r in &a.restarts {
                writeln!(
                    f,
                    "  restart {:>2}  epochs {:>3}  raw {:.4}  crisp {:.4}  pruned {:.4}  final {:.4}{}  {}",
                    r.restart,
                    r.epochs,
                    r.lambda_raw,
                    r.lambda_crisp,
                    r.lambda_pruned,
                    r.lambda_final,
                    if r.eligible { "" } else { " (rejected)" },
                    r.formula
                )?;
            }
        }
        writeln!(f, "chosen: topology {:?}, restart {} after {} restarts", self.hidden, self.restart, self.restarts_used)?;
        writeln!(
            f,
            "lambda raw {:.4}, crisp {:.4}, pruned {:.4}, final {:.4} (tau {})",
            self.lambda_raw, self.lambda_crisp, self.lambda_pruned, self.lambda_final, self.tau
        )?;
        write!(f, "{} ~{:.4} {}{}", self.output, self.lambda_final, self.formula, if self.accepted { "" } else { "  [below threshold]" })
    }
}

#[derive(Debug, Clone)]
pub struct Extraction {
    pub formula: Formula,
    /// Exp similarity between the formula and the data.
    pub lambda: f64,
    pub network: CastroNetwork,
    pub report: TrainReport,
}

fn formula_lambda(f: &Formula, data: &TrainData) -> Result<f64> {
    let pred: Vec<Vec<f64>> = data.x.iter().map(|x| f.eval_f64(&data.inputs, x).map(|v| vec![v])).collect::<Result<_>>()?;
    Ok(data.similarity(&pred, SimilarityMode::Exp))
}

fn run_restart(hidden: &[usize], data: &TrainData, cfg: &TrainConfig, stream: u64, restart: usize) -> Result<RestartOutcome> {
    let trained = train_restart(hidden, data, cfg, stream)?;
    let crisp = crisp_crystallize(&trained.net);
    let lambda_crisp = data_lambda(&crisp, data)?;
    let pruned = obs_prune(&crisp, data, cfg.obs_tolerance)?;
    let lambda_pruned = data_lambda(&pruned.net, data)?;
    let tr = network_to_formula(&pruned.net, cfg.n)?;
    let lambda_final = formula_lambda(&tr.formula, data)?;
    Ok(RestartOutcome {
        restart,
        epochs: trained.epochs,
        lambda_raw: trained.lambda,
        lambda_crisp,
        lambda_pruned,
        lambda_translation: tr.lambda,
        lambda_final,
        pruned_weights: pruned.removed.len(),
        approximated: tr.approximated,
        formula: tr.formula.to_string(),
        eligible: trained.lambda >= cfg.tau && lambda_crisp >= cfg.tau,
        net: Some(pruned.net),
        parsed: Some(tr.formula),
    })
}

/// Data to formula: train with smooth crystallization, crystallize, prune,
/// translate (approximating unrepresentable neurons) and score against the
/// data. Topologies are tried in order until a restart whose raw and crisp
/// fits reach `tau` yields a formula that does too.
pub fn reverse_engineer(data: &TrainData, cfg: &TrainConfig) -> Result<Extraction> {
    cfg.validate()?;
    if data.outputs.len() != 1 {
        return Err(Error::Shape(format!("extraction targets one output, data has {}", data.outputs.len())));
    }
    if data.is_empty() {
        return Err(Error::Training("no data".into()));
    }
    if data.n != cfg.n {
        return Err(Error::ResolutionMismatch(cfg.n, data.n));
    }
    let per_topology = cfg.restarts_for(data.inputs.len());
    let mut attempts: Vec<TopologyAttempt> = Vec::new();
    let mut best: Option<(usize, usize, (bool, f64))> = None;
    for (t, hidden) in cfg.topologies.iter().enumerate() {
        let restarts: Vec<RestartOutcome> = (0..per_topology)
            .into_par_iter()
            .map(|r| run_restart(hidden, data, cfg, ((t as u64) << 32) | r as u64, r))
            .collect::<Result<_>>()?;
        for (r, out) in restarts.iter().enumerate() {
            let key = (out.eligible, out.lambda_final);
            if best.as_ref().is_none_or(|b| key > b.2) {
                best = Some((t, r, key));
            }
        }
        attempts.push(TopologyAttempt { hidden: hidden.clone(), restarts });
        if let Some((_, _, (true, l))) = best {
            if l >= cfg.tau {
                break;
            }
        }
    }
    let (bt, br, _) = best.ok_or_else(|| Error::Training("no restarts ran".into()))?;
    let chosen = attempts[bt].restarts[br].clone();
    let report = TrainReport {
        output: data.outputs[0].clone(),
        inputs: data.inputs.clone(),
        n: data.n,
        distinct_rows: data.len(),
        tau: cfg.tau,
        seed: cfg.seed,
        hidden: attempts[bt].hidden.clone(),
        restart: chosen.restart,
        restarts_used: attempts.len() * per_topology,
        epochs: chosen.epochs,
        lambda_raw: chosen.lambda_raw,
        lambda_crisp: chosen.lambda_crisp,
        lambda_pruned: chosen.lambda_pruned,
        lambda_final: chosen.lambda_final,
        formula: chosen.formula.clone(),
        accepted: chosen.eligible && chosen.lambda_final >= cfg.tau,
        attempts,
    };
    Ok(Extraction {
        formula: chosen.parsed.unwrap(),
        lambda: chosen.lambda_final,
        network: chosen.net.unwrap(),
        report,
    })
}
