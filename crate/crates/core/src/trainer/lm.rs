use super::crystal::soft_crystallize;
use super::{TrainConfig, TrainData};
use crate::error::{Error, Result};
use crate::logic::SimilarityMode;
use crate::network::{psi, CastroNetwork, Layer};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const EPS: f64 = 1e-8;

/// Subgradient of ψ: 1 on the closed unit interval, 0 outside.
fn dpsi(z: f64) -> f64 {
    if (0.0..=1.0).contains(&z) {
        1.0
    } else {
        0.0
    }
}

/// Outputs and the gradient of every output with respect to all parameters.
pub(crate) fn row_jacobian(net: &CastroNetwork, x: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let mut acts = vec![x.to_vec()];
    let mut zs = Vec::with_capacity(net.layers.len());
    for layer in &net.layers {
        let prev = acts.last().unwrap();
        let z: Vec<f64> = layer
            .weights
            .iter()
            .zip(&layer.biases)
            .map(|(row, b)| row.iter().zip(prev).map(|(w, a)| w * a).sum::<f64>() + b)
            .collect();
        acts.push(z.iter().map(|&v| psi(v)).collect());
        zs.push(z);
    }
    let mut offsets = Vec::with_capacity(net.layers.len());
    let mut off = 0;
    for l in &net.layers {
        offsets.push(off);
        off += l.width() * (l.weights.first().map_or(0, |r| r.len()) + 1);
    }
    let p = off;
    let last = net.layers.len() - 1;
    let outputs = acts.last().unwrap().clone();
    let grads = (0..net.outputs())
        .map(|o| {
            let mut g = vec![0.0; p];
            let mut delta = vec![0.0; net.layers[last].width()];
            delta[o] = dpsi(zs[last][o]);
            for l in (0..=last).rev() {
                let layer = &net.layers[l];
                let fan_in = acts[l].len();
                let stride = fan_in + 1;
                for (i, &d) in delta.iter().enumerate() {
                    if d == 0.0 {
                        continue;
                    }
                    let base = offsets[l] + i * stride;
                    for (j, a) in acts[l].iter().enumerate() {
                        g[base + j] = d * a;
                    }
                    g[base + fan_in] = d;
                }
                if l > 0 {
                    delta = (0..fan_in)
                        .map(|j| {
                            let s: f64 = delta.iter().zip(&layer.weights).map(|(d, row)| d * row[j]).sum();
                            s * dpsi(zs[l - 1][j])
                        })
                        .collect();
                }
            }
            g
        })
        .collect();
    (outputs, grads)
}

/// Weighted `JᵀJ`, `Jᵀr` and SSE over the data, with `r = output − target`.
pub(crate) fn normal_equations(net: &CastroNetwork, data: &TrainData) -> (DMatrix<f64>, DVector<f64>, f64) {
    let p = net.parameter_count();
    let mut jtj = DMatrix::zeros(p, p);
    let mut jtr = DVector::zeros(p);
    let mut total = 0.0;
    for ((x, y), w) in data.x.iter().zip(&data.y).zip(&data.weight) {
        let (out, grads) = row_jacobian(net, x);
        for ((o, t), g) in out.iter().zip(y).zip(&grads) {
            let r = o - t;
            total += w * r * r;
            let nz: Vec<usize> = (0..p).filter(|&i| g[i] != 0.0).collect();
            for &i in &nz {
                jtr[i] += w * g[i] * r;
                for &j in &nz {
                    jtj[(i, j)] += w * g[i] * g[j];
                }
            }
        }
    }
    (jtj, jtr, total)
}

/// Solve `a·x = b`, regularising with `εI` when `a` is not positive definite.
pub(crate) fn solve_spd(a: DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    if let Some(ch) = a.clone().cholesky() {
        return Ok(ch.solve(b));
    }
    let n = a.nrows();
    let reg = a + DMatrix::identity(n, n) * EPS;
    if let Some(ch) = reg.clone().cholesky() {
        return Ok(ch.solve(b));
    }
    reg.lu().solve(b).ok_or_else(|| Error::Training("singular normal equations".into()))
}

/// Inverse of `a + εI`.
pub(crate) fn regularised_inverse(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let reg = a + DMatrix::identity(n, n) * EPS;
    match reg.clone().cholesky() {
        Some(ch) => Ok(ch.inverse()),
        None => reg.try_inverse().ok_or_else(|| Error::Training("singular Hessian".into())),
    }
}

pub fn sse(net: &CastroNetwork, data: &TrainData) -> Result<f64> {
    let mut total = 0.0;
    for ((x, y), w) in data.x.iter().zip(&data.y).zip(&data.weight) {
        let out = net.forward(x)?;
        total += w * out.iter().zip(y).map(|(o, t)| (o - t) * (o - t)).sum::<f64>();
    }
    Ok(total)
}

pub(crate) fn predictions(net: &CastroNetwork, data: &TrainData) -> Result<Vec<Vec<f64>>> {
    data.x.iter().map(|x| net.forward(x)).collect()
}

/// Exp similarity between the network's outputs and the data.
pub(crate) fn data_lambda(net: &CastroNetwork, data: &TrainData) -> Result<f64> {
    Ok(data.similarity(&predictions(net, data)?, SimilarityMode::Exp))
}

/// Damped step from precomputed normal equations, followed by Υ.
fn propose(net: &CastroNetwork, jtj: &DMatrix<f64>, jtr: &DVector<f64>, mu: f64, exponent: i32) -> Result<CastroNetwork> {
    let mut a = jtj.clone();
    for i in 0..a.nrows() {
        a[(i, i)] += mu * jtj[(i, i)];
    }
    let delta = solve_spd(a, jtr)?;
    let p: Vec<f64> = net
        .parameters()
        .iter()
        .zip(delta.iter())
        .map(|(w, d)| soft_crystallize(w - d, exponent))
        .collect();
    net.with_parameters(&p)
}

#[derive(Debug, Clone)]
pub struct LmStep {
    /// The proposal if accepted, otherwise the input network.
    pub net: CastroNetwork,
    pub sse: f64,
    pub accepted: bool,
    /// Crystallized update before the accept test.
    pub proposal: CastroNetwork,
}

/// One modified LM update: `w ← Υ(w − [JᵀJ + μ·diag(JᵀJ)]⁻¹ Jᵀe)`,
/// kept only if it lowers the SSE.
pub fn lm_step(net: &CastroNetwork, data: &TrainData, mu: f64, exponent: i32) -> Result<LmStep> {
    if data.is_empty() {
        return Err(Error::Training("no data".into()));
    }
    let (jtj, jtr, before) = normal_equations(net, data);
    let proposal = propose(net, &jtj, &jtr, mu, exponent)?;
    let after = sse(&proposal, data)?;
    let accepted = after < before;
    Ok(LmStep {
        net: if accepted { proposal.clone() } else { net.clone() },
        sse: if accepted { after } else { before },
        accepted,
        proposal,
    })
}

/// Uniform weights in [−1, 1] and biases in [−½, ½].
pub fn random_network(inputs: &[String], hidden: &[usize], outputs: usize, rng: &mut impl Rng) -> CastroNetwork {
    let mut layers = Vec::new();
    let mut fan_in = inputs.len();
    for &width in hidden.iter().chain(std::iter::once(&outputs)) {
        let weights = (0..width).map(|_| (0..fan_in).map(|_| rng.gen_range(-1.0..=1.0)).collect()).collect();
        let biases = (0..width).map(|_| rng.gen_range(-0.5..=0.5)).collect();
        layers.push(Layer { weights, biases });
        fan_in = width;
    }
    CastroNetwork::new(inputs.to_vec(), layers).expect("consistent shapes")
}

/// A trained network with its fit statistics.
#[derive(Debug, Clone)]
pub struct Trained {
    pub net: CastroNetwork,
    pub sse: f64,
    /// Exp similarity against the data.
    pub lambda: f64,
    pub epochs: usize,
    pub restart: usize,
}

/// Train one randomly initialised network. The generator is the master
/// seed's ChaCha stream number `stream`.
pub fn train_restart(hidden: &[usize], data: &TrainData, cfg: &TrainConfig, stream: u64) -> Result<Trained> {
    if data.is_empty() {
        return Err(Error::Training("no data".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);
    let mut net = random_network(&data.inputs, hidden, data.outputs.len(), &mut rng);
    let mut mu = cfg.mu_init;
    let (mut jtj, mut jtr, mut current) = normal_equations(&net, data);
    let mut epochs = 0;
    while epochs < cfg.max_epochs && current > cfg.sse_tolerance {
        epochs += 1;
        let candidate = propose(&net, &jtj, &jtr, mu, cfg.exponent)?;
        let s = sse(&candidate, data)?;
        if s < current {
            net = candidate;
            mu = (mu / cfg.mu_factor).max(1e-20);
            (jtj, jtr, current) = normal_equations(&net, data);
        } else {
            mu *= cfg.mu_factor;
            if mu > cfg.mu_max {
                break;
            }
        }
    }
    let lambda = data_lambda(&net, data)?;
    Ok(Trained { net, sse: current, lambda, epochs, restart: stream as usize })
}

/// Best of `cfg.restarts_for(inputs)` restarts by similarity, ties going to
/// the lower restart index. Restarts run in parallel; the choice does not
/// depend on scheduling.
pub fn train(hidden: &[usize], data: &TrainData, cfg: &TrainConfig) -> Result<Trained> {
    let runs: Vec<Trained> = (0..cfg.restarts_for(data.inputs.len()) as u64)
        .into_par_iter()
        .map(|r| train_restart(hidden, data, cfg, r))
        .collect::<Result<_>>()?;
    runs.into_iter()
        .reduce(|best, t| if t.lambda > best.lambda { t } else { best })
        .ok_or_else(|| Error::Training("zero restarts configured".into()))
}
