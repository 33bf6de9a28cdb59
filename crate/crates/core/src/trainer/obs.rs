use super::crystal::crisp_crystallize;
use super::lm::{normal_equations, regularised_inverse, sse};
use super::TrainData;
use crate::error::Result;
use crate::network::CastroNetwork;
use nalgebra::DMatrix;

/// Saliency `L_q = ½·w_q² / [H⁻¹]_qq` of every nonzero weight, with
/// `H = JᵀJ + εI`. Biases are never candidates.
pub fn saliencies(net: &CastroNetwork, data: &TrainData) -> Result<Vec<(usize, f64)>> {
    let (jtj, _, _) = normal_equations(net, data);
    let hinv = regularised_inverse(&jtj)?;
    Ok(candidates(net, &hinv))
}

fn candidates(net: &CastroNetwork, hinv: &DMatrix<f64>) -> Vec<(usize, f64)> {
    let p = net.parameters();
    let mut out: Vec<(usize, f64)> = (0..p.len())
        .filter(|&q| p[q] != 0.0 && !net.is_bias_parameter(q))
        .map(|q| (q, 0.5 * p[q] * p[q] / hinv[(q, q)]))
        .collect();
    out.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    out
}

#[derive(Debug, Clone)]
pub struct Pruned {
    pub net: CastroNetwork,
    /// Flat indices of the removed weights, in removal order.
    pub removed: Vec<usize>,
    pub sse_before: f64,
    pub sse_after: f64,
}

/// Repeatedly remove the weight whose OBS update keeps the SSE within
/// `tolerance` of the starting network's, trying candidates in ascending
/// saliency. Each update `Δw = −(w_q / [H⁻¹]_qq)·H⁻¹e_q` is followed by crisp
/// crystallization, so the result stays crisp; if the compensated update
/// fails the test, plain removal of `w_q` is tried before moving on.
pub fn obs_prune(net: &CastroNetwork, data: &TrainData, tolerance: f64) -> Result<Pruned> {
    let start = sse(net, data)?;
    let mut net = net.clone();
    let mut removed = Vec::new();
    let mut current = start;
    'outer: loop {
        let (jtj, _, _) = normal_equations(&net, data);
        let hinv = regularised_inverse(&jtj)?;
        let p = net.parameters();
        for (q, _) in candidates(&net, &hinv) {
            let scale = p[q] / hinv[(q, q)];
            let compensated: Vec<f64> = (0..p.len()).map(|i| if i == q { 0.0 } else { p[i] - scale * hinv[(i, q)] }).collect();
            let mut plain = p.clone();
            plain[q] = 0.0;
            for attempt in [compensated, plain] {
                let cand = crisp_crystallize(&net.with_parameters(&attempt)?);
                let s = sse(&cand, data)?;
                if s - start <= tolerance {
                    net = cand;
                    current = s;
                    removed.push(q);
                    continue 'outer;
                }
            }
        }
        break;
    }
    Ok(Pruned { net, removed, sse_before: start, sse_after: current })
}
