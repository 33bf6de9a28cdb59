use crate::network::CastroNetwork;
use std::f64::consts::FRAC_PI_2;

/// Smooth crystallization `Υ_e(w) = sign(w)·(cos((1 − frac|w|)·π/2)^e + ⌊|w|⌋)`.
/// Integers are exact fixed points; fractional parts are pushed toward 0 or 1.
pub fn soft_crystallize(w: f64, exponent: i32) -> f64 {
    let a = w.abs();
    let fl = a.floor();
    let frac = a - fl;
    if frac == 0.0 {
        return w;
    }
    w.signum() * (((1.0 - frac) * FRAC_PI_2).cos().powi(exponent) + fl)
}

/// Apply [`soft_crystallize`] to every weight and bias.
pub fn soft_crystallize_network(net: &CastroNetwork, exponent: i32) -> CastroNetwork {
    let p: Vec<f64> = net.parameters().into_iter().map(|w| soft_crystallize(w, exponent)).collect();
    net.with_parameters(&p).expect("same parameter count")
}

/// How far a parameter is from being an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ErrorConvention {
    /// Distance to the nearest integer.
    #[default]
    Nearest,
    /// `w − ⌊w⌋`, which is not monotone under Υ above one half.
    Literal,
}

/// Summed distance of all weights and biases from integrality.
pub fn representation_error(net: &CastroNetwork, convention: ErrorConvention) -> f64 {
    net.parameters()
        .into_iter()
        .map(|w| match convention {
            ErrorConvention::Nearest => (w - w.round()).abs(),
            ErrorConvention::Literal => w - w.floor(),
        })
        .sum()
}

/// Round weights into {−1, 0, 1} and biases to integers.
pub fn crisp_crystallize(net: &CastroNetwork) -> CastroNetwork {
    let p: Vec<f64> = net
        .parameters()
        .into_iter()
        .enumerate()
        .map(|(i, w)| {
            let r = w.round();
            let r = if net.is_bias_parameter(i) { r } else { r.clamp(-1.0, 1.0) };
            // normalise -0.0 so JSON and equality checks see a plain zero
            if r == 0.0 {
                0.0
            } else {
                r
            }
        })
        .collect();
    net.with_parameters(&p).expect("same parameter count")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::Layer;

    fn net(w: &[f64], b: f64) -> CastroNetwork {
        let names = (0..w.len()).map(|i| format!("x{i}")).collect();
        CastroNetwork::new(names, vec![Layer { weights: vec![w.to_vec()], biases: vec![b] }]).unwrap()
    }

    #[test]
    fn upsilon_examples() {
        for e in 1..5 {
            assert_eq!(soft_crystallize(1.0, e), 1.0);
            assert_eq!(soft_crystallize(-2.0, e), -2.0);
            assert_eq!(soft_crystallize(0.0, e), 0.0);
        }
        assert!((soft_crystallize(0.5, 2) - 0.5).abs() < 1e-15);
        let oracle = (0.05 * std::f64::consts::PI).cos().powi(2);
        assert!((soft_crystallize(0.9, 2) - oracle).abs() < 1e-15);
        assert!((soft_crystallize(0.9, 2) - 0.97553).abs() < 1e-5);
        assert!((soft_crystallize(-1.9, 2) + 1.0 + oracle).abs() < 1e-12);
    }

    #[test]
    fn representation_error_conventions() {
        assert_eq!(representation_error(&net(&[1.0, -1.0], 2.0), ErrorConvention::Nearest), 0.0);
        assert_eq!(representation_error(&net(&[0.25], 0.0), ErrorConvention::Nearest), 0.25);
        assert_eq!(representation_error(&net(&[0.75], 0.0), ErrorConvention::Nearest), 0.25);
        assert_eq!(representation_error(&net(&[0.75], 0.0), ErrorConvention::Literal), 0.75);
    }

    #[test]
    fn crisp_rounding_and_clamping() {
        let c = crisp_crystallize(&net(&[0.97, -0.04, 1.8, -2.6], 1.6));
        assert_eq!(c.layers[0].weights[0], vec![1.0, 0.0, 1.0, -1.0]);
        assert_eq!(c.layers[0].biases[0], 2.0);
        assert!(c.crisp);
        assert!(c.layers[0].weights[0][1].is_sign_positive());
    }
}
