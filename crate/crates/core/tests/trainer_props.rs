use luka::network::{CastroNetwork, Layer};
use luka::trainer::{representation_error, soft_crystallize, soft_crystallize_network, ErrorConvention};
use proptest::prelude::*;

fn dist(w: f64) -> f64 {
    (w - w.round()).abs()
}

fn net(hidden: usize) -> impl Strategy<Value = CastroNetwork> {
    let params = 3 * hidden + hidden + 1;
    proptest::collection::vec(-3.0f64..3.0, params).prop_map(move |p| {
        let layers = vec![
            Layer { weights: vec![vec![0.0; 2]; hidden], biases: vec![0.0; hidden] },
            Layer { weights: vec![vec![0.0; hidden]], biases: vec![0.0] },
        ];
        CastroNetwork::new(vec!["x".into(), "y".into()], layers).unwrap().with_parameters(&p).unwrap()
    })
}

#[test]
fn integers_are_fixed_points() {
    for w in -6..=6 {
        for e in 1..=4 {
            assert_eq!(soft_crystallize(w as f64, e), w as f64);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn upsilon_moves_toward_the_nearest_integer(w in -3.0f64..3.0) {
        let frac = w.abs().fract();
        prop_assume!(frac > 1e-9 && (frac - 0.5).abs() > 1e-9);
        let u = soft_crystallize(w, 2);
        prop_assert!(dist(u) < dist(w), "{w} -> {u}");
        prop_assert_eq!(u.round(), w.round());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn twenty_iterations_crystallize_a_network(mut n in net(3)) {
        prop_assume!(n.parameters().iter().all(|w| (w.abs().fract() - 0.5).abs() > 1e-3));
        let before = representation_error(&n, ErrorConvention::Nearest);
        for _ in 0..20 {
            n = soft_crystallize_network(&n, 2);
        }
        let after = representation_error(&n, ErrorConvention::Nearest);
        prop_assert!(after <= before);
        prop_assert!(after < 1e-6, "{after}");
    }
}
