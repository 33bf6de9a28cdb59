#![allow(dead_code)]

use luka::logic::{grid_points, Formula, TruthValue, Valuation};
use proptest::prelude::*;

/// Random formulas over `x0..x{vars-1}` with at most `depth` connective levels.
pub fn formula(vars: usize, depth: u32) -> impl Strategy<Value = Formula> {
    let names: Vec<String> = (0..vars).map(|i| format!("x{i}")).collect();
    let leaf = prop_oneof![
        8 => proptest::sample::select(names).prop_map(Formula::var),
        1 => Just(Formula::Zero),
        1 => Just(Formula::One),
    ];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::neg),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::fusion(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::strong_sum(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::meet(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::join(a, b)),
        ]
    })
}

/// Every assignment of `vars` over `S_n`, first variable slowest.
pub fn valuations(vars: &[String], n: u32) -> Vec<Valuation> {
    grid_points(vars.len(), n)
        .map(|p| vars.iter().cloned().zip(p.iter().map(|&k| TruthValue::new(k, n).unwrap())).collect())
        .collect()
}
