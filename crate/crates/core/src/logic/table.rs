use super::{Formula, TruthValue};
use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

/// How two tables of truth values are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SimilarityMode {
    /// `exp(-mean |a - b|)`.
    #[default]
    Exp,
    /// Minimum of `a ⇔ b`.
    Inf,
    /// `⊗`-fold of `a ⇔ b`.
    And,
}

impl FromStr for SimilarityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exp" => Ok(SimilarityMode::Exp),
            "inf" => Ok(SimilarityMode::Inf),
            "and" => Ok(SimilarityMode::And),
            other => Err(Error::InvalidValue(format!("similarity mode `{other}`"))),
        }
    }
}

impl fmt::Display for SimilarityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SimilarityMode::Exp => "exp",
            SimilarityMode::Inf => "inf",
            SimilarityMode::And => "and",
        })
    }
}

/// Exhaustive table of a function `S_n^m -> S_n`, row-major with the first
/// variable varying slowest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    pub variables: Vec<String>,
    pub n: u32,
    pub entries: Vec<TruthValue>,
}

impl TruthTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.entries.iter().map(|v| v.to_f64()).collect()
    }

    /// Build a table from a function of the numerators of each grid point.
    pub fn from_fn(variables: Vec<String>, n: u32, f: impl Fn(&[u32]) -> TruthValue) -> Self {
        let entries = grid_points(variables.len(), n).map(|p| f(&p)).collect();
        TruthTable { variables, n, entries }
    }
}

/// Numerator vectors of `S_n^m` in row-major order.
pub fn grid_points(m: usize, n: u32) -> impl Iterator<Item = Vec<u32>> {
    let total = (n as usize + 1).pow(m as u32);
    (0..total).map(move |mut idx| {
        let mut p = vec![0; m];
        for slot in p.iter_mut().rev() {
            *slot = (idx % (n as usize + 1)) as u32;
            idx /= n as usize + 1;
        }
        p
    })
}

/// Tabulate `f` over its variables (first-occurrence order) on `S_n`.
pub fn truth_subtable(f: &Formula, n: u32) -> TruthTable {
    truth_subtable_over(f, &f.variables(), n).expect("all variables are listed")
}

/// Tabulate `f` over an explicit variable order; extra variables are allowed.
pub fn truth_subtable_over(f: &Formula, vars: &[String], n: u32) -> Result<TruthTable> {
    let mut entries = Vec::new();
    for p in grid_points(vars.len(), n) {
        let lookup = |name: &str| {
            vars.iter().position(|v| v == name).map(|i| TruthValue::new(p[i], n).unwrap())
        };
        entries.push(f.eval_with(&lookup, Some(n))?);
    }
    Ok(TruthTable { variables: vars.to_vec(), n, entries })
}

/// `exp` similarity of two tables over the same grid.
pub fn exp_similarity(a: &TruthTable, b: &TruthTable) -> Result<f64> {
    similarity(a, b, SimilarityMode::Exp)
}

pub fn similarity(a: &TruthTable, b: &TruthTable, mode: SimilarityMode) -> Result<f64> {
    if a.variables != b.variables || a.n != b.n || a.len() != b.len() {
        return Err(Error::Shape(format!(
            "tables over {:?}/S_{} and {:?}/S_{}",
            a.variables, a.n, b.variables, b.n
        )));
    }
    if mode == SimilarityMode::And {
        // exact fold to avoid drift on long tables
        let mut acc = TruthValue::one(a.n);
        for (x, y) in a.entries.iter().zip(&b.entries) {
            acc = acc.fusion(x.equivalence(*y)?)?;
        }
        return Ok(acc.to_f64());
    }
    similarity_f64(&a.as_f64(), &b.as_f64(), mode)
}

/// Similarity of two real vectors with entries in `[0, 1]`.
pub fn similarity_f64(a: &[f64], b: &[f64], mode: SimilarityMode) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Shape(format!("lengths {} and {}", a.len(), b.len())));
    }
    if a.is_empty() {
        return Ok(1.0);
    }
    let diffs = a.iter().zip(b).map(|(x, y)| (x - y).abs());
    Ok(match mode {
        SimilarityMode::Exp => (-diffs.sum::<f64>() / a.len() as f64).exp(),
        SimilarityMode::Inf => diffs.fold(1.0, |m, d| f64::min(m, 1.0 - d)),
        SimilarityMode::And => diffs.fold(1.0, |acc, d| (acc - d).max(0.0)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn tv(k: u32, n: u32) -> TruthValue {
        TruthValue::new(k, n).unwrap()
    }

    fn table(vals: &[u32], n: u32) -> TruthTable {
        TruthTable { variables: vec!["x".into()], n, entries: vals.iter().map(|&k| tv(k, n)).collect() }
    }

    #[test]
    fn subtable_examples() {
        let t = truth_subtable(&parse_formula("x").unwrap(), 1);
        assert_eq!(t.entries, vec![tv(0, 1), tv(1, 1)]);
        let t = truth_subtable(&parse_formula("x * y").unwrap(), 1);
        assert_eq!(t.entries, vec![tv(0, 1), tv(0, 1), tv(0, 1), tv(1, 1)]);
        let t = truth_subtable(&parse_formula("x + y").unwrap(), 2);
        // oracle: min(1, x + y) enumerated directly
        let mut expect = vec![];
        for x in 0..=2u32 {
            for y in 0..=2u32 {
                expect.push(tv((x + y).min(2), 2));
            }
        }
        assert_eq!(t.entries, expect);
        assert_eq!(t.len(), 9);
    }

    #[test]
    fn similarity_examples() {
        let a = table(&[0, 1], 1);
        let b = table(&[1, 0], 1);
        assert_eq!(exp_similarity(&a, &a).unwrap(), 1.0);
        assert!((exp_similarity(&a, &b).unwrap() - (-1f64).exp()).abs() < 1e-12);
        assert_eq!(similarity(&table(&[0, 2], 2), &table(&[0, 1], 2), SimilarityMode::Inf).unwrap(), 0.5);
        assert_eq!(similarity(&table(&[3, 3], 4), &table(&[2, 2], 4), SimilarityMode::And).unwrap(), 0.5);
        let c = TruthTable { variables: vec!["x".into(), "y".into(), "z".into()], n: 1, entries: vec![tv(0, 1); 8] };
        let mut d = c.clone();
        d.entries[5] = tv(1, 1);
        assert!((exp_similarity(&c, &d).unwrap() - (-0.125f64).exp()).abs() < 1e-12);
        assert!(exp_similarity(&a, &c).is_err());
    }
}
