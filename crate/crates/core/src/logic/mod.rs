//! Exact finite-valued Łukasiewicz logic.
//!
//! Values live in `S_n = {0, 1/n, ..., 1}` and are stored as integer
//! numerators over a shared denominator, so every connective is exact.

mod formula;
mod parser;
mod table;

pub use formula::{Formula, Valuation};
pub use parser::parse_formula;
pub use table::{
    exp_similarity, grid_points, similarity, similarity_f64, truth_subtable, truth_subtable_over,
    SimilarityMode,
    TruthTable,
};

use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

/// A truth value `numerator / denominator` in `S_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruthValue {
    numerator: u32,
    denominator: u32,
}

impl TruthValue {
    pub fn new(numerator: u32, denominator: u32) -> Result<Self> {
        if denominator == 0 || numerator > denominator {
            return Err(Error::InvalidValue(format!("{numerator}/{denominator}")));
        }
        Ok(TruthValue { numerator, denominator })
    }

    pub fn zero(n: u32) -> Self {
        TruthValue { numerator: 0, denominator: n }
    }

    pub fn one(n: u32) -> Self {
        TruthValue { numerator: n, denominator: n }
    }

    pub fn from_bool(b: bool, n: u32) -> Self {
        if b {
            Self::one(n)
        } else {
            Self::zero(n)
        }
    }

    pub fn numerator(self) -> u32 {
        self.numerator
    }

    pub fn denominator(self) -> u32 {
        self.denominator
    }

    pub fn to_f64(self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    pub fn is_zero(self) -> bool {
        self.numerator == 0
    }

    pub fn is_one(self) -> bool {
        self.numerator == self.denominator
    }

    /// Nearest value of `S_n` to a real number, clamped to `[0, 1]`.
    pub fn nearest(x: f64, n: u32) -> Self {
        let k = (x.clamp(0.0, 1.0) * n as f64).round() as u32;
        TruthValue { numerator: k.min(n), denominator: n }
    }

    /// Re-express the value over denominator `n`; fails if it is not in `S_n`.
    pub fn with_resolution(self, n: u32) -> Result<Self> {
        let scaled = self.numerator as u64 * n as u64;
        if n == 0 || !scaled.is_multiple_of(self.denominator as u64) {
            return Err(Error::ResolutionMismatch(self.denominator, n));
        }
        Ok(TruthValue { numerator: (scaled / self.denominator as u64) as u32, denominator: n })
    }

    /// Parse `k/n` or a decimal and express it over denominator `n`.
    pub fn parse_in(text: &str, n: u32) -> Result<Self> {
        let text = text.trim();
        if let Some((a, b)) = text.split_once('/') {
            let k: u32 = a.trim().parse().map_err(|_| Error::InvalidValue(text.into()))?;
            let d: u32 = b.trim().parse().map_err(|_| Error::InvalidValue(text.into()))?;
            return TruthValue::new(k, d)?.with_resolution(n);
        }
        let x: f64 = text.parse().map_err(|_| Error::InvalidValue(text.into()))?;
        let v = TruthValue::nearest(x, n);
        if !(0.0..=1.0).contains(&x) || (v.to_f64() - x).abs() > 1e-9 {
            return Err(Error::InvalidValue(format!("{text} is not in S_{n}")));
        }
        Ok(v)
    }

    fn check(self, other: Self) -> Result<u32> {
        if self.denominator != other.denominator {
            Err(Error::ResolutionMismatch(self.denominator, other.denominator))
        } else {
            Ok(self.denominator)
        }
    }

    fn make(&self, k: i64) -> Self {
        TruthValue { numerator: k as u32, denominator: self.denominator }
    }

    /// `x ⊗ y = max(0, x + y - 1)`.
    pub fn fusion(self, other: Self) -> Result<Self> {
        let n = self.check(other)? as i64;
        Ok(self.make((self.numerator as i64 + other.numerator as i64 - n).max(0)))
    }

    /// `x ⇒ y = min(1, 1 - x + y)`.
    pub fn residuum(self, other: Self) -> Result<Self> {
        let n = self.check(other)? as i64;
        Ok(self.make((n - self.numerator as i64 + other.numerator as i64).min(n)))
    }

    /// `x ⊕ y = min(1, x + y)`.
    pub fn strong_sum(self, other: Self) -> Result<Self> {
        let n = self.check(other)? as i64;
        Ok(self.make((self.numerator as i64 + other.numerator as i64).min(n)))
    }

    pub fn negation(self) -> Self {
        self.make((self.denominator - self.numerator) as i64)
    }

    pub fn meet(self, other: Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.min(other))
    }

    pub fn join(self, other: Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.max(other))
    }

    /// Biconditional `x ⇔ y = 1 - |x - y|`.
    pub fn equivalence(self, other: Self) -> Result<Self> {
        let n = self.check(other)? as i64;
        Ok(self.make(n - (self.numerator as i64 - other.numerator as i64).abs()))
    }
}

impl fmt::Display for TruthValue {
    /// Reduced fraction, `0` and `1` printed bare.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.numerator == 0 {
            return write!(f, "0");
        }
        if self.numerator == self.denominator {
            return write!(f, "1");
        }
        let g = gcd(self.numerator, self.denominator);
        write!(f, "{}/{}", self.numerator / g, self.denominator / g)
    }
}

impl FromStr for TruthValue {
    type Err = Error;

    /// Parse `k/n` keeping `n` as the resolution; decimals are rejected
    /// because they carry no resolution.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s.trim().split_once('/').ok_or_else(|| Error::InvalidValue(s.into()))?;
        let k = a.trim().parse().map_err(|_| Error::InvalidValue(s.into()))?;
        let d = b.trim().parse().map_err(|_| Error::InvalidValue(s.into()))?;
        TruthValue::new(k, d)
    }
}

pub(crate) fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// Every value of `S_n` in increasing order.
pub fn values(n: u32) -> impl Iterator<Item = TruthValue> {
    (0..=n).map(move |k| TruthValue { numerator: k, denominator: n })
}
