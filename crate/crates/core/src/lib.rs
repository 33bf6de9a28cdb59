//! Łukasiewicz logic on finite truth-value sets, fuzzy relational views,
//! crisp piecewise-linear networks that translate to formulas, formula
//! extraction from data, Ω-automata and a small specification checker.

// relation and matrix code indexes several arrays by the same variable
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod logic;
pub mod relation;

pub use error::{Error, Result};
pub mod network;
pub mod automata;
pub mod fixtures;
pub mod trainer;
pub mod speckit;
