//! Automata whose state is a vector of truth values. Each step overwrites
//! the input states with the current sign values and then computes
//! `e' = M1(e) ⊕ M0(¬e)`, where the boolean matrices select sources.

mod inject;
mod parse;
mod words;

pub use inject::{formula_to_automaton, Injection};
pub use parse::parse_automaton;
pub use words::{enumerate_words, io_dataset, read_word_csv, transition_dataset, write_word_csv, FuzzyWord, Transition};

use crate::error::{Error, Result};
use crate::logic::TruthValue;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaAutomaton {
    pub n: u32,
    pub states: Vec<String>,
    /// Input states with the sign each one reads, e.g. `(0, "a=1")`.
    pub inputs: Vec<(usize, String)>,
    pub outputs: Vec<usize>,
    /// `m0[dst][src]`: `dst` reads the negation of `src`.
    pub m0: Vec<Vec<bool>>,
    /// `m1[dst][src]`: `dst` reads `src`.
    pub m1: Vec<Vec<bool>>,
    pub e0: Vec<TruthValue>,
}

/// Outcome of [`OmegaAutomaton::run`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    /// Output-state values after the last step.
    pub output: Vec<TruthValue>,
    /// State vectors after each overwrite, before propagation.
    pub trace: Vec<Vec<TruthValue>>,
    /// State vector after the last propagation.
    pub last: Vec<TruthValue>,
}

impl OmegaAutomaton {
    /// Automaton with no edges and all-zero initial state.
    pub fn empty(states: Vec<String>, n: u32) -> Self {
        let k = states.len();
        OmegaAutomaton {
            n,
            states,
            inputs: vec![],
            outputs: vec![],
            m0: vec![vec![false; k]; k],
            m1: vec![vec![false; k]; k],
            e0: vec![TruthValue::zero(n); k],
        }
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn is_input(&self, i: usize) -> bool {
        self.inputs.iter().any(|(j, _)| *j == i)
    }

    pub fn signs(&self) -> Vec<&str> {
        self.inputs.iter().map(|(_, s)| s.as_str()).collect()
    }

    /// Structural problems, as messages. Edges into input states are errors;
    /// output states that are also inputs are only reported.
    pub fn validate(&self) -> Result<Vec<String>> {
        let k = self.states.len();
        let square = |m: &[Vec<bool>]| m.len() == k && m.iter().all(|r| r.len() == k);
        if !square(&self.m0) || !square(&self.m1) || self.e0.len() != k {
            return Err(Error::Shape(format!("matrices and initial state must cover {k} states")));
        }
        for (i, _) in &self.inputs {
            if self.m0[*i].iter().chain(&self.m1[*i]).any(|b| *b) {
                return Err(Error::Incompatible(format!("input state `{}` has incoming edges", self.states[*i])));
            }
        }
        Ok(self
            .outputs
            .iter()
            .filter(|o| self.is_input(**o))
            .map(|o| format!("output state `{}` is also an input state", self.states[*o]))
            .collect())
    }

    /// Replace input-state values with the sign values of one word position;
    /// absent signs read as `0`.
    pub fn overwrite(&self, e: &mut [TruthValue], position: &std::collections::BTreeMap<String, TruthValue>) -> Result<()> {
        for name in position.keys() {
            if !self.inputs.iter().any(|(_, s)| s == name) {
                return Err(Error::UnknownName(format!("sign `{name}`")));
            }
        }
        for (i, sign) in &self.inputs {
            let v = position.get(sign).copied().unwrap_or(TruthValue::zero(self.n));
            if v.denominator() != self.n {
                return Err(Error::ResolutionMismatch(self.n, v.denominator()));
            }
            e[*i] = v;
        }
        Ok(())
    }

    /// `e'_i = (⊕_{j ∈ M1_i} e_j) ⊕ (⊕_{j ∈ M0_i} ¬e_j)`.
    pub fn propagate(&self, e: &[TruthValue]) -> Vec<TruthValue> {
        let n = self.n;
        (0..self.states.len())
            .map(|i| {
                let mut k = 0u32;
                for j in 0..e.len() {
                    if self.m1[i][j] {
                        k += e[j].numerator();
                    }
                    if self.m0[i][j] {
                        k += n - e[j].numerator();
                    }
                }
                TruthValue::new(k.min(n), n).unwrap()
            })
            .collect()
    }

    pub fn step(&self, e: &[TruthValue], position: &std::collections::BTreeMap<String, TruthValue>) -> Result<Vec<TruthValue>> {
        if e.len() != self.states.len() {
            return Err(Error::Shape(format!("state vector has {} entries, expected {}", e.len(), self.states.len())));
        }
        let mut cur = e.to_vec();
        self.overwrite(&mut cur, position)?;
        Ok(self.propagate(&cur))
    }

    pub fn run(&self, word: &FuzzyWord) -> Result<Run> {
        let mut e = self.e0.clone();
        let mut trace = Vec::with_capacity(word.len());
        for position in &word.positions {
            self.overwrite(&mut e, position)?;
            trace.push(e.clone());
            e = self.propagate(&e);
        }
        Ok(Run { output: self.outputs.iter().map(|&o| e[o]).collect(), trace, last: e })
    }

    /// Text form accepted by [`parse_automaton`].
    pub fn to_text(&self) -> String {
        let mut s = format!("states: {}\n", self.states.join(" "));
        let ins: Vec<String> = self.inputs.iter().map(|(i, sign)| format!("{}=\"{sign}\"", self.states[*i])).collect();
        s += &format!("inputs: {}\n", ins.join(" "));
        let outs: Vec<&str> = self.outputs.iter().map(|&o| self.states[o].as_str()).collect();
        s += &format!("outputs: {}\n", outs.join(" "));
        let init: Vec<String> = self.e0.iter().map(|v| v.to_string()).collect();
        s += &format!("init: {}\n", init.join(" "));
        for (label, m) in [(0, &self.m0), (1, &self.m1)] {
            for (dst, row) in m.iter().enumerate() {
                for (src, &on) in row.iter().enumerate() {
                    if on {
                        s += &format!("{} -> {} : {label}\n", self.states[src], self.states[dst]);
                    }
                }
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn or_chain() -> OmegaAutomaton {
        // x is an input, y = x, z = x ⊕ y
        let text = "states: x y z\ninputs: x=\"x=1\"\noutputs: z\nx -> y : 1\nx -> z : 1\ny -> z : 1\n";
        parse_automaton(text, 1).unwrap()
    }

    #[test]
    fn crisp_runs_are_boolean_or() {
        let a = or_chain();
        let one = |v| BTreeMap::from([("x=1".to_string(), TruthValue::new(v, 1).unwrap())]);
        let w = FuzzyWord { positions: vec![one(1), one(0)] };
        let r = a.run(&w).unwrap();
        // step 1: y = 1, z = 1; step 2 (x = 0): y = 0, z = 0 ∨ 1
        assert_eq!(r.trace[1].iter().map(|v| v.numerator()).collect::<Vec<_>>(), vec![0, 1, 1]);
        assert_eq!(r.output[0].numerator(), 1);
        let w = FuzzyWord { positions: vec![one(0), one(0)] };
        assert_eq!(a.run(&w).unwrap().output[0].numerator(), 0);
    }

    #[test]
    fn empty_word_returns_initial_outputs() {
        let mut a = or_chain();
        a.e0[2] = TruthValue::one(1);
        assert_eq!(a.run(&FuzzyWord::default()).unwrap().output, vec![TruthValue::one(1)]);
    }

    #[test]
    fn unknown_signs_are_rejected() {
        let a = or_chain();
        let bad = BTreeMap::from([("q=1".to_string(), TruthValue::one(1))]);
        assert!(a.step(&a.e0, &bad).is_err());
    }

    #[test]
    fn text_round_trip() {
        let a = or_chain();
        assert_eq!(parse_automaton(&a.to_text(), 1).unwrap(), a);
    }
}
