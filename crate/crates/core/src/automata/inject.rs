use super::{FuzzyWord, OmegaAutomaton};
use crate::error::Result;
use crate::logic::{Formula, TruthValue, Valuation};
use std::collections::BTreeMap;

/// Automaton computing a formula, with the iteration count after which the
/// output state holds the value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Injection {
    pub automaton: OmegaAutomaton,
    pub iterations: usize,
    pub output: usize,
    pub variables: Vec<String>,
}

impl Injection {
    /// Word feeding `env` at position 1 followed by zero signs.
    pub fn word(&self, env: &Valuation) -> FuzzyWord {
        let n = self.automaton.n;
        let mut positions = vec![BTreeMap::new(); self.iterations];
        if let Some(first) = positions.first_mut() {
            for v in &self.variables {
                first.insert(format!("{v}=1"), env.get(v).copied().unwrap_or(TruthValue::zero(n)));
            }
        }
        FuzzyWord { positions }
    }

    /// Run the automaton on `env` and read the output state.
    pub fn evaluate(&self, env: &Valuation) -> Result<TruthValue> {
        Ok(self.automaton.run(&self.word(env))?.last[self.output])
    }
}

struct Builder {
    states: Vec<String>,
    /// (src, dst, label)
    edges: Vec<(usize, usize, bool)>,
    vars: BTreeMap<String, usize>,
    taken: Vec<String>,
    counter: usize,
}

impl Builder {
    fn fresh(&mut self) -> usize {
        loop {
            self.counter += 1;
            let name = format!("q{}", self.counter);
            if !self.taken.contains(&name) {
                self.states.push(name);
                return self.states.len() - 1;
            }
        }
    }

    /// New state fed by `(src, label)` pairs.
    fn gate(&mut self, sources: &[(usize, bool)]) -> usize {
        let s = self.fresh();
        for &(src, label) in sources {
            self.edges.push((src, s, label));
        }
        s
    }

    /// Delay `state` from depth `from` to depth `to`.
    fn pad(&mut self, mut state: usize, from: usize, to: usize) -> usize {
        for _ in from..to {
            state = self.gate(&[(state, true)]);
        }
        state
    }

    /// Compile `f`; returns the state holding its value and that state's depth.
    fn compile(&mut self, f: &Formula) -> (usize, usize) {
        match f {
            Formula::Var(v) => (self.vars[v], 0),
            Formula::Zero => (self.gate(&[]), 0),
            Formula::One => {
                let z = self.gate(&[]);
                (self.gate(&[(z, false)]), 1)
            }
            Formula::Neg(c) => {
                let (s, d) = self.compile(c);
                (self.gate(&[(s, false)]), d + 1)
            }
            Formula::StrongSum(a, b) => self.binary(a, b, true, true),
            Formula::Implies(a, b) => self.binary(a, b, false, true),
            Formula::Fusion(a, b) => {
                // a ⊗ b = ¬(¬a ⊕ ¬b)
                let (s, d) = self.binary(a, b, false, false);
                (self.gate(&[(s, false)]), d + 1)
            }
            Formula::Meet(..) | Formula::Join(..) => unreachable!("lattice operators are rewritten first"),
        }
    }

    fn binary(&mut self, a: &Formula, b: &Formula, la: bool, lb: bool) -> (usize, usize) {
        let (sa, da) = self.compile(a);
        let (sb, db) = self.compile(b);
        let mut depth = da.max(db);
        // one matrix entry cannot carry the same edge twice
        if da == db && sa == sb && la == lb {
            depth += 1;
        }
        let sa = self.pad(sa, da, depth);
        let sb = self.pad(sb, db, depth);
        (self.gate(&[(sa, la), (sb, lb)]), depth + 1)
    }
}

/// Compile `f` into an automaton over signs `x=1`, one input state per
/// variable. Subformulas at tree depth `d` are ready after `d` steps; shorter
/// branches are padded with delay states.
pub fn formula_to_automaton(f: &Formula, n: u32) -> Injection {
    let f = f.without_lattice_ops();
    let variables = f.variables();
    let mut b = Builder {
        states: variables.clone(),
        edges: vec![],
        vars: variables.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect(),
        taken: variables.clone(),
        counter: 0,
    };
    let (mut out, mut depth) = b.compile(&f);
    if depth == 0 {
        out = b.gate(&[(out, true)]);
        depth = 1;
    }
    let mut aut = OmegaAutomaton::empty(b.states, n);
    aut.inputs = variables.iter().enumerate().map(|(i, v)| (i, format!("{v}=1"))).collect();
    aut.outputs = vec![out];
    for (src, dst, label) in b.edges {
        if label {
            aut.m1[dst][src] = true;
        } else {
            aut.m0[dst][src] = true;
        }
    }
    Injection { automaton: aut, iterations: depth, output: out, variables }
}
