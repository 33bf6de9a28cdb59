use super::TruthValue;
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

/// Variable assignment used by [`Formula::eval`].
pub type Valuation = BTreeMap<String, TruthValue>;

/// Łukasiewicz formula.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Var(String),
    Zero,
    One,
    Neg(Box<Formula>),
    Fusion(Box<Formula>, Box<Formula>),
    StrongSum(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Meet(Box<Formula>, Box<Formula>),
    Join(Box<Formula>, Box<Formula>),
}

use Formula::*;

impl Formula {
    pub fn var(name: impl Into<String>) -> Self {
        Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(f: Formula) -> Self {
        Neg(Box::new(f))
    }

    pub fn fusion(a: Formula, b: Formula) -> Self {
        Fusion(Box::new(a), Box::new(b))
    }

    pub fn strong_sum(a: Formula, b: Formula) -> Self {
        StrongSum(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Implies(Box::new(a), Box::new(b))
    }

    pub fn meet(a: Formula, b: Formula) -> Self {
        Meet(Box::new(a), Box::new(b))
    }

    pub fn join(a: Formula, b: Formula) -> Self {
        Join(Box::new(a), Box::new(b))
    }

    /// Fold a non-empty list with `⊗`, left-nested.
    pub fn fusion_all(items: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        items.into_iter().reduce(Formula::fusion)
    }

    /// Fold a non-empty list with `⊕`, left-nested.
    pub fn sum_all(items: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        items.into_iter().reduce(Formula::strong_sum)
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Var(_) | Zero | One => vec![],
            Neg(c) => vec![c],
            Fusion(a, b) | StrongSum(a, b) | Implies(a, b) | Meet(a, b) | Join(a, b) => vec![a, b],
        }
    }

    /// Distinct variable names in first-occurrence order.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        if let Var(v) = self {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        for c in self.children() {
            c.collect_vars(out);
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Number of connective nodes (negations included).
    pub fn connectives(&self) -> usize {
        match self {
            Var(_) | Zero | One => 0,
            _ => 1 + self.children().iter().map(|c| c.connectives()).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn eval(&self, env: &Valuation) -> Result<TruthValue> {
        let n = env.values().next().map(|v| v.denominator());
        self.eval_with(&|name| env.get(name).copied(), n)
    }

    /// Evaluate with a lookup closure; `n` fixes the resolution of constants
    /// when the formula has no variables.
    pub fn eval_with(
        &self,
        lookup: &dyn Fn(&str) -> Option<TruthValue>,
        n: Option<u32>,
    ) -> Result<TruthValue> {
        let n = n.unwrap_or(1);
        Ok(match self {
            Var(v) => lookup(v).ok_or_else(|| Error::UnboundVariable(v.clone()))?,
            Zero => TruthValue::zero(n),
            One => TruthValue::one(n),
            Neg(c) => c.eval_with(lookup, Some(n))?.negation(),
            Fusion(a, b) => a.eval_with(lookup, Some(n))?.fusion(b.eval_with(lookup, Some(n))?)?,
            StrongSum(a, b) => {
                a.eval_with(lookup, Some(n))?.strong_sum(b.eval_with(lookup, Some(n))?)?
            }
            Implies(a, b) => a.eval_with(lookup, Some(n))?.residuum(b.eval_with(lookup, Some(n))?)?,
            Meet(a, b) => a.eval_with(lookup, Some(n))?.meet(b.eval_with(lookup, Some(n))?)?,
            Join(a, b) => a.eval_with(lookup, Some(n))?.join(b.eval_with(lookup, Some(n))?)?,
        })
    }

    /// Real-valued evaluation over `[0, 1]`; `vals[i]` is the value of `vars[i]`.
    pub fn eval_f64(&self, vars: &[String], vals: &[f64]) -> Result<f64> {
        Ok(match self {
            Var(v) => {
                let i = vars.iter().position(|x| x == v).ok_or_else(|| Error::UnboundVariable(v.clone()))?;
                vals[i]
            }
            Zero => 0.0,
            One => 1.0,
            Neg(c) => 1.0 - c.eval_f64(vars, vals)?,
            Fusion(a, b) => (a.eval_f64(vars, vals)? + b.eval_f64(vars, vals)? - 1.0).max(0.0),
            StrongSum(a, b) => (a.eval_f64(vars, vals)? + b.eval_f64(vars, vals)?).min(1.0),
            Implies(a, b) => (1.0 - a.eval_f64(vars, vals)? + b.eval_f64(vars, vals)?).min(1.0),
            Meet(a, b) => a.eval_f64(vars, vals)?.min(b.eval_f64(vars, vals)?),
            Join(a, b) => a.eval_f64(vars, vals)?.max(b.eval_f64(vars, vals)?),
        })
    }

    /// Replace variables by formulas; unmapped variables are kept.
    pub fn substitute(&self, map: &BTreeMap<String, Formula>) -> Formula {
        let s = |f: &Formula| Box::new(f.substitute(map));
        match self {
            Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Zero | One => self.clone(),
            Neg(c) => Neg(s(c)),
            Fusion(a, b) => Fusion(s(a), s(b)),
            StrongSum(a, b) => StrongSum(s(a), s(b)),
            Implies(a, b) => Implies(s(a), s(b)),
            Meet(a, b) => Meet(s(a), s(b)),
            Join(a, b) => Join(s(a), s(b)),
        }
    }

    /// Drop every `~~` pair.
    pub fn without_double_negation(&self) -> Formula {
        let r = |f: &Formula| Box::new(f.without_double_negation());
        match self {
            Var(_) | Zero | One => self.clone(),
            Neg(c) => match &**c {
                Neg(inner) => inner.without_double_negation(),
                _ => Neg(r(c)),
            },
            Fusion(a, b) => Fusion(r(a), r(b)),
            StrongSum(a, b) => StrongSum(r(a), r(b)),
            Implies(a, b) => Implies(r(a), r(b)),
            Meet(a, b) => Meet(r(a), r(b)),
            Join(a, b) => Join(r(a), r(b)),
        }
    }

    /// Rewrite `∧`, `∨` with `min(a,b) = a ⊗ (a ⇒ b)` and `max(a,b) = (a ⇒ b) ⇒ b`.
    pub fn without_lattice_ops(&self) -> Formula {
        let r = |f: &Formula| f.without_lattice_ops();
        match self {
            Var(_) | Zero | One => self.clone(),
            Neg(c) => Formula::neg(r(c)),
            Fusion(a, b) => Formula::fusion(r(a), r(b)),
            StrongSum(a, b) => Formula::strong_sum(r(a), r(b)),
            Implies(a, b) => Formula::implies(r(a), r(b)),
            Meet(a, b) => {
                let (a, b) = (r(a), r(b));
                Formula::fusion(a.clone(), Formula::implies(a, b))
            }
            Join(a, b) => {
                let (a, b) = (r(a), r(b));
                Formula::implies(Formula::implies(a, b.clone()), b)
            }
        }
    }

    fn level(&self) -> u8 {
        match self {
            StrongSum(..) => 0,
            Implies(..) => 1,
            Fusion(..) => 2,
            _ => 3,
        }
    }

    fn write(&self, out: &mut String, min_level: u8, unicode: bool) {
        let paren = self.level() < min_level;
        if paren {
            out.push('(');
        }
        let op = |ascii: &'static str, uni: &'static str| if unicode { uni } else { ascii };
        match self {
            Var(v) => out.push_str(v),
            Zero => out.push('0'),
            One => out.push('1'),
            Neg(c) => {
                out.push_str(op("~", "¬"));
                c.write(out, 3, unicode);
            }
            StrongSum(a, b) => {
                // implications bind tighter than sums but read better wrapped
                a.write(out, if matches!(**a, Implies(..)) { 2 } else { 0 }, unicode);
                out.push_str(op(" + ", " ⊕ "));
                b.write(out, 2, unicode);
            }
            Implies(a, b) => {
                a.write(out, 2, unicode);
                out.push_str(op(" -> ", " ⇒ "));
                b.write(out, 1, unicode);
            }
            Fusion(a, b) => {
                a.write(out, 2, unicode);
                out.push_str(op(" * ", " ⊗ "));
                b.write(out, 3, unicode);
            }
            Meet(a, b) | Join(a, b) => {
                out.push_str(if matches!(self, Meet(..)) { "min(" } else { "max(" });
                a.write(out, 0, unicode);
                out.push_str(", ");
                b.write(out, 0, unicode);
                out.push(')');
            }
        }
        if paren {
            out.push(')');
        }
    }

    /// Print with the mathematical connective symbols.
    pub fn to_unicode(&self) -> String {
        let mut s = String::new();
        self.write(&mut s, 0, true);
        s
    }
}

impl fmt::Display for Formula {
    /// ASCII form accepted by [`crate::logic::parse_formula`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write(&mut s, 0, false);
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn env(pairs: &[(&str, u32)], n: u32) -> Valuation {
        pairs.iter().map(|(k, v)| (k.to_string(), TruthValue::new(*v, n).unwrap())).collect()
    }

    #[test]
    fn evaluation_examples() {
        let phi = parse_formula("(x * y -> z) + (z -> w)").unwrap();
        let e = env(&[("x", 1), ("y", 1), ("z", 0), ("w", 0)], 1);
        assert!(phi.eval(&e).unwrap().is_one());
        let div = parse_formula("x * (x -> y)").unwrap();
        assert_eq!(div.eval(&env(&[("x", 3), ("y", 2)], 4)).unwrap(), TruthValue::new(2, 4).unwrap());
        let missing = parse_formula("x * q").unwrap();
        assert_eq!(missing.eval(&env(&[("x", 1)], 4)), Err(Error::UnboundVariable("q".into())));
    }

    #[test]
    fn printing_uses_minimal_parentheses() {
        for s in ["(x * y -> z) + (z -> w)", "x -> y -> z", "(x -> y) -> z", "x + (y + z)", "~~x", "x * (y * z)", "~(x + y)", "min(x, y + z) * 1"] {
            let f = parse_formula(s).unwrap();
            assert_eq!(f.to_string(), s);
        }
        assert_eq!(parse_formula("x*~y").unwrap().to_unicode(), "x ⊗ ¬y");
    }

    #[test]
    fn lattice_rewrite_preserves_semantics() {
        let f = parse_formula("max(x, min(y, ~x))").unwrap();
        let g = f.without_lattice_ops();
        for x in 0..=4 {
            for y in 0..=4 {
                let e = env(&[("x", x), ("y", y)], 4);
                assert_eq!(f.eval(&e), g.eval(&e));
            }
        }
    }

    #[test]
    fn variables_in_first_occurrence_order() {
        let f = parse_formula("z + x * z -> y").unwrap();
        assert_eq!(f.variables(), vec!["z", "x", "y"]);
    }
}
