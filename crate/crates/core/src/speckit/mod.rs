//! Relational specifications: sorts, views over them, diagrams glued from
//! views, and marks asserting how a model must behave. Text form:
//!
//! ```text
//! I : {0, 1};
//! A : I, I;
//! E : {p, q};
//! G : {A -> E;
//!   G(x, y) : p = x * y;
//! };
//! D : {A -> E;
//!   D : G * H;
//! };
//! [D]_0.9;
//! ```
//!
//! `%` starts a comment. See [`parse_spec`] for the full grammar.

mod model;
mod parse;

pub use model::{
    automata_model, check, diagram, query, view_to_dataset, CheckReport, MarkResult, ModelBinding, Verdict,
};
pub use parse::parse_spec;

use crate::error::{Error, Result};
use crate::logic::Formula;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum SortKind {
    /// Enumerated values.
    Values(Vec<String>),
    /// Cartesian product of earlier sorts.
    Product(Vec<String>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SortDecl {
    pub names: Vec<String>,
    pub kind: SortKind,
}

/// `names : {inputs -> outputs; body}`. Without an arrow the header is a
/// plain sort list, read as a relation from all but the last sort to the
/// last one (a single sort relates to itself).
#[derive(Debug, Clone, PartialEq)]
pub struct ViewDecl {
    pub names: Vec<String>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub directed: bool,
    pub body: Option<Vec<Item>>,
}

impl ViewDecl {
    pub fn arity(&self) -> Arity {
        if self.directed {
            return Arity { inputs: self.inputs.clone(), outputs: self.outputs.clone() };
        }
        match self.inputs.as_slice() {
            [s] => Arity { inputs: vec![s.clone()], outputs: vec![s.clone()] },
            [init @ .., last] => Arity { inputs: init.to_vec(), outputs: vec![last.clone()] },
            [] => Arity { inputs: vec![], outputs: vec![] },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arity {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

impl Arity {
    /// Sorts in attribute order.
    pub fn sorts(&self) -> Vec<String> {
        self.inputs.iter().chain(&self.outputs).cloned().collect()
    }

    fn is_endo(&self) -> bool {
        self.inputs.len() == 1 && self.inputs == self.outputs
    }
}

/// `G(x1, ..., xk) : target = formula` or `target ~λ formula`. Without a
/// target the view must have a single output column.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub vars: Vec<String>,
    pub target: Option<String>,
    pub formula: Formula,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MarkKind {
    Commutative { diagram: String },
    Lim { diagram: String },
    Colim { diagram: String },
    IsA { gamma: String },
    Similarity,
    Constraint(Constraint),
}

/// An assertion about the model. `lambda: None` means `1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mark {
    pub sign: Option<String>,
    pub kind: MarkKind,
    pub lambda: Option<f64>,
}

impl Mark {
    pub fn lambda(&self) -> f64 {
        self.lambda.unwrap_or(1.0)
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            MarkKind::Commutative { .. } => "commutative",
            MarkKind::Lim { .. } => "lim",
            MarkKind::Colim { .. } => "colim",
            MarkKind::IsA { .. } => "is_a",
            MarkKind::Similarity => "similarity",
            MarkKind::Constraint(_) => "formula",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    Sort(SortDecl),
    View(ViewDecl),
    /// `D : V1 * V2 * ...;` makes `D` a diagram.
    Glue { sign: String, parts: Vec<String> },
    Mark(Mark),
}

/// A validated specification. Items keep their source order and nesting;
/// the lookups are derived from them.
#[derive(Debug, Clone, PartialEq)]
pub struct Specification {
    items: Vec<Item>,
    sorts: BTreeMap<String, SortKind>,
    signs: BTreeMap<String, Arity>,
    /// Declaration order of sorts and signs.
    order: Vec<String>,
    diagrams: BTreeMap<String, Vec<String>>,
    marks: Vec<Mark>,
}

impl Specification {
    pub fn empty() -> Self {
        Specification::from_items(vec![]).expect("empty is valid")
    }

    /// Validate items: every name is declared once and before use.
    pub fn from_items(items: Vec<Item>) -> Result<Self> {
        let mut spec = Specification {
            items: vec![],
            sorts: BTreeMap::new(),
            signs: BTreeMap::new(),
            order: vec![],
            diagrams: BTreeMap::new(),
            marks: vec![],
        };
        spec.walk(&items)?;
        spec.items = items;
        Ok(spec)
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn sorts(&self) -> &BTreeMap<String, SortKind> {
        &self.sorts
    }

    pub fn signs(&self) -> &BTreeMap<String, Arity> {
        &self.signs
    }

    /// Sorts and signs in declaration order.
    pub fn declaration_order(&self) -> &[String] {
        &self.order
    }

    pub fn diagrams(&self) -> &BTreeMap<String, Vec<String>> {
        &self.diagrams
    }

    /// Every mark, nested ones included, in source order.
    pub fn marks(&self) -> &[Mark] {
        &self.marks
    }

    pub fn arity(&self, sign: &str) -> Result<&Arity> {
        self.signs.get(sign).ok_or_else(|| Error::UnknownName(sign.into()))
    }

    /// Labels of a sort; products join component labels with `-`, first
    /// component varying slowest.
    pub fn support(&self, sort: &str) -> Result<Vec<String>> {
        match self.sorts.get(sort).ok_or_else(|| Error::UnknownName(sort.into()))? {
            SortKind::Values(v) => Ok(v.clone()),
            SortKind::Product(parts) => {
                let mut out = vec![String::new()];
                for (k, p) in parts.iter().enumerate() {
                    let sup = self.support(p)?;
                    out = out
                        .iter()
                        .flat_map(|pre| sup.iter().map(move |s| if k == 0 { s.clone() } else { format!("{pre}-{s}") }))
                        .collect();
                }
                Ok(out)
            }
        }
    }

    /// Number of degree columns carrying a sort: one for a sort of truth
    /// values, one per value otherwise, summed over product components.
    pub fn width(&self, sort: &str) -> Result<usize> {
        match self.sorts.get(sort).ok_or_else(|| Error::UnknownName(sort.into()))? {
            SortKind::Values(v) => Ok(if v.iter().all(|x| is_truth_label(x)) { 1 } else { v.len() }),
            SortKind::Product(parts) => parts.iter().map(|p| self.width(p)).sum(),
        }
    }

    fn declare(&mut self, name: &str) -> Result<()> {
        if self.sorts.contains_key(name) || self.signs.contains_key(name) {
            return Err(Error::Incompatible(format!("`{name}` declared twice")));
        }
        self.order.push(name.to_string());
        Ok(())
    }

    fn need_sort(&self, name: &str, user: &str) -> Result<()> {
        if self.sorts.contains_key(name) {
            Ok(())
        } else {
            Err(Error::UnknownName(format!("{name} (sort used by `{user}`)")))
        }
    }

    fn need_sign(&self, name: &str, user: &str) -> Result<&Arity> {
        self.signs.get(name).ok_or_else(|| Error::UnknownName(format!("{name} (used by `{user}` before any declaration)")))
    }

    fn walk(&mut self, items: &[Item]) -> Result<()> {
        for item in items {
            match item {
                Item::Sort(s) => {
                    match &s.kind {
                        SortKind::Values(v) => {
                            let set: BTreeSet<&String> = v.iter().collect();
                            if v.is_empty() || set.len() != v.len() {
                                return Err(Error::Incompatible(format!("sort `{}` needs distinct values", s.names[0])));
                            }
                        }
                        SortKind::Product(parts) => {
                            for p in parts {
                                self.need_sort(p, &s.names[0])?;
                            }
                        }
                    }
                    for name in &s.names {
                        self.declare(name)?;
                        self.sorts.insert(name.clone(), s.kind.clone());
                    }
                }
                Item::View(v) => {
                    for s in v.inputs.iter().chain(&v.outputs) {
                        self.need_sort(s, &v.names[0])?;
                    }
                    let arity = v.arity();
                    for name in &v.names {
                        self.declare(name)?;
                        self.signs.insert(name.clone(), arity.clone());
                    }
                    if let Some(body) = &v.body {
                        self.walk(body)?;
                    }
                }
                Item::Glue { sign, parts } => {
                    self.need_sign(sign, sign)?;
                    if self.diagrams.contains_key(sign) {
                        return Err(Error::Incompatible(format!("diagram `{sign}` glued twice")));
                    }
                    if parts.is_empty() {
                        return Err(Error::Shape(format!("diagram `{sign}` is empty")));
                    }
                    for p in parts {
                        if p == sign {
                            return Err(Error::Cyclic(format!("`{sign}` glued from itself")));
                        }
                        self.need_sign(p, sign)?;
                    }
                    self.diagrams.insert(sign.clone(), parts.clone());
                }
                Item::Mark(m) => {
                    self.validate_mark(m)?;
                    self.marks.push(m.clone());
                }
            }
        }
        Ok(())
    }

    fn validate_mark(&self, m: &Mark) -> Result<()> {
        if let Some(l) = m.lambda {
            if !(l > 0.0 && l <= 1.0) {
                return Err(Error::InvalidValue(format!("lambda {l} outside (0, 1]")));
            }
        }
        let user = m.sign.clone().unwrap_or_else(|| "mark".into());
        let sign = match &m.sign {
            Some(s) => Some(self.need_sign(s, s)?),
            None => None,
        };
        let needs_sign = || Error::Shape(format!("a {} mark needs a sign", m.kind_name()));
        match &m.kind {
            MarkKind::Commutative { diagram } | MarkKind::Lim { diagram } | MarkKind::Colim { diagram } => {
                if !self.diagrams.contains_key(diagram) {
                    return Err(Error::UnknownName(format!("{diagram} (not a diagram, used by `{user}`)")));
                }
                if !matches!(m.kind, MarkKind::Commutative { .. }) && sign.is_none() {
                    return Err(needs_sign());
                }
            }
            MarkKind::IsA { gamma } => {
                let a = sign.ok_or_else(needs_sign)?;
                let g = self.need_sign(gamma, &user)?;
                if !g.is_endo() {
                    return Err(Error::Shape(format!("`{gamma}` does not relate a sort to itself")));
                }
                if a.inputs.len() != 1 || a.inputs[0] != g.inputs[0] {
                    return Err(Error::Shape(format!("`{user}` and `{gamma}` range over different sorts")));
                }
            }
            MarkKind::Similarity => {
                if !sign.ok_or_else(needs_sign)?.is_endo() {
                    return Err(Error::Shape(format!("similarity `{user}` does not relate a sort to itself")));
                }
            }
            MarkKind::Constraint(c) => {
                let a = sign.ok_or_else(needs_sign)?;
                let distinct: BTreeSet<&String> = c.vars.iter().collect();
                if c.vars.is_empty() || distinct.len() != c.vars.len() {
                    return Err(Error::Shape(format!("`{user}` needs distinct variables")));
                }
                if let Some(v) = c.formula.variables().into_iter().find(|v| !c.vars.contains(v)) {
                    return Err(Error::UnboundVariable(v));
                }
                let width: usize = a.inputs.iter().map(|s| self.width(s)).sum::<Result<_>>()?;
                if width != c.vars.len() {
                    return Err(Error::Shape(format!("`{user}` takes {width} variables, got {}", c.vars.len())));
                }
                if let (Some(t), [out]) = (&c.target, a.outputs.as_slice()) {
                    if let SortKind::Values(vals) = &self.sorts[out] {
                        if !vals.contains(t) {
                            return Err(Error::UnknownName(format!("{t} (not a value of `{out}`)")));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Add a formula constraint to `sign`'s body. Returns the new
    /// specification and whether anything was added: an identical
    /// constraint already present is left alone.
    pub fn integrate(&self, sign: &str, constraint: Constraint, lambda: f64) -> Result<(Specification, bool)> {
        let lambda = if lambda >= 1.0 { None } else { Some(lambda) };
        let mark = Mark { sign: Some(sign.to_string()), kind: MarkKind::Constraint(constraint.clone()), lambda };
        self.validate_mark(&mark)?;
        let dup = self.marks.iter().any(|m| {
            m.sign.as_deref() == Some(sign)
                && matches!(&m.kind, MarkKind::Constraint(c) if c.target == constraint.target && c.formula == constraint.formula)
        });
        if dup {
            return Ok((self.clone(), false));
        }
        let mut items = self.items.clone();
        if !append_to(&mut items, sign, Item::Mark(mark)) {
            return Err(Error::UnknownName(sign.into()));
        }
        Ok((Specification::from_items(items)?, true))
    }
}

fn append_to(items: &mut [Item], sign: &str, item: Item) -> bool {
    for it in items.iter_mut() {
        if let Item::View(v) = it {
            if v.names.iter().any(|n| n == sign) {
                v.body.get_or_insert_with(Vec::new).push(item);
                return true;
            }
            if let Some(body) = &mut v.body {
                if append_to(body, sign, item.clone()) {
                    return true;
                }
            }
        }
    }
    false
}

/// `0.25`, `1/4`, `0` and the like.
fn is_truth_label(s: &str) -> bool {
    match s.split_once('/') {
        Some((a, b)) => matches!((a.parse::<u32>(), b.parse::<u32>()), (Ok(a), Ok(b)) if b > 0 && a <= b),
        None => s.parse::<f64>().is_ok_and(|x| (0.0..=1.0).contains(&x)),
    }
}

fn fmt_lambda(l: f64) -> String {
    format!("{l}")
}

/// One-line rendering of a mark, without the trailing `;`.
pub fn mark_text(m: &Mark) -> String {
    let sign = m.sign.as_deref();
    let prefix = |s: Option<&str>| s.map(|s| format!("{s} : ")).unwrap_or_default();
    let lam_pre = m.lambda.map(|l| format!("{}-", fmt_lambda(l))).unwrap_or_default();
    match &m.kind {
        MarkKind::Commutative { diagram } => {
            let suffix = m.lambda.map(|l| format!("_{}", fmt_lambda(l))).unwrap_or_default();
            format!("{}[{diagram}]{suffix}", prefix(sign))
        }
        MarkKind::Lim { diagram } => format!("{}{lam_pre}lim {diagram}", prefix(sign)),
        MarkKind::Colim { diagram } => format!("{}{lam_pre}colim {diagram}", prefix(sign)),
        MarkKind::IsA { gamma } => format!("{}is_a({gamma})", prefix(sign)),
        MarkKind::Similarity => format!("{}similarity", prefix(sign)),
        MarkKind::Constraint(c) => {
            let rel = match (&c.target, m.lambda) {
                (Some(t), None) => format!("{t} = "),
                (Some(t), Some(l)) => format!("{t} ~{} ", fmt_lambda(l)),
                (None, None) => String::new(),
                (None, Some(l)) => format!("~{} ", fmt_lambda(l)),
            };
            format!("{}({}) : {rel}{}", sign.unwrap_or_default(), c.vars.join(", "), c.formula)
        }
    }
}

fn write_items(f: &mut fmt::Formatter<'_>, items: &[Item], depth: usize) -> fmt::Result {
    let pad = "  ".repeat(depth);
    for item in items {
        match item {
            Item::Sort(s) => match &s.kind {
                SortKind::Values(v) => writeln!(f, "{pad}{} : {{{}}};", s.names.join(", "), v.join(", "))?,
                SortKind::Product(p) => writeln!(f, "{pad}{} : {};", s.names.join(", "), p.join(", "))?,
            },
            Item::View(v) => {
                let header = if v.directed {
                    format!("{} -> {}", v.inputs.join(", "), v.outputs.join(", "))
                } else {
                    v.inputs.join(", ")
                };
                match &v.body {
                    None => writeln!(f, "{pad}{} : {{{header}}};", v.names.join(", "))?,
                    Some(body) => {
                        writeln!(f, "{pad}{} : {{{header};", v.names.join(", "))?;
                        write_items(f, body, depth + 1)?;
                        writeln!(f, "{pad}}};")?;
                    }
                }
            }
            Item::Glue { sign, parts } => writeln!(f, "{pad}{sign} : {};", parts.join(" * "))?,
            Item::Mark(m) => writeln!(f, "{pad}{};", mark_text(m))?,
        }
    }
    Ok(())
}

impl fmt::Display for Specification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_items(f, &self.items, 0)
    }
}

#[cfg(test)]
mod tests;
