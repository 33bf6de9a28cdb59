use super::{mark_text, Arity, Mark, MarkKind, Specification};
use crate::automata::{enumerate_words, io_dataset, transition_dataset, FuzzyWord, OmegaAutomaton, Transition};
use crate::error::{Error, Result};
use crate::logic::{similarity_f64, SimilarityMode, TruthValue};
use crate::relation::{
    coequalize, coproduct, is_a_check, is_similarity, Attribute, Dataset, DatasetMeta, FiniteView, MultiDiagram, Node,
    OmegaSet,
};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};

/// Datasets interpreting the signs of a specification.
///
/// A dataset read as a relation: its keys are labels of the input sorts
/// (joined by `|` when there are several) and its output columns are the
/// values of the single output sort, matched by name or else by position.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ModelBinding {
    pub datasets: BTreeMap<String, Dataset>,
}

impl ModelBinding {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, sign: impl Into<String>, data: Dataset) {
        self.datasets.insert(sign.into(), data);
    }

    pub fn get(&self, sign: &str) -> Result<&Dataset> {
        self.datasets.get(sign).ok_or_else(|| Error::UnknownName(format!("{sign} (unbound sign)")))
    }

    /// Read a manifest of `sign = path.csv` lines; paths are relative to the
    /// manifest and each CSV needs its `.meta` sidecar.
    pub fn load(manifest: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(manifest).map_err(|e| Error::Io(format!("{}: {e}", manifest.display())))?;
        let dir = manifest.parent().unwrap_or(Path::new("."));
        let mut out = ModelBinding::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or_default().trim();
            if line.is_empty() {
                continue;
            }
            let (sign, path) = line.split_once('=').ok_or_else(|| Error::InvalidValue(format!("manifest line `{line}`")))?;
            out.insert(sign.trim(), Dataset::read_csv(&dir.join(path.trim()), None)?);
        }
        Ok(out)
    }

    /// Write every dataset next to a `model.manifest`; returns its path.
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let mut manifest = String::new();
        for (sign, data) in &self.datasets {
            let file = format!("{}.csv", sign.replace('\'', "_prime"));
            data.write_csv(&dir.join(&file))?;
            manifest.push_str(&format!("{sign} = {file}\n"));
        }
        let path = dir.join("model.manifest");
        std::fs::write(&path, manifest)?;
        Ok(path)
    }

    /// The relation bound to `sign`, one attribute per sort of its arity.
    pub fn view(&self, spec: &Specification, sign: &str) -> Result<FiniteView> {
        let arity = spec.arity(sign)?;
        let data = self.get(sign)?;
        if arity.outputs.len() != 1 {
            return Err(Error::Unsupported(format!("binding `{sign}`: views need exactly one output sort")));
        }
        let attrs = attributes(spec, arity)?;
        let (ins, outs) = attrs.split_at(arity.inputs.len());
        let out_domain = &outs[0].domain;
        let names = output_columns(data);
        let by_name = names.iter().all(|c| out_domain.contains(c));
        if !by_name && names.len() != out_domain.len() {
            return Err(Error::Shape(format!(
                "binding `{sign}` has {} output columns, `{}` has {} values",
                names.len(),
                arity.outputs[0],
                out_domain.len()
            )));
        }
        let cols: Vec<(usize, usize)> = names
            .iter()
            .enumerate()
            .map(|(p, c)| Ok((data.column_index(c)?, if by_name { out_domain.iter().position(|d| d == c).unwrap() } else { p })))
            .collect::<Result<_>>()?;
        let mut view = FiniteView::new(ins.to_vec(), outs.to_vec(), data.n)?;
        let mut seen = HashSet::new();
        for (key, row) in data.keys.iter().zip(&data.rows) {
            if !seen.insert(key) {
                return Err(Error::Incompatible(format!("binding `{sign}` repeats key `{key}`")));
            }
            let parts: Vec<&str> = key.split('|').collect();
            if parts.len() != ins.len() {
                return Err(Error::Shape(format!("binding `{sign}`: key `{key}` does not match {} input sorts", ins.len())));
            }
            let mut idx: Vec<usize> = ins
                .iter()
                .zip(&parts)
                .map(|(a, p)| a.index_of(p).ok_or_else(|| Error::UnknownName(format!("{p} (not in sort `{}`)", a.name))))
                .collect::<Result<_>>()?;
            idx.push(0);
            for &(c, o) in &cols {
                *idx.last_mut().unwrap() = o;
                view.set_index(idx.clone(), row[c])?;
            }
        }
        Ok(view)
    }

    fn omega(&self, spec: &Specification, sign: &str) -> Result<OmegaSet> {
        let arity = spec.arity(sign)?;
        let (labels, _, m) = self.view(spec, sign)?.matrix();
        OmegaSet::new(&arity.inputs[0], labels, m, self.get(sign)?.n)
    }
}

fn output_columns(data: &Dataset) -> Vec<String> {
    if !data.meta.outputs.is_empty() {
        return data.meta.outputs.clone();
    }
    data.columns.iter().filter(|c| !data.meta.inputs.contains(c)).cloned().collect()
}

/// Attribute per sort, later repeats of a sort suffixed `#2`, `#3`, ...
fn attributes(spec: &Specification, arity: &Arity) -> Result<Vec<Attribute>> {
    let mut count: BTreeMap<String, usize> = BTreeMap::new();
    arity
        .sorts()
        .into_iter()
        .map(|s| {
            let k = count.entry(s.clone()).or_default();
            *k += 1;
            let name = if *k == 1 { s.clone() } else { format!("{s}#{k}") };
            Ok(Attribute::new(name, spec.support(&s)?))
        })
        .collect()
}

/// Similarity on `sort` from a bound view marked `similarity`, if any.
fn node_similarity(spec: &Specification, model: &ModelBinding, sort: &str) -> Result<Option<Vec<Vec<TruthValue>>>> {
    for m in spec.marks() {
        if let (MarkKind::Similarity, Some(s)) = (&m.kind, &m.sign) {
            if spec.arity(s)?.inputs[0] == sort && model.datasets.contains_key(s) {
                return Ok(Some(model.omega(spec, s)?.relation));
            }
        }
    }
    Ok(None)
}

/// The bound diagram: a node per sort, an arrow per glued view, and the
/// diagram's own input sorts as `s(D)`.
pub fn diagram(spec: &Specification, model: &ModelBinding, name: &str) -> Result<MultiDiagram> {
    let parts = spec.diagrams().get(name).ok_or_else(|| Error::UnknownName(format!("{name} (not a diagram)")))?;
    let head = spec.arity(name)?;
    let views: Vec<FiniteView> = parts.iter().map(|p| model.view(spec, p)).collect::<Result<_>>()?;
    let n = views[0].n();
    let mut sorts: Vec<String> = Vec::new();
    for s in head.sorts().into_iter().chain(parts.iter().flat_map(|p| spec.signs()[p].sorts())) {
        if !sorts.contains(&s) {
            sorts.push(s);
        }
    }
    let mut d = MultiDiagram::new(n);
    for s in &sorts {
        let mut node = Node::new(s.clone(), spec.support(s)?);
        node.similarity = node_similarity(spec, model, s)?;
        d.add_node(node)?;
    }
    for (p, v) in parts.iter().zip(views) {
        d.add_arrow(p.clone(), v, spec.signs()[p].sorts())?;
    }
    d.inputs = head.inputs.clone();
    Ok(d)
}

/// Answer of the query given by a diagram: the limit of its bound views.
pub fn query(spec: &Specification, model: &ModelBinding, name: &str) -> Result<FiniteView> {
    diagram(spec, model, name)?.limit()
}

/// A view as a training table: one row per input tuple, features from the
/// components of each input label (`A_1`, `A_2`, ... for a label `0-1-..`
/// of attribute `A`) and one target column per output tuple.
pub fn view_to_dataset(view: &FiniteView) -> Result<Dataset> {
    let n = view.n();
    let (rows, cols, m) = view.matrix();
    let ins = view.inputs();
    let widths: Vec<usize> = ins.iter().map(|a| a.domain.first().map_or(0, |l| l.split('-').count())).collect();
    let mut features = Vec::new();
    for (a, &w) in ins.iter().zip(&widths) {
        let base = a.name.replace('#', "_");
        if w == 1 {
            features.push(base);
        } else {
            features.extend((1..=w).map(|k| format!("{base}_{k}")));
        }
    }
    let mut columns = features.clone();
    columns.extend(cols.iter().cloned());
    let mut data = Dataset::new(n, "key", columns);
    for (label, values) in rows.iter().zip(m) {
        let mut row = Vec::new();
        for part in label.split(',') {
            for c in part.split('-') {
                row.push(TruthValue::parse_in(c, n).map_err(|_| Error::Unsupported(format!("label `{label}` is not numeric")))?);
            }
        }
        if row.len() != features.len() {
            return Err(Error::Shape(format!("label `{label}` has the wrong number of components")));
        }
        row.extend(values);
        data.push(label.replace(',', "|"), row)?;
    }
    data.meta = DatasetMeta { inputs: features, outputs: cols };
    Ok(data)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// A mark shape the checker cannot evaluate.
    Unsupported,
}

#[derive(Debug, Clone, Serialize)]
pub struct MarkResult {
    pub mark: String,
    pub kind: String,
    pub lambda: f64,
    pub value: Option<f64>,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub mode: String,
    pub results: Vec<MarkResult>,
    pub passed: bool,
}

impl CheckReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn count(&self, verdict: Verdict) -> usize {
        self.results.iter().filter(|r| r.verdict == verdict).count()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            let value = r.value.map_or("-".to_string(), |v| format!("{v:.4}"));
            let verdict = match r.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "FAIL",
                Verdict::Unsupported => "unsupported",
            };
            write!(f, "{verdict:<11} {value:>6} (lambda {})  {}", r.lambda, r.mark)?;
            if !r.detail.is_empty() {
                write!(f, "  [{}]", r.detail)?;
            }
            writeln!(f)?;
        }
        write!(
            f,
            "{} marks: {} pass, {} fail, {} unsupported (similarity {})",
            self.results.len(),
            self.count(Verdict::Pass),
            self.count(Verdict::Fail),
            self.count(Verdict::Unsupported),
            self.mode
        )
    }
}

fn referenced(spec: &Specification, m: &Mark) -> Vec<String> {
    let mut out = Vec::new();
    let parts = |d: &str| spec.diagrams().get(d).cloned().unwrap_or_default();
    match &m.kind {
        MarkKind::Commutative { diagram } => out.extend(parts(diagram)),
        MarkKind::Lim { diagram } | MarkKind::Colim { diagram } => {
            out.extend(m.sign.clone());
            out.extend(parts(diagram));
        }
        MarkKind::IsA { gamma } => {
            out.extend(m.sign.clone());
            out.push(gamma.clone());
        }
        MarkKind::Similarity | MarkKind::Constraint(_) => out.extend(m.sign.clone()),
    }
    out
}

/// Evaluate every mark against the model. Diagram and limit comparisons use
/// `mode`; formula constraints use the exp similarity between the formula
/// and the target column.
pub fn check(spec: &Specification, model: &ModelBinding, mode: SimilarityMode) -> Result<CheckReport> {
    for m in spec.marks() {
        for s in referenced(spec, m) {
            model.get(&s)?;
        }
    }
    let results = spec.marks().par_iter().map(|m| check_mark(spec, model, m, mode)).collect::<Result<Vec<_>>>()?;
    let passed = results.iter().all(|r| r.verdict == Verdict::Pass);
    Ok(CheckReport { mode: mode.to_string(), results, passed })
}

fn check_mark(spec: &Specification, model: &ModelBinding, m: &Mark, mode: SimilarityMode) -> Result<MarkResult> {
    let lambda = m.lambda();
    let scored = |value: f64, detail: String| MarkResult {
        mark: mark_text(m),
        kind: m.kind_name().into(),
        lambda,
        value: Some(value),
        verdict: if value >= lambda { Verdict::Pass } else { Verdict::Fail },
        detail,
    };
    let sign = || m.sign.as_deref().expect("validated");
    Ok(match &m.kind {
        MarkKind::Commutative { diagram: name } => {
            let r = diagram(spec, model, name)?.lambda_commutative(lambda, mode)?;
            scored(r.similarity, String::new())
        }
        MarkKind::Lim { diagram: name } => {
            let (_, s) = diagram(spec, model, name)?.lambda_limit_check(&model.view(spec, sign())?, lambda, mode)?;
            scored(s, String::new())
        }
        MarkKind::Colim { diagram: name } => match colimit(spec, model, name)? {
            None => MarkResult {
                mark: mark_text(m),
                kind: m.kind_name().into(),
                lambda,
                value: None,
                verdict: Verdict::Unsupported,
                detail: "colimits are computed for coproducts and parallel pairs only".into(),
            },
            Some(c) => {
                let g = model.omega(spec, sign())?;
                scored(compare_omega(&g, &c, mode)?, String::new())
            }
        },
        MarkKind::IsA { gamma } => {
            let (_, _, r) = model.view(spec, sign())?.matrix();
            let v = is_a_check(&r, &model.omega(spec, gamma)?)?;
            scored(v.to_f64(), String::new())
        }
        MarkKind::Similarity => {
            let ok = is_similarity(&model.omega(spec, sign())?);
            let detail = if ok { "" } else { "not reflexive, symmetric and transitive" };
            scored(if ok { 1.0 } else { 0.0 }, detail.into())
        }
        MarkKind::Constraint(c) => {
            let data = model.get(sign())?;
            let inputs: Vec<String> = if data.meta.inputs.is_empty() {
                data.columns.iter().take(c.vars.len()).cloned().collect()
            } else {
                data.meta.inputs.clone()
            };
            if inputs.len() != c.vars.len() {
                return Err(Error::Shape(format!(
                    "`{}` binds {} variables, its data has {} inputs",
                    sign(),
                    c.vars.len(),
                    inputs.len()
                )));
            }
            let outputs: Vec<String> = if data.meta.outputs.is_empty() {
                data.columns.iter().filter(|x| !inputs.contains(x)).cloned().collect()
            } else {
                data.meta.outputs.clone()
            };
            let target = match &c.target {
                None if outputs.len() == 1 => outputs[0].clone(),
                None => return Err(Error::Shape(format!("`{}` has {} outputs, name a target", sign(), outputs.len()))),
                Some(t) if outputs.contains(t) => t.clone(),
                Some(t) => {
                    let out_sort = &spec.arity(sign())?.outputs[0];
                    let p = spec.support(out_sort)?.iter().position(|v| v == t);
                    p.and_then(|p| outputs.get(p).cloned()).ok_or_else(|| Error::UnknownName(t.clone()))?
                }
            };
            let in_idx: Vec<usize> = inputs.iter().map(|x| data.column_index(x)).collect::<Result<_>>()?;
            let t_idx = data.column_index(&target)?;
            let mut pred = Vec::with_capacity(data.len());
            let mut want = Vec::with_capacity(data.len());
            for row in &data.rows {
                let lookup = |v: &str| c.vars.iter().position(|x| x == v).map(|i| row[in_idx[i]]);
                pred.push(c.formula.eval_with(&lookup, Some(data.n))?.to_f64());
                want.push(row[t_idx].to_f64());
            }
            let s = similarity_f64(&pred, &want, SimilarityMode::Exp)?;
            scored(s, format!("{} rows, target {target}", data.len()))
        }
    })
}

fn compare_omega(g: &OmegaSet, c: &OmegaSet, mode: SimilarityMode) -> Result<f64> {
    let pos: Vec<usize> = c
        .support
        .iter()
        .map(|l| g.support.iter().position(|x| x == l).ok_or_else(|| Error::UnknownName(format!("{l} (colimit label)"))))
        .collect::<Result<_>>()?;
    if g.support.len() != c.support.len() {
        return Err(Error::Shape("colimit and view supports differ".into()));
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (i, &pi) in pos.iter().enumerate() {
        for (j, &pj) in pos.iter().enumerate() {
            a.push(g.get(pi, pj).to_f64());
            b.push(c.get(i, j).to_f64());
        }
    }
    similarity_f64(&a, &b, mode)
}

/// Coproduct of two similarity views on distinct sorts, or the colimit of
/// a parallel pair `f, g : A -> B`. Other shapes give `None`.
fn colimit(spec: &Specification, model: &ModelBinding, name: &str) -> Result<Option<OmegaSet>> {
    let parts = &spec.diagrams()[name];
    let [p, q] = parts.as_slice() else { return Ok(None) };
    let (ap, aq) = (spec.arity(p)?, spec.arity(q)?);
    if ap.is_endo() && aq.is_endo() && ap.inputs != aq.inputs {
        return Ok(Some(coproduct(&model.omega(spec, p)?, &model.omega(spec, q)?)?));
    }
    if ap == aq && ap.inputs.len() == 1 && ap.outputs.len() == 1 && ap.inputs != ap.outputs {
        let n = model.get(p)?.n;
        let node = |s: &str| -> Result<OmegaSet> {
            let support = spec.support(s)?;
            match node_similarity(spec, model, s)? {
                Some(rel) => OmegaSet::new(s, support, rel, n),
                None => Ok(OmegaSet::identity(s, support, n)),
            }
        };
        let (alpha, beta) = (node(&ap.inputs[0])?, node(&ap.outputs[0])?);
        let f = model.view(spec, p)?.matrix().2;
        let g = model.view(spec, q)?.matrix().2;
        return Ok(Some(coequalize(&alpha, &beta, &f, &g)?));
    }
    Ok(None)
}

/// Bindings for the bundled two-automata specification: `G_x`, `G_x'` and
/// `R_x` over the crisp words of `length` letters (keys are bit strings
/// such as `0-1-1`), `T_x` as last-transition data over every word at the
/// automaton's resolution, `I_x` and `Gamma_x` as identities, `P` as the
/// selection of output states, and `G_ab` as the joint final states.
pub fn automata_model(a: &OmegaAutomaton, b: &OmegaAutomaton, length: usize) -> Result<ModelBinding> {
    if a.n != b.n || a.states != b.states {
        return Err(Error::Incompatible("automata must share states and resolution".into()));
    }
    let n = a.n;
    let bits: Vec<Vec<bool>> = (0..1usize << length).map(|w| (0..length).rev().map(|i| w >> i & 1 == 1).collect()).collect();
    let labels: Vec<String> =
        bits.iter().map(|w| w.iter().map(|&x| if x { "1" } else { "0" }).collect::<Vec<_>>().join("-")).collect();
    let words: Vec<FuzzyWord> = bits
        .iter()
        .map(|w| FuzzyWord::complementary("a", &w.iter().map(|&x| TruthValue::from_bool(x, n)).collect::<Vec<_>>()))
        .collect();
    let every: Vec<FuzzyWord> = enumerate_words(n, length, "a").collect();
    let outputs: Vec<String> = a.outputs.iter().map(|&i| a.states[i].clone()).collect();
    let identity = |keys: &[String]| -> Result<Dataset> {
        let mut d = Dataset::new(n, "key", keys.to_vec());
        for (i, k) in keys.iter().enumerate() {
            d.push(k.clone(), (0..keys.len()).map(|j| TruthValue::from_bool(i == j, n)).collect())?;
        }
        Ok(d)
    };
    let mut model = ModelBinding::new();
    let mut finals = Vec::new();
    for (x, aut) in [("a", a), ("b", b)] {
        let mut g = io_dataset(aut, &words, "a")?;
        g.keys = labels.clone();
        let mut r = Dataset::new(n, "key", outputs.clone());
        for (k, row) in g.keys.iter().zip(&g.rows) {
            r.push(k.clone(), outputs.iter().map(|o| row[g.column_index(o).unwrap()]).collect())?;
        }
        r.meta.outputs = outputs.clone();
        finals.push(g.clone());
        model.insert(format!("G_{x}"), g.clone());
        model.insert(format!("G_{x}'"), g);
        model.insert(format!("R_{x}"), r);
        model.insert(format!("T_{x}"), transition_dataset(aut, &every, Transition::Last, "a")?);
        model.insert(format!("I_{x}"), identity(&labels)?);
        model.insert(format!("Gamma_{x}"), identity(&labels)?);
    }
    let mut p = Dataset::new(n, "state", outputs.clone());
    for s in &a.states {
        p.push(s.clone(), outputs.iter().map(|o| TruthValue::from_bool(o == s, n)).collect())?;
    }
    model.insert("P", p);
    let (ga, gb) = (&finals[0], &finals[1]);
    let state_cols: Vec<usize> = a.states.iter().map(|s| ga.column_index(s)).collect::<Result<_>>()?;
    let mut joint = Dataset::new(n, "key", a.states.clone());
    for (ka, ra) in ga.keys.iter().zip(&ga.rows) {
        for (kb, rb) in gb.keys.iter().zip(&gb.rows) {
            let row = state_cols.iter().map(|&c| ra[c].fusion(rb[c])).collect::<Result<_>>()?;
            joint.push(format!("{ka}|{kb}"), row)?;
        }
    }
    model.insert("G_ab", joint);
    Ok(model)
}
