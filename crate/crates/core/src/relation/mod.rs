//! Finite many-valued relations ("views") and their algebra.
//!
//! A [`FiniteView`] maps tuples over named, finitely supported attributes
//! to truth values; absent tuples are `0`. Attributes are split into an
//! input side and an output side and views are joined by attribute name.

mod dataset;
mod diagram;
mod omega;

pub use dataset::{Dataset, DatasetMeta};
pub use diagram::{Arrow, CommutativityReport, MultiDiagram, Node};
pub use omega::{coequalize, coproduct, is_a_check, is_epi, is_similarity, is_similarity_f64, power_similarity, OmegaSet};

use crate::error::{Error, Result};
use crate::logic::{similarity_f64, SimilarityMode, TruthValue};
use std::collections::{BTreeMap, HashMap};

/// A named attribute with a finite, ordered domain of labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Attribute {
    pub name: String,
    pub domain: Vec<String>,
}

impl Attribute {
    pub fn new(name: impl Into<String>, domain: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Attribute { name: name.into(), domain: domain.into_iter().map(Into::into).collect() }
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.domain.iter().position(|d| d == label)
    }
}

/// Which side of a view survives a projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    Inputs,
    Outputs,
}

/// Sparse `S_n`-valued relation over named attributes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteView {
    inputs: Vec<Attribute>,
    outputs: Vec<Attribute>,
    n: u32,
    entries: BTreeMap<Vec<usize>, TruthValue>,
}

/// Result of [`FiniteView::conditional`].
#[derive(Debug, Clone)]
pub struct Conditional {
    /// The conditional relation over the output attributes.
    pub view: FiniteView,
    /// Bounded sum of the conditioned row.
    pub projection: TruthValue,
    /// Set when the row is identically zero, so the conditional is all ones.
    pub degenerate: bool,
}

impl FiniteView {
    pub fn new(inputs: Vec<Attribute>, outputs: Vec<Attribute>, n: u32) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for a in inputs.iter().chain(&outputs) {
            if !seen.insert(a.name.as_str()) {
                return Err(Error::Incompatible(format!("duplicate attribute `{}`", a.name)));
            }
        }
        Ok(FiniteView { inputs, outputs, n, entries: BTreeMap::new() })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn inputs(&self) -> &[Attribute] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Attribute] {
        &self.outputs
    }

    /// Inputs followed by outputs; this is the tuple order.
    pub fn attributes(&self) -> Vec<&Attribute> {
        self.inputs.iter().chain(&self.outputs).collect()
    }

    pub fn arity(&self) -> usize {
        self.inputs.len() + self.outputs.len()
    }

    /// Number of tuples in the full product of the domains.
    pub fn grid_size(&self) -> usize {
        self.attributes().iter().map(|a| a.domain.len()).product()
    }

    /// Stored (nonzero) entries keyed by domain indices.
    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &TruthValue)> {
        self.entries.iter()
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.len()
    }

    fn index_tuple(&self, labels: &[&str]) -> Result<Vec<usize>> {
        if labels.len() != self.arity() {
            return Err(Error::Shape(format!("expected {} labels, got {}", self.arity(), labels.len())));
        }
        self.attributes()
            .iter()
            .zip(labels)
            .map(|(a, l)| a.index_of(l).ok_or_else(|| Error::UnknownName(format!("{}={l}", a.name))))
            .collect()
    }

    pub fn set(&mut self, labels: &[&str], v: TruthValue) -> Result<()> {
        let idx = self.index_tuple(labels)?;
        self.set_index(idx, v)
    }

    pub fn set_index(&mut self, idx: Vec<usize>, v: TruthValue) -> Result<()> {
        if v.denominator() != self.n {
            return Err(Error::ResolutionMismatch(self.n, v.denominator()));
        }
        let attrs = self.attributes();
        if idx.len() != attrs.len() || idx.iter().zip(&attrs).any(|(i, a)| *i >= a.domain.len()) {
            return Err(Error::Shape(format!("tuple {idx:?} outside the domains")));
        }
        if v.is_zero() {
            self.entries.remove(&idx);
        } else {
            self.entries.insert(idx, v);
        }
        Ok(())
    }

    pub fn get(&self, labels: &[&str]) -> Result<TruthValue> {
        Ok(self.get_index(&self.index_tuple(labels)?))
    }

    pub fn get_index(&self, idx: &[usize]) -> TruthValue {
        self.entries.get(idx).copied().unwrap_or(TruthValue::zero(self.n))
    }

    /// Build a view by evaluating `f` on every tuple of the full grid.
    pub fn from_fn(
        inputs: Vec<Attribute>,
        outputs: Vec<Attribute>,
        n: u32,
        f: impl Fn(&[usize]) -> TruthValue,
    ) -> Result<Self> {
        let mut v = FiniteView::new(inputs, outputs, n)?;
        for idx in v.all_tuples() {
            let x = f(&idx);
            v.set_index(idx, x)?;
        }
        Ok(v)
    }

    /// Every tuple of the full grid, row-major in attribute order.
    pub fn all_tuples(&self) -> Vec<Vec<usize>> {
        product_indices(&self.attributes().iter().map(|a| a.domain.len()).collect::<Vec<_>>())
    }

    /// Labels of a tuple given by indices.
    pub fn labels(&self, idx: &[usize]) -> Vec<String> {
        self.attributes().iter().zip(idx).map(|(a, &i)| a.domain[i].clone()).collect()
    }

    /// Rows are input tuples, columns are output tuples, both row-major.
    pub fn matrix(&self) -> (Vec<String>, Vec<String>, Vec<Vec<TruthValue>>) {
        let in_sizes: Vec<_> = self.inputs.iter().map(|a| a.domain.len()).collect();
        let out_sizes: Vec<_> = self.outputs.iter().map(|a| a.domain.len()).collect();
        let rows = product_indices(&in_sizes);
        let cols = product_indices(&out_sizes);
        let label = |attrs: &[Attribute], t: &[usize]| {
            attrs.iter().zip(t).map(|(a, &i)| a.domain[i].as_str()).collect::<Vec<_>>().join(",")
        };
        let mut m = Vec::with_capacity(rows.len());
        for r in &rows {
            let row = cols
                .iter()
                .map(|c| {
                    let mut idx = r.clone();
                    idx.extend(c);
                    self.get_index(&idx)
                })
                .collect();
            m.push(row);
        }
        (
            rows.iter().map(|r| label(&self.inputs, r)).collect(),
            cols.iter().map(|c| label(&self.outputs, c)).collect(),
            m,
        )
    }

    /// Permutation sending this view's attribute positions to `other`'s,
    /// by name; fails unless both have the same attributes and domains.
    fn alignment(&self, other: &FiniteView) -> Result<Vec<usize>> {
        let mine = self.attributes();
        let theirs = other.attributes();
        if mine.len() != theirs.len() {
            return Err(Error::Shape("different attribute sets".into()));
        }
        mine.iter()
            .map(|a| {
                let j = theirs
                    .iter()
                    .position(|b| b.name == a.name)
                    .ok_or_else(|| Error::Shape(format!("attribute `{}` missing", a.name)))?;
                if theirs[j].domain != a.domain {
                    return Err(Error::Shape(format!("domains of `{}` differ", a.name)));
                }
                Ok(j)
            })
            .collect()
    }

    /// Entrywise equality after aligning attributes by name.
    pub fn same_relation(&self, other: &FiniteView) -> bool {
        let Ok(perm) = self.alignment(other) else { return false };
        self.n == other.n
            && self.entries.len() == other.entries.len()
            && self.entries.iter().all(|(idx, v)| {
                let mut j = vec![0; idx.len()];
                for (p, &q) in perm.iter().enumerate() {
                    j[q] = idx[p];
                }
                other.get_index(&j) == *v
            })
    }

    /// Dense values of `self` and `other` (aligned by name) over the full grid.
    pub fn paired_values(&self, other: &FiniteView) -> Result<(Vec<f64>, Vec<f64>)> {
        let perm = self.alignment(other)?;
        let mut a = Vec::new();
        let mut b = Vec::new();
        for idx in self.all_tuples() {
            let mut j = vec![0; idx.len()];
            for (p, &q) in perm.iter().enumerate() {
                j[q] = idx[p];
            }
            a.push(self.get_index(&idx).to_f64());
            b.push(other.get_index(&j).to_f64());
        }
        Ok((a, b))
    }

    /// Similarity of two views over the same attributes.
    pub fn similarity(&self, other: &FiniteView, mode: SimilarityMode) -> Result<f64> {
        let (a, b) = self.paired_values(other)?;
        similarity_f64(&a, &b, mode)
    }

    /// Tensor composition `(R ⊗ G)(x, z) = ⊕_y R(x, y) ⊗ G(y, z)` where `y`
    /// ranges over the attributes that are outputs of `self` and inputs of
    /// `g`. Other attributes with equal names are joined, not summed.
    pub fn compose(&self, g: &FiniteView) -> Result<FiniteView> {
        if self.n != g.n {
            return Err(Error::ResolutionMismatch(self.n, g.n));
        }
        let r_attrs = self.attributes();
        let g_attrs = g.attributes();
        for a in &r_attrs {
            if let Some(b) = g_attrs.iter().find(|b| b.name == a.name) {
                if a.domain != b.domain {
                    return Err(Error::Incompatible(format!("attribute `{}` has different domains", a.name)));
                }
            }
        }
        let summed: Vec<&str> = self
            .outputs
            .iter()
            .filter(|a| g.inputs.iter().any(|b| b.name == a.name))
            .map(|a| a.name.as_str())
            .collect();
        let mut inputs: Vec<Attribute> = self.inputs.clone();
        for a in &g.inputs {
            if !summed.contains(&a.name.as_str()) && !inputs.iter().any(|b| b.name == a.name) {
                inputs.push(a.clone());
            }
        }
        let mut outputs: Vec<Attribute> = Vec::new();
        for a in self.outputs.iter().chain(&g.outputs) {
            let taken = summed.contains(&a.name.as_str())
                || inputs.iter().chain(&outputs).any(|b| b.name == a.name);
            if !taken {
                outputs.push(a.clone());
            }
        }
        let mut out = FiniteView::new(inputs, outputs, self.n)?;
        let pos_in = |attrs: &[&Attribute], name: &str| attrs.iter().position(|a| a.name == name);
        // where each result attribute is read from: (from_r, position)
        let sources: Vec<(bool, usize)> = out
            .attributes()
            .iter()
            .map(|a| match pos_in(&r_attrs, &a.name) {
                Some(p) => (true, p),
                None => (false, pos_in(&g_attrs, &a.name).unwrap()),
            })
            .collect();
        let common: Vec<(usize, usize)> = r_attrs
            .iter()
            .enumerate()
            .filter_map(|(i, a)| pos_in(&g_attrs, &a.name).map(|j| (i, j)))
            .collect();
        let mut index: HashMap<Vec<usize>, Vec<(&Vec<usize>, TruthValue)>> = HashMap::new();
        for (gi, gv) in &g.entries {
            let key = common.iter().map(|&(_, j)| gi[j]).collect();
            index.entry(key).or_default().push((gi, *gv));
        }
        for (ri, rv) in &self.entries {
            let key: Vec<usize> = common.iter().map(|&(i, _)| ri[i]).collect();
            let Some(matches) = index.get(&key) else { continue };
            for (gi, gv) in matches {
                let v = rv.fusion(*gv)?;
                if v.is_zero() {
                    continue;
                }
                let idx: Vec<usize> =
                    sources.iter().map(|&(from_r, p)| if from_r { ri[p] } else { gi[p] }).collect();
                let cur = out.get_index(&idx);
                out.entries.insert(idx, cur.strong_sum(v)?);
            }
        }
        Ok(out)
    }

    /// Bounded-sum projection onto one side.
    pub fn project(&self, keep: Keep) -> FiniteView {
        let (inputs, outputs, range) = match keep {
            Keep::Inputs => (self.inputs.clone(), vec![], 0..self.inputs.len()),
            Keep::Outputs => (vec![], self.outputs.clone(), self.inputs.len()..self.arity()),
        };
        let mut out = FiniteView { inputs, outputs, n: self.n, entries: BTreeMap::new() };
        for (idx, v) in &self.entries {
            let key = idx[range.clone()].to_vec();
            let cur = out.get_index(&key);
            out.entries.insert(key, cur.strong_sum(*v).expect("same resolution"));
        }
        out
    }

    /// `R(_|a) = R(a)_B ⇒ R(a, _)` for a fixed input tuple `a` (labels).
    pub fn conditional(&self, fixed: &[&str]) -> Result<Conditional> {
        if fixed.len() != self.inputs.len() {
            return Err(Error::Shape(format!("expected {} input labels", self.inputs.len())));
        }
        let prefix: Vec<usize> = self
            .inputs
            .iter()
            .zip(fixed)
            .map(|(a, l)| a.index_of(l).ok_or_else(|| Error::UnknownName(format!("{}={l}", a.name))))
            .collect::<Result<_>>()?;
        let k = prefix.len();
        let row = |t: &[usize]| {
            let mut idx = prefix.clone();
            idx.extend_from_slice(t);
            self.get_index(&idx)
        };
        let mut projection = TruthValue::zero(self.n);
        for (idx, v) in &self.entries {
            if idx[..k] == prefix[..] {
                projection = projection.strong_sum(*v)?;
            }
        }
        let view = FiniteView::from_fn(vec![], self.outputs.clone(), self.n, |t| {
            projection.residuum(row(t)).expect("same resolution")
        })?;
        Ok(Conditional { view, projection, degenerate: projection.is_zero() })
    }

    /// True iff `R ⊗ G` and `G ⊗ R` are the same relation.
    pub fn independent(&self, g: &FiniteView) -> Result<bool> {
        let rg = self.compose(g).map_err(|e| Error::Incompatible(format!("not composable: {e}")))?;
        let gr = g.compose(self).map_err(|e| Error::Incompatible(format!("not composable: {e}")))?;
        Ok(rg.same_relation(&gr))
    }

    /// Rename attributes; names not in the map are kept.
    pub fn renamed(&self, map: &BTreeMap<String, String>) -> Result<FiniteView> {
        let ren = |attrs: &[Attribute]| {
            attrs
                .iter()
                .map(|a| Attribute { name: map.get(&a.name).cloned().unwrap_or(a.name.clone()), domain: a.domain.clone() })
                .collect::<Vec<_>>()
        };
        let mut v = FiniteView::new(ren(&self.inputs), ren(&self.outputs), self.n)?;
        v.entries = self.entries.clone();
        Ok(v)
    }
}

/// All index tuples of a product of domain sizes, row-major.
pub(crate) fn product_indices(sizes: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = sizes.iter().product();
    let mut out = Vec::with_capacity(total);
    for mut k in 0..total {
        let mut t = vec![0; sizes.len()];
        for (slot, &s) in t.iter_mut().zip(sizes).rev() {
            *slot = k % s;
            k /= s;
        }
        out.push(t);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tv(k: u32, n: u32) -> TruthValue {
        TruthValue::new(k, n).unwrap()
    }

    fn crisp_fn(from: &str, to: &str, dom: &[&str], cod: &[&str], f: &[usize]) -> FiniteView {
        let mut v = FiniteView::new(vec![Attribute::new(from, dom.to_vec())], vec![Attribute::new(to, cod.to_vec())], 4).unwrap();
        for (i, &j) in f.iter().enumerate() {
            v.set_index(vec![i, j], tv(4, 4)).unwrap();
        }
        v
    }

    #[test]
    fn compose_crisp_functions() {
        let r = crisp_fn("a", "b", &["a0", "a1"], &["b0", "b1", "b2"], &[2, 0]);
        let g = crisp_fn("b", "c", &["b0", "b1", "b2"], &["c0", "c1"], &[1, 1, 0]);
        let rg = r.compose(&g).unwrap();
        assert_eq!(rg.inputs()[0].name, "a");
        assert_eq!(rg.outputs()[0].name, "c");
        assert!(rg.same_relation(&crisp_fn("a", "c", &["a0", "a1"], &["c0", "c1"], &[0, 1])));
    }

    #[test]
    fn compose_sums_over_shared_values() {
        let mut r = FiniteView::new(vec![Attribute::new("x", ["x0"])], vec![Attribute::new("y", ["y0", "y1"])], 4).unwrap();
        let mut g = FiniteView::new(vec![Attribute::new("y", ["y0", "y1"])], vec![Attribute::new("z", ["z0"])], 4).unwrap();
        r.set(&["x0", "y0"], tv(2, 4)).unwrap();
        g.set(&["y0", "z0"], tv(3, 4)).unwrap();
        assert_eq!(r.compose(&g).unwrap().get(&["x0", "z0"]).unwrap(), tv(1, 4));
        // two contributions 1/4 and 1/2
        r.set(&["x0", "y1"], tv(4, 4)).unwrap();
        g.set(&["y1", "z0"], tv(2, 4)).unwrap();
        assert_eq!(r.compose(&g).unwrap().get(&["x0", "z0"]).unwrap(), tv(3, 4));
    }

    #[test]
    fn compose_rejects_domain_mismatch() {
        let r = crisp_fn("a", "b", &["a0"], &["b0"], &[0]);
        let g = crisp_fn("b", "c", &["b0", "b1"], &["c0"], &[0, 0]);
        assert!(matches!(r.compose(&g), Err(Error::Incompatible(_))));
    }

    #[test]
    fn projection_examples() {
        let r = crisp_fn("a", "b", &["a0", "a1"], &["b0", "b1"], &[1, 0]);
        let p = r.project(Keep::Inputs);
        assert!(p.all_tuples().iter().all(|t| p.get_index(t).is_one()));
        let empty = FiniteView::new(vec![Attribute::new("a", ["a0"])], vec![Attribute::new("b", ["b0"])], 4).unwrap();
        assert!(empty.project(Keep::Outputs).get_index(&[0]).is_zero());
        let mut q = empty.clone();
        q.set(&["a0", "b0"], tv(1, 4)).unwrap();
        let mut q2 = FiniteView::new(vec![Attribute::new("a", ["a0"])], vec![Attribute::new("b", ["b0", "b1"])], 4).unwrap();
        q2.set(&["a0", "b0"], tv(1, 4)).unwrap();
        q2.set(&["a0", "b1"], tv(2, 4)).unwrap();
        assert_eq!(q2.project(Keep::Inputs).get_index(&[0]), tv(3, 4));
    }

    #[test]
    fn conditional_examples() {
        let mut r = FiniteView::new(vec![Attribute::new("a", ["a0", "a1"])], vec![Attribute::new("b", ["b1", "b2"])], 4).unwrap();
        r.set(&["a0", "b1"], tv(2, 4)).unwrap();
        r.set(&["a0", "b2"], tv(1, 4)).unwrap();
        let c = r.conditional(&["a0"]).unwrap();
        assert_eq!(c.projection, tv(3, 4));
        assert_eq!(c.view.get(&["b1"]).unwrap(), tv(3, 4));
        assert_eq!(c.view.get(&["b2"]).unwrap(), tv(2, 4));
        let z = r.conditional(&["a1"]).unwrap();
        assert!(z.degenerate);
        assert!(z.view.all_tuples().iter().all(|t| z.view.get_index(t).is_one()));
    }

    #[test]
    fn independence() {
        let r = crisp_fn("a", "b", &["0", "1"], &["0", "1"], &[1, 1]);
        let g = crisp_fn("b", "a", &["0", "1"], &["0", "1"], &[0, 0]);
        assert!(r.independent(&r).unwrap());
        assert!(!r.independent(&g).unwrap());
        let x = crisp_fn("p", "q", &["0"], &["0"], &[0]);
        let y = crisp_fn("s", "t", &["0"], &["0"], &[0]);
        assert!(x.independent(&y).unwrap());
    }
}
