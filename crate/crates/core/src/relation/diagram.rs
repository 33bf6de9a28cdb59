use super::{product_indices, Attribute, FiniteView};
use crate::error::{Error, Result};
use crate::logic::{similarity_f64, SimilarityMode, TruthValue};
use std::collections::BTreeMap;

/// A diagram node: a finite support with an optional similarity on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub name: String,
    pub support: Vec<String>,
    pub similarity: Option<Vec<Vec<TruthValue>>>,
}

impl Node {
    pub fn new(name: impl Into<String>, support: Vec<String>) -> Self {
        Node { name: name.into(), support, similarity: None }
    }

    /// Diagonal of the node's similarity, `1` when none is given.
    fn self_similarity(&self, i: usize, n: u32) -> TruthValue {
        self.similarity.as_ref().map_or(TruthValue::one(n), |m| m[i][i])
    }
}

/// An arrow: a view plus, for each of its attributes (inputs then outputs),
/// the node that attribute ranges over.
#[derive(Debug, Clone, PartialEq)]
pub struct Arrow {
    pub name: String,
    pub view: FiniteView,
    pub endpoints: Vec<String>,
}

/// Finite diagram of views with designated input nodes `s(D)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiDiagram {
    pub n: u32,
    pub nodes: Vec<Node>,
    pub arrows: Vec<Arrow>,
    pub inputs: Vec<String>,
}

/// Both sides of a commutativity check and their similarity.
#[derive(Debug, Clone)]
pub struct CommutativityReport {
    pub holds: bool,
    pub similarity: f64,
    /// `⋁` of the limit over the non-input nodes, per input tuple.
    pub limit_side: Vec<f64>,
    /// `⋁` of the node product over the non-input nodes, per input tuple.
    pub product_side: Vec<f64>,
}

impl MultiDiagram {
    pub fn new(n: u32) -> Self {
        MultiDiagram { n, nodes: vec![], arrows: vec![], inputs: vec![] }
    }

    pub fn add_node(&mut self, node: Node) -> Result<()> {
        if self.node_index(&node.name).is_some() {
            return Err(Error::Incompatible(format!("node `{}` declared twice", node.name)));
        }
        self.nodes.push(node);
        Ok(())
    }

    /// Add an arrow after checking that each attribute's domain is the
    /// support of its endpoint node.
    pub fn add_arrow(&mut self, name: impl Into<String>, view: FiniteView, endpoints: Vec<String>) -> Result<()> {
        let name = name.into();
        if view.n() != self.n {
            return Err(Error::ResolutionMismatch(self.n, view.n()));
        }
        if endpoints.len() != view.arity() {
            return Err(Error::Shape(format!("arrow `{name}` needs {} endpoints", view.arity())));
        }
        for (a, e) in view.attributes().iter().zip(&endpoints) {
            let i = self.node_index(e).ok_or_else(|| Error::UnknownName(e.clone()))?;
            if self.nodes[i].support != a.domain {
                return Err(Error::Incompatible(format!("arrow `{name}`: `{}` does not range over `{e}`", a.name)));
            }
        }
        self.arrows.push(Arrow { name, view, endpoints });
        Ok(())
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.name == name)
    }

    fn input_indices(&self) -> Result<Vec<usize>> {
        self.inputs.iter().map(|s| self.node_index(s).ok_or_else(|| Error::UnknownName(s.clone()))).collect()
    }

    /// `(Lim D)(x_1..x_k) = ⊗_f D(f)(x_src, x_dst)` over all nodes. Input
    /// nodes become input attributes, the rest outputs, in node order.
    pub fn limit(&self) -> Result<FiniteView> {
        let k = self.nodes.len();
        if k == 0 {
            return Err(Error::Shape("empty diagram".into()));
        }
        let one = TruthValue::one(self.n);
        // partial assignments of node values with their accumulated value
        let mut partial: Vec<(Vec<Option<usize>>, TruthValue)> = vec![(vec![None; k], one)];
        for arrow in &self.arrows {
            let slots: Vec<usize> = arrow.endpoints.iter().map(|e| self.node_index(e).unwrap()).collect();
            let mut next = Vec::new();
            for (assign, v) in &partial {
                'entry: for (idx, w) in arrow.view.entries() {
                    let mut a = assign.clone();
                    for (&slot, &i) in slots.iter().zip(idx) {
                        match a[slot] {
                            Some(j) if j != i => continue 'entry,
                            _ => a[slot] = Some(i),
                        }
                    }
                    let x = v.fusion(*w)?;
                    if !x.is_zero() {
                        next.push((a, x));
                    }
                }
            }
            partial = next;
        }
        let ins = self.input_indices()?;
        let order: Vec<usize> = ins.iter().copied().chain((0..k).filter(|i| !ins.contains(i))).collect();
        let attr = |i: usize| Attribute::new(self.nodes[i].name.clone(), self.nodes[i].support.clone());
        let mut out = FiniteView::new(
            ins.iter().map(|&i| attr(i)).collect(),
            order[ins.len()..].iter().map(|&i| attr(i)).collect(),
            self.n,
        )?;
        for (assign, v) in partial {
            let free: Vec<usize> = (0..k).filter(|&i| assign[i].is_none()).collect();
            let sizes: Vec<usize> = free.iter().map(|&i| self.nodes[i].support.len()).collect();
            for fill in product_indices(&sizes) {
                let mut full = assign.clone();
                for (&i, &x) in free.iter().zip(&fill) {
                    full[i] = Some(x);
                }
                let idx = order.iter().map(|&i| full[i].unwrap()).collect();
                out.set_index(idx, v)?;
            }
        }
        Ok(out)
    }

    fn check_inputs_acyclic(&self, ins: &[usize]) -> Result<()> {
        // edges between input nodes, from input attributes to output attributes
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for arrow in &self.arrows {
            let k_in = arrow.view.inputs().len();
            let nodes: Vec<usize> = arrow.endpoints.iter().map(|e| self.node_index(e).unwrap()).collect();
            for &s in &nodes[..k_in] {
                for &t in &nodes[k_in..] {
                    if ins.contains(&s) && ins.contains(&t) {
                        adj.entry(s).or_default().push(t);
                    }
                }
            }
        }
        // 0 = unseen, 1 = on stack, 2 = done
        fn visit(u: usize, adj: &BTreeMap<usize, Vec<usize>>, state: &mut [u8]) -> bool {
            state[u] = 1;
            for &v in adj.get(&u).into_iter().flatten() {
                if state[v] == 1 || (state[v] == 0 && !visit(v, adj, state)) {
                    return false;
                }
            }
            state[u] = 2;
            true
        }
        let mut state = vec![0u8; self.nodes.len()];
        for &s in ins {
            if state[s] == 0 && !visit(s, &adj, &mut state) {
                return Err(Error::Cyclic(format!("input nodes {:?}", self.inputs)));
            }
        }
        Ok(())
    }

    /// Compare `⋁_{n̄} Lim D(s̄, n̄)` with `⋁_{n̄} ⊗_i α_i(x_i, x_i)` for every
    /// tuple `s̄` over the input nodes.
    pub fn lambda_commutative(&self, lambda: f64, mode: SimilarityMode) -> Result<CommutativityReport> {
        let ins = self.input_indices()?;
        self.check_inputs_acyclic(&ins)?;
        let lim = self.limit()?;
        let k_in = ins.len();
        let in_sizes: Vec<usize> = ins.iter().map(|&i| self.nodes[i].support.len()).collect();
        let rows = product_indices(&in_sizes);
        let pos = |t: &[usize]| t.iter().zip(&in_sizes).fold(0, |acc, (&x, &s)| acc * s + x);
        let mut limit_side = vec![0.0f64; rows.len()];
        for (idx, v) in lim.entries() {
            let r = pos(&idx[..k_in]);
            limit_side[r] = limit_side[r].max(v.to_f64());
        }
        // the node product factorizes, so its ⋁ over a free node is the
        // largest diagonal entry of that node
        let mut rest = TruthValue::one(self.n);
        for (i, node) in self.nodes.iter().enumerate() {
            if ins.contains(&i) {
                continue;
            }
            let best = (0..node.support.len())
                .map(|x| node.self_similarity(x, self.n))
                .max()
                .unwrap_or(TruthValue::zero(self.n));
            rest = rest.fusion(best)?;
        }
        let mut product_side = Vec::with_capacity(rows.len());
        for t in &rows {
            let mut v = rest;
            for (&i, &x) in ins.iter().zip(t) {
                v = v.fusion(self.nodes[i].self_similarity(x, self.n))?;
            }
            product_side.push(v.to_f64());
        }
        let similarity = similarity_f64(&limit_side, &product_side, mode)?;
        Ok(CommutativityReport { holds: similarity >= lambda, similarity, limit_side, product_side })
    }

    /// Similarity of `r` to the limit, compared against `lambda`.
    pub fn lambda_limit_check(&self, r: &FiniteView, lambda: f64, mode: SimilarityMode) -> Result<(bool, f64)> {
        let s = r.similarity(&self.limit()?, mode)?;
        Ok((s >= lambda, s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tv(k: u32) -> TruthValue {
        TruthValue::new(k, 4).unwrap()
    }

    fn sup(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn view(a: (&str, &[&str]), b: (&str, &[&str]), vals: &[(usize, usize, u32)]) -> FiniteView {
        let mut v = FiniteView::new(vec![Attribute::new(a.0, sup(a.1))], vec![Attribute::new(b.0, sup(b.1))], 4).unwrap();
        for &(i, j, k) in vals {
            v.set_index(vec![i, j], tv(k)).unwrap();
        }
        v
    }

    #[test]
    fn single_arrow_limit_is_the_arrow() {
        let mut d = MultiDiagram::new(4);
        d.add_node(Node::new("X", sup(&["x0", "x1"]))).unwrap();
        d.add_node(Node::new("Y", sup(&["y0", "y1"]))).unwrap();
        let f = view(("X", &["x0", "x1"]), ("Y", &["y0", "y1"]), &[(0, 1, 4), (1, 0, 2)]);
        d.add_arrow("f", f.clone(), sup(&["X", "Y"])).unwrap();
        d.inputs = sup(&["X"]);
        assert!(d.limit().unwrap().same_relation(&f));
        let (ok, s) = d.lambda_limit_check(&f, 1.0, SimilarityMode::Inf).unwrap();
        assert!(ok && s == 1.0);
    }

    #[test]
    fn parallel_pair_gives_equalizer() {
        let mut d = MultiDiagram::new(4);
        d.add_node(Node::new("X", sup(&["a", "b"]))).unwrap();
        d.add_node(Node::new("Y", sup(&["c", "d"]))).unwrap();
        let r = view(("X", &["a", "b"]), ("Y", &["c", "d"]), &[(0, 0, 3), (1, 1, 4), (0, 1, 2)]);
        let s = view(("u", &["a", "b"]), ("v", &["c", "d"]), &[(0, 0, 3), (1, 1, 1), (1, 0, 4)]);
        d.add_arrow("R", r.clone(), sup(&["X", "Y"])).unwrap();
        d.add_arrow("S", s.clone(), sup(&["X", "Y"])).unwrap();
        let lim = d.limit().unwrap();
        for t in lim.all_tuples() {
            assert_eq!(lim.get_index(&t), r.get_index(&t).fusion(s.get_index(&t)).unwrap());
        }
    }

    #[test]
    fn three_arrow_limit_is_the_product() {
        // f: a0 -> a1, g: a1 -> (a3, a4), h: (a3, a0) -> a5 with uncovered node a2
        let dom = sup(&["0", "1"]);
        let mut d = MultiDiagram::new(4);
        for i in 0..6 {
            d.add_node(Node::new(format!("a{i}"), dom.clone())).unwrap();
        }
        let attr = |s: &str| Attribute::new(s, dom.clone());
        let f = FiniteView::from_fn(vec![attr("p")], vec![attr("q")], 4, |t| tv(((t[0] + 2 * t[1]) % 5) as u32)).unwrap();
        let g = FiniteView::from_fn(vec![attr("p")], vec![attr("q"), attr("r")], 4, |t| tv(4 - t[0] as u32 - t[2] as u32)).unwrap();
        let h = FiniteView::from_fn(vec![attr("p"), attr("q")], vec![attr("r")], 4, |t| tv(2 + t[0] as u32 + t[1] as u32 - t[2] as u32)).unwrap();
        d.add_arrow("f", f.clone(), sup(&["a0", "a1"])).unwrap();
        d.add_arrow("g", g.clone(), sup(&["a1", "a3", "a4"])).unwrap();
        d.add_arrow("h", h.clone(), sup(&["a3", "a0", "a5"])).unwrap();
        let lim = d.limit().unwrap();
        assert_eq!(lim.grid_size(), 64);
        for t in lim.all_tuples() {
            let x = |i: usize| t[i];
            let expect = f.get_index(&[x(0), x(1)]).fusion(g.get_index(&[x(1), x(3), x(4)])).unwrap().fusion(h.get_index(&[x(3), x(0), x(5)])).unwrap();
            assert_eq!(lim.get_index(&t), expect);
        }
    }

    #[test]
    fn commutativity_examples() {
        let mut d = MultiDiagram::new(4);
        d.add_node(Node::new("X", sup(&["x0", "x1"]))).unwrap();
        d.add_node(Node::new("Y", sup(&["y0"]))).unwrap();
        d.add_arrow("f", view(("X", &["x0", "x1"]), ("Y", &["y0"]), &[(0, 0, 4), (1, 0, 2)]), sup(&["X", "Y"])).unwrap();
        d.inputs = sup(&["X"]);
        let rep = d.lambda_commutative(0.9, SimilarityMode::Inf).unwrap();
        assert_eq!(rep.similarity, 0.5);
        assert!(!rep.holds);
        let mut crisp = d.clone();
        crisp.arrows[0].view.set_index(vec![1, 0], tv(4)).unwrap();
        let rep = crisp.lambda_commutative(1.0, SimilarityMode::Inf).unwrap();
        assert!(rep.holds && rep.similarity == 1.0);
    }

    #[test]
    fn cyclic_inputs_are_rejected() {
        let mut d = MultiDiagram::new(4);
        d.add_node(Node::new("X", sup(&["x0"]))).unwrap();
        d.add_arrow("t", view(("a", &["x0"]), ("b", &["x0"]), &[(0, 0, 4)]), sup(&["X", "X"])).unwrap();
        d.inputs = sup(&["X"]);
        assert!(matches!(d.lambda_commutative(1.0, SimilarityMode::Inf), Err(Error::Cyclic(_))));
    }
}
