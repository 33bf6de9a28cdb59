use luka::logic::TruthValue;
use luka::relation::{coproduct, Attribute, FiniteView, MultiDiagram, Node, OmegaSet};
use proptest::prelude::*;

fn attr(name: &str, size: usize) -> Attribute {
    Attribute::new(name, (0..size).map(|i| format!("{name}{i}")))
}

/// A random view with one or two inputs and outputs over small domains.
fn view() -> impl Strategy<Value = FiniteView> {
    (1u32..=6, proptest::collection::vec(1usize..=3, 2..=4), 1usize..=2).prop_flat_map(|(n, sizes, k)| {
        let k = k.min(sizes.len() - 1);
        let total: usize = sizes.iter().product();
        proptest::collection::vec(0..=n, total).prop_map(move |ks| {
            let attrs: Vec<Attribute> = sizes.iter().enumerate().map(|(i, &s)| attr(&format!("a{i}_"), s)).collect();
            let (ins, outs) = attrs.split_at(k);
            let mut v = FiniteView::new(ins.to_vec(), outs.to_vec(), n).unwrap();
            for (idx, k) in v.all_tuples().into_iter().zip(&ks) {
                v.set_index(idx, TruthValue::new(*k, n).unwrap()).unwrap();
            }
            v
        })
    })
}

fn omega(name: &'static str) -> impl Strategy<Value = OmegaSet> {
    (1u32..=4, 1usize..=3).prop_flat_map(move |(n, size)| {
        proptest::collection::vec(proptest::collection::vec(0..=n, size), size).prop_map(move |m| {
            let rel = m.iter().map(|r| r.iter().map(|&k| TruthValue::new(k, n).unwrap()).collect()).collect();
            OmegaSet::new(name, (0..size).map(|i| format!("{i}")).collect(), rel, n).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bayes_identity(r in view()) {
        let k = r.inputs().len();
        for idx in r.all_tuples() {
            let labels = r.labels(&idx);
            let fixed: Vec<&str> = labels[..k].iter().map(String::as_str).collect();
            let c = r.conditional(&fixed).unwrap();
            let back = c.projection.fusion(c.view.get_index(&idx[k..])).unwrap();
            prop_assert_eq!(back, r.get_index(&idx));
        }
    }

    #[test]
    fn one_arrow_limit_is_the_arrow(r in view()) {
        let mut d = MultiDiagram::new(r.n());
        let mut ends = Vec::new();
        for a in r.attributes() {
            d.add_node(Node::new(a.name.clone(), a.domain.clone())).unwrap();
            ends.push(a.name.clone());
        }
        d.inputs = r.inputs().iter().map(|a| a.name.clone()).collect();
        d.add_arrow("R", r.clone(), ends).unwrap();
        prop_assert!(d.limit().unwrap().same_relation(&r));
    }

    #[test]
    fn coproduct_is_symmetric_up_to_tags(a in omega("A"), b in omega("B")) {
        prop_assume!(a.n == b.n);
        let ab = coproduct(&a, &b).unwrap();
        let ba = coproduct(&b, &a).unwrap();
        for (i, x) in ab.support.iter().enumerate() {
            for (j, y) in ab.support.iter().enumerate() {
                let (p, q) = (ba.support.iter().position(|s| s == x).unwrap(), ba.support.iter().position(|s| s == y).unwrap());
                prop_assert_eq!(ab.get(i, j), ba.get(p, q));
            }
        }
    }

    #[test]
    fn crisp_composition_is_function_composition(
        (f, g, nb, nc) in (1usize..=4, 1usize..=4, 1usize..=4).prop_flat_map(|(na, nb, nc)| {
            (proptest::collection::vec(0..nb, na), proptest::collection::vec(0..nc, nb), Just(nb), Just(nc))
        })
    ) {
        let n = 4;
        let (a, b, c) = (attr("a", f.len()), attr("b", nb), attr("c", nc));
        let one = TruthValue::one(n);
        let zero = TruthValue::zero(n);
        let fv = FiniteView::from_fn(vec![a.clone()], vec![b.clone()], n, |t| if f[t[0]] == t[1] { one } else { zero }).unwrap();
        let gv = FiniteView::from_fn(vec![b], vec![c.clone()], n, |t| if g[t[0]] == t[1] { one } else { zero }).unwrap();
        let want = FiniteView::from_fn(vec![a], vec![c], n, |t| if g[f[t[0]]] == t[1] { one } else { zero }).unwrap();
        prop_assert!(fv.compose(&gv).unwrap().same_relation(&want));
    }
}
