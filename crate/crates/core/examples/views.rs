//! Finite fuzzy views: composition, projection, conditionals, similarity
//! relations and the limit of a small diagram.

use luka::logic::{SimilarityMode, TruthValue};
use luka::relation::{coproduct, is_similarity, Attribute, FiniteView, Keep, MultiDiagram, Node, OmegaSet};

fn tv(k: u32) -> TruthValue {
    TruthValue::new(k, 4).unwrap()
}

fn show(m: &[Vec<TruthValue>]) -> String {
    let rows: Vec<String> = m.iter().map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")).collect();
    rows.join(" | ")
}

fn main() -> luka::Result<()> {
    let people = Attribute::new("person", ["ana", "rui"]);
    let towns = Attribute::new("town", ["braga", "porto"]);
    let sizes = Attribute::new("size", ["small", "large"]);

    let mut lives = FiniteView::new(vec![people.clone()], vec![towns.clone()], 4)?;
    lives.set(&["ana", "braga"], tv(3))?;
    lives.set(&["ana", "porto"], tv(1))?;
    lives.set(&["rui", "porto"], tv(4))?;
    let mut size = FiniteView::new(vec![towns.clone()], vec![sizes], 4)?;
    size.set(&["braga", "small"], tv(3))?;
    size.set(&["porto", "large"], tv(4))?;

    let lives_in = lives.compose(&size)?;
    let (rows, cols, m) = lives_in.matrix();
    println!("person x size after composing through town:");
    for (r, row) in rows.iter().zip(&m) {
        let vals: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        println!("  {r:<4} {:?} {}", cols, vals.join(" "));
    }
    println!("projection on people: {}", show(&lives.project(Keep::Inputs).matrix().2));
    let c = lives.conditional(&["ana"])?;
    println!("conditional on ana: {} (row mass {})", show(&c.view.matrix().2), c.projection);

    // a similarity on towns and its coproduct with crisp equality on people
    let close = OmegaSet::new("town", towns.domain.clone(), vec![vec![tv(4), tv(2)], vec![tv(2), tv(4)]], 4)?;
    println!("town closeness is a similarity: {}", is_similarity(&close));
    let both = coproduct(&close, &OmegaSet::identity("person", people.domain.clone(), 4))?;
    println!("coproduct support: {:?}", both.support);

    // the limit of lives -> town and its commutativity against the inputs
    let mut d = MultiDiagram::new(4);
    d.add_node(Node::new("person", people.domain.clone()))?;
    d.add_node(Node::new("town", towns.domain.clone()))?;
    d.add_arrow("lives", lives, vec!["person".into(), "town".into()])?;
    d.inputs = vec!["person".into()];
    let r = d.lambda_commutative(0.7, SimilarityMode::Inf)?;
    println!("limit entries: {}, commutative at 0.7: {} ({:.4})", d.limit()?.nonzero_count(), r.holds, r.similarity);
    Ok(())
}
