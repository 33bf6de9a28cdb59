//! Truth values in S_4, the connectives, and comparing formulas by their tables.

use luka::logic::{parse_formula, similarity, truth_subtable, values, SimilarityMode, TruthValue};

fn main() -> luka::Result<()> {
    let n = 4;
    let x = TruthValue::new(3, n)?;
    let y = TruthValue::new(2, n)?;
    println!("x = {x}, y = {y}");
    println!("x * y  = {}", x.fusion(y)?);
    println!("x + y  = {}", x.strong_sum(y)?);
    println!("x -> y = {}", x.residuum(y)?);
    println!("~x     = {}", x.negation());
    println!("x <-> y = {}", x.equivalence(y)?);

    // divisibility: x ∧ y = x ⊗ (x ⇒ y), everywhere on S_4
    let ok = values(n).all(|a| values(n).all(|b| a.meet(b).unwrap() == a.fusion(a.residuum(b).unwrap()).unwrap()));
    println!("divisibility holds on S_4: {ok}");

    let f = parse_formula("~x + y")?;
    let g = parse_formula("x -> y")?;
    let h = parse_formula("x * y")?;
    let (tf, tg, th) = (truth_subtable(&f, n), truth_subtable(&g, n), truth_subtable(&h, n));
    println!("{f} and {g} have equal tables: {}", tf == tg);
    for mode in [SimilarityMode::Exp, SimilarityMode::Inf, SimilarityMode::And] {
        println!("{mode} similarity of {f} and {h}: {:.4}", similarity(&tf, &th, mode)?);
    }
    println!("unicode: {}", parse_formula("(x * y -> z) + ~w")?.to_unicode());
    Ok(())
}
