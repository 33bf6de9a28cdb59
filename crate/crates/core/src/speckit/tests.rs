use super::*;
use crate::fixtures::{acyclic_automaton, cyclic_automaton};
use crate::logic::{grid_points, parse_formula, truth_subtable_over, SimilarityMode, TruthValue};
use crate::relation::Dataset;

const BUNDLED: &str = include_str!("../../data/automata.lspec");

fn tv(k: u32, n: u32) -> TruthValue {
    TruthValue::new(k, n).unwrap()
}

#[test]
fn bundled_spec_parses_and_round_trips() {
    let spec = parse_spec(BUNDLED).unwrap();
    let commutative = spec.marks().iter().filter(|m| matches!(m.kind, MarkKind::Commutative { .. })).count();
    assert_eq!(commutative, 4);
    assert_eq!(spec.diagrams().len(), 5);
    assert_eq!(spec.support("A").unwrap().len(), 64);
    assert_eq!(spec.support("A").unwrap()[1], "0-0-0-0-0-1");
    assert_eq!(spec.arity("G_ab").unwrap().inputs, vec!["A'", "B'"]);
    let printed = spec.to_string();
    let again = parse_spec(&printed).unwrap();
    assert_eq!(again, spec);
    assert_eq!(again.to_string(), printed);
}

#[test]
fn empty_and_invalid_specs() {
    assert!(parse_spec("").unwrap().is_empty());
    assert!(parse_spec("  % only a comment\n").unwrap().is_empty());
    assert!(matches!(parse_spec("R : {A -> B};"), Err(Error::UnknownName(_))));
    // forward reference inside a diagram
    let fwd = "S : {x};\nD : {S -> S;\n  D : R;\n};\nR : {S -> S};";
    assert!(parse_spec(fwd).is_err());
    assert!(matches!(parse_spec("S : {x}; S : {y};"), Err(Error::Incompatible(_))));
    match parse_spec("S : {x, y};\nR : {S -> S") {
        Err(Error::Parse { pos, .. }) => assert!(pos > 10),
        other => panic!("{other:?}"),
    }
    assert!(parse_spec("S : {x};\nR : {S -> S;\n  R(a) : a +;\n};").is_err());
    assert!(parse_spec("S : {x};\nR : {S -> S};\n[R];").is_err(), "R is not a diagram");
}

#[test]
fn every_mark_form_parses() {
    let text = "\
V : {0, 1/2, 1};
X : {a, b};
Y : {c};
C : {X.a, X.b, Y.c};
G : {V, V -> V;
  G(x, y) : x * y;
  G(x, y) : ~0.9 x + y;
};
H : {X -> X;
  H : similarity;
};
K : {Y -> Y};
F1, F2 : {X -> Y};
D : {X -> Y;
  D : F1 * F2;
};
Q : {X -> Y;
  Q : 0.75-lim D;
  Q : [D]_0.5;
};
U : {C;
  U : colim D;
};
S : {X -> Y;
  S : is_a(H);
};
";
    let spec = parse_spec(text).unwrap();
    let kinds: Vec<&str> = spec.marks().iter().map(|m| m.kind_name()).collect();
    assert_eq!(kinds, ["formula", "formula", "similarity", "lim", "commutative", "colim", "is_a"]);
    assert_eq!(spec.marks()[1].lambda, Some(0.9));
    assert_eq!(spec.marks()[3].lambda, Some(0.75));
    assert_eq!(spec.width("V").unwrap(), 1);
    assert_eq!(spec.width("X").unwrap(), 2);
    assert_eq!(parse_spec(&spec.to_string()).unwrap(), spec);
    assert!(parse_spec("V : {0, 1};\nG : {V -> V;\n  G(x, y) : x;\n};").is_err(), "arity");
    assert!(parse_spec("V : {0, 1};\nG : {V -> V;\n  G(x) : y;\n};").is_err(), "unbound variable");
    assert!(parse_spec("V : {0, 1};\nG : {V -> V;\n  G : 1.5-lim G;\n};").is_err());
}

fn table_dataset(f: &str, n: u32) -> Dataset {
    let f = parse_formula(f).unwrap();
    let vars = vec!["x".to_string(), "y".to_string()];
    let t = truth_subtable_over(&f, &vars, n).unwrap();
    let mut d = Dataset::new(n, "row", vec!["x".into(), "y".into(), "out".into()]);
    for (i, (p, v)) in grid_points(2, n).zip(&t.entries).enumerate() {
        d.push(format!("r{i}"), vec![tv(p[0], n), tv(p[1], n), *v]).unwrap();
    }
    d.meta.inputs = vars;
    d.meta.outputs = vec!["out".into()];
    d
}

#[test]
fn formula_constraint_against_its_table() {
    let spec = parse_spec("V : {0, 1};\nG : {V, V -> V;\n  G(x, y) : x * y;\n  G(x, y) : x + y;\n};").unwrap();
    let mut model = ModelBinding::new();
    model.insert("G", table_dataset("x * y", 4));
    let report = check(&spec, &model, SimilarityMode::Inf).unwrap();
    assert_eq!(report.results[0].verdict, Verdict::Pass);
    assert_eq!(report.results[0].value, Some(1.0));
    assert_eq!(report.results[1].verdict, Verdict::Fail);
    assert!(!report.passed);
    // unbound sign
    assert!(check(&spec, &ModelBinding::new(), SimilarityMode::Inf).is_err());
}

fn crisp_view_spec() -> Specification {
    parse_spec("X : {k0, k1};\nY : {v0, v1};\nGam : {X;\n  Gam : similarity;\n};\nR : {X -> Y;\n  R : is_a(Gam);\n};").unwrap()
}

#[test]
fn is_a_fails_on_a_shared_output() {
    let spec = crisp_view_spec();
    let mut gam = Dataset::new(1, "key", vec!["k0".into(), "k1".into()]);
    gam.push("k0", vec![tv(1, 1), tv(0, 1)]).unwrap();
    gam.push("k1", vec![tv(0, 1), tv(1, 1)]).unwrap();
    let mut r = Dataset::new(1, "key", vec!["v0".into(), "v1".into()]);
    r.push("k0", vec![tv(1, 1), tv(0, 1)]).unwrap();
    r.push("k1", vec![tv(1, 1), tv(0, 1)]).unwrap();
    let mut model = ModelBinding::new();
    model.insert("Gam", gam);
    model.insert("R", r.clone());
    let report = check(&spec, &model, SimilarityMode::Inf).unwrap();
    assert_eq!(report.results[0].verdict, Verdict::Pass, "identity is a similarity");
    assert_eq!(report.results[1].value, Some(0.0));
    assert_eq!(report.results[1].verdict, Verdict::Fail);
    // a functional view passes
    r.rows[1] = vec![tv(0, 1), tv(1, 1)];
    model.insert("R", r);
    assert!(check(&spec, &model, SimilarityMode::Inf).unwrap().passed);
}

#[test]
fn crisp_commuting_diagram_and_one_arrow_query() {
    let text = "X : {x0, x1};\nY : {y0, y1};\nF : {X -> Y};\nG : {X -> Y};\nD : {X -> Y;\n  D : F * G;\n};\n[D];\nQ : {X -> Y;\n  Q : F;\n};\nL : {X -> Y;\n  L : lim Q;\n};";
    let spec = parse_spec(text).unwrap();
    let mut f = Dataset::new(2, "key", vec!["y0".into(), "y1".into()]);
    f.push("x0", vec![tv(0, 2), tv(2, 2)]).unwrap();
    f.push("x1", vec![tv(2, 2), tv(0, 2)]).unwrap();
    let mut model = ModelBinding::new();
    model.insert("F", f.clone());
    model.insert("G", f.clone());
    model.insert("L", f.clone());
    let report = check(&spec, &model, SimilarityMode::Inf).unwrap();
    assert!(report.passed, "{report}");
    let answer = query(&spec, &model, "Q").unwrap();
    assert!(answer.same_relation(&model.view(&spec, "F").unwrap()));
    assert!(query(&spec, &model, "F").is_err(), "not a diagram");
    let data = view_to_dataset(&answer).err();
    assert!(data.is_some(), "labels x0 are not numeric");
}

#[test]
fn colimit_marks() {
    let text = "\
X : {a, b};
Y : {c};
C : {X.a, X.b, Y.c};
Sx : {X;
  Sx : similarity;
};
Sy : {Y;
  Sy : similarity;
};
D : {X -> Y;
  D : Sx * Sy;
};
U : {C;
  U : colim D;
};
F1, F2 : {X -> Y};
E : {X -> Y;
  E : F1 * F2 * F1;
};
W : {C;
  W : colim E;
};
";
    let spec = parse_spec(text).unwrap();
    let id = |keys: &[&str]| {
        let mut d = Dataset::new(1, "key", keys.iter().map(|s| s.to_string()).collect());
        for (i, k) in keys.iter().enumerate() {
            d.push(*k, (0..keys.len()).map(|j| TruthValue::from_bool(i == j, 1)).collect()).unwrap();
        }
        d
    };
    let mut model = ModelBinding::new();
    model.insert("Sx", id(&["a", "b"]));
    model.insert("Sy", id(&["c"]));
    model.insert("U", id(&["X.a", "X.b", "Y.c"]));
    model.insert("W", id(&["X.a", "X.b", "Y.c"]));
    let mut f = Dataset::new(1, "key", vec!["c".into()]);
    f.push("a", vec![tv(1, 1)]).unwrap();
    f.push("b", vec![tv(0, 1)]).unwrap();
    model.insert("F1", f.clone());
    model.insert("F2", f);
    let report = check(&spec, &model, SimilarityMode::Inf).unwrap();
    let colim: Vec<&MarkResult> = report.results.iter().filter(|r| r.kind == "colim").collect();
    assert_eq!(colim[0].verdict, Verdict::Pass);
    assert_eq!(colim[1].verdict, Verdict::Unsupported);
    assert!(!report.passed);
}

#[test]
fn integrate_adds_once_and_round_trips() {
    let spec = parse_spec(BUNDLED).unwrap();
    let vars: Vec<String> = (0..8).map(|i| format!("A_{i}")).collect();
    let c = Constraint { vars: vars.clone(), target: Some("A_7".into()), formula: parse_formula("A_6").unwrap() };
    let (s1, added) = spec.integrate("T_a", c.clone(), 1.0).unwrap();
    assert!(added);
    assert_eq!(s1.marks().len(), spec.marks().len() + 1);
    assert!(s1.to_string().contains("T_a(A_0, A_1, A_2, A_3, A_4, A_5, A_6, A_7) : A_7 = A_6;"));
    assert_eq!(parse_spec(&s1.to_string()).unwrap(), s1);
    let (s2, added) = s1.integrate("T_a", c, 1.0).unwrap();
    assert!(!added);
    assert_eq!(s2, s1);
    let bad = Constraint { vars: vars[..3].to_vec(), target: Some("A_7".into()), formula: parse_formula("A_1").unwrap() };
    assert!(spec.integrate("T_a", bad, 1.0).is_err());
}

#[test]
fn automata_model_checks_the_bundled_spec() {
    let spec = parse_spec(BUNDLED).unwrap();
    let model = automata_model(&acyclic_automaton(), &cyclic_automaton(), 6).unwrap();
    let report = check(&spec, &model, SimilarityMode::Inf).unwrap();
    let commutative: Vec<&MarkResult> = report.results.iter().filter(|r| r.kind == "commutative").collect();
    assert_eq!(commutative.len(), 4);
    assert!(commutative.iter().all(|r| r.value.is_some()));
    for r in &report.results {
        if matches!(r.kind.as_str(), "lim" | "is_a" | "similarity") {
            assert_eq!(r.verdict, Verdict::Pass, "{report}");
        }
    }
    // check is pure
    let again = check(&spec, &model, SimilarityMode::Inf).unwrap();
    assert_eq!(again.to_json(), report.to_json());
    // integrating a formula that holds exactly and checking passes
    let vars: Vec<String> = (0..8).map(|i| format!("A_{i}")).collect();
    let c = Constraint { vars, target: Some("A_7".into()), formula: parse_formula("A_6").unwrap() };
    let (enriched, _) = spec.integrate("T_a", c, 1.0).unwrap();
    let report = check(&enriched, &model, SimilarityMode::Inf).unwrap();
    let added = report.results.iter().find(|r| r.kind == "formula").unwrap();
    assert_eq!(added.verdict, Verdict::Pass, "{report}");
    eprintln!("{report}");
    // the joint query feeds a training table
    let joint = view_to_dataset(&query(&spec, &model, "D_5").unwrap()).unwrap();
    assert_eq!(joint.len(), 4096);
    assert_eq!(joint.meta.inputs.len(), 12);
    assert_eq!(joint.meta.inputs[0], "A'_1");
}

#[test]
fn manifest_round_trip() {
    let model = automata_model(&acyclic_automaton(), &cyclic_automaton(), 2).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let manifest = model.write(dir.path()).unwrap();
    let back = ModelBinding::load(&manifest).unwrap();
    assert_eq!(back, model);
}

#[test]
fn negated_constant_is_not_a_lambda() {
    let spec = parse_spec("V : {0, 1};\nG : {V -> V; G(x) : ~0 * x; G(x) : ~0; G(x) : ~0.5 x;};\n").unwrap();
    let got: Vec<(Option<f64>, String)> = spec
        .marks()
        .iter()
        .map(|m| match &m.kind {
            MarkKind::Constraint(c) => (m.lambda, c.formula.to_string()),
            _ => unreachable!(),
        })
        .collect();
    assert_eq!(got, [(None, "~0 * x".to_string()), (None, "~0".to_string()), (Some(0.5), "x".to_string())]);
}
