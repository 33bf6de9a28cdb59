mod repro;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use luka::automata::{
    enumerate_words, formula_to_automaton, io_dataset, parse_automaton, read_word_csv, transition_dataset, OmegaAutomaton,
    Transition,
};
use luka::fixtures;
use luka::logic::{grid_points, parse_formula, similarity_f64, truth_subtable_over, SimilarityMode, TruthValue};
use luka::network::{
    approximation_candidates, classify_neuron, formula_to_network, neuron_to_formula, NeuronClass, NeuronConfig,
};
use luka::relation::{Dataset, DatasetMeta};
use luka::speckit::{self, ModelBinding};
use luka::trainer::{reverse_engineer, TrainConfig, TrainData};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "luka", version, about = "Lukasiewicz logic: rule extraction, automata and relational specifications")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Number of truth values (k-valued logic, resolution k - 1).
    #[arg(long, global = true, default_value_t = 5)]
    logic: u32,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// exp, inf or and; eval defaults to exp, check-spec to inf.
    #[arg(long, global = true)]
    similarity: Option<SimilarityMode>,
    /// Output file or directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for restarts and word runs.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

impl Global {
    fn n(&self) -> anyhow::Result<u32> {
        if self.logic < 2 {
            bail!("--logic needs at least 2 truth values");
        }
        Ok(self.logic - 1)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    /// Word letters and final states.
    Io,
    /// States before and after one transition.
    Transitions,
    /// Truth table of --formula.
    Table,
    /// Model bindings for the bundled two-automata specification.
    Model,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Automaton,
    Network,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a dataset from an automaton or a formula.
    GenData {
        #[arg(long, value_enum, default_value = "io")]
        kind: Kind,
        /// Automaton file, or one of example, acyclic, cyclic.
        #[arg(long, default_value = "acyclic")]
        automaton: String,
        /// Second automaton for --kind model.
        #[arg(long, default_value = "cyclic")]
        second: String,
        #[arg(long, default_value_t = 6)]
        length: usize,
        /// Which transition to sample: last, all, or a 1-based position.
        #[arg(long, default_value = "last")]
        transition: Transition,
        #[arg(long, default_value = "a")]
        attribute: String,
        #[arg(long)]
        formula: Option<String>,
    },
    /// Extract a formula for one column of a dataset.
    Extract {
        #[arg(long)]
        data: PathBuf,
        /// Target column; defaults to the single output in the .meta file.
        #[arg(long)]
        target: Option<String>,
        /// Comma-separated input columns; defaults to the .meta inputs.
        #[arg(long)]
        inputs: Option<String>,
        /// key = value training configuration.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        tau: Option<f64>,
    },
    /// Similarity between a formula and a data column.
    Eval {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        target: Option<String>,
        /// Exit with status 1 below this similarity.
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Run an automaton on a word and print its trace.
    RunAutomaton {
        #[arg(long, default_value = "example")]
        automaton: String,
        /// Word CSV with one column per sign; defaults to the bundled word.
        #[arg(long)]
        word: Option<PathBuf>,
    },
    /// Classify a crisp neuron and give its formula or best approximation.
    Approx {
        /// Comma-separated integer weights.
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        bias: i32,
        /// Comma-separated input names (default x1..xk).
        #[arg(long)]
        names: Option<String>,
        /// List every rule-R candidate.
        #[arg(long)]
        all: bool,
    },
    /// Parse a specification and check it against a model.
    CheckSpec {
        /// Specification file; defaults to the bundled automata specification.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Manifest of sign = file.csv bindings.
        #[arg(long)]
        model: Option<PathBuf>,
        /// Check against bindings generated from the bundled automata.
        #[arg(long)]
        automata: bool,
        /// Print the normalized specification.
        #[arg(long)]
        print: bool,
        #[arg(long)]
        json: bool,
    },
    /// Compile a formula into an automaton or a network file.
    CompileFormula {
        #[arg(long)]
        formula: String,
        #[arg(long, value_enum, default_value = "automaton")]
        to: Target,
    },
    /// Rerun the reference results and print pass/fail per item.
    ReproPaper,
}

fn load_automaton(name: &str, n: u32) -> anyhow::Result<OmegaAutomaton> {
    let text = match name {
        "example" => fixtures::EXAMPLE_AUTOMATON.to_string(),
        "acyclic" => fixtures::ACYCLIC_AUTOMATON.to_string(),
        "cyclic" => fixtures::CYCLIC_AUTOMATON.to_string(),
        path => std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?,
    };
    Ok(parse_automaton(&text, n)?)
}

fn out_path(g: &Global) -> anyhow::Result<&Path> {
    g.out.as_deref().ok_or_else(|| anyhow!("--out is required"))
}

fn read_data(path: &Path, n: u32) -> anyhow::Result<Dataset> {
    Dataset::read_csv(path, Some(n)).with_context(|| format!("reading {}", path.display()))
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect()
}

/// Exit status 1: a check or threshold failed.
#[derive(Debug)]
struct Failed;

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("check failed")
    }
}

impl std::error::Error for Failed {}

fn run(cli: Cli) -> anyhow::Result<()> {
    let g = cli.global;
    if let Some(j) = g.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global()?;
    }
    let n = g.n()?;
    match cli.command {
        Command::GenData { kind, automaton, second, length, transition, attribute, formula } => {
            let out = out_path(&g)?;
            match kind {
                Kind::Model => {
                    let model = speckit::automata_model(&load_automaton(&automaton, n)?, &load_automaton(&second, n)?, length)?;
                    let manifest = model.write(out)?;
                    println!("wrote {} bindings, manifest {}", model.datasets.len(), manifest.display());
                    return Ok(());
                }
                Kind::Table => {
                    let f = parse_formula(formula.as_deref().ok_or_else(|| anyhow!("--kind table needs --formula"))?)?;
                    let vars = f.variables();
                    let table = truth_subtable_over(&f, &vars, n)?;
                    let mut columns = vars.clone();
                    columns.push("out".into());
                    let mut ds = Dataset::new(n, "row", columns);
                    for (i, (p, v)) in grid_points(vars.len(), n).zip(&table.entries).enumerate() {
                        let mut row: Vec<TruthValue> = p.iter().map(|&k| TruthValue::new(k, n)).collect::<luka::Result<_>>()?;
                        row.push(*v);
                        ds.push(format!("r{i}"), row)?;
                    }
                    ds.meta = DatasetMeta { inputs: vars, outputs: vec!["out".into()] };
                    ds.write_csv(out)?;
                    println!("wrote {} rows x {} attributes to {}", ds.len(), ds.columns.len(), out.display());
                }
                Kind::Io | Kind::Transitions => {
                    let aut = load_automaton(&automaton, n)?;
                    let words: Vec<_> = enumerate_words(n, length, &attribute).collect();
                    let ds = match kind {
                        Kind::Io => io_dataset(&aut, &words, &attribute)?,
                        _ => transition_dataset(&aut, &words, transition, &attribute)?,
                    };
                    ds.write_csv(out)?;
                    println!("wrote {} rows x {} attributes to {}", ds.len(), ds.columns.len(), out.display());
                }
            }
        }
        Command::Extract { data, target, inputs, config, restarts, tau } => {
            let ds = read_data(&data, n)?;
            let target = match target {
                Some(t) => t,
                None => match ds.meta.outputs.as_slice() {
                    [one] => one.clone(),
                    _ => bail!("pass --target: the data has {} outputs", ds.meta.outputs.len()),
                },
            };
            let inputs = match inputs {
                Some(s) => split_list(&s),
                None if !ds.meta.inputs.is_empty() => ds.meta.inputs.clone(),
                None => ds.columns.iter().filter(|c| **c != target).cloned().collect(),
            };
            let mut cfg = match config {
                Some(p) => TrainConfig::load(&p)?,
                None => TrainConfig::default(),
            };
            cfg.n = n;
            cfg.seed = g.seed;
            if restarts.is_some() {
                cfg.restarts = restarts;
            }
            if let Some(t) = tau {
                cfg.tau = t;
            }
            let td = TrainData::from_dataset(&ds, &inputs, &[target])?;
            let e = reverse_engineer(&td, &cfg)?;
            let report = g.out.clone().unwrap_or_else(|| data.with_extension("report.json"));
            std::fs::write(&report, e.report.to_json()).with_context(|| format!("writing {}", report.display()))?;
            println!("{} ~{:.4} {}", e.report.output, e.lambda, e.formula);
            println!("report: {}", report.display());
            if !e.report.accepted {
                eprintln!("below the threshold {}", cfg.tau);
                return Err(Failed.into());
            }
        }
        Command::Eval { formula, data, target, threshold } => {
            let f = parse_formula(&formula)?;
            let ds = read_data(&data, n)?;
            let target = match target {
                Some(t) => t,
                None => match ds.meta.outputs.as_slice() {
                    [one] => one.clone(),
                    _ => ds.columns.last().cloned().ok_or_else(|| anyhow!("empty data"))?,
                },
            };
            let t = ds.column_index(&target)?;
            let vars = f.variables();
            let idx: Vec<usize> = vars.iter().map(|v| ds.column_index(v)).collect::<luka::Result<_>>()?;
            let mut pred = Vec::new();
            let mut want = Vec::new();
            for row in &ds.rows {
                let lookup = |v: &str| vars.iter().position(|x| x == v).map(|i| row[idx[i]]);
                pred.push(f.eval_with(&lookup, Some(ds.n))?.to_f64());
                want.push(row[t].to_f64());
            }
            let lambda = similarity_f64(&pred, &want, g.similarity.unwrap_or(SimilarityMode::Exp))?;
            println!("{lambda}");
            if threshold.is_some_and(|th| lambda < th) {
                return Err(Failed.into());
            }
        }
        Command::RunAutomaton { automaton, word } => {
            let aut = load_automaton(&automaton, n)?;
            let w = match word {
                Some(p) => read_word_csv(&p, n)?,
                None => fixtures::example_word(),
            };
            let run = aut.run(&w)?;
            println!("step {}", aut.states.join(" "));
            for (k, e) in run.trace.iter().enumerate() {
                let vals: Vec<String> = e.iter().map(|v| v.to_string()).collect();
                println!("e{:<3} {}", k + 1, vals.join(" "));
            }
            let last: Vec<String> = run.last.iter().map(|v| v.to_string()).collect();
            println!("last {}", last.join(" "));
            let outs: Vec<String> = run.output.iter().map(|v| v.to_string()).collect();
            println!("output [{}]", outs.join(", "));
        }
        Command::Approx { weights, bias, names, all } => {
            let w: Vec<i32> = split_list(&weights).iter().map(|s| s.parse()).collect::<Result<_, _>>().context("weights")?;
            let cfg = match names {
                Some(s) => {
                    let names = split_list(&s);
                    if names.len() != w.len() {
                        bail!("{} names for {} weights", names.len(), w.len());
                    }
                    NeuronConfig::new(names, w, bias)
                }
                None => NeuronConfig::anonymous(&w, bias),
            };
            let class = classify_neuron(&cfg.active());
            println!("{cfg}: {class:?}");
            match class {
                NeuronClass::Unrepresentable => {
                    let cands = approximation_candidates(&cfg, n)?;
                    let (best, lambda) = cands.first().ok_or_else(|| anyhow!("no rule-R expansion"))?;
                    println!("~{lambda:.4} {best}");
                    if all {
                        for (f, l) in &cands {
                            println!("  {l:.4}  {f}");
                        }
                    }
                }
                _ => println!("= {}", neuron_to_formula(&cfg.active())?),
            }
        }
        Command::CheckSpec { spec, model, automata, print, json } => {
            let text = match &spec {
                Some(p) => std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
                None => fixtures::AUTOMATA_SPEC.to_string(),
            };
            let parsed = speckit::parse_spec(&text)?;
            if print {
                print!("{parsed}");
            }
            let binding = match (model, automata) {
                (Some(m), _) => Some(ModelBinding::load(&m)?),
                (None, true) => Some(speckit::automata_model(
                    &load_automaton("acyclic", n)?,
                    &load_automaton("cyclic", n)?,
                    6,
                )?),
                (None, false) => None,
            };
            match binding {
                None => println!(
                    "{} sorts, {} signs, {} diagrams, {} marks",
                    parsed.sorts().len(),
                    parsed.signs().len(),
                    parsed.diagrams().len(),
                    parsed.marks().len()
                ),
                Some(b) => {
                    let report = speckit::check(&parsed, &b, g.similarity.unwrap_or(SimilarityMode::Inf))?;
                    if json {
                        println!("{}", report.to_json());
                    } else {
                        println!("{report}");
                    }
                    if !report.passed {
                        return Err(Failed.into());
                    }
                }
            }
        }
        Command::CompileFormula { formula, to } => {
            let f = parse_formula(&formula)?;
            let text = match to {
                Target::Automaton => {
                    let inj = formula_to_automaton(&f, n);
                    format!(
                        "# output {} after {} iterations\n{}",
                        inj.automaton.states[inj.output],
                        inj.iterations,
                        inj.automaton.to_text()
                    )
                }
                Target::Network => serde_json::to_string_pretty(&formula_to_network(&f).to_json())?,
            };
            match &g.out {
                Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
                None => print!("{text}"),
            }
        }
        Command::ReproPaper => {
            if !repro::run(g.seed) {
                return Err(Failed.into());
            }
        }
    }
    Ok(())
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Failed>().is_some() {
        return 1;
    }
    for cause in e.chain() {
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 3;
        }
        if let Some(luka::Error::Io(_)) = cause.downcast_ref::<luka::Error>() {
            return 3;
        }
    }
    2
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = exit_code(&e);
            if code != 1 {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(code)
        }
    }
}
