use super::OmegaAutomaton;
use crate::error::{Error, Result};
use crate::logic::TruthValue;
use crate::relation::{Dataset, DatasetMeta};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::path::Path;

/// Sequence of positions, each assigning values to signs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FuzzyWord {
    pub positions: Vec<BTreeMap<String, TruthValue>>,
}

impl FuzzyWord {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Word over the two signs `attr=1`, `attr=0` with `attr=0 ↦ ¬v`.
    pub fn complementary(attribute: &str, values: &[TruthValue]) -> Self {
        let positions = values
            .iter()
            .map(|v| BTreeMap::from([(format!("{attribute}=1"), *v), (format!("{attribute}=0"), v.negation())]))
            .collect();
        FuzzyWord { positions }
    }

    /// Value of `sign` at each position, `0` when absent.
    pub fn sign_values(&self, sign: &str, n: u32) -> Vec<TruthValue> {
        self.positions.iter().map(|p| p.get(sign).copied().unwrap_or(TruthValue::zero(n))).collect()
    }
}

/// All `(n+1)^length` complementary words over `attribute`, first position
/// varying slowest.
pub fn enumerate_words(n: u32, length: usize, attribute: &str) -> impl Iterator<Item = FuzzyWord> + '_ {
    crate::logic::grid_points(length, n).map(move |p| {
        let vals: Vec<TruthValue> = p.iter().map(|&k| TruthValue::new(k, n).unwrap()).collect();
        FuzzyWord::complementary(attribute, &vals)
    })
}

fn word_key(w: &FuzzyWord, sign: &str, n: u32) -> String {
    w.sign_values(sign, n).iter().map(|v| v.numerator().to_string()).collect::<Vec<_>>().join("-")
}

/// One row per word: the `attribute=1` value at each position (`s1..sL`)
/// followed by the final value of every state.
pub fn io_dataset(aut: &OmegaAutomaton, words: &[FuzzyWord], attribute: &str) -> Result<Dataset> {
    let n = aut.n;
    let length = words.iter().map(|w| w.len()).max().unwrap_or(0);
    let sign = format!("{attribute}=1");
    let mut columns: Vec<String> = (1..=length).map(|i| format!("s{i}")).collect();
    columns.extend(aut.states.iter().cloned());
    let rows: Vec<(String, Vec<TruthValue>)> = words
        .par_iter()
        .map(|w| {
            let run = aut.run(w)?;
            let mut row = w.sign_values(&sign, n);
            row.resize(length, TruthValue::zero(n));
            row.extend(run.last);
            Ok((word_key(w, &sign, n), row))
        })
        .collect::<Result<_>>()?;
    let mut ds = Dataset::new(n, "word", columns);
    for (k, r) in rows {
        ds.push(k, r)?;
    }
    ds.meta = DatasetMeta {
        inputs: (1..=length).map(|i| format!("s{i}")).collect(),
        outputs: aut.states.clone(),
    };
    Ok(ds)
}

/// Which transition of each run a transition dataset samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Transition {
    /// Position `k`, 1-based.
    At(usize),
    /// The final position of each word.
    #[default]
    Last,
    /// Every position: one row per word and position, keys suffixed `#k`.
    All,
}

impl std::str::FromStr for Transition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "last" => Ok(Transition::Last),
            "all" => Ok(Transition::All),
            k => k.parse().map(Transition::At).map_err(|_| Error::InvalidValue(format!("transition `{k}`"))),
        }
    }
}

/// State after the overwrite at some position and its propagation, columns
/// `S` and `S_next` for every state `S`.
pub fn transition_dataset(aut: &OmegaAutomaton, words: &[FuzzyWord], which: Transition, attribute: &str) -> Result<Dataset> {
    let n = aut.n;
    let sign = format!("{attribute}=1");
    let mut columns = aut.states.clone();
    columns.extend(aut.states.iter().map(|s| format!("{s}_next")));
    let rows: Vec<Vec<(String, Vec<TruthValue>)>> = words
        .par_iter()
        .map(|w| {
            let picks: Vec<usize> = match which {
                Transition::At(k) => vec![k],
                Transition::Last => vec![w.len()],
                Transition::All => (1..=w.len()).collect(),
            };
            let run = aut.run(w)?;
            let key = word_key(w, &sign, n);
            picks
                .into_iter()
                .map(|at| {
                    if at == 0 || at > w.len() {
                        return Err(Error::Shape(format!("iteration {at} outside a word of length {}", w.len())));
                    }
                    let mut row = run.trace[at - 1].clone();
                    row.extend(aut.propagate(&run.trace[at - 1]));
                    let key = if which == Transition::All { format!("{key}#{at}") } else { key.clone() };
                    Ok((key, row))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut ds = Dataset::new(n, "word", columns);
    for (key, r) in rows.into_iter().flatten() {
        ds.push(key, r)?;
    }
    ds.meta = DatasetMeta {
        inputs: aut.states.clone(),
        outputs: aut.states.iter().map(|s| format!("{s}_next")).collect(),
    };
    Ok(ds)
}

/// Word CSV: one column per sign, one row per position.
pub fn read_word_csv(path: &Path, n: u32) -> Result<FuzzyWord> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path)?;
    let signs: Vec<String> = r.headers()?.iter().map(|s| s.trim().to_string()).collect();
    let mut word = FuzzyWord::default();
    for rec in r.records() {
        let rec = rec?;
        let mut pos = BTreeMap::new();
        for (s, v) in signs.iter().zip(rec.iter()) {
            pos.insert(s.clone(), TruthValue::parse_in(v, n)?);
        }
        word.positions.push(pos);
    }
    Ok(word)
}

pub fn write_word_csv(word: &FuzzyWord, path: &Path) -> Result<()> {
    let signs: Vec<String> = word.positions.iter().flat_map(|p| p.keys().cloned()).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(&signs)?;
    for p in &word.positions {
        w.write_record(signs.iter().map(|s| p.get(s).map_or("0".to_string(), |v| v.to_string())))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts_and_order() {
        assert_eq!(enumerate_words(1, 1, "a").count(), 2);
        assert_eq!(enumerate_words(2, 3, "a").count(), 27);
        let first = enumerate_words(4, 3, "a").next().unwrap();
        assert!(first.positions.iter().all(|p| p["a=0"].is_one() && p["a=1"].is_zero()));
        let second = enumerate_words(4, 3, "a").nth(1).unwrap();
        assert_eq!(second.positions[2]["a=1"].numerator(), 1);
    }

    #[test]
    fn transition_sampling() {
        let aut = crate::fixtures::example_automaton();
        let words: Vec<FuzzyWord> = enumerate_words(4, 3, "a").collect();
        let last = transition_dataset(&aut, &words, Transition::Last, "a").unwrap();
        assert_eq!((last.len(), last.columns.len()), (125, 16));
        let all = transition_dataset(&aut, &words, Transition::All, "a").unwrap();
        assert_eq!(all.len(), 375);
        assert_eq!(all.keys[2], "0-0-0#3");
        assert_eq!(all.rows[2], last.rows[0]);
        assert!(transition_dataset(&aut, &words, Transition::At(4), "a").is_err());
        assert_eq!("all".parse::<Transition>().unwrap(), Transition::All);
        assert_eq!("2".parse::<Transition>().unwrap(), Transition::At(2));
    }

    #[test]
    fn word_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("w.csv");
        let w = FuzzyWord::complementary("a", &[TruthValue::new(1, 4).unwrap(), TruthValue::new(4, 4).unwrap()]);
        write_word_csv(&w, &p).unwrap();
        assert_eq!(read_word_csv(&p, 4).unwrap(), w);
    }
}
