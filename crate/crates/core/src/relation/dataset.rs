use super::{Attribute, FiniteView};
use crate::error::{Error, Result};
use crate::logic::TruthValue;
use std::collections::HashSet;
use std::path::{Path, PathBuf};

/// Which columns are features and which are targets.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DatasetMeta {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

/// Keyed table of truth values: one row per object, one column per
/// asserted attribute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub n: u32,
    pub key_name: String,
    pub columns: Vec<String>,
    pub keys: Vec<String>,
    pub rows: Vec<Vec<TruthValue>>,
    pub meta: DatasetMeta,
}

impl Dataset {
    pub fn new(n: u32, key_name: impl Into<String>, columns: Vec<String>) -> Self {
        Dataset { n, key_name: key_name.into(), columns, keys: vec![], rows: vec![], meta: DatasetMeta::default() }
    }

    pub fn push(&mut self, key: impl Into<String>, row: Vec<TruthValue>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Shape(format!("row has {} values, expected {}", row.len(), self.columns.len())));
        }
        if let Some(v) = row.iter().find(|v| v.denominator() != self.n) {
            return Err(Error::ResolutionMismatch(self.n, v.denominator()));
        }
        self.keys.push(key.into());
        self.rows.push(row);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns.iter().position(|c| c == name).ok_or_else(|| Error::UnknownName(name.into()))
    }

    /// Values of the named columns as reals, one vector per row.
    pub fn select(&self, names: &[String]) -> Result<Vec<Vec<f64>>> {
        let idx: Vec<usize> = names.iter().map(|c| self.column_index(c)).collect::<Result<_>>()?;
        Ok(self.rows.iter().map(|r| idx.iter().map(|&i| r[i].to_f64()).collect()).collect())
    }

    pub fn column(&self, name: &str) -> Result<Vec<TruthValue>> {
        let i = self.column_index(name)?;
        Ok(self.rows.iter().map(|r| r[i]).collect())
    }

    /// The dataset as a view from the key to the column names.
    pub fn to_view(&self) -> Result<FiniteView> {
        let unique: HashSet<&String> = self.keys.iter().collect();
        if unique.len() != self.keys.len() {
            return Err(Error::Incompatible("duplicate keys".into()));
        }
        let mut v = FiniteView::new(
            vec![Attribute::new(self.key_name.clone(), self.keys.clone())],
            vec![Attribute::new("attribute", self.columns.clone())],
            self.n,
        )?;
        for (i, row) in self.rows.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                v.set_index(vec![i, j], *x)?;
            }
        }
        Ok(v)
    }

    /// Write `key,col...` rows; values printed as reduced fractions.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        let mut header = vec![self.key_name.clone()];
        header.extend(self.columns.iter().cloned());
        w.write_record(&header)?;
        for (k, row) in self.keys.iter().zip(&self.rows) {
            let mut rec = vec![k.clone()];
            rec.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        std::fs::write(meta_path(path), self.meta_text())?;
        Ok(())
    }

    fn meta_text(&self) -> String {
        format!(
            "n: {}\nkey: {}\ninputs: {}\noutputs: {}\n",
            self.n,
            self.key_name,
            self.meta.inputs.join(","),
            self.meta.outputs.join(",")
        )
    }

    /// Read a CSV dataset. The sidecar `.meta` file, if present, supplies the
    /// resolution and the input/output split; otherwise `n` is required.
    pub fn read_csv(path: &Path, n: Option<u32>) -> Result<Dataset> {
        let mut meta = DatasetMeta::default();
        let mut meta_n = None;
        if let Ok(text) = std::fs::read_to_string(meta_path(path)) {
            for line in text.lines() {
                let Some((k, v)) = line.split_once(':') else { continue };
                let list = || v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
                match k.trim() {
                    "n" => meta_n = Some(v.trim().parse().map_err(|_| Error::InvalidValue(v.into()))?),
                    "inputs" => meta.inputs = list(),
                    "outputs" => meta.outputs = list(),
                    _ => {}
                }
            }
        }
        let n = n.or(meta_n).ok_or_else(|| Error::InvalidValue("resolution unknown: pass n or add a .meta file".into()))?;
        let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).has_headers(true).from_path(path)?;
        let header: Vec<String> = r.headers()?.iter().map(|s| s.trim().to_string()).collect();
        let (key_name, columns) = header.split_first().ok_or_else(|| Error::Shape("empty header".into()))?;
        let mut ds = Dataset::new(n, key_name.clone(), columns.to_vec());
        ds.meta = meta;
        for rec in r.records() {
            let rec = rec?;
            let mut it = rec.iter();
            let key = it.next().unwrap_or_default().trim().to_string();
            let row = it.map(|s| TruthValue::parse_in(s, n)).collect::<Result<Vec<_>>>()?;
            ds.push(key, row)?;
        }
        Ok(ds)
    }
}

fn meta_path(path: &Path) -> PathBuf {
    path.with_extension("meta")
}
