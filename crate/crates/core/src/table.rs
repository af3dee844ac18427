//! Self-describing output tables.
//!
//! CSV layout: one `#`-prefixed line holding the resolved run metadata as
//! JSON, one column-header line, then data rows. Floats are written with 17
//! significant digits so that re-parsing recovers them exactly.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::OutputFormat;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub meta: Value,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error("missing '#' metadata line")]
    MissingMeta,
    #[error("bad metadata: {0}")]
    Meta(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("row {row} has {got} cells, expected {expected}")]
    Ragged { row: usize, got: usize, expected: usize },
}

/// Formats a float with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

impl Table {
    pub fn new(meta: Value, columns: &[&str]) -> Self {
        Self { meta, columns: columns.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Cell parsed as a float.
    pub fn float(&self, row: usize, name: &str) -> Option<f64> {
        self.rows.get(row)?.get(self.column(name)?)?.parse().ok()
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("table serializes");
                s.push('\n');
                s
            }
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("# {}\n", serde_json::to_string(&self.meta).expect("metadata serializes"));
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8"));
        out
    }

    pub fn parse_csv(text: &str) -> Result<Self, TableError> {
        let (first, rest) = text.split_once('\n').unwrap_or((text, ""));
        let meta_text = first.strip_prefix('#').ok_or(TableError::MissingMeta)?;
        let meta: Value = serde_json::from_str(meta_text.trim())?;
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(rest.as_bytes());
        let columns: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec?;
            if rec.len() != columns.len() {
                return Err(TableError::Ragged { row: i, got: rec.len(), expected: columns.len() });
            }
            rows.push(rec.iter().map(str::to_string).collect());
        }
        Ok(Self { meta, columns, rows })
    }

    pub fn parse_json(text: &str) -> Result<Self, TableError> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn floats_round_trip_through_csv(values in proptest::collection::vec(any::<f64>().prop_filter("finite", |v| v.is_finite()), 0..20)) {
            let mut t = Table::new(serde_json::json!({"k": "v, with comma"}), &["i", "x"]);
            for (i, v) in values.iter().enumerate() {
                t.push(vec![i.to_string(), fmt_f64(*v)]);
            }
            let back = Table::parse_csv(&t.to_csv()).unwrap();
            prop_assert_eq!(&back, &t);
            for (i, v) in values.iter().enumerate() {
                prop_assert_eq!(back.float(i, "x").unwrap(), *v);
            }
        }
    }

    #[test]
    fn header_only_table() {
        let t = Table::new(serde_json::json!({}), &["a", "b"]);
        let back = Table::parse_csv(&t.to_csv()).unwrap();
        assert!(back.rows.is_empty());
        assert_eq!(back.columns, vec!["a", "b"]);
        assert!(Table::parse_csv("a,b\n1,2\n").is_err());
    }

    #[test]
    fn json_round_trip() {
        let mut t = Table::new(serde_json::json!({"family": "aocs"}), &["n"]);
        t.push(vec!["0".into()]);
        assert_eq!(Table::parse_json(&t.render(OutputFormat::Json)).unwrap(), t);
    }
}
