use std::fmt::Write as _;

use crate::ingest::{parse_number, DecimalMark};

/// A labelled numeric table: one label column followed by numeric columns.
/// Empty cells are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub label_header: String,
    pub columns: Vec<String>,
    pub rows: Vec<(String, Vec<Option<f64>>)>,
    /// Decimals used when writing.
    pub decimals: usize,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TableError {
    #[error("empty table")]
    Empty,
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: non-numeric cell `{value}`")]
    NonNumeric { line: usize, value: String },
}

impl Table {
    pub fn new(label_header: &str, columns: Vec<String>, decimals: usize) -> Self {
        Table {
            label_header: label_header.to_string(),
            columns,
            rows: Vec::new(),
            decimals,
        }
    }

    pub fn push(&mut self, label: impl Into<String>, values: Vec<Option<f64>>) {
        self.rows.push((label.into(), values));
    }

    pub fn push_values(&mut self, label: impl Into<String>, values: impl IntoIterator<Item = f64>) {
        self.push(label, values.into_iter().map(Some).collect());
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn row(&self, label: &str) -> Option<&[Option<f64>]> {
        self.rows.iter().find(|(l, _)| l == label).map(|(_, v)| v.as_slice())
    }

    pub fn cell(&self, row: &str, column: &str) -> Option<f64> {
        let c = self.column_index(column)?;
        self.row(row)?.get(c).copied().flatten()
    }

    /// All values of one column, keyed by row label.
    pub fn column(&self, name: &str) -> Vec<(String, Option<f64>)> {
        match self.column_index(name) {
            Some(c) => self.rows.iter().map(|(l, v)| (l.clone(), v[c])).collect(),
            None => Vec::new(),
        }
    }

    /// Parses delimited text. Semicolon-delimited tables use a decimal comma.
    pub fn parse(text: &str) -> Result<Table, TableError> {
        let text = text.trim_start_matches('\u{feff}');
        let header = text.lines().next().ok_or(TableError::Empty)?;
        let (delim, decimal) = if header.contains(';') {
            (b';', DecimalMark::Comma)
        } else {
            (b',', DecimalMark::Point)
        };
        let mut rdr = csv::ReaderBuilder::new()
            .delimiter(delim)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let head = rdr
            .headers()
            .map_err(|e| TableError::Malformed {
                line: 1,
                message: e.to_string(),
            })?
            .clone();
        let mut it = head.iter();
        let label_header = it.next().ok_or(TableError::Empty)?.to_string();
        let columns: Vec<String> = it.map(str::to_string).collect();
        let mut table = Table::new(&label_header, columns, 2);
        for (i, rec) in rdr.records().enumerate() {
            let line = i + 2;
            let rec = rec.map_err(|e| TableError::Malformed {
                line,
                message: e.to_string(),
            })?;
            let mut cells = rec.iter();
            let label = cells.next().unwrap_or_default().to_string();
            let values = cells
                .map(|c| {
                    if c.is_empty() {
                        Ok(None)
                    } else {
                        parse_number(c, decimal).map(Some).ok_or_else(|| TableError::NonNumeric {
                            line,
                            value: c.to_string(),
                        })
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            table.push(label, values);
        }
        if table.rows.is_empty() {
            return Err(TableError::Empty);
        }
        Ok(table)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        s.push_str(&self.label_header);
        for c in &self.columns {
            s.push(',');
            s.push_str(c);
        }
        s.push('\n');
        for (label, values) in &self.rows {
            s.push_str(label);
            for v in values {
                s.push(',');
                if let Some(v) = v {
                    let _ = write!(s, "{:.*}", self.decimals, v);
                }
            }
            s.push('\n');
        }
        s
    }
}

/// Column header for a grid parameter: one decimal (`0.3`), or as many as
/// needed to tell grid points apart (`0.25`).
pub fn param_header(p: f64) -> String {
    for decimals in 1..=6 {
        let s = format!("{p:.decimals$}");
        if (s.parse::<f64>().unwrap_or(f64::NAN) - p).abs() < 1e-9 {
            return s;
        }
    }
    format!("{p}")
}
