//! The per-check comparison manifest shipped next to the reference tables.
//!
//! Each line names a reference table, which rows and columns to compare, how
//! the computed side is produced, and the tolerances that decide each cell's
//! verdict.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::indices::StudyLabel;

const MANIFEST: &str = include_str!("../../data/reference/manifest.csv");

/// What a check's result means.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// The pipeline must reproduce the table.
    Target,
    /// The table must be reproduced from its own endpoint columns.
    Endpoint,
    /// The reference contradicts itself or its inputs; discrepancies expected.
    KnownInconsistent,
    /// Reported for context only.
    Informational,
}

impl CheckKind {
    /// Whether a discrepancy in this check counts against `diff --strict`.
    pub fn is_binding(self) -> bool {
        matches!(self, CheckKind::Target | CheckKind::Endpoint)
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckKind::Target => "target",
            CheckKind::Endpoint => "endpoint",
            CheckKind::KnownInconsistent => "known_inconsistent",
            CheckKind::Informational => "informational",
        })
    }
}

/// How the computed side of a check is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckSource {
    /// Full pipeline from the input dataset.
    Pipeline,
    /// Pipeline with tapio recomputed from the per-capita series.
    Raw,
    /// Blend formulas fed with the reference table's own endpoint columns.
    Endpoints,
    /// ESR budgets summed from the printed Green Deal allocation rows.
    PrintedAllocations,
}

/// An absolute or relative tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Tolerance {
    Abs(f64),
    /// Fraction of the printed value.
    Rel(f64),
}

/// Binary floating point cannot hold most decimal boundaries exactly; a
/// difference of exactly the tolerance may come out a few ulps above it.
const REPRESENTATION_SLACK: f64 = 1e-12;

impl Tolerance {
    pub fn allows(self, computed: f64, printed: f64) -> bool {
        let d = (computed - printed).abs();
        let slack = REPRESENTATION_SLACK * computed.abs().max(printed.abs()).max(1.0);
        match self {
            Tolerance::Abs(t) => d <= t + slack,
            Tolerance::Rel(r) => d <= r * printed.abs() + slack,
        }
    }
}

impl FromStr for Tolerance {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || format!("bad tolerance `{s}`");
        match s.strip_suffix('%') {
            Some(p) => p.parse::<f64>().map(|v| Tolerance::Rel(v / 100.0)).map_err(|_| bad()),
            None => s.parse::<f64>().map(Tolerance::Abs).map_err(|_| bad()),
        }
    }
}

impl fmt::Display for Tolerance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tolerance::Abs(t) => write!(f, "{t}"),
            Tolerance::Rel(r) => write!(f, "{}%", r * 100.0),
        }
    }
}

/// `*`, an explicit `a|b` list, or everything except a list (`~a|b`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Selector {
    All,
    Only(Vec<String>),
    Except(Vec<String>),
}

impl Selector {
    pub fn parse(s: &str) -> Selector {
        let list = |x: &str| x.split('|').map(|p| p.trim().to_string()).collect();
        match s.trim() {
            "*" | "" => Selector::All,
            x => match x.strip_prefix('~') {
                Some(rest) => Selector::Except(list(rest)),
                None => Selector::Only(list(x)),
            },
        }
    }

    pub fn selects(&self, name: &str) -> bool {
        match self {
            Selector::All => true,
            Selector::Only(v) => v.iter().any(|x| x == name),
            Selector::Except(v) => !v.iter().any(|x| x == name),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub fixture: String,
    /// `None` when the check does not depend on the study.
    pub study: Option<StudyLabel>,
    pub source: CheckSource,
    pub kind: CheckKind,
    pub rows: Selector,
    pub columns: Selector,
    pub match_tol: Tolerance,
    pub tolerance: Tolerance,
    pub note: String,
}

impl Check {
    pub fn applies_to(&self, study: StudyLabel) -> bool {
        self.study.is_none_or(|s| s == study)
    }
}

/// Parses manifest text.
pub fn parse_manifest(text: &str) -> Result<Vec<Check>, String> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| format!("manifest line {line}: {e}"))?;
        let f = |k: usize| rec.get(k).unwrap_or("").to_string();
        let err = |what: &str| format!("manifest line {line}: {what}");
        let study = match f(2).as_str() {
            "*" => None,
            s => Some(s.parse::<StudyLabel>().map_err(|e| err(&e))?),
        };
        let source = match f(3).as_str() {
            "pipeline" => CheckSource::Pipeline,
            "raw" => CheckSource::Raw,
            "endpoints" => CheckSource::Endpoints,
            "printed_allocations" => CheckSource::PrintedAllocations,
            s => return Err(err(&format!("unknown source `{s}`"))),
        };
        let kind = match f(4).as_str() {
            "target" => CheckKind::Target,
            "endpoint" => CheckKind::Endpoint,
            "known_inconsistent" => CheckKind::KnownInconsistent,
            "informational" => CheckKind::Informational,
            s => return Err(err(&format!("unknown kind `{s}`"))),
        };
        out.push(Check {
            id: f(0),
            fixture: f(1),
            study,
            source,
            kind,
            rows: Selector::parse(&f(5)),
            columns: Selector::parse(&f(6)),
            match_tol: f(7).parse().map_err(|e: String| err(&e))?,
            tolerance: f(8).parse().map_err(|e: String| err(&e))?,
            note: f(9),
        });
    }
    Ok(out)
}

/// The bundled manifest.
pub fn manifest() -> Vec<Check> {
    parse_manifest(MANIFEST).expect("bundled manifest is valid")
}

pub fn find_check(id: &str) -> Option<Check> {
    manifest().into_iter().find(|c| c.id == id)
}
