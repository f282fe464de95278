use serde::Serialize;

use super::manifest::{Check, CheckKind, Selector, Tolerance};
use super::table::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Match,
    Tolerance,
    Discrepancy,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiffCell {
    pub row: String,
    pub col: String,
    pub computed: Option<f64>,
    pub printed: Option<f64>,
    pub abs_diff: Option<f64>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiffReport {
    pub check_id: String,
    pub table_id: String,
    pub kind: CheckKind,
    pub match_tol: Tolerance,
    pub tolerance: Tolerance,
    pub cells: Vec<DiffCell>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct DiffCounts {
    pub matched: usize,
    pub within_tolerance: usize,
    pub discrepancies: usize,
}

impl DiffReport {
    pub fn counts(&self) -> DiffCounts {
        let mut c = DiffCounts::default();
        for cell in &self.cells {
            match cell.verdict {
                Verdict::Match => c.matched += 1,
                Verdict::Tolerance => c.within_tolerance += 1,
                Verdict::Discrepancy => c.discrepancies += 1,
            }
        }
        c
    }

    pub fn discrepancies(&self) -> impl Iterator<Item = &DiffCell> {
        self.cells.iter().filter(|c| c.verdict == Verdict::Discrepancy)
    }

    pub fn max_abs_diff(&self) -> f64 {
        self.cells.iter().filter_map(|c| c.abs_diff).fold(0.0, f64::max)
    }

    /// True when a binding check has any discrepancy.
    pub fn fails_strict(&self) -> bool {
        self.kind.is_binding() && self.counts().discrepancies > 0
    }

    pub fn summary_line(&self) -> String {
        let c = self.counts();
        format!(
            "{:<32} {:<18} cells={:<4} match={:<4} tolerance={:<4} discrepancy={:<4} max_abs_diff={:.4}",
            self.check_id,
            self.kind,
            self.cells.len(),
            c.matched,
            c.within_tolerance,
            c.discrepancies,
            self.max_abs_diff()
        )
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DiffError {
    #[error("shape mismatch: reference row `{0}` missing from computed table")]
    MissingRow(String),
    #[error("shape mismatch: reference column `{0}` missing from computed table")]
    MissingColumn(String),
    #[error("no cells selected")]
    NothingSelected,
}

/// Cell-by-cell comparison of the selected rows and columns. Cells empty on
/// both sides are skipped; a cell present on one side only is a discrepancy.
pub fn diff_tables(
    computed: &Table,
    printed: &Table,
    rows: &Selector,
    columns: &Selector,
    match_tol: Tolerance,
    tolerance: Tolerance,
) -> Result<Vec<DiffCell>, DiffError> {
    let mut cells = Vec::new();
    let cols: Vec<(usize, &String)> = printed
        .columns
        .iter()
        .enumerate()
        .filter(|(_, c)| columns.selects(c))
        .collect();
    for (_, col) in &cols {
        if computed.column_index(col).is_none() {
            return Err(DiffError::MissingColumn((*col).clone()));
        }
    }
    for (label, values) in printed.rows.iter().filter(|(l, _)| rows.selects(l)) {
        let crow = computed.row(label).ok_or_else(|| DiffError::MissingRow(label.clone()))?;
        for &(pi, col) in &cols {
            let ci = computed.column_index(col).unwrap_or(pi);
            let p = values.get(pi).copied().flatten();
            let c = crow.get(ci).copied().flatten();
            let (abs_diff, verdict) = match (c, p) {
                (None, None) => continue,
                (Some(c), Some(p)) => {
                    let v = if match_tol.allows(c, p) {
                        Verdict::Match
                    } else if tolerance.allows(c, p) {
                        Verdict::Tolerance
                    } else {
                        Verdict::Discrepancy
                    };
                    (Some((c - p).abs()), v)
                }
                _ => (None, Verdict::Discrepancy),
            };
            cells.push(DiffCell {
                row: label.clone(),
                col: col.clone(),
                computed: c,
                printed: p,
                abs_diff,
                verdict,
            });
        }
    }
    if cells.is_empty() {
        return Err(DiffError::NothingSelected);
    }
    Ok(cells)
}

/// Compares `computed` against a reference table under a manifest check.
pub fn diff_against_fixture(computed: &Table, printed: &Table, check: &Check) -> Result<DiffReport, DiffError> {
    let cells = diff_tables(
        computed,
        printed,
        &check.rows,
        &check.columns,
        check.match_tol,
        check.tolerance,
    )?;
    Ok(DiffReport {
        check_id: check.id.clone(),
        table_id: check.fixture.clone(),
        kind: check.kind,
        match_tol: check.match_tol,
        tolerance: check.tolerance,
        cells,
    })
}

/// CSV listing of every compared cell across reports.
pub fn cells_csv(reports: &[DiffReport]) -> String {
    let mut s = String::from("check,table,kind,row,col,computed,printed,abs_diff,verdict\n");
    let f = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_default();
    for r in reports {
        for c in &r.cells {
            let verdict = match c.verdict {
                Verdict::Match => "match",
                Verdict::Tolerance => "tolerance",
                Verdict::Discrepancy => "discrepancy",
            };
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                r.check_id,
                r.table_id,
                r.kind,
                c.row,
                c.col,
                f(c.computed),
                f(c.printed),
                f(c.abs_diff),
                verdict
            ));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(rows: &[(&str, &[f64])]) -> Table {
        let mut t = Table::new("country", vec!["a".into(), "b".into()], 2);
        for (l, v) in rows {
            t.push_values(*l, v.iter().copied());
        }
        t
    }

    #[test]
    fn identical_tables_have_no_discrepancies() {
        let x = t(&[("BE", &[1.0, 2.0]), ("BG", &[3.0, 4.0])]);
        let cells = diff_tables(&x, &x, &Selector::All, &Selector::All, Tolerance::Abs(0.0), Tolerance::Abs(0.5)).unwrap();
        assert_eq!(cells.len(), 4);
        assert!(cells.iter().all(|c| c.verdict == Verdict::Match));
    }

    #[test]
    fn verdict_bands() {
        let printed = t(&[("BE", &[1.0, 2.0])]);
        let computed = t(&[("BE", &[1.3, 3.0])]);
        let cells = diff_tables(
            &computed,
            &printed,
            &Selector::All,
            &Selector::All,
            Tolerance::Abs(0.1),
            Tolerance::Abs(0.5),
        )
        .unwrap();
        assert_eq!(cells[0].verdict, Verdict::Tolerance);
        assert_eq!(cells[1].verdict, Verdict::Discrepancy);
    }

    #[test]
    fn shape_mismatch() {
        let printed = t(&[("BE", &[1.0, 2.0]), ("BG", &[1.0, 2.0])]);
        let computed = t(&[("BE", &[1.0, 2.0])]);
        assert_eq!(
            diff_tables(&computed, &printed, &Selector::All, &Selector::All, Tolerance::Abs(0.0), Tolerance::Abs(0.0)),
            Err(DiffError::MissingRow("BG".into()))
        );
    }
}
