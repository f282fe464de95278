//! Human-readable description of the input files, for `carbon-quota formats`.

use std::fmt::Write as _;

use crate::ingest::{FileKind, Variable};

/// The input layout as plain text.
pub fn describe() -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Input files (one directory, passed with --data-dir)");
    let _ = writeln!(s);
    let _ = writeln!(s, "Delimiter: comma, semicolon or tab, detected from the header line.");
    let _ = writeln!(s, "Numbers: decimal point; a trailing % is accepted and ignored.");
    let _ = writeln!(s, "Country codes: the 27 ISO 3166 alpha-2 codes (GR is read as EL), plus EU27.");
    let _ = writeln!(s);
    for v in Variable::ALL {
        let kind = FileKind::Series(v);
        let _ = writeln!(s, "{}", v.file_name());
        let _ = writeln!(s, "  columns:  {}", columns(kind));
        let _ = writeln!(
            s,
            "  unit:     {} (loaded as {}); an optional unit column may say t, kt or Mt",
            v.source_unit().symbol(),
            v.canonical_unit().symbol()
        );
        let scope = match v {
            Variable::EsrEmissions | Variable::EtsEmissions => "EU27 only",
            _ => "EU27 and every Member State",
        };
        let _ = writeln!(s, "  rows:     {scope}, contiguous years");
    }
    let _ = writeln!(s, "targets.csv");
    let _ = writeln!(s, "  columns:  {}", columns(FileKind::Targets));
    let _ = writeln!(s, "  units:    e2005 and allocations in t; percentages as fractions in [-1, 0]");
    let _ = writeln!(s, "  rows:     every Member State");
    let _ = writeln!(s, "tapio_overrides.csv (optional)");
    let _ = writeln!(s, "  columns:  {}", columns(FileKind::TapioOverrides));
    let _ = writeln!(s, "  window:   W3, W2, W1 or AVG");
    let _ = writeln!(s, "tapio_deltas.csv (optional)");
    let _ = writeln!(s, "  columns:  {}", columns(FileKind::TapioDeltas));
    let _ = writeln!(s, "  values:   percentage changes; values beyond +/-50 are flagged");
    s
}

fn columns(kind: FileKind) -> String {
    let mut cols = kind.expected_header().join(",");
    for o in kind.optional_columns() {
        let _ = write!(cols, "[,{o}]");
    }
    cols
}

#[cfg(test)]
mod tests {
    #[test]
    fn lists_every_file() {
        let d = super::describe();
        for f in ["gdp_per_capita.csv", "targets.csv", "tapio_deltas.csv", "alloc_2030"] {
            assert!(d.contains(f), "{f}");
        }
    }
}
