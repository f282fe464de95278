//! Loading and validating the delimited input files.
//!
//! Every input is a small UTF-8 table. The delimiter (comma, semicolon or tab)
//! is detected from the header row; the decimal mark is configured per file
//! because the source material mixes `3875.48` and `2,08E+09`. Values are
//! converted to canonical units on the way in: emissions end up in Mt CO₂eq,
//! per-capita series keep their natural units.
//!
//! Loading is all-or-nothing. [`load_dataset`] either returns a fully
//! validated [`Dataset`] or every problem it found, as a [`LoadError`].

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::country::{CountryMap, MemberState, Region};

/// Years covered by the Effort Sharing Regulation allocations.
pub const ALLOCATION_YEARS: RangeInclusive<i32> = 2021..=2030;

/// Implausibility bound for percentage changes in the tapio delta file.
const DELTA_PLAUSIBLE_PCT: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Variable {
    GdpPerCapita,
    GhgPerCapita,
    GhgTotal,
    EsrEmissions,
    EtsEmissions,
}

impl Variable {
    pub const ALL: [Variable; 5] = [
        Variable::GdpPerCapita,
        Variable::GhgPerCapita,
        Variable::GhgTotal,
        Variable::EsrEmissions,
        Variable::EtsEmissions,
    ];

    /// Unit the raw files are expected in when they carry no `unit` column.
    pub fn source_unit(self) -> Unit {
        match self {
            Variable::GdpPerCapita => Unit::CurrencyPerCapita,
            Variable::GhgPerCapita => Unit::TonnesPerCapita,
            Variable::GhgTotal => Unit::Kilotonnes,
            Variable::EsrEmissions | Variable::EtsEmissions => Unit::Tonnes,
        }
    }

    pub fn canonical_unit(self) -> Unit {
        match self {
            Variable::GdpPerCapita => Unit::CurrencyPerCapita,
            Variable::GhgPerCapita => Unit::TonnesPerCapita,
            _ => Unit::Megatonnes,
        }
    }

    /// Standard file name inside a dataset directory.
    pub fn file_name(self) -> &'static str {
        match self {
            Variable::GdpPerCapita => "gdp_per_capita.csv",
            Variable::GhgPerCapita => "ghg_per_capita.csv",
            Variable::GhgTotal => "ghg_total.csv",
            Variable::EsrEmissions => "esr_emissions.csv",
            Variable::EtsEmissions => "ets_emissions.csv",
        }
    }

    /// Whether the file must list the aggregate and all 27 Member States.
    fn requires_full_registry(self) -> bool {
        matches!(self, Variable::GdpPerCapita | Variable::GhgPerCapita | Variable::GhgTotal)
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Variable::GdpPerCapita => "GDP_PER_CAPITA",
            Variable::GhgPerCapita => "GHG_PER_CAPITA",
            Variable::GhgTotal => "GHG_TOTAL",
            Variable::EsrEmissions => "ESR_EMISSIONS",
            Variable::EtsEmissions => "ETS_EMISSIONS",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Unit {
    CurrencyPerCapita,
    TonnesPerCapita,
    Tonnes,
    Kilotonnes,
    Megatonnes,
}

impl Unit {
    pub fn symbol(self) -> &'static str {
        match self {
            Unit::CurrencyPerCapita => "eur/cap",
            Unit::TonnesPerCapita => "t/cap",
            Unit::Tonnes => "t",
            Unit::Kilotonnes => "kt",
            Unit::Megatonnes => "Mt",
        }
    }

    fn parse(s: &str) -> Option<Unit> {
        Some(match s.trim() {
            "eur/cap" => Unit::CurrencyPerCapita,
            "t/cap" => Unit::TonnesPerCapita,
            "t" => Unit::Tonnes,
            "kt" => Unit::Kilotonnes,
            "Mt" => Unit::Megatonnes,
            _ => return None,
        })
    }

    /// Multiplier from this unit to `to`, if the two are commensurable.
    fn factor_to(self, to: Unit) -> Option<f64> {
        let mass = |u: Unit| match u {
            Unit::Tonnes => Some(1e-6),
            Unit::Kilotonnes => Some(1e-3),
            Unit::Megatonnes => Some(1.0),
            _ => None,
        };
        if self == to {
            return Some(1.0);
        }
        Some(mass(self)? / mass(to)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DecimalMark {
    #[default]
    Point,
    Comma,
}

/// One annual series for one region, in canonical units.
#[derive(Debug, Clone, PartialEq)]
pub struct CountrySeries {
    pub region: Region,
    pub variable: Variable,
    /// Unit the values were converted from.
    pub source_unit: Unit,
    pub points: BTreeMap<i32, f64>,
}

impl CountrySeries {
    pub fn new(region: Region, variable: Variable, points: BTreeMap<i32, f64>) -> Self {
        CountrySeries {
            region,
            variable,
            source_unit: variable.canonical_unit(),
            points,
        }
    }

    pub fn unit(&self) -> Unit {
        self.variable.canonical_unit()
    }

    pub fn get(&self, year: i32) -> Option<f64> {
        self.points.get(&year).copied()
    }

    pub fn value(&self, year: i32) -> Result<f64, DataError> {
        self.get(year).ok_or(DataError::MissingYear {
            region: self.region,
            variable: self.variable,
            year,
        })
    }

    pub fn years(&self) -> Option<RangeInclusive<i32>> {
        let first = *self.points.keys().next()?;
        let last = *self.points.keys().next_back()?;
        Some(first..=last)
    }

    /// Arithmetic mean over an inclusive year range; every year must be present.
    pub fn mean(&self, years: RangeInclusive<i32>) -> Result<f64, DataError> {
        let n = years.clone().count();
        if n == 0 {
            return Err(DataError::EmptyRange);
        }
        let mut sum = 0.0;
        for y in years {
            sum += self.value(y)?;
        }
        Ok(sum / n as f64)
    }
}

/// Rebase a series so that `base_year` reads 100.
pub fn normalize_to_base(series: &CountrySeries, base_year: i32) -> Result<CountrySeries, DataError> {
    let base = series.value(base_year)?;
    if base == 0.0 {
        return Err(DataError::ZeroBase {
            region: series.region,
            year: base_year,
        });
    }
    let points = series
        .points
        .iter()
        .map(|(&y, &v)| (y, 100.0 * (v / base)))
        .collect();
    Ok(CountrySeries {
        points,
        ..series.clone()
    })
}

/// Regulation and Green Deal targets for one Member State, in Mt CO₂eq.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetTable {
    pub country: MemberState,
    pub e2005: f64,
    pub pct_regulation_2030: f64,
    pub pct_greendeal_2030: f64,
    /// Annual Regulation allocations, 2021..=2030.
    pub regulation: BTreeMap<i32, f64>,
    /// Ratio as printed in the source proportioning table, when supplied.
    pub printed_ratio: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TapioWindow {
    /// 2016–2019
    W3,
    /// 2017–2019
    W2,
    /// 2018–2019
    W1,
    /// A pre-averaged value over W3, W2 and W1.
    Avg,
}

impl TapioWindow {
    pub fn span(self) -> Option<(i32, i32)> {
        match self {
            TapioWindow::W3 => Some((2016, 2019)),
            TapioWindow::W2 => Some((2017, 2019)),
            TapioWindow::W1 => Some((2018, 2019)),
            TapioWindow::Avg => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            TapioWindow::W3 => "W3",
            TapioWindow::W2 => "W2",
            TapioWindow::W1 => "W1",
            TapioWindow::Avg => "AVG",
        }
    }

    fn parse(s: &str) -> Option<TapioWindow> {
        Some(match s.trim().to_ascii_uppercase().as_str() {
            "W3" => TapioWindow::W3,
            "W2" => TapioWindow::W2,
            "W1" => TapioWindow::W1,
            "AVG" => TapioWindow::Avg,
            _ => return None,
        })
    }
}

/// Authoritative tapio values keyed by region and window.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TapioOverrides {
    values: BTreeMap<(Region, TapioWindow), f64>,
}

impl TapioOverrides {
    pub fn get(&self, region: Region, window: TapioWindow) -> Option<f64> {
        self.values.get(&(region, window)).copied()
    }

    pub fn insert(&mut self, region: Region, window: TapioWindow, value: f64) {
        self.values.insert((region, window), value);
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Percentage changes of GDP and GHG per capita over one window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TapioDelta {
    pub region: Region,
    pub window: TapioWindow,
    pub d_gdp_pct: f64,
    pub d_ghg_pct: f64,
}

/// Something accepted by the loader but worth a second look.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DataFlag {
    pub file: String,
    pub region: Region,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DataError {
    #[error("{region}: no {variable} series in the dataset")]
    MissingSeries { region: Region, variable: Variable },
    #[error("{region}: {variable} has no value for {year}")]
    MissingYear {
        region: Region,
        variable: Variable,
        year: i32,
    },
    #[error("{region}: base year {year} is zero")]
    ZeroBase { region: Region, year: i32 },
    #[error("empty year range")]
    EmptyRange,
    #[error("{0}: no target table")]
    MissingTarget(MemberState),
}

/// A single validation failure, tagged with the file it came from.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ValidationError {
    #[error("{file}: cannot read: {message}")]
    Io { file: String, message: String },
    #[error("{file}: no rows")]
    NoRows { file: String },
    #[error("{file}: header `{found}` does not match expected `{expected}`")]
    BadHeader {
        file: String,
        expected: String,
        found: String,
    },
    #[error("{file}:{line}: malformed row: {message}")]
    Malformed {
        file: String,
        line: u64,
        message: String,
    },
    #[error("{file}:{line}: non-numeric value `{value}` in column `{column}`")]
    NonNumeric {
        file: String,
        line: u64,
        column: String,
        value: String,
    },
    #[error("{file}:{line}: unknown country code `{code}`")]
    UnknownCountry { file: String, line: u64, code: String },
    #[error("{file}:{line}: {message}")]
    InvalidValue {
        file: String,
        line: u64,
        message: String,
    },
    #[error("{file}: missing country {name} ({code})")]
    MissingCountry {
        file: String,
        code: &'static str,
        name: &'static str,
    },
    #[error("{file}: duplicate entry for {key}")]
    Duplicate { file: String, key: String },
    #[error("{file}: {region} years are not contiguous (gap at {year})")]
    NonContiguousYears { file: String, region: Region, year: i32 },
}

/// Every validation failure found while loading.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadError {
    pub errors: Vec<ValidationError>,
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} validation error(s)", self.errors.len())?;
        for e in &self.errors {
            write!(f, "\n  - {e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for LoadError {}

/// The kind of file, which fixes its expected columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Series(Variable),
    Targets,
    TapioOverrides,
    TapioDeltas,
}

impl FileKind {
    pub fn expected_header(self) -> Vec<String> {
        match self {
            FileKind::Series(_) => vec!["country_code".into(), "year".into(), "value".into()],
            FileKind::Targets => {
                let mut h: Vec<String> = ["country_code", "e2005_t", "pct_reg_2030", "pct_gd_2030"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect();
                h.extend(ALLOCATION_YEARS.map(|y| format!("alloc_{y}")));
                h
            }
            FileKind::TapioOverrides => vec!["country_code".into(), "window".into(), "value".into()],
            FileKind::TapioDeltas => vec![
                "country_code".into(),
                "window".into(),
                "d_gdp_pct".into(),
                "d_ghg_pct".into(),
            ],
        }
    }

    /// Trailing columns that may be present after the required ones.
    pub fn optional_columns(self) -> &'static [&'static str] {
        match self {
            FileKind::Series(_) => &["unit"],
            FileKind::Targets => &["ratio_printed"],
            _ => &[],
        }
    }
}

/// Raw text of one input file plus how to read it.
#[derive(Debug, Clone)]
pub struct Source {
    pub kind: FileKind,
    pub name: String,
    pub text: String,
    pub decimal: DecimalMark,
}

/// Where the dataset's files live on disk.
#[derive(Debug, Clone)]
pub struct DatasetPaths {
    pub series: Vec<(Variable, PathBuf)>,
    pub targets: PathBuf,
    pub tapio_overrides: Option<PathBuf>,
    pub tapio_deltas: Option<PathBuf>,
    /// Files read with a decimal comma; everything else uses a decimal point.
    pub decimal_comma: Vec<PathBuf>,
}

impl DatasetPaths {
    /// The standard layout: one file per variable plus `targets.csv`, with
    /// `tapio_overrides.csv` and `tapio_deltas.csv` picked up when present.
    pub fn in_dir(dir: impl AsRef<Path>) -> Self {
        let dir = dir.as_ref();
        let optional = |name: &str| {
            let p = dir.join(name);
            p.exists().then_some(p)
        };
        DatasetPaths {
            series: Variable::ALL.iter().map(|&v| (v, dir.join(v.file_name()))).collect(),
            targets: dir.join("targets.csv"),
            tapio_overrides: optional("tapio_overrides.csv"),
            tapio_deltas: optional("tapio_deltas.csv"),
            decimal_comma: Vec::new(),
        }
    }
}

/// All validated inputs.
#[derive(Debug, Clone, Default)]
pub struct Dataset {
    pub series: BTreeMap<(Variable, Region), CountrySeries>,
    pub targets: BTreeMap<MemberState, TargetTable>,
    pub tapio_overrides: Option<TapioOverrides>,
    pub tapio_deltas: Vec<TapioDelta>,
    pub flags: Vec<DataFlag>,
}

impl Dataset {
    pub fn series(&self, variable: Variable, region: Region) -> Result<&CountrySeries, DataError> {
        self.series
            .get(&(variable, region))
            .ok_or(DataError::MissingSeries { region, variable })
    }

    pub fn value(&self, variable: Variable, region: Region, year: i32) -> Result<f64, DataError> {
        self.series(variable, region)?.value(year)
    }

    /// One year's value for every Member State.
    pub fn member_values(&self, variable: Variable, year: i32) -> Result<CountryMap, DataError> {
        MemberState::ALL
            .iter()
            .map(|&m| Ok((m, self.value(variable, Region::Member(m), year)?)))
            .collect()
    }

    /// Mean over `years` for every Member State.
    pub fn member_means(&self, variable: Variable, years: RangeInclusive<i32>) -> Result<CountryMap, DataError> {
        MemberState::ALL
            .iter()
            .map(|&m| Ok((m, self.series(variable, Region::Member(m))?.mean(years.clone())?)))
            .collect()
    }

    pub fn target(&self, m: MemberState) -> Result<&TargetTable, DataError> {
        self.targets.get(&m).ok_or(DataError::MissingTarget(m))
    }

    /// Writes one variable in canonical form: dot decimals, canonical unit,
    /// registry order. Reloading the output reproduces the same values.
    pub fn write_series_csv<W: Write>(&self, variable: Variable, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["country_code", "year", "value", "unit"])?;
        for region in Region::all() {
            if let Some(s) = self.series.get(&(variable, region)) {
                for (y, v) in &s.points {
                    w.write_record([
                        region.code(),
                        &y.to_string(),
                        &format_canonical(*v),
                        variable.canonical_unit().symbol(),
                    ])?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn format_canonical(v: f64) -> String {
    format!("{v}")
}

/// Reads every file named in `paths` and validates them together.
pub fn load_dataset(paths: &DatasetPaths) -> Result<Dataset, LoadError> {
    let mut errors = Vec::new();
    let mut sources = Vec::new();
    let mut read = |kind: FileKind, path: &Path| {
        let name = path.display().to_string();
        let decimal = if paths.decimal_comma.iter().any(|p| p == path) {
            DecimalMark::Comma
        } else {
            DecimalMark::Point
        };
        match fs::read_to_string(path) {
            Ok(text) => sources.push(Source {
                kind,
                name,
                text,
                decimal,
            }),
            Err(e) => errors.push(ValidationError::Io {
                file: name,
                message: e.to_string(),
            }),
        }
    };
    for (v, p) in &paths.series {
        read(FileKind::Series(*v), p);
    }
    read(FileKind::Targets, &paths.targets);
    if let Some(p) = &paths.tapio_overrides {
        read(FileKind::TapioOverrides, p);
    }
    if let Some(p) = &paths.tapio_deltas {
        read(FileKind::TapioDeltas, p);
    }
    match load_sources(&sources) {
        Ok(ds) if errors.is_empty() => Ok(ds),
        Ok(_) => Err(LoadError { errors }),
        Err(mut e) => {
            errors.append(&mut e.errors);
            Err(LoadError { errors })
        }
    }
}

/// Validates already-read sources. Each variable and the targets file must
/// appear exactly once; overrides and deltas are optional.
pub fn load_sources(sources: &[Source]) -> Result<Dataset, LoadError> {
    let mut ds = Dataset::default();
    let mut errors = Vec::new();
    for src in sources {
        match src.kind {
            FileKind::Series(v) => match parse_series(src, v) {
                Ok(map) => ds.series.extend(map.into_iter().map(|(r, s)| ((v, r), s))),
                Err(mut e) => errors.append(&mut e),
            },
            FileKind::Targets => match parse_targets(src) {
                Ok(t) => ds.targets = t,
                Err(mut e) => errors.append(&mut e),
            },
            FileKind::TapioOverrides => match parse_overrides(src) {
                Ok(o) => ds.tapio_overrides = Some(o),
                Err(mut e) => errors.append(&mut e),
            },
            FileKind::TapioDeltas => match parse_deltas(src) {
                Ok((d, mut flags)) => {
                    ds.tapio_deltas = d;
                    ds.flags.append(&mut flags);
                }
                Err(mut e) => errors.append(&mut e),
            },
        }
    }
    for v in Variable::ALL {
        if !sources.iter().any(|s| s.kind == FileKind::Series(v)) {
            errors.push(ValidationError::Io {
                file: v.file_name().to_string(),
                message: "file not supplied".into(),
            });
        }
    }
    if !sources.iter().any(|s| s.kind == FileKind::Targets) {
        errors.push(ValidationError::Io {
            file: "targets.csv".into(),
            message: "file not supplied".into(),
        });
    }
    if errors.is_empty() {
        Ok(ds)
    } else {
        Err(LoadError { errors })
    }
}

struct Table {
    header: Vec<String>,
    rows: Vec<(u64, Vec<String>)>,
}

fn detect_delimiter(text: &str) -> u8 {
    let header = text.lines().next().unwrap_or("");
    if header.contains(';') {
        b';'
    } else if header.contains('\t') {
        b'\t'
    } else {
        b','
    }
}

fn read_table(src: &Source) -> Result<Table, Vec<ValidationError>> {
    let file = src.name.clone();
    let text = src.text.trim_start_matches('\u{feff}');
    if text.trim().is_empty() {
        return Err(vec![ValidationError::NoRows { file }]);
    }
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(detect_delimiter(text))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header: Vec<String> = match rdr.headers() {
        Ok(h) => h.iter().map(str::to_string).collect(),
        Err(e) => {
            return Err(vec![ValidationError::Malformed {
                file,
                line: 1,
                message: e.to_string(),
            }])
        }
    };
    let expected = src.kind.expected_header();
    let optional = src.kind.optional_columns();
    let header_ok = header.len() >= expected.len()
        && header[..expected.len()] == expected[..]
        && header[expected.len()..]
            .iter()
            .zip(optional)
            .all(|(h, o)| h == o)
        && header.len() <= expected.len() + optional.len();
    if !header_ok {
        return Err(vec![ValidationError::BadHeader {
            file,
            expected: expected.join(","),
            found: header.join(","),
        }]);
    }
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for rec in rdr.records() {
        match rec {
            Ok(r) => {
                let line = r.position().map_or(0, |p| p.line());
                if r.iter().all(str::is_empty) {
                    continue;
                }
                if r.len() != header.len() {
                    errors.push(ValidationError::Malformed {
                        file: file.clone(),
                        line,
                        message: format!("expected {} fields, found {}", header.len(), r.len()),
                    });
                    continue;
                }
                rows.push((line, r.iter().map(str::to_string).collect()));
            }
            Err(e) => errors.push(ValidationError::Malformed {
                file: file.clone(),
                line: e.position().map_or(0, |p| p.line()),
                message: e.to_string(),
            }),
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    if rows.is_empty() {
        return Err(vec![ValidationError::NoRows { file }]);
    }
    Ok(Table { header, rows })
}

/// Parses a numeric cell. A trailing `%` divides by 100.
pub fn parse_number(cell: &str, decimal: DecimalMark) -> Option<f64> {
    let mut s = cell.trim().to_string();
    let percent = s.ends_with('%');
    if percent {
        s.pop();
    }
    if decimal == DecimalMark::Comma {
        if s.contains('.') {
            return None;
        }
        s = s.replace(',', ".");
    }
    let v: f64 = s.trim().parse().ok()?;
    if !v.is_finite() {
        return None;
    }
    Some(if percent { v / 100.0 } else { v })
}

struct Cells<'a> {
    src: &'a Source,
    header: &'a [String],
    line: u64,
    row: &'a [String],
}

impl Cells<'_> {
    fn number(&self, col: usize) -> Result<f64, ValidationError> {
        let cell = &self.row[col];
        parse_number(cell, self.src.decimal).ok_or_else(|| ValidationError::NonNumeric {
            file: self.src.name.clone(),
            line: self.line,
            column: self.header[col].clone(),
            value: cell.clone(),
        })
    }

    fn region(&self) -> Result<Region, ValidationError> {
        self.row[0].parse().map_err(|_| ValidationError::UnknownCountry {
            file: self.src.name.clone(),
            line: self.line,
            code: self.row[0].clone(),
        })
    }

    fn invalid(&self, message: impl Into<String>) -> ValidationError {
        ValidationError::InvalidValue {
            file: self.src.name.clone(),
            line: self.line,
            message: message.into(),
        }
    }
}

fn parse_series(src: &Source, variable: Variable) -> Result<BTreeMap<Region, CountrySeries>, Vec<ValidationError>> {
    let table = read_table(src)?;
    let mut errors = Vec::new();
    let mut out: BTreeMap<Region, CountrySeries> = BTreeMap::new();
    for (line, row) in &table.rows {
        let cells = Cells {
            src,
            header: &table.header,
            line: *line,
            row,
        };
        let parsed = (|| {
            let region = cells.region()?;
            let year = row[1].parse::<i32>().map_err(|_| ValidationError::NonNumeric {
                file: src.name.clone(),
                line: *line,
                column: "year".into(),
                value: row[1].clone(),
            })?;
            let raw = cells.number(2)?;
            let unit = match row.get(3) {
                Some(u) => Unit::parse(u).ok_or_else(|| cells.invalid(format!("unknown unit `{u}`")))?,
                None => variable.source_unit(),
            };
            let factor = unit
                .factor_to(variable.canonical_unit())
                .ok_or_else(|| cells.invalid(format!("unit {} does not fit {variable}", unit.symbol())))?;
            match variable {
                Variable::GdpPerCapita if raw <= 0.0 => {
                    return Err(cells.invalid(format!("GDP per capita must be positive, got {raw}")))
                }
                _ if raw < 0.0 => return Err(cells.invalid(format!("emissions must be non-negative, got {raw}"))),
                _ => {}
            }
            Ok((region, year, raw * factor, unit))
        })();
        match parsed {
            Ok((region, year, value, unit)) => {
                let series = out.entry(region).or_insert_with(|| CountrySeries {
                    region,
                    variable,
                    source_unit: unit,
                    points: BTreeMap::new(),
                });
                if series.points.insert(year, value).is_some() {
                    errors.push(ValidationError::Duplicate {
                        file: src.name.clone(),
                        key: format!("({region}, {variable}, {year})"),
                    });
                }
            }
            Err(e) => errors.push(e),
        }
    }
    for s in out.values() {
        let years: Vec<i32> = s.points.keys().copied().collect();
        if let Some(w) = years.windows(2).find(|w| w[1] != w[0] + 1) {
            errors.push(ValidationError::NonContiguousYears {
                file: src.name.clone(),
                region: s.region,
                year: w[0] + 1,
            });
        }
    }
    if variable.requires_full_registry() {
        check_registry(src, Region::all().filter(|r| !out.contains_key(r)), &mut errors);
    } else if !out.contains_key(&Region::Eu27) {
        check_registry(src, std::iter::once(Region::Eu27), &mut errors);
    }
    if errors.is_empty() {
        Ok(out)
    } else {
        Err(errors)
    }
}

fn check_registry(src: &Source, missing: impl Iterator<Item = Region>, errors: &mut Vec<ValidationError>) {
    for r in missing {
        errors.push(ValidationError::MissingCountry {
            file: src.name.clone(),
            code: r.code(),
            name: r.name(),
        });
    }
}

fn parse_targets(src: &Source) -> Result<BTreeMap<MemberState, TargetTable>, Vec<ValidationError>> {
    let table = read_table(src)?;
    let mut errors = Vec::new();
    let mut out = BTreeMap::new();
    let t_to_mt = Unit::Tonnes.factor_to(Unit::Megatonnes).unwrap_or(1e-6);
    for (line, row) in &table.rows {
        let cells = Cells {
            src,
            header: &table.header,
            line: *line,
            row,
        };
        let parsed = (|| {
            let country = cells
                .region()?
                .member()
                .ok_or_else(|| cells.invalid("targets are per Member State; EU27 row not allowed"))?;
            let e2005 = cells.number(1)?;
            if e2005 <= 0.0 {
                return Err(cells.invalid("e2005 must be positive"));
            }
            let pct_reg = cells.number(2)?;
            let pct_gd = cells.number(3)?;
            for (name, p) in [("pct_reg_2030", pct_reg), ("pct_gd_2030", pct_gd)] {
                if !(-1.0..=0.0).contains(&p) {
                    return Err(cells.invalid(format!("{name} = {p} outside [-1, 0]")));
                }
            }
            let mut regulation = BTreeMap::new();
            for (i, year) in ALLOCATION_YEARS.enumerate() {
                let v = cells.number(4 + i)?;
                if v < 0.0 {
                    return Err(cells.invalid(format!("negative allocation for {year}")));
                }
                regulation.insert(year, v * t_to_mt);
            }
            let printed_ratio = match row.get(14).map(|s| s.trim()) {
                None | Some("") | Some("-") => None,
                Some(_) => Some(cells.number(14)?),
            };
            Ok(TargetTable {
                country,
                e2005: e2005 * t_to_mt,
                pct_regulation_2030: pct_reg,
                pct_greendeal_2030: pct_gd,
                regulation,
                printed_ratio,
            })
        })();
        match parsed {
            Ok(t) => {
                let c = t.country;
                if out.insert(c, t).is_some() {
                    errors.push(ValidationError::Duplicate {
                        file: src.name.clone(),
                        key: c.code().to_string(),
                    });
                }
            }
            Err(e) => errors.push(e),
        }
    }
    check_registry(
        src,
        MemberState::ALL
            .iter()
            .filter(|m| !out.contains_key(m))
            .map(|&m| Region::Member(m)),
        &mut errors,
    );
    if errors.is_empty() {
        Ok(out)
    } else {
        Err(errors)
    }
}

fn parse_window(cells: &Cells<'_>, col: usize) -> Result<TapioWindow, ValidationError> {
    TapioWindow::parse(&cells.row[col])
        .ok_or_else(|| cells.invalid(format!("unknown window `{}` (expected W3, W2, W1 or AVG)", cells.row[col])))
}

fn parse_overrides(src: &Source) -> Result<TapioOverrides, Vec<ValidationError>> {
    let table = read_table(src)?;
    let mut errors = Vec::new();
    let mut out = TapioOverrides::default();
    for (line, row) in &table.rows {
        let cells = Cells {
            src,
            header: &table.header,
            line: *line,
            row,
        };
        let parsed = (|| Ok((cells.region()?, parse_window(&cells, 1)?, cells.number(2)?)))();
        match parsed {
            Ok((r, w, v)) => {
                if out.values.insert((r, w), v).is_some() {
                    errors.push(ValidationError::Duplicate {
                        file: src.name.clone(),
                        key: format!("({r}, {})", w.label()),
                    });
                }
            }
            Err(e) => errors.push(e),
        }
    }
    if errors.is_empty() {
        Ok(out)
    } else {
        Err(errors)
    }
}

fn parse_deltas(src: &Source) -> Result<(Vec<TapioDelta>, Vec<DataFlag>), Vec<ValidationError>> {
    let table = read_table(src)?;
    let mut errors = Vec::new();
    let mut out: Vec<TapioDelta> = Vec::new();
    let mut flags = Vec::new();
    for (line, row) in &table.rows {
        let cells = Cells {
            src,
            header: &table.header,
            line: *line,
            row,
        };
        let parsed = (|| {
            let window = parse_window(&cells, 1)?;
            if window == TapioWindow::Avg {
                return Err(cells.invalid("deltas are per window; AVG not allowed"));
            }
            Ok(TapioDelta {
                region: cells.region()?,
                window,
                d_gdp_pct: cells.number(2)?,
                d_ghg_pct: cells.number(3)?,
            })
        })();
        match parsed {
            Ok(d) => {
                if out.iter().any(|o| o.region == d.region && o.window == d.window) {
                    errors.push(ValidationError::Duplicate {
                        file: src.name.clone(),
                        key: format!("({}, {})", d.region, d.window.label()),
                    });
                    continue;
                }
                for (what, v) in [("GDP", d.d_gdp_pct), ("GHG", d.d_ghg_pct)] {
                    if v.abs() > DELTA_PLAUSIBLE_PCT {
                        flags.push(DataFlag {
                            file: src.name.clone(),
                            region: d.region,
                            message: format!("{} {what} change of {v}% is implausible", d.window.label()),
                        });
                    }
                }
                out.push(d);
            }
            Err(e) => errors.push(e),
        }
    }
    if errors.is_empty() {
        Ok((out, flags))
    } else {
        Err(errors)
    }
}
