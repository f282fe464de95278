//! The three allocation principles.
//!
//! * Capability: inversely proportional to GDP per capita.
//! * Decoupling: Tapio elasticity, shifted so the least-decoupled Member
//!   State sits at −1, then inverted into shares.
//! * Inertia: proportional to current emissions.
//!
//! Every normalisation runs over the 27 Member States only; the EU27
//! aggregate appears as a reference value, never as a share holder.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;

use serde::Serialize;

use crate::country::{CountryMap, MemberState, Region};
use crate::ingest::{CountrySeries, DataError, Dataset, TapioWindow, Variable};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IndexError {
    #[error("{0}: GDP per capita must be positive, got {1}")]
    NonPositiveGdp(Region, f64),
    #[error("{0}: emissions must be non-negative, got {1}")]
    NegativeEmissions(Region, f64),
    #[error("{region}: tapio undefined for {window} (zero GDP change)")]
    UndefinedTapio { region: Region, window: String },
    #[error("{region}: zero base value at {year}")]
    ZeroBase { region: Region, year: i32 },
    #[error("{region}: no tapio value for window {window}")]
    MissingWindow { region: Region, window: &'static str },
    #[error("tapio source `override` selected but no overrides are loaded")]
    NoOverrides,
    #[error("EU27 reference value is zero")]
    ZeroReference,
    #[error("{0}: rescaled tapio must be negative, got {1}")]
    NonNegativeRescaled(Region, f64),
    #[error("no country values supplied")]
    Empty,
    #[error("study window has no tapio windows")]
    NoWindows,
    #[error(transparent)]
    Data(#[from] DataError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StudyLabel {
    #[serde(rename = "2016-2019")]
    Study2016To2019,
    #[serde(rename = "2019")]
    Study2019,
}

impl StudyLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            StudyLabel::Study2016To2019 => "2016-2019",
            StudyLabel::Study2019 => "2019",
        }
    }

    /// Short form used in file names.
    pub fn slug(self) -> &'static str {
        match self {
            StudyLabel::Study2016To2019 => "2016_2019",
            StudyLabel::Study2019 => "2019",
        }
    }
}

impl fmt::Display for StudyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for StudyLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "2016-2019" | "2016_2019" => Ok(StudyLabel::Study2016To2019),
            "2019" => Ok(StudyLabel::Study2019),
            other => Err(format!("unknown study `{other}` (expected 2016-2019 or 2019)")),
        }
    }
}

/// A single year or the mean over an inclusive range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum YearSpec {
    Single(i32),
    Average(RangeInclusive<i32>),
}

impl YearSpec {
    pub fn value(&self, s: &CountrySeries) -> Result<f64, DataError> {
        match self {
            YearSpec::Single(y) => s.value(*y),
            YearSpec::Average(r) => s.mean(r.clone()),
        }
    }
}

impl fmt::Display for YearSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            YearSpec::Single(y) => write!(f, "{y}"),
            YearSpec::Average(r) => write!(f, "{}-{}", r.start(), r.end()),
        }
    }
}

impl std::str::FromStr for YearSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("bad year spec `{s}` (expected YYYY or YYYY-YYYY)");
        match s.trim().split_once('-') {
            Some((a, b)) => {
                let a: i32 = a.trim().parse().map_err(|_| bad())?;
                let b: i32 = b.trim().parse().map_err(|_| bad())?;
                if a > b {
                    return Err(bad());
                }
                Ok(YearSpec::Average(a..=b))
            }
            None => s.trim().parse().map(YearSpec::Single).map_err(|_| bad()),
        }
    }
}

impl Serialize for YearSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InertiaDenominator {
    /// Σ of the 27 Member States, so the indices sum to one.
    #[default]
    MemberSum,
    /// The published EU27 aggregate.
    Aggregate,
}

/// Which years feed each index for one study.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyWindow {
    pub label: StudyLabel,
    pub gdp: YearSpec,
    pub ghg: YearSpec,
    pub tapio_windows: Vec<TapioWindow>,
    pub inertia_denominator: InertiaDenominator,
}

impl StudyWindow {
    /// 2016–2019 averaged GDP, mean of the three windows, 2019 emissions.
    pub fn study_2016_2019() -> Self {
        StudyWindow {
            label: StudyLabel::Study2016To2019,
            gdp: YearSpec::Average(2016..=2019),
            ghg: YearSpec::Single(2019),
            tapio_windows: vec![TapioWindow::W3, TapioWindow::W2, TapioWindow::W1],
            inertia_denominator: InertiaDenominator::MemberSum,
        }
    }

    /// 2019 GDP and emissions, one-year window only.
    pub fn study_2019() -> Self {
        StudyWindow {
            label: StudyLabel::Study2019,
            gdp: YearSpec::Single(2019),
            ghg: YearSpec::Single(2019),
            tapio_windows: vec![TapioWindow::W1],
            inertia_denominator: InertiaDenominator::MemberSum,
        }
    }

    pub fn preset(label: StudyLabel) -> Self {
        match label {
            StudyLabel::Study2016To2019 => Self::study_2016_2019(),
            StudyLabel::Study2019 => Self::study_2019(),
        }
    }

    pub fn with_gdp(mut self, gdp: YearSpec) -> Self {
        self.gdp = gdp;
        self
    }

    fn uses_all_windows(&self) -> bool {
        self.tapio_windows == [TapioWindow::W3, TapioWindow::W2, TapioWindow::W1]
    }
}

/// Where per-window tapio values come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TapioSource {
    /// The loaded override table.
    #[default]
    Override,
    /// Recomputed from the GDP and GHG per-capita series.
    Raw,
    /// Recomputed from the tabulated percentage changes.
    Deltas,
}

impl std::str::FromStr for TapioSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "override" => Ok(TapioSource::Override),
            "raw" => Ok(TapioSource::Raw),
            "deltas" => Ok(TapioSource::Deltas),
            other => Err(format!("unknown tapio source `{other}` (expected override, raw or deltas)")),
        }
    }
}

/// `CI_j = (eu/gdp_j) / Σ_i (eu/gdp_i)`
pub fn capability_index(gdpcap: &CountryMap, gdpcap_eu: f64) -> Result<CountryMap, IndexError> {
    if gdpcap.is_empty() {
        return Err(IndexError::Empty);
    }
    if !(gdpcap_eu > 0.0) {
        return Err(IndexError::NonPositiveGdp(Region::Eu27, gdpcap_eu));
    }
    if let Some((&m, &v)) = gdpcap.iter().find(|(_, &v)| !(v > 0.0)) {
        return Err(IndexError::NonPositiveGdp(Region::Member(m), v));
    }
    let ratios: CountryMap = gdpcap.iter().map(|(&m, &g)| (m, gdpcap_eu / g)).collect();
    Ok(normalize(&ratios))
}

/// Divides every value by the sum.
pub fn normalize(values: &CountryMap) -> CountryMap {
    let total: f64 = values.values().sum();
    values.iter().map(|(&m, &v)| (m, v / total)).collect()
}

/// Elasticity of GHG per capita with respect to GDP per capita over `from..=to`.
pub fn tapio_window(gdpcap: &CountrySeries, ghgcap: &CountrySeries, from: i32, to: i32) -> Result<f64, IndexError> {
    let region = gdpcap.region;
    let (g0, g1) = (gdpcap.value(from)?, gdpcap.value(to)?);
    let (e0, e1) = (ghgcap.value(from)?, ghgcap.value(to)?);
    if g0 == 0.0 || e0 == 0.0 {
        return Err(IndexError::ZeroBase { region, year: from });
    }
    let d_gdp = (g1 - g0) / g0;
    let d_ghg = (e1 - e0) / e0;
    if d_gdp == 0.0 {
        return Err(IndexError::UndefinedTapio {
            region,
            window: format!("{from}-{to}"),
        });
    }
    Ok(d_ghg / d_gdp)
}

/// Tapio from percentage changes; `None` when GDP did not move.
pub fn tapio_from_changes(d_gdp_pct: f64, d_ghg_pct: f64) -> Option<f64> {
    (d_gdp_pct != 0.0).then(|| d_ghg_pct / d_gdp_pct)
}

pub fn average_tapio(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

/// Tapio values shifted so the largest Member State value maps to −1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rescaled {
    pub members: CountryMap,
    pub eu: Option<f64>,
    pub anchor: MemberState,
    /// `m + 1`, subtracted from every value.
    pub shift: f64,
}

pub fn rescale_tapio(tapio: &CountryMap, tapio_eu: Option<f64>) -> Result<Rescaled, IndexError> {
    // first maximum in registry order, so ties are deterministic
    let (&anchor, &m) = tapio
        .iter()
        .fold(None, |best: Option<(&MemberState, &f64)>, cur| match best {
            Some(b) if b.1 >= cur.1 => Some(b),
            _ => Some(cur),
        })
        .ok_or(IndexError::Empty)?;
    let shift = m + 1.0;
    let members = tapio
        .iter()
        .map(|(&c, &t)| (c, if c == anchor { -1.0 } else { t - shift }))
        .collect();
    Ok(Rescaled {
        members,
        eu: tapio_eu.map(|t| t - shift),
        anchor,
        shift,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decoupling {
    pub di: CountryMap,
    pub inv_di: CountryMap,
    pub share: CountryMap,
}

/// `DI_j = rescaled_j / rescaled_eu`, shares proportional to `1/DI_j`.
pub fn decoupling_shares(rescaled: &CountryMap, rescaled_eu: f64) -> Result<Decoupling, IndexError> {
    if rescaled.is_empty() {
        return Err(IndexError::Empty);
    }
    if rescaled_eu == 0.0 {
        return Err(IndexError::ZeroReference);
    }
    if let Some((&m, &v)) = rescaled.iter().find(|(_, &v)| !(v < 0.0)) {
        return Err(IndexError::NonNegativeRescaled(Region::Member(m), v));
    }
    let di: CountryMap = rescaled.iter().map(|(&m, &r)| (m, r / rescaled_eu)).collect();
    let inv_di: CountryMap = di.iter().map(|(&m, &d)| (m, 1.0 / d)).collect();
    let share = normalize(&inv_di);
    Ok(Decoupling { di, inv_di, share })
}

/// `II_j = ghg_j / ghg_eu`
pub fn inertia_index(ghg: &CountryMap, ghg_eu: f64) -> Result<CountryMap, IndexError> {
    if ghg.is_empty() {
        return Err(IndexError::Empty);
    }
    if !(ghg_eu > 0.0) {
        return Err(IndexError::ZeroReference);
    }
    if let Some((&m, &v)) = ghg.iter().find(|(_, &v)| !(v >= 0.0)) {
        return Err(IndexError::NegativeEmissions(Region::Member(m), v));
    }
    Ok(ghg.iter().map(|(&m, &g)| (m, g / ghg_eu)).collect())
}

/// Per-window and combined tapio for one region.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TapioValues {
    pub windows: BTreeMap<TapioWindow, f64>,
    /// The value the study uses: the single window, or the average.
    pub combined: f64,
}

/// Resolves tapio values for one region according to the study and source.
pub fn study_tapio(
    ds: &Dataset,
    study: &StudyWindow,
    source: TapioSource,
    region: Region,
) -> Result<TapioValues, IndexError> {
    if study.tapio_windows.is_empty() {
        return Err(IndexError::NoWindows);
    }
    let mut windows = BTreeMap::new();
    for &w in &study.tapio_windows {
        windows.insert(w, window_value(ds, source, region, w)?);
    }
    let pre_averaged = match (source, study.uses_all_windows()) {
        (TapioSource::Override, true) => ds
            .tapio_overrides
            .as_ref()
            .and_then(|o| o.get(region, TapioWindow::Avg)),
        _ => None,
    };
    let vals: Vec<f64> = windows.values().copied().collect();
    let combined = match pre_averaged {
        Some(v) => v,
        None => average_tapio(&vals).ok_or(IndexError::NoWindows)?,
    };
    Ok(TapioValues { windows, combined })
}

fn window_value(ds: &Dataset, source: TapioSource, region: Region, w: TapioWindow) -> Result<f64, IndexError> {
    let missing = || IndexError::MissingWindow {
        region,
        window: w.label(),
    };
    match source {
        TapioSource::Override => ds
            .tapio_overrides
            .as_ref()
            .ok_or(IndexError::NoOverrides)?
            .get(region, w)
            .ok_or_else(missing),
        TapioSource::Raw => {
            let (from, to) = w.span().ok_or_else(missing)?;
            tapio_window(
                ds.series(Variable::GdpPerCapita, region)?,
                ds.series(Variable::GhgPerCapita, region)?,
                from,
                to,
            )
        }
        TapioSource::Deltas => {
            let d = ds
                .tapio_deltas
                .iter()
                .find(|d| d.region == region && d.window == w)
                .ok_or_else(missing)?;
            tapio_from_changes(d.d_gdp_pct, d.d_ghg_pct).ok_or(IndexError::UndefinedTapio {
                region,
                window: w.label().to_string(),
            })
        }
    }
}

/// One row of the index table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexSet {
    pub country: MemberState,
    pub gdp: f64,
    pub ghg: f64,
    pub capability: f64,
    pub tapio: TapioValues,
    pub tapio_rescaled: f64,
    pub di: f64,
    pub inv_di: f64,
    pub decoupling_share: f64,
    pub inertia: f64,
}

/// Reference values for the aggregate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EuReference {
    pub gdp: f64,
    pub ghg: f64,
    /// Denominator actually used for the inertia index.
    pub ghg_denominator: f64,
    pub tapio: TapioValues,
    pub tapio_rescaled: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexTable {
    pub study: StudyWindow,
    pub tapio_source: TapioSource,
    pub anchor: MemberState,
    pub shift: f64,
    pub eu: EuReference,
    pub rows: BTreeMap<MemberState, IndexSet>,
}

impl IndexTable {
    pub fn capability(&self) -> CountryMap {
        self.rows.iter().map(|(&m, r)| (m, r.capability)).collect()
    }

    pub fn decoupling(&self) -> CountryMap {
        self.rows.iter().map(|(&m, r)| (m, r.decoupling_share)).collect()
    }

    pub fn inertia(&self) -> CountryMap {
        self.rows.iter().map(|(&m, r)| (m, r.inertia)).collect()
    }

    pub fn tapio(&self) -> CountryMap {
        self.rows.iter().map(|(&m, r)| (m, r.tapio.combined)).collect()
    }
}

/// Computes every index for one study.
pub fn compute_indices(ds: &Dataset, study: &StudyWindow, source: TapioSource) -> Result<IndexTable, IndexError> {
    let eu_gdp = study.gdp.value(ds.series(Variable::GdpPerCapita, Region::Eu27)?)?;
    let eu_ghg = study.ghg.value(ds.series(Variable::GhgTotal, Region::Eu27)?)?;
    let mut gdp = CountryMap::new();
    let mut ghg = CountryMap::new();
    let mut tapio = BTreeMap::new();
    for m in MemberState::ALL {
        let r = Region::Member(m);
        gdp.insert(m, study.gdp.value(ds.series(Variable::GdpPerCapita, r)?)?);
        ghg.insert(m, study.ghg.value(ds.series(Variable::GhgTotal, r)?)?);
        tapio.insert(m, study_tapio(ds, study, source, r)?);
    }
    let eu_tapio = study_tapio(ds, study, source, Region::Eu27)?;

    let capability = capability_index(&gdp, eu_gdp)?;
    let combined: CountryMap = tapio.iter().map(|(&m, t)| (m, t.combined)).collect();
    let rescaled = rescale_tapio(&combined, Some(eu_tapio.combined))?;
    let rescaled_eu = rescaled.eu.ok_or(IndexError::ZeroReference)?;
    let dec = decoupling_shares(&rescaled.members, rescaled_eu)?;
    let ghg_denominator = match study.inertia_denominator {
        InertiaDenominator::MemberSum => ghg.values().sum(),
        InertiaDenominator::Aggregate => eu_ghg,
    };
    let inertia = inertia_index(&ghg, ghg_denominator)?;

    let rows = MemberState::ALL
        .iter()
        .map(|&m| {
            (
                m,
                IndexSet {
                    country: m,
                    gdp: gdp[&m],
                    ghg: ghg[&m],
                    capability: capability[&m],
                    tapio: tapio[&m].clone(),
                    tapio_rescaled: rescaled.members[&m],
                    di: dec.di[&m],
                    inv_di: dec.inv_di[&m],
                    decoupling_share: dec.share[&m],
                    inertia: inertia[&m],
                },
            )
        })
        .collect();
    Ok(IndexTable {
        study: study.clone(),
        tapio_source: source,
        anchor: rescaled.anchor,
        shift: rescaled.shift,
        eu: EuReference {
            gdp: eu_gdp,
            ghg: eu_ghg,
            ghg_denominator,
            tapio: eu_tapio,
            tapio_rescaled: rescaled_eu,
        },
        rows,
    })
}

/// Override and raw-series tapio for one region and window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TapioComparison {
    pub region: Region,
    pub window: TapioWindow,
    pub override_value: Option<f64>,
    pub raw: Option<f64>,
}

/// Side-by-side override and recomputed values for W3, W2 and W1.
pub fn compare_tapio_sources(ds: &Dataset) -> Vec<TapioComparison> {
    let mut out = Vec::new();
    for region in Region::all() {
        for w in [TapioWindow::W3, TapioWindow::W2, TapioWindow::W1] {
            out.push(TapioComparison {
                region,
                window: w,
                override_value: window_value(ds, TapioSource::Override, region, w).ok(),
                raw: window_value(ds, TapioSource::Raw, region, w).ok(),
            });
        }
    }
    out
}
