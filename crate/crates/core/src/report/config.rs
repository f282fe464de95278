use std::collections::BTreeSet;
use std::path::PathBuf;

use serde::Serialize;

use crate::analysis::GroupThresholds;
use crate::blend::DEFAULT_STEP;
use crate::indices::{InertiaDenominator, StudyLabel, StudyWindow, TapioSource, YearSpec};
use crate::trajectory::{RatioMode, ESR_2020, ETS_2020, EU27_TOTAL_2020, NET_ZERO_YEAR};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(format!("unknown format `{other}` (expected csv, json or svg)")),
        }
    }
}

/// Everything a study run depends on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub study: StudyLabel,
    /// EU27 budget to share; computed from the total trajectory when unset.
    pub cb_eu27: Option<f64>,
    pub tapio_source: TapioSource,
    /// Overrides the study's GDP years for the Capability index.
    pub gdp_vintage: Option<YearSpec>,
    /// Overrides the study's emission years for the Inertia index.
    pub ghg_years: Option<YearSpec>,
    pub inertia_denominator: InertiaDenominator,
    pub ratio_mode: RatioMode,
    pub step: f64,
    pub thresholds: GroupThresholds,
    pub anchor_eu27: f64,
    pub anchor_ets: f64,
    pub anchor_esr: f64,
    pub zero_year: i32,
    /// Input directory; the bundled dataset when unset.
    pub data_dir: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub formats: BTreeSet<Format>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            study: StudyLabel::Study2016To2019,
            cb_eu27: None,
            tapio_source: TapioSource::Override,
            gdp_vintage: None,
            ghg_years: None,
            inertia_denominator: InertiaDenominator::MemberSum,
            ratio_mode: RatioMode::PercentColumns,
            step: DEFAULT_STEP,
            thresholds: GroupThresholds::default(),
            anchor_eu27: EU27_TOTAL_2020,
            anchor_ets: ETS_2020,
            anchor_esr: ESR_2020,
            zero_year: NET_ZERO_YEAR,
            data_dir: None,
            output_dir: PathBuf::from("out"),
            formats: [Format::Csv, Format::Json, Format::Svg].into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { line: usize, key: String },
    #[error("line {line}: {key}: {message}")]
    Value { line: usize, key: String, message: String },
    #[error("{0}")]
    Invalid(String),
}

/// Keys accepted in a config file, with a short description.
pub const CONFIG_KEYS: &[(&str, &str)] = &[
    ("study", "2016-2019 | 2019"),
    ("cb_eu27", "EU27 budget in Mt; default: integrated total trajectory"),
    ("tapio_source", "override | raw | deltas"),
    ("gdp_vintage", "YYYY or YYYY-YYYY; default per study"),
    ("ghg_years", "YYYY or YYYY-YYYY; default 2019"),
    ("inertia_denominator", "member_sum | aggregate"),
    ("ratio_mode", "percent | printed"),
    ("step", "grid spacing in (0, 1]"),
    ("leverage_threshold", "group rule: |dec - cap| / |ine - cap| below this is G1"),
    ("excursion_tolerance", "group rule: Mt outside the endpoint band that makes G4"),
    ("anchor_eu27", "2020 EU27 total, Mt"),
    ("anchor_ets", "2020 ETS, Mt"),
    ("anchor_esr", "2020 ESR, Mt"),
    ("zero_year", "year every pathway reaches zero"),
    ("data_dir", "directory with the input files; default: bundled data"),
    ("output_dir", "where artifacts are written"),
    ("formats", "comma list of csv, json, svg"),
];

impl RunConfig {
    /// The study window with any vintage overrides applied.
    pub fn study_window(&self) -> StudyWindow {
        let mut w = StudyWindow::preset(self.study);
        if let Some(g) = &self.gdp_vintage {
            w.gdp = g.clone();
        }
        if let Some(g) = &self.ghg_years {
            w.ghg = g.clone();
        }
        w.inertia_denominator = self.inertia_denominator;
        w
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if let Some(cb) = self.cb_eu27 {
            if !(cb > 0.0) {
                return Err(ConfigError::Invalid(format!("cb_eu27 must be positive, got {cb}")));
            }
        }
        if !(self.step > 0.0 && self.step <= 1.0) {
            return Err(ConfigError::Invalid(format!("step must be in (0, 1], got {}", self.step)));
        }
        Ok(())
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn num(v: &str) -> Result<f64, String> {
            v.parse::<f64>().map_err(|_| format!("not a number: `{v}`"))
        }
        match key {
            "study" => self.study = value.parse()?,
            "cb_eu27" => self.cb_eu27 = Some(num(value)?),
            "tapio_source" => self.tapio_source = value.parse()?,
            "gdp_vintage" => self.gdp_vintage = Some(value.parse()?),
            "ghg_years" => self.ghg_years = Some(value.parse()?),
            "inertia_denominator" => {
                self.inertia_denominator = match value {
                    "member_sum" => InertiaDenominator::MemberSum,
                    "aggregate" => InertiaDenominator::Aggregate,
                    _ => return Err(format!("expected member_sum or aggregate, got `{value}`")),
                }
            }
            "ratio_mode" => {
                self.ratio_mode = match value {
                    "percent" => RatioMode::PercentColumns,
                    "printed" => RatioMode::PrintedRatio,
                    _ => return Err(format!("expected percent or printed, got `{value}`")),
                }
            }
            "step" => self.step = num(value)?,
            "leverage_threshold" => self.thresholds.leverage = num(value)?,
            "excursion_tolerance" => self.thresholds.excursion_tolerance = num(value)?,
            "anchor_eu27" => self.anchor_eu27 = num(value)?,
            "anchor_ets" => self.anchor_ets = num(value)?,
            "anchor_esr" => self.anchor_esr = num(value)?,
            "zero_year" => self.zero_year = value.parse().map_err(|_| format!("not a year: `{value}`"))?,
            "data_dir" => self.data_dir = Some(PathBuf::from(value)),
            "output_dir" => self.output_dir = PathBuf::from(value),
            "formats" => {
                self.formats = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(str::parse)
                    .collect::<Result<_, _>>()?
            }
            _ => return Err("unknown key".into()),
        }
        Ok(())
    }

    /// Parses a flat `key = value` file. `#` starts a comment.
    pub fn parse(text: &str) -> Result<RunConfig, ConfigError> {
        let mut cfg = RunConfig::default();
        let mut seen = BTreeSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (k, v) = content.split_once('=').ok_or(ConfigError::Syntax { line })?;
            let (k, v) = (k.trim(), v.trim());
            if !CONFIG_KEYS.iter().any(|(key, _)| *key == k) {
                return Err(ConfigError::UnknownKey { line, key: k.into() });
            }
            if !seen.insert(k.to_string()) {
                return Err(ConfigError::Duplicate { line, key: k.into() });
            }
            cfg.set(k, v).map_err(|message| ConfigError::Value {
                line,
                key: k.into(),
                message,
            })?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_keys() {
        let cfg = RunConfig::parse(
            "# run\nstudy = 2019\ntapio_source = raw\nformats = csv,svg\ncb_eu27 = 60000 # fixed\n",
        )
        .unwrap();
        assert_eq!(cfg.study, StudyLabel::Study2019);
        assert_eq!(cfg.tapio_source, TapioSource::Raw);
        assert_eq!(cfg.cb_eu27, Some(60000.0));
        assert!(!cfg.formats.contains(&Format::Json));
    }

    #[test]
    fn reports_line_numbers() {
        assert_eq!(RunConfig::parse("\nfoo = 1"), Err(ConfigError::UnknownKey { line: 2, key: "foo".into() }));
        assert_eq!(RunConfig::parse("study"), Err(ConfigError::Syntax { line: 1 }));
        assert!(matches!(RunConfig::parse("step = 2"), Err(ConfigError::Invalid(_))));
        assert!(matches!(RunConfig::parse("study = 2019\nstudy = 2019"), Err(ConfigError::Duplicate { line: 2, .. })));
        assert!(matches!(RunConfig::parse("cb_eu27 = abc"), Err(ConfigError::Value { .. })));
    }

    #[test]
    fn vintage_override_applies() {
        let mut cfg = RunConfig::default();
        cfg.set("gdp_vintage", "2020").unwrap();
        assert_eq!(cfg.study_window().gdp, YearSpec::Single(2020));
    }
}
