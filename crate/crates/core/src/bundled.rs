//! The input panels and reference tables compiled into the library.
//!
//! Reference tables are addressed by id; see [`crate::report::manifest`] for
//! how each one is compared.

use crate::ingest::{load_sources, DecimalMark, FileKind, LoadError, Source, Variable};
use crate::Dataset;

macro_rules! input {
    ($name:literal) => {
        include_str!(concat!("../data/inputs/", $name))
    };
}

macro_rules! references {
    ($($id:literal),* $(,)?) => {
        /// Every bundled reference table id.
        pub const REFERENCE_IDS: &[&str] = &[$($id),*];

        /// Raw text of a bundled reference table.
        pub fn reference(id: &str) -> Option<&'static str> {
            match id {
                $($id => Some(include_str!(concat!("../data/reference/", $id, ".csv"))),)*
                _ => None,
            }
        }
    };
}

references! {
    "trajectory",
    "tapio",
    "capability_2020",
    "decoupling_2016_2019",
    "inertia_2019",
    "cap_dec_2016_2019",
    "cap_dec_2019",
    "cap_ine_2016_2019",
    "cap_ine_2019",
    "three_way_2016_2019",
    "three_way_2019",
    "gap_2016_2019",
    "gap_2019",
    "feasibility",
    "esr_green_deal",
    "gdp_index",
    "ghg_index",
}

/// Sources for the bundled dataset, in load order.
pub fn sources() -> Vec<Source> {
    let src = |kind, name: &str, text: &str| Source {
        kind,
        name: name.to_string(),
        text: text.to_string(),
        decimal: DecimalMark::Point,
    };
    vec![
        src(FileKind::Series(Variable::GdpPerCapita), "gdp_per_capita.csv", input!("gdp_per_capita.csv")),
        src(FileKind::Series(Variable::GhgPerCapita), "ghg_per_capita.csv", input!("ghg_per_capita.csv")),
        src(FileKind::Series(Variable::GhgTotal), "ghg_total.csv", input!("ghg_total.csv")),
        src(FileKind::Series(Variable::EsrEmissions), "esr_emissions.csv", input!("esr_emissions.csv")),
        src(FileKind::Series(Variable::EtsEmissions), "ets_emissions.csv", input!("ets_emissions.csv")),
        src(FileKind::Targets, "targets.csv", input!("targets.csv")),
        src(FileKind::TapioOverrides, "tapio_overrides.csv", input!("tapio_overrides.csv")),
        src(FileKind::TapioDeltas, "tapio_deltas.csv", input!("tapio_deltas.csv")),
    ]
}

/// The bundled dataset, validated.
pub fn dataset() -> Result<Dataset, LoadError> {
    load_sources(&sources())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_dataset_loads() {
        let ds = dataset().unwrap();
        assert_eq!(ds.targets.len(), 27);
        assert!(ds.tapio_overrides.is_some());
        assert_eq!(ds.flags.len(), 1, "{:?}", ds.flags);
    }

    #[test]
    fn every_reference_is_present() {
        for id in REFERENCE_IDS {
            assert!(reference(id).is_some_and(|t| !t.is_empty()), "{id}");
        }
        assert!(reference("nope").is_none());
    }
}
