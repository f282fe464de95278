//! Turning a study into tables, comparing them against the bundled
//! references, and writing artifacts.

pub mod config;
pub mod diff;
pub mod formats;
pub mod manifest;
pub mod pipeline;
pub mod run;
pub mod svg;
pub mod table;
pub mod tables;

pub use config::{ConfigError, Format, RunConfig, CONFIG_KEYS};
pub use diff::{cells_csv, diff_against_fixture, diff_tables, DiffCell, DiffCounts, DiffError, DiffReport, Verdict};
pub use manifest::{find_check, manifest, parse_manifest, Check, CheckKind, CheckSource, Selector, Tolerance};
pub use pipeline::{build_trajectories, compute_study, compute_study_with, load_inputs, RunError, Stage, StudyResults, Trajectories};
pub use run::{run_study, run_with, write_artifacts, Artifact, RunOutput};
pub use table::{Table, TableError};

use crate::indices::StudyLabel;
use crate::ingest::Dataset;
use pipeline::StageExt;

/// Runs one manifest check.
pub fn run_check(ds: &Dataset, cfg: &RunConfig, check: &Check) -> Result<DiffReport, RunError> {
    let computed = tables::computed_for_check(ds, cfg, check)?;
    let printed = tables::reference_table(&check.fixture)?;
    diff_against_fixture(&computed, &printed, check).stage(Stage::Report)
}

/// Runs every check that applies to `study`, in manifest order.
pub fn run_checks(ds: &Dataset, cfg: &RunConfig, study: StudyLabel) -> Result<Vec<DiffReport>, RunError> {
    manifest()
        .iter()
        .filter(|c| c.applies_to(study))
        .map(|c| run_check(ds, cfg, c))
        .collect()
}

/// Runs every check in the manifest.
pub fn run_all_checks(ds: &Dataset, cfg: &RunConfig) -> Result<Vec<DiffReport>, RunError> {
    manifest().iter().map(|c| run_check(ds, cfg, c)).collect()
}
