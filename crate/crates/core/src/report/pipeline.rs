use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::config::RunConfig;
use crate::analysis::{
    capability_inertia_gap, classify_groups, feasibility_table, FeasibilityTable, GapRecord, GroupAssignment,
};
use crate::blend::{sweep_diagonal, sweep_linear, AllocationTag, BlendSweep, BudgetAllocation};
use crate::bundled;
use crate::country::MemberState;
use crate::indices::{compute_indices, IndexTable, StudyLabel, StudyWindow, TapioSource};
use crate::ingest::{load_dataset, Dataset, DatasetPaths};
use crate::trajectory::{
    budget_mismatch, esr_trajectory, linear_to_zero, reallocate_all, BudgetMismatch, GreenDealAllocation, Trajectory,
    TrajectoryLabel,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Load,
    Trajectory,
    Indices,
    Blend,
    Analysis,
    Report,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Load => "load",
            Stage::Trajectory => "trajectory",
            Stage::Indices => "indices",
            Stage::Blend => "blend",
            Stage::Analysis => "analysis",
            Stage::Report => "report",
        })
    }
}

/// A module error tagged with the pipeline stage it came from.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("[{stage}] {message}")]
pub struct RunError {
    pub stage: Stage,
    pub message: String,
}

impl RunError {
    pub fn new(stage: Stage, err: impl fmt::Display) -> Self {
        RunError {
            stage,
            message: err.to_string(),
        }
    }
}

pub(crate) trait StageExt<T> {
    fn stage(self, stage: Stage) -> Result<T, RunError>;
}

impl<T, E: fmt::Display> StageExt<T> for Result<T, E> {
    fn stage(self, stage: Stage) -> Result<T, RunError> {
        self.map_err(|e| RunError::new(stage, e))
    }
}

/// Loads the configured dataset, or the bundled one.
pub fn load_inputs(cfg: &RunConfig) -> Result<Dataset, RunError> {
    match &cfg.data_dir {
        Some(dir) => load_dataset(&DatasetPaths::in_dir(dir)).stage(Stage::Load),
        None => bundled::dataset().stage(Stage::Load),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectories {
    pub eu27_total: Trajectory,
    pub esr: Trajectory,
    pub ets: Trajectory,
    pub mismatch: BudgetMismatch,
    pub green_deal: BTreeMap<MemberState, GreenDealAllocation>,
}

pub fn build_trajectories(ds: &Dataset, cfg: &RunConfig) -> Result<Trajectories, RunError> {
    let eu27_total =
        linear_to_zero(TrajectoryLabel::Eu27Total, 2020, cfg.anchor_eu27, cfg.zero_year).stage(Stage::Trajectory)?;
    let ets = linear_to_zero(TrajectoryLabel::Ets, 2020, cfg.anchor_ets, cfg.zero_year).stage(Stage::Trajectory)?;
    let green_deal = reallocate_all(&ds.targets, cfg.ratio_mode).stage(Stage::Trajectory)?;
    let esr = esr_trajectory(&green_deal, cfg.anchor_esr).stage(Stage::Trajectory)?;
    let mismatch = budget_mismatch(&eu27_total, &esr, &ets);
    Ok(Trajectories {
        eu27_total,
        esr,
        ets,
        mismatch,
        green_deal,
    })
}

/// Every table of one study.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyResults {
    pub study: StudyLabel,
    pub window: StudyWindow,
    pub cb_eu27: f64,
    pub trajectories: Trajectories,
    pub indices: IndexTable,
    pub capability: BudgetAllocation,
    pub decoupling: BudgetAllocation,
    pub inertia: BudgetAllocation,
    pub cap_dec: BlendSweep,
    pub cap_ine: BlendSweep,
    pub diagonal: BlendSweep,
    pub gaps: BTreeMap<MemberState, GapRecord>,
    pub groups: BTreeMap<MemberState, GroupAssignment>,
    pub feasibility: FeasibilityTable,
}

pub fn compute_study(ds: &Dataset, cfg: &RunConfig) -> Result<StudyResults, RunError> {
    compute_study_with(ds, cfg, cfg.tapio_source)
}

pub fn compute_study_with(ds: &Dataset, cfg: &RunConfig, source: TapioSource) -> Result<StudyResults, RunError> {
    cfg.validate().stage(Stage::Load)?;
    let trajectories = build_trajectories(ds, cfg)?;
    let cb = cfg.cb_eu27.unwrap_or(trajectories.eu27_total.budget);
    let window = cfg.study_window();
    let indices = compute_indices(ds, &window, source).stage(Stage::Indices)?;
    let study = cfg.study;
    let capability = BudgetAllocation::from_shares(study, AllocationTag::Capability, &indices.capability(), cb);
    let decoupling = BudgetAllocation::from_shares(study, AllocationTag::Decoupling, &indices.decoupling(), cb);
    let inertia = BudgetAllocation::from_shares(study, AllocationTag::Inertia, &indices.inertia(), cb);
    let cap_dec = sweep_linear(&capability, &decoupling, cfg.step).stage(Stage::Blend)?;
    let cap_ine = sweep_linear(&capability, &inertia, cfg.step).stage(Stage::Blend)?;
    let diagonal = sweep_diagonal(&capability, &decoupling, &inertia, cfg.step).stage(Stage::Blend)?;
    let gaps = capability_inertia_gap(&capability, &inertia, Some(&indices.tapio())).stage(Stage::Analysis)?;
    let groups = classify_groups(&gaps, &diagonal, &cfg.thresholds).stage(Stage::Analysis)?;
    let feasibility = feasibility_table(&cap_ine, &trajectories.green_deal).stage(Stage::Analysis)?;
    Ok(StudyResults {
        study,
        window,
        cb_eu27: cb,
        trajectories,
        indices,
        capability,
        decoupling,
        inertia,
        cap_dec,
        cap_ine,
        diagonal,
        gaps,
        groups,
        feasibility,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_data_dir_is_a_load_error() {
        let cfg = RunConfig {
            data_dir: Some("/nonexistent/inputs".into()),
            ..RunConfig::default()
        };
        let err = load_inputs(&cfg).unwrap_err();
        assert_eq!(err.stage, Stage::Load);
        assert!(err.to_string().starts_with("[load]"));
    }

    #[test]
    fn bundled_study_runs() {
        let ds = bundled::dataset().unwrap();
        let r = compute_study(&ds, &RunConfig::default()).unwrap();
        assert!((r.cb_eu27 - 60069.94).abs() < 0.005);
        assert_eq!(r.groups.len(), 27);
        assert!((r.trajectories.mismatch.relative - 0.1095).abs() < 0.005);
    }
}
