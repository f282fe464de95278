//! A full study run: every table, the reference checks, and the files they
//! are written to.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::{Format, RunConfig};
use super::diff::{cells_csv, DiffReport};
use super::pipeline::{compute_study, load_inputs, RunError, Stage, StageExt, StudyResults};
use super::svg::{group_plots, sweep_plot};
use super::tables::{
    allocations_table, feasibility_csv_table, feasibility_flags_table, green_deal_table, groups_csv, indices_table,
    gaps_display_csv, group_traces, sweep_table, tapio_sources_csv, trajectory_table,
};
use super::run_checks;
use crate::analysis::Group;
use crate::country::MemberState;
use crate::ingest::{DataFlag, Dataset};

/// One output file, relative to the output directory.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub path: PathBuf,
    pub content: String,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub results: StudyResults,
    pub reports: Vec<DiffReport>,
    pub flags: Vec<DataFlag>,
    /// Sorted by path.
    pub artifacts: Vec<Artifact>,
}

#[derive(Serialize)]
struct CheckSummary<'a> {
    id: &'a str,
    table: &'a str,
    kind: String,
    cells: usize,
    matched: usize,
    within_tolerance: usize,
    discrepancies: usize,
    max_abs_diff: f64,
    fails_strict: bool,
}

#[derive(Serialize)]
struct Summary<'a> {
    study: &'a str,
    cb_eu27: f64,
    budgets: &'a crate::trajectory::BudgetMismatch,
    tapio_source: crate::indices::TapioSource,
    tapio_anchor: MemberState,
    tapio_shift: f64,
    groups: BTreeMap<Group, Vec<MemberState>>,
    flags: Vec<String>,
    checks: Vec<CheckSummary<'a>>,
}

fn json<T: Serialize>(v: &T) -> Result<String, RunError> {
    serde_json::to_string_pretty(v).map(|s| s + "\n").stage(Stage::Report)
}

/// Computes a study from already loaded inputs.
pub fn run_with(ds: &Dataset, cfg: &RunConfig) -> Result<RunOutput, RunError> {
    let r = compute_study(ds, cfg)?;
    let reports = run_checks(ds, cfg, cfg.study)?;
    let slug = r.study.slug();
    let mut out: Vec<Artifact> = Vec::new();
    let mut add = |path: String, content: String| {
        out.push(Artifact {
            path: PathBuf::from(path),
            content,
        })
    };

    if cfg.formats.contains(&Format::Csv) {
        add("trajectory.csv".into(), trajectory_table(&r.trajectories).to_csv());
        add("esr_green_deal.csv".into(), green_deal_table(ds, &r.trajectories.green_deal).to_csv());
        add("tapio_sources.csv".into(), tapio_sources_csv(ds));
        add(format!("indices_{slug}.csv"), indices_table(&r.indices).to_csv());
        add(format!("allocations_{slug}.csv"), allocations_table(&r).to_csv());
        add(format!("cap_dec_{slug}.csv"), sweep_table(&r.cap_dec).to_csv());
        add(format!("cap_ine_{slug}.csv"), sweep_table(&r.cap_ine).to_csv());
        add(format!("three_way_{slug}.csv"), sweep_table(&r.diagonal).to_csv());
        add(format!("gaps_{slug}.csv"), gaps_display_csv(&r.gaps));
        add(format!("groups_{slug}.csv"), groups_csv(&r.groups));
        add(format!("feasibility_{slug}.csv"), feasibility_csv_table(&r.feasibility).to_csv());
        add(format!("feasibility_flags_{slug}.csv"), feasibility_flags_table(&r.feasibility).to_csv());
        add(format!("diff_cells_{slug}.csv"), cells_csv(&reports));
    }
    if cfg.formats.contains(&Format::Json) {
        let mut groups: BTreeMap<Group, Vec<MemberState>> = BTreeMap::new();
        for (m, g) in &r.groups {
            groups.entry(g.group).or_default().push(*m);
        }
        let summary = Summary {
            study: r.study.as_str(),
            cb_eu27: r.cb_eu27,
            budgets: &r.trajectories.mismatch,
            tapio_source: r.indices.tapio_source,
            tapio_anchor: r.indices.anchor,
            tapio_shift: r.indices.shift,
            groups,
            flags: ds.flags.iter().map(|f| format!("{}: {}: {}", f.file, f.region, f.message)).collect(),
            checks: reports
                .iter()
                .map(|d| {
                    let c = d.counts();
                    CheckSummary {
                        id: &d.check_id,
                        table: &d.table_id,
                        kind: d.kind.to_string(),
                        cells: d.cells.len(),
                        matched: c.matched,
                        within_tolerance: c.within_tolerance,
                        discrepancies: c.discrepancies,
                        max_abs_diff: d.max_abs_diff(),
                        fails_strict: d.fails_strict(),
                    }
                })
                .collect(),
        };
        add(format!("summary_{slug}.json"), json(&summary)?);
        add(format!("groups_{slug}.json"), json(&group_traces(&r.groups, &r.diagonal))?);
    }
    if cfg.formats.contains(&Format::Svg) {
        let all = MemberState::ALL.to_vec();
        let plot = |s, title: &str| sweep_plot(s, &all, title).stage(Stage::Report);
        add(format!("plots/cap_dec_{slug}.svg"), plot(&r.cap_dec, "Capability to Decoupling")?);
        add(format!("plots/cap_ine_{slug}.svg"), plot(&r.cap_ine, "Capability to Inertia")?);
        add(format!("plots/three_way_{slug}.svg"), plot(&r.diagonal, "Three-way blend, t = w = z")?);
        for (g, svg) in group_plots(&r.diagonal, &r.groups).stage(Stage::Report)? {
            add(format!("plots/group_{}_{slug}.svg", g.short()), svg);
        }
    }
    out.sort_by(|a, b| a.path.cmp(&b.path));
    Ok(RunOutput {
        results: r,
        reports,
        flags: ds.flags.clone(),
        artifacts: out,
    })
}

/// Loads the inputs named by `cfg` and runs the study.
pub fn run_study(cfg: &RunConfig) -> Result<RunOutput, RunError> {
    let ds = load_inputs(cfg)?;
    run_with(&ds, cfg)
}

/// Writes artifacts under `dir`, creating directories as needed. Returns the
/// written paths.
pub fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> io::Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for a in artifacts {
        let p = dir.join(&a.path);
        if let Some(parent) = p.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&p, &a.content)?;
        written.push(p);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;

    #[test]
    fn artifacts_are_deterministic() {
        let ds = bundled::dataset().unwrap();
        let cfg = RunConfig::default();
        let a = run_with(&ds, &cfg).unwrap().artifacts;
        let b = run_with(&ds, &cfg).unwrap().artifacts;
        assert_eq!(a, b);
        assert!(a.iter().any(|x| x.path == Path::new("indices_2016_2019.csv")));
        assert!(a.iter().any(|x| x.path.starts_with("plots")));
    }

    #[test]
    fn formats_filter_artifacts() {
        let ds = bundled::dataset().unwrap();
        let cfg = RunConfig {
            formats: [Format::Json].into_iter().collect(),
            ..RunConfig::default()
        };
        let a = run_with(&ds, &cfg).unwrap().artifacts;
        assert!(a.iter().all(|x| x.path.extension().unwrap() == "json"));
    }
}
