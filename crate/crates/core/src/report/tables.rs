//! Tables in the layout of the bundled references, plus the logic that
//! produces the computed side of each manifest check.

use std::collections::BTreeMap;

use super::config::RunConfig;
use super::manifest::{Check, CheckSource};
use super::pipeline::{compute_study_with, RunError, Stage, StageExt, StudyResults, Trajectories};
use super::table::{param_header, Table};
use crate::analysis::{capability_inertia_gap, esr_budget, FeasibilityTable, GapRecord, GroupAssignment};
use crate::blend::{sweep_diagonal, sweep_linear, AllocationTag, BlendSweep, BudgetAllocation};
use crate::bundled;
use crate::country::{CountryMap, MemberState, Region};
use crate::indices::{capability_index, compare_tapio_sources, IndexTable, StudyLabel, TapioSource};
use crate::ingest::{normalize_to_base, Dataset, TapioWindow, Variable, ALLOCATION_YEARS};
use crate::trajectory::{GreenDealAllocation, ReallocationRule};

const T_PER_MT: f64 = 1e6;
const KT_PER_MT: f64 = 1e3;

pub fn trajectory_table(t: &Trajectories) -> Table {
    let mut table = Table::new(
        "year",
        vec!["esr".into(), "eu27_total".into(), "ets".into()],
        2,
    );
    for y in t.eu27_total.years() {
        table.push(
            y.to_string(),
            vec![t.esr.get(y), t.eu27_total.get(y), t.ets.get(y)],
        );
    }
    table.push_values("budget", [t.esr.budget, t.eu27_total.budget, t.ets.budget]);
    table
}

fn window_cols(windows: &[TapioWindow]) -> impl Iterator<Item = TapioWindow> + '_ {
    [TapioWindow::W3, TapioWindow::W2, TapioWindow::W1]
        .into_iter()
        .filter(move |w| windows.contains(w))
}

/// `country, CI, tapio_W3, tapio_W2, tapio_W1, tapio_avg, tapio_rescaled, DI, decoupling_share, II`
pub fn indices_table(ix: &IndexTable) -> Table {
    let cols = [
        "CI",
        "tapio_W3",
        "tapio_W2",
        "tapio_W1",
        "tapio_avg",
        "tapio_rescaled",
        "DI",
        "decoupling_share",
        "II",
    ];
    let mut t = Table::new("country", cols.iter().map(|s| s.to_string()).collect(), 6);
    let w = |vals: &BTreeMap<TapioWindow, f64>, k| vals.get(&k).copied();
    t.push(
        Region::Eu27.code(),
        vec![
            None,
            w(&ix.eu.tapio.windows, TapioWindow::W3),
            w(&ix.eu.tapio.windows, TapioWindow::W2),
            w(&ix.eu.tapio.windows, TapioWindow::W1),
            Some(ix.eu.tapio.combined),
            Some(ix.eu.tapio_rescaled),
            Some(1.0),
            None,
            None,
        ],
    );
    for (m, r) in &ix.rows {
        t.push(
            m.code(),
            vec![
                Some(r.capability),
                w(&r.tapio.windows, TapioWindow::W3),
                w(&r.tapio.windows, TapioWindow::W2),
                w(&r.tapio.windows, TapioWindow::W1),
                Some(r.tapio.combined),
                Some(r.tapio_rescaled),
                Some(r.di),
                Some(r.decoupling_share),
                Some(r.inertia),
            ],
        );
    }
    t
}

/// `country, w3, w2, w1, avg` for the studied windows.
pub fn tapio_table(ix: &IndexTable) -> Table {
    let windows: Vec<TapioWindow> = window_cols(&ix.study.tapio_windows).collect();
    let mut cols: Vec<String> = windows.iter().map(|w| w.label().to_ascii_lowercase()).collect();
    cols.push("avg".into());
    let mut t = Table::new("country", cols, 3);
    let row = |tv: &crate::indices::TapioValues| {
        let mut v: Vec<Option<f64>> = windows.iter().map(|w| tv.windows.get(w).copied()).collect();
        v.push(Some(tv.combined));
        v
    };
    t.push(Region::Eu27.code(), row(&ix.eu.tapio));
    for (m, r) in &ix.rows {
        t.push(m.code(), row(&r.tapio));
    }
    t
}

pub fn allocations_table(r: &StudyResults) -> Table {
    let mut t = Table::new(
        "country",
        vec!["capability".into(), "decoupling".into(), "inertia".into()],
        2,
    );
    for m in MemberState::ALL {
        t.push(
            m.code(),
            vec![r.capability.get(m), r.decoupling.get(m), r.inertia.get(m)],
        );
    }
    t
}

/// Capability with a given GDP vintage: `gdp, ratio, capability_index, budget`.
pub fn capability_table(ds: &Dataset, year: i32, cb: f64) -> Result<Table, RunError> {
    let gdp = ds.member_values(Variable::GdpPerCapita, year).stage(Stage::Indices)?;
    let eu = ds.value(Variable::GdpPerCapita, Region::Eu27, year).stage(Stage::Indices)?;
    let ci = capability_index(&gdp, eu).stage(Stage::Indices)?;
    let mut t = Table::new(
        "country",
        vec![
            format!("gdp_{year}"),
            "ratio".into(),
            "capability_index".into(),
            "budget".into(),
        ],
        4,
    );
    for (m, g) in &gdp {
        t.push_values(m.code(), [*g, eu / g, ci[m], cb * ci[m]]);
    }
    Ok(t)
}

/// `country, avg_tapio, rescaled, di, inv_di, share, budget`
pub fn decoupling_table(ix: &IndexTable, cb: f64) -> Table {
    let cols = ["avg_tapio", "rescaled", "di", "inv_di", "share", "budget"];
    let mut t = Table::new("country", cols.iter().map(|s| s.to_string()).collect(), 4);
    t.push(
        Region::Eu27.code(),
        vec![
            Some(ix.eu.tapio.combined),
            Some(ix.eu.tapio_rescaled),
            None,
            None,
            None,
            None,
        ],
    );
    for (m, r) in &ix.rows {
        t.push_values(
            m.code(),
            [
                r.tapio.combined,
                r.tapio_rescaled,
                r.di,
                r.inv_di,
                r.decoupling_share,
                cb * r.decoupling_share,
            ],
        );
    }
    t
}

/// `country, ghg_<years>_kt, inertia_index, budget`
pub fn inertia_table(ix: &IndexTable, cb: f64) -> Table {
    let cols = vec![
        format!("ghg_{}_kt", ix.study.ghg.to_string().replace('-', "_")),
        "inertia_index".into(),
        "budget".into(),
    ];
    let mut t = Table::new("country", cols, 4);
    for (m, r) in &ix.rows {
        t.push_values(m.code(), [r.ghg * KT_PER_MT, r.inertia, cb * r.inertia]);
    }
    t
}

/// Country × parameter matrix.
pub fn sweep_table(s: &BlendSweep) -> Table {
    let cols = s.params().iter().map(|p| param_header(p.w)).collect();
    let mut t = Table::new("country", cols, 2);
    for m in s.countries() {
        t.push_values(m.code(), s.trace(m));
    }
    t
}

/// `country, gap_pct, below_minus_100, tapio`; the percentage is blank for
/// sentinel rows.
pub fn gap_table(gaps: &BTreeMap<MemberState, GapRecord>) -> Table {
    let mut t = Table::new(
        "country",
        vec!["gap_pct".into(), "below_minus_100".into(), "tapio".into()],
        3,
    );
    for (m, g) in gaps {
        let below = g.below_minus_100();
        t.push(
            m.code(),
            vec![
                (!below).then_some(100.0 * g.gap),
                Some(if below { 1.0 } else { 0.0 }),
                g.tapio,
            ],
        );
    }
    t
}

/// Gaps as printed: percentage or the sentinel.
pub fn gaps_display_csv(gaps: &BTreeMap<MemberState, GapRecord>) -> String {
    let mut s = String::from("country,gap,gap_fraction,tapio\n");
    for (m, g) in gaps {
        let tapio = g.tapio.map(|t| format!("{t:.3}")).unwrap_or_default();
        s.push_str(&format!("{},{},{:.6},{}\n", m.code(), g.display_pct(), g.gap, tapio));
    }
    s
}

pub fn groups_csv(groups: &BTreeMap<MemberState, GroupAssignment>) -> String {
    let mut s = String::from("country,group,curvature,quadratic,leverage,excursion,gap\n");
    for (m, g) in groups {
        s.push_str(&format!(
            "{},{},{:.4},{:.4},{:.4},{:.4},{:.4}\n",
            m.code(),
            g.group,
            g.curvature,
            g.quadratic,
            g.leverage,
            g.excursion,
            g.gap
        ));
    }
    s
}

/// Blend columns, the ESR budget, and a `TOTAL` row for the ESR column.
pub fn feasibility_csv_table(f: &FeasibilityTable) -> Table {
    let mut cols: Vec<String> = f.params.iter().map(|&p| param_header(p)).collect();
    cols.push("esr_2021_2030".into());
    let mut t = Table::new("country", cols, 2);
    for (m, r) in &f.rows {
        let mut v: Vec<Option<f64>> = r.blended.iter().map(|&x| Some(x)).collect();
        v.push(Some(r.esr_budget_2021_2030));
        t.push(m.code(), v);
    }
    let mut total = vec![None; f.params.len()];
    total.push(Some(f.esr_total));
    t.push("TOTAL", total);
    t
}

/// Flags as 0/1 per blend column.
pub fn feasibility_flags_table(f: &FeasibilityTable) -> Table {
    let cols = f.params.iter().map(|&p| param_header(p)).collect();
    let mut t = Table::new("country", cols, 0);
    for (m, r) in &f.rows {
        t.push_values(m.code(), r.flagged.iter().map(|&b| if b { 1.0 } else { 0.0 }));
    }
    t
}

/// Green Deal allocations in t CO₂eq with a summed `TOTAL` row.
pub fn green_deal_table(ds: &Dataset, gd: &BTreeMap<MemberState, GreenDealAllocation>) -> Table {
    let mut cols = vec!["pct_gd_2030".to_string()];
    cols.extend(ALLOCATION_YEARS.map(|y| y.to_string()));
    let mut t = Table::new("country", cols, 0);
    let mut totals: BTreeMap<i32, f64> = BTreeMap::new();
    for (m, a) in gd {
        let pct = ds.targets.get(m).map(|t| 100.0 * t.pct_greendeal_2030);
        let mut v = vec![pct];
        for y in ALLOCATION_YEARS {
            let x = a.points.get(&y).map(|x| x * T_PER_MT);
            if let Some(x) = x {
                *totals.entry(y).or_insert(0.0) += x;
            }
            v.push(x);
        }
        t.push(m.code(), v);
    }
    let mut v = vec![None];
    v.extend(ALLOCATION_YEARS.map(|y| totals.get(&y).copied()));
    t.push("TOTAL", v);
    t
}

/// Per-region series rebased to `base` over `years`.
pub fn index_table(ds: &Dataset, variable: Variable, base: i32, years: std::ops::RangeInclusive<i32>) -> Result<Table, RunError> {
    let mut t = Table::new("country", years.clone().map(|y| y.to_string()).collect(), 2);
    for region in Region::all() {
        let s = normalize_to_base(ds.series(variable, region).stage(Stage::Report)?, base).stage(Stage::Report)?;
        t.push(region.code(), years.clone().map(|y| s.get(y)).collect());
    }
    Ok(t)
}

/// Side-by-side override and raw-series tapio values.
pub fn tapio_sources_csv(ds: &Dataset) -> String {
    let f = |v: Option<f64>| v.map(|x| format!("{x:.4}")).unwrap_or_default();
    let mut s = String::from("country,window,override,raw,difference\n");
    for c in compare_tapio_sources(ds) {
        let diff = c.override_value.zip(c.raw).map(|(o, r)| r - o);
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            c.region,
            c.window.label(),
            f(c.override_value),
            f(c.raw),
            f(diff)
        ));
    }
    s
}

/// A bundled reference table, parsed.
pub fn reference_table(id: &str) -> Result<Table, RunError> {
    let text = bundled::reference(id).ok_or_else(|| RunError::new(Stage::Report, format!("no reference table `{id}`")))?;
    Table::parse(text).stage(Stage::Report)
}

/// One column of a reference table as per-country values.
pub fn reference_column(id: &str, column: &str) -> Result<CountryMap, RunError> {
    let t = reference_table(id)?;
    let c = t
        .column_index(column)
        .ok_or_else(|| RunError::new(Stage::Report, format!("`{id}` has no column `{column}`")))?;
    let mut out = CountryMap::new();
    for (label, vals) in &t.rows {
        if let (Ok(m), Some(v)) = (label.parse::<MemberState>(), vals[c]) {
            out.insert(m, v);
        }
    }
    Ok(out)
}

/// The printed Green Deal rows as allocations, in Mt.
pub fn printed_green_deal() -> Result<BTreeMap<MemberState, GreenDealAllocation>, RunError> {
    let t = reference_table("esr_green_deal")?;
    let mut out = BTreeMap::new();
    for (label, _) in &t.rows {
        let Ok(m) = label.parse::<MemberState>() else { continue };
        let points: BTreeMap<i32, f64> = ALLOCATION_YEARS
            .filter_map(|y| t.cell(label, &y.to_string()).map(|v| (y, v / T_PER_MT)))
            .collect();
        let last = points.get(ALLOCATION_YEARS.end()).copied().unwrap_or(f64::NAN);
        out.insert(
            m,
            GreenDealAllocation {
                country: m,
                points,
                gd_2030_target: last,
                rule: ReallocationRule::Printed,
                ratio: None,
            },
        );
    }
    Ok(out)
}

/// Capability, Decoupling and Inertia allocations read from the printed
/// endpoint columns of a study's two-way blend tables.
pub fn printed_endpoints(study: StudyLabel) -> Result<(BudgetAllocation, BudgetAllocation, BudgetAllocation), RunError> {
    let slug = study.slug();
    let (cap, ine) = endpoint_allocations(&format!("cap_ine_{slug}"), study)?;
    let (_, dec) = endpoint_allocations(&format!("cap_dec_{slug}"), study)?;
    Ok((cap, dec, ine))
}

fn endpoint_allocations(id: &str, study: StudyLabel) -> Result<(BudgetAllocation, BudgetAllocation), RunError> {
    let a = reference_column(id, "0.0")?;
    let b = reference_column(id, "1.0")?;
    let tag_b = if id.starts_with("cap_dec") {
        AllocationTag::Decoupling
    } else {
        AllocationTag::Inertia
    };
    Ok((
        BudgetAllocation::from_values(study, AllocationTag::Capability, a),
        BudgetAllocation::from_values(study, tag_b, b),
    ))
}

/// Recomputes a reference table from its own printed endpoint columns.
pub fn endpoint_table(fixture: &str, study: StudyLabel, step: f64) -> Result<Table, RunError> {
    let slug = study.slug();
    if fixture.starts_with("cap_dec_") || fixture.starts_with("cap_ine_") {
        let (a, b) = endpoint_allocations(fixture, study)?;
        return Ok(sweep_table(&sweep_linear(&a, &b, step).stage(Stage::Blend)?));
    }
    if fixture.starts_with("three_way_") {
        let (cap, ine) = endpoint_allocations(fixture, study)?;
        let dec = BudgetAllocation::from_values(
            study,
            AllocationTag::Decoupling,
            reference_column(&format!("cap_dec_{slug}"), "1.0")?,
        );
        return Ok(sweep_table(&sweep_diagonal(&cap, &dec, &ine, step).stage(Stage::Blend)?));
    }
    if fixture.starts_with("gap_") {
        let (cap, ine) = endpoint_allocations(&format!("cap_ine_{slug}"), study)?;
        let gaps = capability_inertia_gap(&cap, &ine, None).stage(Stage::Analysis)?;
        return Ok(gap_table(&gaps));
    }
    Err(RunError::new(
        Stage::Report,
        format!("`{fixture}` has no endpoint reproduction"),
    ))
}

/// The computed table for one check.
pub fn computed_for_check(ds: &Dataset, cfg: &RunConfig, check: &Check) -> Result<Table, RunError> {
    let study = check.study.unwrap_or(cfg.study);
    let cfg = RunConfig {
        study,
        ..cfg.clone()
    };
    let results = |source: TapioSource| compute_study_with(ds, &cfg, source);
    match check.source {
        CheckSource::Endpoints => endpoint_table(&check.fixture, study, cfg.step),
        CheckSource::PrintedAllocations => {
            let gd = printed_green_deal()?;
            let mut t = Table::new("country", vec!["esr_2021_2030".into()], 2);
            let mut total = 0.0;
            for (m, a) in &gd {
                let b = esr_budget(a).stage(Stage::Analysis)?;
                total += b;
                t.push_values(m.code(), [b]);
            }
            t.push_values("TOTAL", [total]);
            Ok(t)
        }
        CheckSource::Pipeline | CheckSource::Raw => {
            let source = if check.source == CheckSource::Raw {
                TapioSource::Raw
            } else {
                cfg.tapio_source
            };
            let r = results(source)?;
            pipeline_table(ds, &r, &check.fixture)
        }
    }
}

/// The pipeline's version of a reference table.
pub fn pipeline_table(ds: &Dataset, r: &StudyResults, fixture: &str) -> Result<Table, RunError> {
    let slug = r.study.slug();
    let named = |base: &str| format!("{base}_{slug}");
    Ok(match fixture {
        "trajectory" => trajectory_table(&r.trajectories),
        "tapio" => tapio_table(&r.indices),
        "capability_2020" => capability_table(ds, 2020, r.cb_eu27)?,
        "inertia_2019" => inertia_table(&r.indices, r.cb_eu27),
        f if f == named("decoupling") => decoupling_table(&r.indices, r.cb_eu27),
        f if f == named("cap_dec") => sweep_table(&r.cap_dec),
        f if f == named("cap_ine") => sweep_table(&r.cap_ine),
        f if f == named("three_way") => sweep_table(&r.diagonal),
        f if f == named("gap") => gap_table(&r.gaps),
        "feasibility" => feasibility_csv_table(&r.feasibility),
        "esr_green_deal" => green_deal_table(ds, &r.trajectories.green_deal),
        "gdp_index" => index_table(ds, Variable::GdpPerCapita, 2010, 2010..=2019)?,
        "ghg_index" => index_table(ds, Variable::GhgPerCapita, 2010, 2010..=2019)?,
        other => {
            return Err(RunError::new(
                Stage::Report,
                format!("no pipeline table for `{other}` in study {}", r.study),
            ))
        }
    })
}

/// Long form of a `(w, z)` grid: `country, w, z, budget`.
pub fn grid_csv(s: &BlendSweep) -> String {
    let mut out = String::from("country,w,z,budget\n");
    for a in &s.allocations {
        let Some(p) = a.params else { continue };
        for (m, v) in &a.per_country {
            out.push_str(&format!("{},{:.1},{:.1},{v:.2}\n", m.code(), p.w, p.z.unwrap_or(p.w)));
        }
    }
    out
}

#[derive(serde::Serialize)]
pub struct GroupTrace<'a> {
    #[serde(flatten)]
    pub assignment: &'a GroupAssignment,
    pub t: Vec<f64>,
    pub trace: Vec<f64>,
}

/// Group assignments with the diagonal trace each was judged on.
pub fn group_traces<'a>(
    groups: &'a BTreeMap<MemberState, GroupAssignment>,
    diagonal: &BlendSweep,
) -> Vec<GroupTrace<'a>> {
    let t: Vec<f64> = diagonal.params().iter().map(|p| p.w).collect();
    groups
        .iter()
        .map(|(m, g)| GroupTrace {
            assignment: g,
            t: t.clone(),
            trace: diagonal.trace(*m),
        })
        .collect()
}
