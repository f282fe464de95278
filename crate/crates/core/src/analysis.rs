//! Interpretive tables built on top of the allocations: the
//! Capability–Inertia gap, the four behaviour groups, and the comparison of
//! blended budgets against the 2021–2030 ESR budget.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::blend::{BlendSweep, BudgetAllocation, SweepAxis};
use crate::country::{CountryMap, MemberState};
use crate::ingest::ALLOCATION_YEARS;
use crate::trajectory::GreenDealAllocation;

/// Rendering of gaps below −100 %.
pub const GAP_SENTINEL: &str = "< -100%";

/// A blended budget at least this many times the ESR budget is flagged.
pub const FEASIBILITY_FACTOR: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error("{0}: capability budget is zero, gap undefined")]
    ZeroCapability(MemberState),
    #[error("allocations come from different studies")]
    StudyMismatch,
    #[error("{0} is missing from one of the inputs")]
    MissingCountry(MemberState),
    #[error("diagonal sweep required, got {0:?}")]
    WrongAxis(SweepAxis),
    #[error("sweep needs at least three points, got {0}")]
    ShortSweep(usize),
    #[error("{country}: no ESR allocation for {year}")]
    MissingYear { country: MemberState, year: i32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapRecord {
    pub country: MemberState,
    /// `(cap − ine) / cap` as a fraction.
    pub gap: f64,
    pub tapio: Option<f64>,
}

impl GapRecord {
    pub fn below_minus_100(&self) -> bool {
        self.gap < -1.0
    }

    /// Percentage with two decimals, or the sentinel.
    pub fn display_pct(&self) -> String {
        if self.below_minus_100() {
            GAP_SENTINEL.to_string()
        } else {
            format!("{:.2}%", 100.0 * self.gap)
        }
    }
}

pub fn capability_inertia_gap(
    cap: &BudgetAllocation,
    ine: &BudgetAllocation,
    tapio: Option<&CountryMap>,
) -> Result<BTreeMap<MemberState, GapRecord>, AnalysisError> {
    if cap.study != ine.study {
        return Err(AnalysisError::StudyMismatch);
    }
    cap.per_country
        .iter()
        .map(|(&m, &c)| {
            let i = ine.get(m).ok_or(AnalysisError::MissingCountry(m))?;
            if c == 0.0 {
                return Err(AnalysisError::ZeroCapability(m));
            }
            Ok((
                m,
                GapRecord {
                    country: m,
                    gap: (c - i) / c,
                    tapio: tapio.and_then(|t| t.get(&m).copied()),
                },
            ))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Group {
    #[serde(rename = "G1_INERTIA_DOMINATES")]
    G1InertiaDominates,
    #[serde(rename = "G2_STRONG_DECOUPLING")]
    G2StrongDecoupling,
    #[serde(rename = "G3_WEAK_DECOUPLING")]
    G3WeakDecoupling,
    #[serde(rename = "G4_DECOUPLING_SENSITIVE")]
    G4DecouplingSensitive,
}

impl Group {
    pub const ALL: [Group; 4] = [
        Group::G1InertiaDominates,
        Group::G2StrongDecoupling,
        Group::G3WeakDecoupling,
        Group::G4DecouplingSensitive,
    ];

    pub fn short(self) -> &'static str {
        match self {
            Group::G1InertiaDominates => "G1",
            Group::G2StrongDecoupling => "G2",
            Group::G3WeakDecoupling => "G3",
            Group::G4DecouplingSensitive => "G4",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::G1InertiaDominates => "G1_INERTIA_DOMINATES",
            Group::G2StrongDecoupling => "G2_STRONG_DECOUPLING",
            Group::G3WeakDecoupling => "G3_WEAK_DECOUPLING",
            Group::G4DecouplingSensitive => "G4_DECOUPLING_SENSITIVE",
        })
    }
}

/// Thresholds for the group rules.
///
/// The rules read the diagonal trace from Capability (`t = 0`) to Inertia
/// (`t = 1`), in order:
///
/// 1. the trace leaves the band between its endpoints by more than
///    `excursion_tolerance` Mt at some grid point → G4;
/// 2. the decoupling leverage `(dec − cap) / |ine − cap|` is smaller in
///    magnitude than `leverage` → G1;
/// 3. `dec < cap` (trace sags below the chord) → G2, otherwise G3.
///
/// `dec − cap` is recovered from the sampled second differences, so the
/// rules only need the sweep itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroupThresholds {
    pub leverage: f64,
    pub excursion_tolerance: f64,
}

impl Default for GroupThresholds {
    fn default() -> Self {
        GroupThresholds {
            leverage: 0.25,
            excursion_tolerance: 0.5,
        }
    }
}

/// One evaluated rule.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleCheck {
    pub rule: &'static str,
    pub value: f64,
    pub threshold: f64,
    pub fired: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupAssignment {
    pub country: MemberState,
    pub group: Group,
    /// Second difference of the sampled trace, Mt.
    pub curvature: f64,
    /// Quadratic coefficient of the trace, `cap − dec`.
    pub quadratic: f64,
    pub leverage: f64,
    pub excursion: f64,
    pub gap: f64,
    pub rules: Vec<RuleCheck>,
}

pub fn classify_groups(
    gaps: &BTreeMap<MemberState, GapRecord>,
    diagonal: &BlendSweep,
    thresholds: &GroupThresholds,
) -> Result<BTreeMap<MemberState, GroupAssignment>, AnalysisError> {
    if diagonal.axis != SweepAxis::Diagonal {
        return Err(AnalysisError::WrongAxis(diagonal.axis));
    }
    let ts: Vec<f64> = diagonal.params().iter().map(|p| p.w).collect();
    if ts.len() < 3 {
        return Err(AnalysisError::ShortSweep(ts.len()));
    }
    let mut out = BTreeMap::new();
    for m in diagonal.countries() {
        let gap = gaps.get(&m).ok_or(AnalysisError::MissingCountry(m))?.gap;
        let y = diagonal.trace(m);
        out.insert(m, classify_one(m, &ts, &y, gap, diagonal.step, thresholds));
    }
    for m in gaps.keys() {
        if !out.contains_key(m) {
            return Err(AnalysisError::MissingCountry(*m));
        }
    }
    Ok(out)
}

fn classify_one(m: MemberState, ts: &[f64], y: &[f64], gap: f64, step: f64, th: &GroupThresholds) -> GroupAssignment {
    // divided differences over the first three samples give the quadratic
    // coefficient exactly, even for a clamped final step
    let d01 = (y[1] - y[0]) / (ts[1] - ts[0]);
    let d12 = (y[2] - y[1]) / (ts[2] - ts[1]);
    let quadratic = (d12 - d01) / (ts[2] - ts[0]);
    let curvature = 2.0 * step * step * quadratic;
    let cap = y[0];
    let ine = y[y.len() - 1];
    let (lo, hi) = (cap.min(ine), cap.max(ine));
    let excursion = y.iter().map(|&v| (v - hi).max(lo - v)).fold(0.0, f64::max);
    let span = (ine - cap).abs();
    let pull = -quadratic; // dec − cap
    let leverage = if span > 0.0 {
        pull / span
    } else if pull == 0.0 {
        0.0
    } else {
        pull.signum() * f64::INFINITY
    };

    let mut rules = Vec::new();
    let r1 = excursion > th.excursion_tolerance;
    rules.push(RuleCheck {
        rule: "excursion_outside_endpoints",
        value: excursion,
        threshold: th.excursion_tolerance,
        fired: r1,
    });
    let group = if r1 {
        Group::G4DecouplingSensitive
    } else {
        let r2 = leverage.abs() < th.leverage;
        rules.push(RuleCheck {
            rule: "low_decoupling_leverage",
            value: leverage.abs(),
            threshold: th.leverage,
            fired: r2,
        });
        if r2 {
            Group::G1InertiaDominates
        } else {
            let r3 = pull < 0.0;
            rules.push(RuleCheck {
                rule: "decoupling_below_capability",
                value: pull,
                threshold: 0.0,
                fired: r3,
            });
            if r3 {
                Group::G2StrongDecoupling
            } else {
                Group::G3WeakDecoupling
            }
        }
    };
    GroupAssignment {
        country: m,
        group,
        curvature,
        quadratic,
        leverage,
        excursion,
        gap,
        rules,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityRow {
    pub country: MemberState,
    pub esr_budget_2021_2030: f64,
    pub blended: Vec<f64>,
    pub flagged: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityTable {
    pub params: Vec<f64>,
    pub rows: BTreeMap<MemberState, FeasibilityRow>,
    pub esr_total: f64,
}

pub fn esr_budget(alloc: &GreenDealAllocation) -> Result<f64, AnalysisError> {
    ALLOCATION_YEARS
        .map(|y| {
            alloc.points.get(&y).copied().ok_or(AnalysisError::MissingYear {
                country: alloc.country,
                year: y,
            })
        })
        .sum()
}

pub fn feasibility_table(
    sweep: &BlendSweep,
    esr: &BTreeMap<MemberState, GreenDealAllocation>,
) -> Result<FeasibilityTable, AnalysisError> {
    let params = sweep.params().iter().map(|p| p.w).collect();
    let mut rows = BTreeMap::new();
    for m in sweep.countries() {
        let budget = esr_budget(esr.get(&m).ok_or(AnalysisError::MissingCountry(m))?)?;
        let blended = sweep.trace(m);
        let flagged = blended.iter().map(|&b| b >= FEASIBILITY_FACTOR * budget).collect();
        rows.insert(
            m,
            FeasibilityRow {
                country: m,
                esr_budget_2021_2030: budget,
                blended,
                flagged,
            },
        );
    }
    let esr_total = rows.values().map(|r| r.esr_budget_2021_2030).sum();
    Ok(FeasibilityTable {
        params,
        rows,
        esr_total,
    })
}
