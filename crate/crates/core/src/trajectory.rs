//! Linear emission pathways, Green Deal re-proportioning of ESR allocations,
//! and carbon-budget integration.
//!
//! All quantities are Mt CO₂eq. Budgets are inclusive annual sums, not
//! trapezoidal integrals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;

use serde::Serialize;

use crate::country::MemberState;
use crate::ingest::{CountrySeries, TargetTable, ALLOCATION_YEARS};

/// Default year at which every pathway reaches zero.
pub const NET_ZERO_YEAR: i32 = 2050;

/// Configured 2020 anchors, Mt CO₂eq.
pub const EU27_TOTAL_2020: f64 = 3875.48;
pub const ETS_2020: f64 = 1224.24;
pub const ESR_2020: f64 = 2079.17;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TrajectoryLabel {
    Eu27Total,
    Esr,
    Ets,
    EsrMember(MemberState),
}

impl fmt::Display for TrajectoryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrajectoryLabel::Eu27Total => f.write_str("EU27_TOTAL"),
            TrajectoryLabel::Esr => f.write_str("ESR"),
            TrajectoryLabel::Ets => f.write_str("ETS"),
            TrajectoryLabel::EsrMember(m) => write!(f, "ESR_MEMBER({m})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TrajectoryError {
    #[error("zero year {zero_year} must be after anchor year {anchor_year}")]
    NonPositiveSpan { anchor_year: i32, zero_year: i32 },
    #[error("anchor value must be positive, got {0}")]
    NonPositiveAnchor(f64),
    #[error("need at least two points to fit a line, found {0}")]
    InsufficientPoints(usize),
    #[error("year range {from}..={to} is outside the trajectory")]
    RangeOutside { from: i32, to: i32 },
    #[error("{0}: Regulation reduction is zero, ratio undefined (use the flat rule)")]
    UndefinedRatio(MemberState),
    #[error("{0}: no printed ratio supplied")]
    MissingPrintedRatio(MemberState),
    #[error("{0}: missing from the allocation set")]
    MissingCountry(MemberState),
    #[error("{country}: no allocation for {year}")]
    MissingYear { country: MemberState, year: i32 },
}

/// An annual pathway with its integrated budget over every listed year.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub label: TrajectoryLabel,
    pub points: BTreeMap<i32, f64>,
    pub budget: f64,
}

impl Trajectory {
    pub fn from_points(label: TrajectoryLabel, points: BTreeMap<i32, f64>) -> Self {
        let budget = points.values().sum();
        Trajectory { label, points, budget }
    }

    pub fn get(&self, year: i32) -> Option<f64> {
        self.points.get(&year).copied()
    }

    pub fn years(&self) -> RangeInclusive<i32> {
        let first = self.points.keys().next().copied().unwrap_or(0);
        let last = self.points.keys().next_back().copied().unwrap_or(-1);
        first..=last
    }
}

/// Straight line from `(anchor_year, anchor_value)` to zero at `zero_year`.
pub fn linear_to_zero(
    label: TrajectoryLabel,
    anchor_year: i32,
    anchor_value: f64,
    zero_year: i32,
) -> Result<Trajectory, TrajectoryError> {
    if zero_year <= anchor_year {
        return Err(TrajectoryError::NonPositiveSpan { anchor_year, zero_year });
    }
    if !(anchor_value > 0.0) {
        return Err(TrajectoryError::NonPositiveAnchor(anchor_value));
    }
    let span = f64::from(zero_year - anchor_year);
    let points = (anchor_year..=zero_year)
        .map(|y| {
            let v = if y == anchor_year {
                anchor_value
            } else {
                anchor_value * f64::from(zero_year - y) / span
            };
            (y, v)
        })
        .collect();
    Ok(Trajectory::from_points(label, points))
}

/// Ordinary least squares over `fit_range`, evaluated at `at_year`.
pub fn estimate_anchor(
    history: &CountrySeries,
    fit_range: RangeInclusive<i32>,
    at_year: i32,
) -> Result<f64, TrajectoryError> {
    let pts: Vec<(f64, f64)> = fit_range
        .clone()
        .filter_map(|y| history.get(y).map(|v| (f64::from(y), v)))
        .collect();
    if pts.len() != fit_range.clone().count() {
        return Err(TrajectoryError::RangeOutside {
            from: *fit_range.start(),
            to: *fit_range.end(),
        });
    }
    if pts.len() < 2 {
        return Err(TrajectoryError::InsufficientPoints(pts.len()));
    }
    let n = pts.len() as f64;
    // centre the abscissa on the first year to keep the sums small
    let x0 = pts[0].0;
    let mx = pts.iter().map(|p| p.0 - x0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - x0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - x0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    Ok(my + slope * (f64::from(at_year) - x0 - mx))
}

pub fn estimate_2020_anchor(history: &CountrySeries, fit_range: RangeInclusive<i32>) -> Result<f64, TrajectoryError> {
    estimate_anchor(history, fit_range, 2020)
}

/// How the Green Deal/Regulation ratio is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum RatioMode {
    /// `pct_greendeal_2030 / pct_regulation_2030`
    #[default]
    PercentColumns,
    /// The ratio as printed alongside the targets.
    PrintedRatio,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ReallocationRule {
    Proportional,
    Flat,
    /// Taken verbatim from a reference table.
    Printed,
}

/// Green Deal ESR allocations for one Member State, Mt CO₂eq.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GreenDealAllocation {
    pub country: MemberState,
    pub points: BTreeMap<i32, f64>,
    pub gd_2030_target: f64,
    pub rule: ReallocationRule,
    pub ratio: Option<f64>,
}

impl GreenDealAllocation {
    pub fn total(&self) -> f64 {
        self.points.values().sum()
    }
}

/// Stretches the Regulation path's distance below the 2005 base by the ratio
/// of the two 2030 reduction percentages.
pub fn green_deal_reallocate(target: &TargetTable, mode: RatioMode) -> Result<GreenDealAllocation, TrajectoryError> {
    if target.pct_regulation_2030 == 0.0 {
        return Err(TrajectoryError::UndefinedRatio(target.country));
    }
    let r = match mode {
        RatioMode::PercentColumns => target.pct_greendeal_2030 / target.pct_regulation_2030,
        RatioMode::PrintedRatio => target
            .printed_ratio
            .ok_or(TrajectoryError::MissingPrintedRatio(target.country))?,
    };
    let e = target.e2005;
    // Reg - (r - 1)(e - Reg) rather than e - r(e - Reg): identical algebra,
    // but r = 1 returns the Regulation value untouched.
    let points = target
        .regulation
        .iter()
        .map(|(&y, &reg)| (y, reg - (r - 1.0) * (e - reg)))
        .collect();
    Ok(GreenDealAllocation {
        country: target.country,
        points,
        gd_2030_target: e * (1.0 + target.pct_greendeal_2030),
        rule: ReallocationRule::Proportional,
        ratio: Some(r),
    })
}

/// Ten equal yearly decrements from the 2005 base to the 2030 target.
pub fn green_deal_reallocate_flat(target: &TargetTable) -> GreenDealAllocation {
    let e = target.e2005;
    let gd_2030 = e * (1.0 + target.pct_greendeal_2030);
    let step = (e - gd_2030) / 10.0;
    let points = ALLOCATION_YEARS
        .map(|y| {
            let k = y - ALLOCATION_YEARS.start();
            let v = if y == *ALLOCATION_YEARS.end() {
                gd_2030
            } else {
                e - f64::from(k + 1) * step
            };
            (y, v)
        })
        .collect();
    GreenDealAllocation {
        country: target.country,
        points,
        gd_2030_target: gd_2030,
        rule: ReallocationRule::Flat,
        ratio: None,
    }
}

/// Proportional rule where the Regulation percentage is non-zero, flat otherwise.
pub fn reallocate_all(
    targets: &BTreeMap<MemberState, TargetTable>,
    mode: RatioMode,
) -> Result<BTreeMap<MemberState, GreenDealAllocation>, TrajectoryError> {
    MemberState::ALL
        .iter()
        .map(|&m| {
            let t = targets.get(&m).ok_or(TrajectoryError::MissingCountry(m))?;
            let a = if t.pct_regulation_2030 == 0.0 {
                green_deal_reallocate_flat(t)
            } else {
                green_deal_reallocate(t, mode)?
            };
            Ok((m, a))
        })
        .collect()
}

/// Sums allocations per year across all 27 Member States.
pub fn allocation_sums(
    allocations: &BTreeMap<MemberState, GreenDealAllocation>,
) -> Result<BTreeMap<i32, f64>, TrajectoryError> {
    let mut sums = BTreeMap::new();
    for m in MemberState::ALL {
        let a = allocations.get(&m).ok_or(TrajectoryError::MissingCountry(m))?;
        for y in ALLOCATION_YEARS {
            let v = a
                .points
                .get(&y)
                .ok_or(TrajectoryError::MissingYear { country: m, year: y })?;
            *sums.entry(y).or_insert(0.0) += v;
        }
    }
    Ok(sums)
}

/// ESR pathway: the 2020 value, summed allocations to 2030, then linear to zero.
pub fn esr_trajectory(
    allocations: &BTreeMap<MemberState, GreenDealAllocation>,
    esr_2020: f64,
) -> Result<Trajectory, TrajectoryError> {
    esr_trajectory_from_sums(&allocation_sums(allocations)?, esr_2020)
}

/// Same as [`esr_trajectory`] but from already-summed annual values, e.g. a
/// printed total row.
pub fn esr_trajectory_from_sums(sums: &BTreeMap<i32, f64>, esr_2020: f64) -> Result<Trajectory, TrajectoryError> {
    let end = *ALLOCATION_YEARS.end();
    let v2030 = *sums
        .get(&end)
        .ok_or(TrajectoryError::RangeOutside { from: end, to: end })?;
    let tail = linear_to_zero(TrajectoryLabel::Esr, end, v2030, NET_ZERO_YEAR)?;
    let mut points = BTreeMap::new();
    points.insert(*ALLOCATION_YEARS.start() - 1, esr_2020);
    for y in ALLOCATION_YEARS {
        let v = *sums.get(&y).ok_or(TrajectoryError::RangeOutside { from: y, to: y })?;
        points.insert(y, v);
    }
    points.extend(tail.points.into_iter().filter(|(y, _)| *y > end));
    Ok(Trajectory::from_points(TrajectoryLabel::Esr, points))
}

/// Inclusive annual sum over `from..=to`.
pub fn integrate_budget(t: &Trajectory, from: i32, to: i32) -> Result<f64, TrajectoryError> {
    if from > to {
        return Err(TrajectoryError::RangeOutside { from, to });
    }
    (from..=to)
        .map(|y| t.get(y).ok_or(TrajectoryError::RangeOutside { from, to }))
        .sum()
}

/// Gap between the EU27 total budget and the sum of its ESR and ETS parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BudgetMismatch {
    pub eu27_total: f64,
    pub esr: f64,
    pub ets: f64,
    /// `(total − (esr + ets)) / total`
    pub relative: f64,
}

pub fn budget_mismatch(total: &Trajectory, esr: &Trajectory, ets: &Trajectory) -> BudgetMismatch {
    BudgetMismatch {
        eu27_total: total.budget,
        esr: esr.budget,
        ets: ets.budget,
        relative: (total.budget - (esr.budget + ets.budget)) / total.budget,
    }
}
