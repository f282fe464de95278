//! Convex mixes of the principle allocations and sweeps over the mixing
//! parameters.
//!
//! Two-way: `(1 − w)·a + w·b`. Three-way:
//! `(1 − z)·(w·dec + (1 − w)·cap) + z·ine`. The diagonal `t = w = z` of the
//! three-way blend is a quadratic in `t`:
//!
//! ```text
//! out(t) = cap + t·(dec − 2·cap + ine) + t²·(cap − dec)
//! ```

use std::fmt;

use serde::Serialize;

use crate::country::{CountryMap, MemberState};
use crate::indices::StudyLabel;

/// Default grid spacing.
pub const DEFAULT_STEP: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BlendError {
    #[error("allocations come from different studies ({0} vs {1})")]
    StudyMismatch(StudyLabel, StudyLabel),
    #[error("allocations distribute different EU27 budgets ({0} vs {1})")]
    BudgetMismatch(f64, f64),
    #[error("{0} is missing from one of the allocations")]
    CountryMismatch(MemberState),
    #[error("step must be in (0, 1], got {0}")]
    InvalidStep(f64),
    #[error("parameter {0} = {1} outside [0, 1]")]
    OutOfRange(&'static str, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AllocationTag {
    Capability,
    Decoupling,
    Inertia,
    /// Two-way blend.
    Blend2,
    /// Three-way blend.
    Blend3,
}

impl fmt::Display for AllocationTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AllocationTag::Capability => "capability",
            AllocationTag::Decoupling => "decoupling",
            AllocationTag::Inertia => "inertia",
            AllocationTag::Blend2 => "blend2",
            AllocationTag::Blend3 => "blend3",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlendParams {
    pub w: f64,
    pub z: Option<f64>,
}

/// Per-country carbon budgets, Mt CO₂eq.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BudgetAllocation {
    pub study: StudyLabel,
    pub tag: AllocationTag,
    pub per_country: CountryMap,
    pub params: Option<BlendParams>,
    /// The EU27 budget being shared, when the allocation was built from
    /// shares. Externally supplied columns carry `None`.
    pub cb_eu27: Option<f64>,
}

impl BudgetAllocation {
    /// `CB_j = cb_eu27 · share_j`
    pub fn from_shares(study: StudyLabel, tag: AllocationTag, shares: &CountryMap, cb_eu27: f64) -> Self {
        BudgetAllocation {
            study,
            tag,
            per_country: shares.iter().map(|(&m, &s)| (m, cb_eu27 * s)).collect(),
            params: None,
            cb_eu27: Some(cb_eu27),
        }
    }

    /// Wraps already-computed budgets, e.g. a printed column.
    pub fn from_values(study: StudyLabel, tag: AllocationTag, per_country: CountryMap) -> Self {
        BudgetAllocation {
            study,
            tag,
            per_country,
            params: None,
            cb_eu27: None,
        }
    }

    pub fn total(&self) -> f64 {
        self.per_country.values().sum()
    }

    pub fn get(&self, m: MemberState) -> Option<f64> {
        self.per_country.get(&m).copied()
    }
}

fn check_compatible(a: &BudgetAllocation, b: &BudgetAllocation) -> Result<(), BlendError> {
    if a.study != b.study {
        return Err(BlendError::StudyMismatch(a.study, b.study));
    }
    if let (Some(x), Some(y)) = (a.cb_eu27, b.cb_eu27) {
        if (x - y).abs() > 1e-9 * x.abs().max(y.abs()) {
            return Err(BlendError::BudgetMismatch(x, y));
        }
    }
    for m in a.per_country.keys().chain(b.per_country.keys()) {
        if !a.per_country.contains_key(m) || !b.per_country.contains_key(m) {
            return Err(BlendError::CountryMismatch(*m));
        }
    }
    Ok(())
}

fn check_unit(name: &'static str, v: f64) -> Result<(), BlendError> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(BlendError::OutOfRange(name, v))
    }
}

/// `(1 − w)·a + w·b`
pub fn blend_two(a: &BudgetAllocation, b: &BudgetAllocation, w: f64) -> Result<BudgetAllocation, BlendError> {
    check_compatible(a, b)?;
    check_unit("w", w)?;
    let per_country = a
        .per_country
        .iter()
        .map(|(&m, &x)| (m, (1.0 - w) * x + w * b.per_country[&m]))
        .collect();
    Ok(BudgetAllocation {
        study: a.study,
        tag: AllocationTag::Blend2,
        per_country,
        params: Some(BlendParams { w, z: None }),
        cb_eu27: a.cb_eu27.or(b.cb_eu27),
    })
}

/// `(1 − z)·(w·dec + (1 − w)·cap) + z·ine`
pub fn blend_three(
    cap: &BudgetAllocation,
    dec: &BudgetAllocation,
    ine: &BudgetAllocation,
    w: f64,
    z: f64,
) -> Result<BudgetAllocation, BlendError> {
    check_compatible(cap, dec)?;
    check_compatible(cap, ine)?;
    check_unit("w", w)?;
    check_unit("z", z)?;
    let per_country = cap
        .per_country
        .iter()
        .map(|(&m, &c)| {
            let inner = w * dec.per_country[&m] + (1.0 - w) * c;
            (m, (1.0 - z) * inner + z * ine.per_country[&m])
        })
        .collect();
    Ok(BudgetAllocation {
        study: cap.study,
        tag: AllocationTag::Blend3,
        per_country,
        params: Some(BlendParams { w, z: Some(z) }),
        cb_eu27: cap.cb_eu27.or(dec.cb_eu27).or(ine.cb_eu27),
    })
}

/// Grid points `0, step, 2·step, …` with the last point clamped to exactly 1.
pub fn grid(step: f64) -> Result<Vec<f64>, BlendError> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(BlendError::InvalidStep(step));
    }
    // tolerate representation error so 0.1 yields 11 points, not 12
    let n = (1.0 / step - 1e-9).ceil() as usize;
    let mut pts: Vec<f64> = (0..n).map(|k| k as f64 * step).collect();
    pts.push(1.0);
    Ok(pts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// `w` in a two-way blend.
    Linear,
    /// `t = w = z` in the three-way blend.
    Diagonal,
    /// Every `(w, z)` pair, `w` varying fastest.
    Grid,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlendSweep {
    pub study: StudyLabel,
    pub axis: SweepAxis,
    pub step: f64,
    pub allocations: Vec<BudgetAllocation>,
}

impl BlendSweep {
    /// One country's budgets along the sweep.
    pub fn trace(&self, m: MemberState) -> Vec<f64> {
        self.allocations.iter().filter_map(|a| a.get(m)).collect()
    }

    /// The sweep parameter of each point (`w` for linear, `t` for diagonal).
    pub fn params(&self) -> Vec<BlendParams> {
        self.allocations.iter().filter_map(|a| a.params).collect()
    }

    pub fn countries(&self) -> Vec<MemberState> {
        self.allocations
            .first()
            .map(|a| a.per_country.keys().copied().collect())
            .unwrap_or_default()
    }

    pub fn is_empty(&self) -> bool {
        self.allocations.is_empty()
    }
}

pub fn sweep_linear(a: &BudgetAllocation, b: &BudgetAllocation, step: f64) -> Result<BlendSweep, BlendError> {
    let allocations = grid(step)?
        .into_iter()
        .map(|w| blend_two(a, b, w))
        .collect::<Result<_, _>>()?;
    Ok(BlendSweep {
        study: a.study,
        axis: SweepAxis::Linear,
        step,
        allocations,
    })
}

pub fn sweep_diagonal(
    cap: &BudgetAllocation,
    dec: &BudgetAllocation,
    ine: &BudgetAllocation,
    step: f64,
) -> Result<BlendSweep, BlendError> {
    let allocations = grid(step)?
        .into_iter()
        .map(|t| blend_three(cap, dec, ine, t, t))
        .collect::<Result<_, _>>()?;
    Ok(BlendSweep {
        study: cap.study,
        axis: SweepAxis::Diagonal,
        step,
        allocations,
    })
}

pub fn sweep_grid(
    cap: &BudgetAllocation,
    dec: &BudgetAllocation,
    ine: &BudgetAllocation,
    step: f64,
) -> Result<BlendSweep, BlendError> {
    let g = grid(step)?;
    let mut allocations = Vec::with_capacity(g.len() * g.len());
    for &z in &g {
        for &w in &g {
            allocations.push(blend_three(cap, dec, ine, w, z)?);
        }
    }
    Ok(BlendSweep {
        study: cap.study,
        axis: SweepAxis::Grid,
        step,
        allocations,
    })
}

/// Closed form of the diagonal trace at `t`.
pub fn diagonal_closed_form(cap: f64, dec: f64, ine: f64, t: f64) -> f64 {
    cap + t * (dec - 2.0 * cap + ine) + t * t * (cap - dec)
}
