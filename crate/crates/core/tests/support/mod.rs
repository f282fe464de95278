#![allow(dead_code)]

use std::collections::BTreeMap;

use carbon_quota::analysis::{capability_inertia_gap, classify_groups, Group, GroupThresholds};
use carbon_quota::blend::{blend_three, blend_two, grid, sweep_diagonal, AllocationTag, BudgetAllocation};
use carbon_quota::indices::{capability_index, decoupling_shares, inertia_index, rescale_tapio, StudyLabel};
use carbon_quota::{CountryMap, MemberState};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const CONSERVATION_REL: f64 = 1e-6;
pub const SECOND_DIFF_REL: f64 = 1e-9;
pub const SCALE_REL: f64 = 1e-12;
pub const BOUND_SLACK_REL: f64 = 1e-12;

const S: StudyLabel = StudyLabel::Study2016To2019;

pub fn country_map(lo: f64, hi: f64) -> impl Strategy<Value = CountryMap> {
    proptest::collection::vec(lo..hi, 27).prop_map(|v| MemberState::ALL.iter().copied().zip(v).collect())
}

pub fn steps() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.1), Just(0.05), Just(0.2), Just(0.25), Just(0.5), 0.01..1.0f64]
}

/// Steps that divide 1 evenly, so the grid is uniformly spaced.
pub fn even_steps() -> impl Strategy<Value = f64> {
    (2usize..=40).prop_map(|n| 1.0 / n as f64)
}

fn alloc(tag: AllocationTag, shares: &CountryMap, cb: f64) -> BudgetAllocation {
    BudgetAllocation::from_shares(S, tag, shares, cb)
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

/// Budgets under every principle and along every blend point sum to the
/// shared EU27 budget.
pub fn conservation(gdp: &CountryMap, tapio: &CountryMap, ghg: &CountryMap, cb: f64, step: f64) -> Result<(), TestCaseError> {
    let ci = capability_index(gdp, 30000.0).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let resc = rescale_tapio(tapio, None).map_err(|e| TestCaseError::fail(e.to_string()))?;
    // the aggregate is shifted like any member, so use the mean rescaled value
    let eu = resc.members.values().sum::<f64>() / 27.0;
    let dec = decoupling_shares(&resc.members, eu).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let ii = inertia_index(ghg, ghg.values().sum()).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let cap = alloc(AllocationTag::Capability, &ci, cb);
    let dec = alloc(AllocationTag::Decoupling, &dec.share, cb);
    let ine = alloc(AllocationTag::Inertia, &ii, cb);
    for a in [&cap, &dec, &ine] {
        prop_assert!(close(a.total(), cb, CONSERVATION_REL), "{:?} total {} vs {cb}", a.tag, a.total());
    }
    let g = grid(step).unwrap();
    for &w in &g {
        let two = blend_two(&cap, &ine, w).unwrap();
        prop_assert!(close(two.total(), cb, CONSERVATION_REL), "blend_two w={w}");
        for &z in &g {
            let three = blend_three(&cap, &dec, &ine, w, z).unwrap();
            prop_assert!(close(three.total(), cb, CONSERVATION_REL), "blend_three w={w} z={z}");
        }
    }
    Ok(())
}

/// `w = 0` and `w = 1` return the endpoints exactly.
pub fn endpoint_identity(a: &CountryMap, b: &CountryMap, c: &CountryMap) -> Result<(), TestCaseError> {
    let cap = BudgetAllocation::from_values(S, AllocationTag::Capability, a.clone());
    let dec = BudgetAllocation::from_values(S, AllocationTag::Decoupling, b.clone());
    let ine = BudgetAllocation::from_values(S, AllocationTag::Inertia, c.clone());
    prop_assert_eq!(&blend_two(&cap, &ine, 0.0).unwrap().per_country, a);
    prop_assert_eq!(&blend_two(&cap, &ine, 1.0).unwrap().per_country, c);
    prop_assert_eq!(&blend_three(&cap, &dec, &ine, 0.0, 0.0).unwrap().per_country, a);
    prop_assert_eq!(&blend_three(&cap, &dec, &ine, 1.0, 0.0).unwrap().per_country, b);
    prop_assert_eq!(&blend_three(&cap, &dec, &ine, 0.3, 1.0).unwrap().per_country, c);
    Ok(())
}

/// Blends stay between the smallest and largest input.
pub fn mixing_bounds(a: &CountryMap, b: &CountryMap, c: &CountryMap, w: f64, z: f64) -> Result<(), TestCaseError> {
    let cap = BudgetAllocation::from_values(S, AllocationTag::Capability, a.clone());
    let dec = BudgetAllocation::from_values(S, AllocationTag::Decoupling, b.clone());
    let ine = BudgetAllocation::from_values(S, AllocationTag::Inertia, c.clone());
    let two = blend_two(&cap, &ine, w).unwrap();
    let three = blend_three(&cap, &dec, &ine, w, z).unwrap();
    for m in MemberState::ALL {
        let (x, y, v) = (a[&m], b[&m], c[&m]);
        let slack = BOUND_SLACK_REL * x.abs().max(y.abs()).max(v.abs());
        let t = two.per_country[&m];
        prop_assert!(x.min(v) - slack <= t && t <= x.max(v) + slack, "{m}: {t} outside [{x}, {v}]");
        let t = three.per_country[&m];
        let (lo, hi) = (x.min(y).min(v), x.max(y).max(v));
        prop_assert!(lo - slack <= t && t <= hi + slack, "{m}: {t} outside [{lo}, {hi}]");
    }
    Ok(())
}

/// Second differences of the diagonal trace equal `2·step²·(cap − dec)`.
pub fn diagonal_second_differences(a: &CountryMap, b: &CountryMap, c: &CountryMap, step: f64) -> Result<(), TestCaseError> {
    let cap = BudgetAllocation::from_values(S, AllocationTag::Capability, a.clone());
    let dec = BudgetAllocation::from_values(S, AllocationTag::Decoupling, b.clone());
    let ine = BudgetAllocation::from_values(S, AllocationTag::Inertia, c.clone());
    let sweep = sweep_diagonal(&cap, &dec, &ine, step).unwrap();
    for m in MemberState::ALL {
        let y = sweep.trace(m);
        let expected = 2.0 * step * step * (a[&m] - b[&m]);
        let scale = a[&m].abs().max(b[&m].abs()).max(c[&m].abs());
        for k in 1..y.len() - 1 {
            let d2 = y[k + 1] - 2.0 * y[k] + y[k - 1];
            prop_assert!(
                (d2 - expected).abs() <= SECOND_DIFF_REL * scale,
                "{m} k={k}: {d2} vs {expected}"
            );
        }
    }
    Ok(())
}

/// Capability and Inertia indices do not depend on the unit of their inputs.
pub fn scale_invariance(gdp: &CountryMap, ghg: &CountryMap, k: f64) -> Result<(), TestCaseError> {
    let scaled = |m: &CountryMap| -> CountryMap { m.iter().map(|(&c, &v)| (c, v * k)).collect() };
    let ci = capability_index(gdp, 30000.0).unwrap();
    let ci_k = capability_index(&scaled(gdp), 30000.0 * k).unwrap();
    let ii = inertia_index(ghg, ghg.values().sum()).unwrap();
    let ii_k = inertia_index(&scaled(ghg), scaled(ghg).values().sum()).unwrap();
    for m in MemberState::ALL {
        prop_assert!(close(ci[&m], ci_k[&m], SCALE_REL), "CI {m}: {} vs {}", ci[&m], ci_k[&m]);
        prop_assert!(close(ii[&m], ii_k[&m], SCALE_REL), "II {m}: {} vs {}", ii[&m], ii_k[&m]);
    }
    Ok(())
}

fn groups_for(cap: &CountryMap, dec: &CountryMap, ine: &CountryMap, step: f64) -> BTreeMap<MemberState, Group> {
    let c = BudgetAllocation::from_values(S, AllocationTag::Capability, cap.clone());
    let d = BudgetAllocation::from_values(S, AllocationTag::Decoupling, dec.clone());
    let i = BudgetAllocation::from_values(S, AllocationTag::Inertia, ine.clone());
    let gaps = capability_inertia_gap(&c, &i, None).unwrap();
    let sweep = sweep_diagonal(&c, &d, &i, step).unwrap();
    classify_groups(&gaps, &sweep, &GroupThresholds::default())
        .unwrap()
        .into_iter()
        .map(|(m, g)| (m, g.group))
        .collect()
}

/// Every country gets exactly one group, and relabelling countries relabels
/// the groups the same way.
pub fn classify_total_and_permutation_invariant(
    cap: &CountryMap,
    dec: &CountryMap,
    ine: &CountryMap,
    perm: &[usize],
    step: f64,
) -> Result<(), TestCaseError> {
    let groups = groups_for(cap, dec, ine, step);
    prop_assert_eq!(groups.len(), 27);
    let relabel = |m: &CountryMap| -> CountryMap {
        MemberState::ALL
            .iter()
            .enumerate()
            .map(|(i, &c)| (MemberState::ALL[perm[i]], m[&c]))
            .collect()
    };
    let permuted = groups_for(&relabel(cap), &relabel(dec), &relabel(ine), step);
    for (i, m) in MemberState::ALL.iter().enumerate() {
        prop_assert_eq!(groups[m], permuted[&MemberState::ALL[perm[i]]], "{}", m);
    }
    Ok(())
}

pub fn permutation() -> impl Strategy<Value = Vec<usize>> {
    Just((0..27).collect::<Vec<usize>>()).prop_shuffle()
}
