//! Sweeps the two group thresholds and reports which settings keep every
//! named membership, for both studies and both endpoint sources.
//!
//!     cargo run -p carbon-quota --example calibrate_groups

use carbon_quota::analysis::{capability_inertia_gap, classify_groups, Group, GroupThresholds};
use carbon_quota::blend::sweep_diagonal;
use carbon_quota::bundled;
use carbon_quota::indices::StudyLabel;
use carbon_quota::report::tables::printed_endpoints;
use carbon_quota::report::{compute_study, RunConfig};
use carbon_quota::MemberState;

const NAMED: &[(StudyLabel, Group, &[&str])] = &[
    (StudyLabel::Study2016To2019, Group::G1InertiaDominates, &["DE", "FR", "IT", "ES"]),
    (StudyLabel::Study2016To2019, Group::G3WeakDecoupling, &["CY", "MT", "DK", "NL"]),
    (StudyLabel::Study2019, Group::G3WeakDecoupling, &["FI"]),
    (StudyLabel::Study2019, Group::G4DecouplingSensitive, &["MT", "SE"]),
];

fn main() {
    let ds = bundled::dataset().expect("bundled data");
    let mut inputs = Vec::new();
    for study in [StudyLabel::Study2016To2019, StudyLabel::Study2019] {
        let r = compute_study(&ds, &RunConfig { study, ..RunConfig::default() }).expect("study");
        inputs.push((study, "pipeline", r.gaps, r.diagonal));
        let (cap, dec, ine) = printed_endpoints(study).expect("endpoints");
        let gaps = capability_inertia_gap(&cap, &ine, None).unwrap();
        inputs.push((study, "printed", gaps, sweep_diagonal(&cap, &dec, &ine, 0.1).unwrap()));
    }

    println!("leverage excursion  misses");
    for leverage in [0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5] {
        for excursion in [0.0, 0.5, 1.0, 5.0, 20.0] {
            let th = GroupThresholds {
                leverage,
                excursion_tolerance: excursion,
            };
            let mut misses = Vec::new();
            for (study, source, gaps, diag) in &inputs {
                let groups = classify_groups(gaps, diag, &th).unwrap();
                for (s, g, codes) in NAMED.iter().filter(|(s, _, _)| s == study) {
                    for code in *codes {
                        let m: MemberState = code.parse().unwrap();
                        if groups[&m].group != *g {
                            misses.push(format!("{s}/{source}:{code}!={}", g.short()));
                        }
                    }
                }
            }
            let marker = if misses.is_empty() { "ok".to_string() } else { misses.join(" ") };
            println!("{leverage:<8} {excursion:<9}  {marker}");
        }
    }

    let th = GroupThresholds::default();
    for (study, source, gaps, diag) in &inputs {
        let groups = classify_groups(gaps, diag, &th).unwrap();
        println!("\n{study} ({source} endpoints)");
        for g in Group::ALL {
            let members: Vec<&str> = groups.values().filter(|a| a.group == g).map(|a| a.country.code()).collect();
            println!("  {}: {}", g.short(), members.join(" "));
        }
    }
}
