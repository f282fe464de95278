mod support;

use proptest::prelude::*;
use support::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn budgets_are_conserved(
        gdp in country_map(5_000.0, 120_000.0),
        tapio in country_map(-15.0, 2.0),
        ghg in country_map(1.0, 900.0),
        cb in 1_000.0..200_000.0f64,
        step in prop_oneof![Just(0.1), Just(0.25), Just(0.5)],
    ) {
        conservation(&gdp, &tapio, &ghg, cb, step)?;
    }

    #[test]
    fn blend_endpoints_are_identities(
        a in country_map(0.0, 20_000.0),
        b in country_map(0.0, 20_000.0),
        c in country_map(0.0, 20_000.0),
    ) {
        endpoint_identity(&a, &b, &c)?;
    }

    #[test]
    fn blends_stay_within_inputs(
        a in country_map(0.0, 20_000.0),
        b in country_map(0.0, 20_000.0),
        c in country_map(0.0, 20_000.0),
        w in 0.0..=1.0f64,
        z in 0.0..=1.0f64,
    ) {
        mixing_bounds(&a, &b, &c, w, z)?;
    }

    #[test]
    fn diagonal_curvature_is_constant(
        a in country_map(0.0, 20_000.0),
        b in country_map(0.0, 20_000.0),
        c in country_map(0.0, 20_000.0),
        step in even_steps(),
    ) {
        diagonal_second_differences(&a, &b, &c, step)?;
    }

    #[test]
    fn indices_ignore_units(
        gdp in country_map(5_000.0, 120_000.0),
        ghg in country_map(1.0, 900.0),
        k in prop_oneof![Just(1e-3), Just(1e3), Just(1e6), 1e-3..1e6f64],
    ) {
        scale_invariance(&gdp, &ghg, k)?;
    }

    #[test]
    fn groups_are_total_and_relabel_with_countries(
        cap in country_map(1.0, 20_000.0),
        dec in country_map(1.0, 20_000.0),
        ine in country_map(1.0, 20_000.0),
        perm in permutation(),
        step in steps(),
    ) {
        classify_total_and_permutation_invariant(&cap, &dec, &ine, &perm, step)?;
    }
}
