use facet_heights::exact::TypicalHeightLaw;
use facet_heights::montecarlo::{estimate, facet_census, sample_sphere, EnsembleSpec};
use facet_heights::PolytopeParams;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn census_records_satisfy_their_invariants(seed in any::<u64>(), d in 2usize..6, extra in 1usize..7) {
        let n = d + extra;
        let points = sample_sphere(n, d, seed).unwrap();
        let census = facet_census(&points).unwrap();
        let s = &census.summary;
        prop_assert_eq!(s.facet_count as usize, s.heights.len());
        prop_assert_eq!(census.facets.len(), s.facet_count as usize);
        prop_assert!(s.facet_count as usize > d);
        prop_assert!(s.heights.iter().all(|h| (-1.0..=1.0).contains(h)));
        prop_assert_eq!(s.origin_inside, s.min_height > 0.0);
        for rec in &census.facets {
            prop_assert!(rec.verify(&points).is_ok(), "{:?}", rec.verify(&points));
        }
    }
}

#[test]
fn euler_count_in_every_replicate() {
    let report = estimate(&EnsembleSpec::new(11, 3, 500, 3).unwrap()).unwrap();
    assert!(report.facet_counts.iter().all(|&c| c == 18));
    assert_eq!(report.diagnostics.ill_conditioned_skips, 0);
}

#[test]
fn identical_specs_give_identical_reports() {
    let spec = EnsembleSpec::new(10, 4, 300, 99).unwrap();
    let (a, b) = (estimate(&spec).unwrap(), estimate(&spec).unwrap());
    assert_eq!(a, b);
    let bits = |r: &facet_heights::montecarlo::EnsembleReport| -> Vec<u64> {
        r.heights.iter().map(|h| h.to_bits()).collect()
    };
    assert_eq!(bits(&a), bits(&b));
}

#[test]
fn negative_height_fraction_matches_exact_mass() {
    let (n, d) = (12, 4);
    let report = estimate(&EnsembleSpec::new(n, d, 4000, 17).unwrap()).unwrap();
    let mass = TypicalHeightLaw::new(PolytopeParams::new(n, d).unwrap())
        .unwrap()
        .negative_mass();
    let z = report.negative_height_fraction.z_score(mass);
    assert!(z <= 3.0, "{} vs {mass}, z = {z}", report.negative_height_fraction.mean);
}
