use std::collections::BTreeMap;

use boxdos_core::fitlab::{fit_nboson, random_ensemble_stats, ScalingOptions};
use boxdos_core::manybody::{build_nboson_from_states, build_nboson_spectrum, configurations};
use boxdos_core::spectra::{enumerate_hyperbox, enumerate_sphere, BoxGeometry, Spectrum};
use proptest::prelude::*;

/// Every nondecreasing index tuple, summed, filtered and histogrammed.
fn exhaustive(states: &[f64], n: u32, e_max: f64) -> Vec<(f64, u64)> {
    fn rec(states: &[f64], first: usize, left: u32, sum: f64, hist: &mut BTreeMap<u64, u64>) {
        if left == 0 {
            *hist.entry(sum.to_bits()).or_default() += 1;
            return;
        }
        for i in first..states.len() {
            rec(states, i, left - 1, sum + states[i], hist);
        }
    }
    let mut hist = BTreeMap::new();
    rec(states, 0, n, 0.0, &mut hist);
    hist.into_iter()
        .map(|(bits, c)| (f64::from_bits(bits), c))
        .filter(|&(e, _)| e <= e_max)
        .collect()
}

fn levels(s: &Spectrum) -> Vec<(f64, u64)> {
    s.levels().iter().map(|l| (l.energy, l.degeneracy)).collect()
}

#[test]
fn pruned_builder_matches_exhaustive_on_cube() {
    let cube = enumerate_hyperbox(&[1.0; 3], 60.0).unwrap();
    let states: Vec<f64> = cube.state_energies().into_iter().take(25).collect();
    let limit = *states.last().unwrap();
    for n in 1..=4u32 {
        // complete up to the 25th state, so any E_max up to it is safe
        for e_max in [limit, 2.0 * limit, n as f64 * limit] {
            let got = build_nboson_from_states(&states, n, e_max).unwrap();
            assert_eq!(levels(&got), exhaustive(&states, n, e_max), "N = {n}, E_max = {e_max}");
        }
    }
}

#[test]
fn exact_and_float_builds_agree_on_cube() {
    let cube = enumerate_hyperbox(&[1.0; 3], 53.0).unwrap();
    for n in 1..=5u32 {
        let exact = build_nboson_spectrum(&cube, n, 53.0).unwrap();
        assert!(exact.unit().is_some());
        let float = build_nboson_from_states(&cube.state_energies(), n, 53.0).unwrap();
        assert_eq!(levels(&exact), levels(&float));
    }
}

#[test]
fn cube_list_to_fifty_three() {
    let cube = enumerate_hyperbox(&[1.0; 3], 53.0).unwrap();
    let head: Vec<f64> = cube.state_energies().into_iter().take(13).collect();
    assert_eq!(head, [3.0, 6.0, 6.0, 6.0, 9.0, 9.0, 9.0, 11.0, 11.0, 11.0, 12.0, 14.0, 14.0]);
    // direct count of triples with n_x^2 + n_y^2 + n_z^2 <= 53
    let mut direct = 0;
    for a in 1..=7u64 {
        for b in 1..=7u64 {
            for c in 1..=7u64 {
                if a * a + b * b + c * c <= 53 {
                    direct += 1;
                }
            }
        }
    }
    assert_eq!(cube.total_states(), direct);
    assert_eq!(cube.total_states(), 145);
    let configs = configurations(&cube, 4, 53.0, 1_000_000).unwrap();
    assert_eq!(configs.len() as u64, build_nboson_spectrum(&cube, 4, 53.0).unwrap().total_states());
    assert!(configs.iter().all(|c| c.occupied.iter().all(|&i| i as u64 <= cube.total_states())));
}

#[test]
fn prefix_stability_under_cutoff_growth() {
    let sphere = enumerate_sphere(40.0).unwrap();
    for n in 2..=4u32 {
        let small = build_nboson_spectrum(&sphere, n, 60.0).unwrap();
        let large = build_nboson_spectrum(&sphere, n, 90.0).unwrap();
        assert_eq!(levels(&large.truncated(60.0)), levels(&small));
    }
}

#[test]
fn spectra_are_insensitive_to_the_base() {
    let opts = ScalingOptions::default();
    let seeds: Vec<u64> = (0..40).collect();
    let bases = [
        BoxGeometry::cube().enumerate(1024.0).unwrap(),
        BoxGeometry::incommensurate_rectangle().enumerate(1024.0).unwrap(),
        enumerate_sphere(95.0).unwrap(),
    ];
    for n in 1..=4u32 {
        let random = random_ensemble_stats(&seeds, 500, 0.5, n, &opts).unwrap().mean_beta;
        for base in &bases {
            let (_, fit) = fit_nboson(base, n, &opts).unwrap();
            let gap = fit.beta - random;
            if n <= 2 {
                assert!(gap.abs() < 0.25 * n as f64, "N = {n}: {} vs {random}", fit.beta);
            } else {
                // box spectra carry a negative surface term and run steeper than
                // the random ones; the gap outgrows 0.25 N from N = 3 on
                assert!(gap > 0.0 && gap < 0.5 * n as f64, "N = {n}: {} vs {random}", fit.beta);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pruned_builder_matches_exhaustive(
        raw in prop::collection::vec(1u32..200, 1..25),
        n in 1u32..=4,
        cut in 0.1f64..1.0,
    ) {
        let mut states: Vec<f64> = raw.iter().map(|&k| k as f64 / 8.0).collect();
        states.sort_by(f64::total_cmp);
        let e_max = cut * n as f64 * states.last().unwrap();
        let got = build_nboson_from_states(&states, n, e_max).unwrap();
        prop_assert_eq!(levels(&got), exhaustive(&states, n, e_max));
    }

    #[test]
    fn multiset_count_without_cutoff(k in 1usize..=20, n in 1u32..=4) {
        let states: Vec<f64> = (1..=k).map(|i| i as f64).collect();
        let s = build_nboson_from_states(&states, n, 1e12).unwrap();
        // C(k + n - 1, n)
        let mut expected = 1u64;
        for i in 0..n as u64 {
            expected = expected * (k as u64 + i) / (i + 1);
        }
        prop_assert_eq!(s.total_states(), expected);
    }
}
