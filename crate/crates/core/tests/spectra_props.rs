use std::f64::consts::{E, PI};

use boxdos_core::spectra::{
    enumerate_cylinder, enumerate_hyperbox, enumerate_relativistic_square, enumerate_sphere,
    random_power_spectrum, BoxGeometry, Spectrum,
};
use boxdos_core::staircase::build_staircase;
use boxdos_core::fitlab::fit_log_log;
use proptest::prelude::*;

/// Brute-force cube degeneracy: count ordered triples with the given sum of squares.
fn cube_count(e: u64) -> u64 {
    let mut c = 0;
    for a in 1..=32u64 {
        for b in 1..=32u64 {
            for d in 1..=32u64 {
                if a * a + b * b + d * d == e {
                    c += 1;
                }
            }
        }
    }
    c
}

/// Exhaustive enumeration over a box in n-space followed by a cutoff.
fn exhaustive_states(lengths: &[f64], e_max: f64) -> Vec<f64> {
    let bounds: Vec<u32> = lengths.iter().map(|l| (l * e_max.sqrt()).ceil() as u32 + 1).collect();
    let mut out = Vec::new();
    let mut idx = vec![1u32; lengths.len()];
    loop {
        let e: f64 = idx
            .iter()
            .zip(lengths)
            .map(|(&n, l)| (n as f64 / l).powi(2))
            .sum();
        if e <= e_max {
            out.push(e);
        }
        let mut d = 0;
        loop {
            if d == idx.len() {
                out.sort_by(f64::total_cmp);
                return out;
            }
            idx[d] += 1;
            if idx[d] <= bounds[d] {
                break;
            }
            idx[d] = 1;
            d += 1;
        }
    }
}

#[test]
fn cube_census() {
    let cube = BoxGeometry::cube().enumerate(1024.0).unwrap();
    assert_eq!(cube.total_states(), 15_954);
    assert_eq!(cube.distinct_levels(), 818);
    assert!((cube.mean_degeneracy() - 19.50).abs() < 0.01);
    assert_eq!(build_staircase(&cube).count_at(1024.0), 15_954);
}

#[test]
fn cube_degeneracies_near_940() {
    let cube = BoxGeometry::cube().enumerate(1024.0).unwrap();
    let printed = [
        (933, 24), (934, 39), (936, 24), (937, 27), (938, 24), (940, 6),
        (941, 66), (942, 18), (944, 9), (945, 48), (946, 24), (947, 15),
        (948, 18), (949, 12), (950, 63), (952, 12), (953, 45), (954, 42),
    ];
    for (e, d) in printed {
        assert_eq!(cube.degeneracy_at(e as f64), d, "energy {e}");
    }
    for e in [935.0, 943.0, 951.0] {
        assert_eq!(cube.degeneracy_at(e), 0, "energy {e}");
    }
    // 939 = 23^2 + 19^2 + 7^2, so it is not a gap
    assert_eq!(cube.degeneracy_at(939.0), cube_count(939));
    assert_eq!(cube.degeneracy_at(939.0), 24);
}

#[test]
fn cube_degeneracies_match_brute_force() {
    let cube = BoxGeometry::cube().enumerate(1024.0).unwrap();
    for e in (3..=1024u64).step_by(7) {
        assert_eq!(cube.degeneracy_at(e as f64), cube_count(e), "energy {e}");
    }
}

#[test]
fn one_dimension_is_n_squared() {
    let s = enumerate_hyperbox(&[1.0], 10_000.0).unwrap();
    let expected: Vec<f64> = (1..=100).map(|n| (n * n) as f64).collect();
    assert_eq!(s.state_energies(), expected);
}

#[test]
fn rectangle_has_no_degeneracies() {
    let rect = BoxGeometry::incommensurate_rectangle();
    assert!(rect.is_unit_volume());
    let s = rect.enumerate(1500.0).unwrap();
    assert!(s.levels().iter().all(|l| l.degeneracy == 1));
    let gaps = s.levels().windows(2).map(|w| w[1].energy - w[0].energy);
    assert!(gaps.fold(f64::INFINITY, f64::min) > 1e-9);
}

#[test]
fn rectangle_matches_exhaustive_filter() {
    let lengths = [1.0, 2.0 / E, E / 2.0];
    let s = enumerate_hyperbox(&lengths, 300.0).unwrap();
    let oracle = exhaustive_states(&lengths, 300.0);
    let got = s.state_energies();
    assert_eq!(got.len(), oracle.len());
    for (a, b) in got.iter().zip(&oracle) {
        assert!((a - b).abs() <= 1e-12 * b);
    }
}

#[test]
fn unit_volume_constructors() {
    for g in [
        BoxGeometry::cube(),
        BoxGeometry::incommensurate_rectangle(),
        BoxGeometry::unit_sphere(),
        BoxGeometry::unit_cylinder(1.0),
        BoxGeometry::unit_cylinder(3.5),
    ] {
        assert!((g.volume() - 1.0).abs() < 1e-12, "{g:?}");
    }
    let big = BoxGeometry::Hyperbox { lengths: vec![2.0, 3.0, 0.5] }.normalized();
    assert!((big.volume() - 1.0).abs() < 1e-12);
}

#[test]
fn invalid_geometries_are_rejected() {
    assert!(BoxGeometry::Hyperbox { lengths: vec![] }.enumerate(10.0).is_err());
    assert!(BoxGeometry::Hyperbox { lengths: vec![1.0, -1.0] }.enumerate(10.0).is_err());
    assert!(BoxGeometry::Sphere { radius: 0.0 }.enumerate(10.0).is_err());
    assert!(random_power_spectrum(10, -1.0, 1).is_err());
}

#[test]
fn sphere_levels() {
    let s = enumerate_sphere(40.0).unwrap();
    let r = (3.0 / (4.0 * PI)).cbrt();
    // ground state: l = 0, k = pi
    assert!((s.levels()[0].energy - 1.0 / (r * r)).abs() < 1e-10);
    assert_eq!(s.levels()[0].degeneracy, 1);
    assert!(s.levels().iter().all(|l| l.degeneracy % 2 == 1));
    // second level: l = 1, k = 4.4934...
    assert_eq!(s.levels()[1].degeneracy, 3);
    let k11 = 4.493409457909064;
    assert!((s.levels()[1].energy - (k11 / (PI * r)).powi(2)).abs() < 1e-9);
}

#[test]
fn cylinder_levels() {
    let (h, r) = (1.0, 1.0);
    let s = enumerate_cylinder(h, r, 80.0).unwrap();
    let ground = PI * PI + 2.4048255576957724f64.powi(2);
    assert!((s.levels()[0].energy - ground).abs() < 1e-9);
    assert_eq!(s.levels()[0].degeneracy, 1);
    // next: q = 1, l = 1
    assert_eq!(s.levels()[1].degeneracy, 2);
    let expected = PI * PI + 3.8317059702075125f64.powi(2);
    assert!((s.levels()[1].energy - expected).abs() < 1e-9);
}

#[test]
fn relativistic_square_levels() {
    let s = enumerate_relativistic_square(1.0, 40.0).unwrap();
    assert!((s.levels()[0].energy - 2f64.sqrt()).abs() < 1e-15);
    assert_eq!(s.levels()[0].degeneracy, 1);
    assert_eq!(s.degeneracy_at(65f64.sqrt()), 4);
    // quarter disk of radius e: N ~ pi e^2 / 4
    let n = build_staircase(&s).count_at(40.0) as f64;
    assert!((n / (PI / 4.0 * 1600.0) - 1.0).abs() < 0.1);
}

#[test]
fn square_counting_tracks_weyl() {
    let s = enumerate_hyperbox(&[1.0, 1.0], 1600.0).unwrap();
    assert_eq!(s.degeneracy_at(65.0), 4);
    let st = build_staircase(&s);
    let mut worst: f64 = 0.0;
    for e in (200..=1600).step_by(10) {
        let e = e as f64;
        let n = st.count_at(e) as f64;
        // the perimeter term -sqrt(e) accounts for the systematic shortfall
        let with_edge = PI / 4.0 * e - e.sqrt();
        assert!((n / with_edge - 1.0).abs() < 0.02, "e = {e}");
        worst = worst.max((n / (PI / 4.0 * e) - 1.0).abs());
        if e >= 900.0 {
            assert!((n / (PI / 4.0 * e) - 1.0).abs() < 0.05, "e = {e}");
        }
    }
    // the bare area law is off by more than 5% near e = 200
    assert!(worst > 0.08 && worst < 0.1);
}

#[test]
fn random_spectrum_scale_and_order() {
    let s = random_power_spectrum(500, 0.5, 7).unwrap();
    let scale = (6.0 / PI * 500.0f64).powf(2.0 / 3.0);
    assert!((s.e_max() - scale).abs() < 1e-9 * scale);
    assert_eq!(s.total_states(), 500);
    assert_eq!(s.distinct_levels(), 500);
    assert!(s.levels().windows(2).all(|w| w[0].energy < w[1].energy));
    assert_eq!(s, random_power_spectrum(500, 0.5, 7).unwrap());
    assert_ne!(s, random_power_spectrum(500, 0.5, 8).unwrap());
}

#[test]
fn random_spectrum_density_exponent() {
    // N ~ e^(b + 1), so the fitted staircase exponent minus one estimates b
    let mut total = 0.0;
    for seed in 0..100 {
        let s = random_power_spectrum(500, 0.5, seed).unwrap();
        let pts: Vec<(f64, f64)> = build_staircase(&s)
            .points()
            .iter()
            .filter(|p| p.1 >= 20)
            .map(|&(e, n)| (e, n as f64))
            .collect();
        total += fit_log_log(&pts).unwrap().beta - 1.0;
    }
    assert!((total / 100.0 - 0.5).abs() < 0.1);
}

fn assert_prefix(small: &Spectrum, large: &Spectrum) {
    let cut = large.truncated(small.e_max());
    assert_eq!(cut.levels().len(), small.levels().len());
    for (a, b) in cut.levels().iter().zip(small.levels()) {
        assert!((a.energy - b.energy).abs() <= 1e-12 * b.energy);
        assert_eq!(a.degeneracy, b.degeneracy);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hyperbox_matches_exhaustive(
        lengths in prop::collection::vec(0.5f64..2.0, 1..=3),
        e_max in 5.0f64..120.0,
    ) {
        let s = enumerate_hyperbox(&lengths, e_max).unwrap();
        let oracle = exhaustive_states(&lengths, e_max);
        let got = s.state_energies();
        prop_assert_eq!(got.len(), oracle.len());
        for (a, b) in got.iter().zip(&oracle) {
            prop_assert!((a - b).abs() <= 1e-9 * b);
        }
    }

    #[test]
    fn integer_lengths_merge_exactly(w in prop::collection::vec(1u32..=4, 2..=3), e_max in 10.0f64..200.0) {
        // 1/L^2 = w_i makes every energy an integer
        let lengths: Vec<f64> = w.iter().map(|&w| 1.0 / (w as f64).sqrt()).collect();
        let s = enumerate_hyperbox(&lengths, e_max).unwrap();
        prop_assert!(s.unit().is_some());
        for level in s.levels() {
            prop_assert!((level.energy - level.energy.round()).abs() < 1e-9);
        }
        prop_assert_eq!(s.total_states() as usize, exhaustive_states(&lengths, e_max).len());
    }

    #[test]
    fn prefix_stability_hyperbox(lengths in prop::collection::vec(0.6f64..1.8, 2..=3), e in 10.0f64..150.0, grow in 1.01f64..2.0) {
        let small = enumerate_hyperbox(&lengths, e).unwrap();
        let large = enumerate_hyperbox(&lengths, e * grow).unwrap();
        assert_prefix(&small, &large);
    }

    #[test]
    fn prefix_stability_round_geometries(e in 20.0f64..300.0, grow in 1.01f64..2.0, aspect in 0.5f64..3.0) {
        for g in [BoxGeometry::unit_sphere(), BoxGeometry::unit_cylinder(aspect), BoxGeometry::RelativisticSquare { side: 1.0 }] {
            let e0 = if matches!(g, BoxGeometry::RelativisticSquare { .. }) { e / 5.0 } else { e };
            let small = g.enumerate(e0).unwrap();
            let large = g.enumerate(e0 * grow).unwrap();
            assert_prefix(&small, &large);
        }
    }

    #[test]
    fn levels_are_sorted_and_bounded(e in 3.0f64..400.0) {
        for g in [BoxGeometry::cube(), BoxGeometry::incommensurate_rectangle(), BoxGeometry::unit_sphere()] {
            let s = g.enumerate(e).unwrap();
            prop_assert!(s.levels().windows(2).all(|w| w[0].energy < w[1].energy));
            prop_assert!(s.levels().iter().all(|l| l.energy <= e && l.degeneracy >= 1));
        }
    }
}
