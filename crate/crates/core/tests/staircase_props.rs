use std::f64::consts::PI;

use boxdos_core::spectra::{enumerate_hyperbox, BoxGeometry, Spectrum};
use boxdos_core::staircase::{
    build_staircase, degeneracy_series, dos_window, evaluate_n, overlapping_centers,
    split_degeneracies, tiling_centers,
};
use proptest::prelude::*;

fn arbitrary_spectrum() -> impl Strategy<Value = Spectrum> {
    prop::collection::vec((1u32..400, 1u64..6), 1..60).prop_map(|raw| {
        let mut energies = Vec::new();
        for (e, d) in raw {
            for _ in 0..d {
                energies.push(e as f64 / 4.0);
            }
        }
        Spectrum::from_state_energies(energies, 100.0).unwrap()
    })
}

#[test]
fn cube_staircase_landmarks() {
    let cube = BoxGeometry::cube().enumerate(1024.0).unwrap();
    let st = build_staircase(&cube);
    assert_eq!(evaluate_n(&st, 1024.0), 15_954);
    assert_eq!(evaluate_n(&st, 950.0) - evaluate_n(&st, 949.5), 63);
    assert!(degeneracy_series(&cube).contains(&(941.0, 66)));
}

#[test]
fn rectangle_spikes_are_unit() {
    let rect = BoxGeometry::incommensurate_rectangle().enumerate(400.0).unwrap();
    assert!(degeneracy_series(&rect).iter().all(|&(_, d)| d == 1));
}

#[test]
fn square_dos_approaches_area_law() {
    let square = enumerate_hyperbox(&[1.0, 1.0], 1600.0).unwrap();
    let worst = |w: f64| {
        let dos = dos_window(&square, w, &overlapping_centers(100.0, 1500.0, w)).unwrap();
        dos.samples
            .iter()
            .map(|&(_, g)| (g / (PI / 4.0) - 1.0).abs())
            .fold(0.0, f64::max)
    };
    let spread: Vec<f64> = [10.0, 20.0, 40.0, 100.0].iter().map(|&w| worst(w)).collect();
    assert!(spread.windows(2).all(|p| p[1] < p[0]), "{spread:?}");
    // lattice-point fluctuations exceed 25% for windows narrower than about 40
    for w in [40.0, 50.0, 60.0, 100.0] {
        assert!(worst(w) < 0.25, "window {w}");
    }
}

#[test]
fn empty_window_is_zero() {
    let square = enumerate_hyperbox(&[1.0, 1.0], 100.0).unwrap();
    let dos = dos_window(&square, 0.5, &[3.0]).unwrap();
    assert_eq!(dos.samples[0].1, 0.0);
}

proptest! {
    #[test]
    fn conservation(s in arbitrary_spectrum()) {
        let st = build_staircase(&s);
        let sum: u64 = degeneracy_series(&s).iter().map(|p| p.1).sum();
        prop_assert_eq!(sum, s.total_states());
        prop_assert_eq!(st.total(), s.total_states());
        prop_assert_eq!(st.points().len(), s.distinct_levels());
        prop_assert!(st.points().windows(2).all(|p| p[0].0 < p[1].0 && p[0].1 < p[1].1));
    }

    #[test]
    fn staircase_counts_states_below(s in arbitrary_spectrum(), e in 0.0f64..110.0) {
        let st = build_staircase(&s);
        let direct = s.state_energies().iter().filter(|&&x| x <= e).count() as u64;
        prop_assert_eq!(evaluate_n(&st, e), direct);
    }

    #[test]
    fn tiled_windows_partition_states(s in arbitrary_spectrum(), w in 0.3f64..25.0) {
        let st = build_staircase(&s);
        let end = 100.0;
        let centers = tiling_centers(0.0, end, w);
        let dos = dos_window(&s, w, &centers).unwrap();
        let total: f64 = dos.samples.iter().map(|&(_, g)| g * w).sum();
        let covered = centers.len() as f64 * w;
        prop_assert_eq!(total.round() as u64, evaluate_n(&st, covered));
        prop_assert!(dos.samples.iter().all(|&(_, g)| g >= 0.0));
    }

    #[test]
    fn splitting_keeps_counts_away_from_levels(s in arbitrary_spectrum(), delta in 0.001f64..0.1) {
        // levels are at multiples of 1/4, so delta < 0.1 is well below the spacing
        let split = split_degeneracies(&s, delta).unwrap();
        let a = build_staircase(&s);
        let b = build_staircase(&split);
        prop_assert_eq!(a.total(), b.total());
        for k in 0..=440 {
            let e = k as f64 / 4.0 + 0.125;
            prop_assert_eq!(a.count_at(e), b.count_at(e));
        }
    }
}
