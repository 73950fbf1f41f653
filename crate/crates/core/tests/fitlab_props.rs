use boxdos_core::fitlab::{
    fit_log_log, fit_nboson, fit_spectrum, fit_with, random_ensemble_stats, scaling_report,
    FitOptions, ScalingOptions,
};
use boxdos_core::spectra::{enumerate_sphere, BoxGeometry, Spectrum};
use boxdos_core::staircase::Staircase;
use proptest::prelude::*;

fn table_fit(g: Spectrum) -> (f64, f64) {
    let fit = fit_spectrum(&g, &FitOptions::default()).unwrap();
    (fit.alpha, fit.beta)
}

#[test]
fn cube_and_rectangle_fits() {
    let (a, b) = table_fit(BoxGeometry::cube().enumerate(1024.0).unwrap());
    assert!((a - 0.29).abs() < 0.05 && (b - 1.58).abs() < 0.05, "cube ({a}, {b})");
    let (a, b) = table_fit(BoxGeometry::incommensurate_rectangle().enumerate(1024.0).unwrap());
    assert!((a - 0.32).abs() < 0.05 && (b - 1.56).abs() < 0.05, "rectangle ({a}, {b})");
}

#[test]
fn sphere_fit() {
    // reference values from an independent root finder on j_l over the same range
    let (a, b) = table_fit(enumerate_sphere(95.0).unwrap());
    assert!((a - 0.3605).abs() < 0.005, "alpha {a}");
    assert!((b - 1.5450).abs() < 0.005, "beta {b}");
}

#[test]
fn weyl_exponent_approached_from_above() {
    let cube = BoxGeometry::cube().enumerate(1024.0).unwrap();
    let st = Staircase::from_spectrum(&cube);
    let excess: Vec<f64> = [20.0, 50.0, 100.0, 200.0, 400.0]
        .iter()
        .map(|&lo| {
            let opts = FitOptions { e_lo: lo, ..FitOptions::default() };
            fit_with(&st, &opts).unwrap().beta - 1.5
        })
        .collect();
    assert!(excess.iter().all(|&x| x > 0.0));
    let first_half: f64 = excess[..2].iter().sum::<f64>() / 2.0;
    let second_half: f64 = excess[3..].iter().sum::<f64>() / 2.0;
    assert!(second_half < first_half, "{excess:?}");
}

#[test]
fn sphere_scaling_grows_with_n() {
    let sphere = enumerate_sphere(95.0).unwrap();
    let opts = ScalingOptions::default();
    let betas: Vec<f64> = (1..=5).map(|n| fit_nboson(&sphere, n, &opts).unwrap().1.beta).collect();
    assert!(betas.windows(2).all(|w| w[1] > w[0]), "{betas:?}");
    let pts: Vec<(f64, f64)> = betas.iter().enumerate().map(|(i, &b)| (i as f64 + 1.0, b)).collect();
    // linear least squares of beta on N
    let mean_n = 3.0;
    let mean_b = betas.iter().sum::<f64>() / 5.0;
    let slope = pts.iter().map(|(n, b)| (n - mean_n) * (b - mean_b)).sum::<f64>() / 10.0;
    assert!(slope > 1.5 && slope < 1.85, "slope {slope}");
    for (n, b) in &pts {
        assert!((b - (mean_b + slope * (n - mean_n))).abs() < 0.2, "N = {n} off the line");
    }
}

#[test]
fn report_rows_and_theory() {
    let cube = BoxGeometry::cube().enumerate(200.0).unwrap();
    let opts = ScalingOptions { target_states: 5_000, ..ScalingOptions::default() };
    let rows = scaling_report(&[("cube".to_string(), cube)], 1..=3, &opts);
    assert_eq!(rows.len(), 6);
    assert!(rows[..3].iter().all(|r| r.label == "cube" && r.fit.is_ok()));
    for (row, n) in rows[3..].iter().zip(1..) {
        assert_eq!(row.label, "theory");
        assert_eq!(row.fit.as_ref().unwrap().beta, 1.5 * n as f64);
    }
}

#[test]
fn failing_rows_do_not_abort_the_report() {
    let tiny = BoxGeometry::cube().enumerate(10.0).unwrap();
    let rows = scaling_report(&[("tiny".to_string(), tiny)], 1..=2, &ScalingOptions::default());
    assert!(rows[0].fit.is_err());
    assert_eq!(rows.len(), 4);
}

#[test]
fn random_single_particle_exponent() {
    let seeds: Vec<u64> = (0..100).collect();
    let stats = random_ensemble_stats(&seeds, 500, 0.5, 1, &ScalingOptions::default()).unwrap();
    assert_eq!(stats.successes, 100);
    assert!((stats.mean_beta - 1.5).abs() < 0.05);
    assert!(stats.std_beta > 0.0);
}

proptest! {
    #[test]
    fn refit_of_fitted_law_is_idempotent(
        raw in prop::collection::vec((1.0f64..1000.0, 1.0f64..1000.0), 3..40),
    ) {
        let mut pts = raw;
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        pts.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-6);
        prop_assume!(pts.len() >= 3);
        let first = fit_log_log(&pts).unwrap();
        let regenerated: Vec<(f64, f64)> = pts.iter().map(|&(x, _)| (x, first.predict(x))).collect();
        let second = fit_log_log(&regenerated).unwrap();
        prop_assert!((first.beta - second.beta).abs() < 1e-10 * first.beta.abs().max(1.0));
        prop_assert!((first.ln_alpha - second.ln_alpha).abs() < 1e-10 * first.ln_alpha.abs().max(1.0));
    }

    #[test]
    fn energy_rescaling(c in 0.01f64..100.0, lo in 3.0f64..100.0) {
        let cube = BoxGeometry::cube().enumerate(400.0).unwrap();
        let pts: Vec<(f64, f64)> = Staircase::from_spectrum(&cube)
            .points()
            .iter()
            .filter(|p| p.0 >= lo)
            .map(|&(e, n)| (e, n as f64))
            .collect();
        let scaled: Vec<(f64, f64)> = pts.iter().map(|&(e, n)| (c * e, n)).collect();
        let a = fit_log_log(&pts).unwrap();
        let b = fit_log_log(&scaled).unwrap();
        prop_assert!((a.beta - b.beta).abs() < 1e-9);
        prop_assert!((b.ln_alpha - (a.ln_alpha - a.beta * c.ln())).abs() < 1e-9);
    }
}
