//! Power-law fits `N(e) = alpha e^beta` of staircases on log-log axes, and
//! the N-dependence of those fits for boson spectra.

use rayon::prelude::*;

use crate::analytic::nboson_closed_form;
use crate::error::{Error, Result};
use crate::manybody::build_nboson_spectrum;
use crate::spectra::{random_power_spectrum, Spectrum};
use crate::staircase::Staircase;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub alpha: f64,
    pub beta: f64,
    pub ln_alpha: f64,
    /// RMS residual of `ln N`.
    pub residual_rms: f64,
    pub fit_range: (f64, f64),
    pub point_count: usize,
}

impl PowerLawFit {
    pub fn predict(&self, energy: f64) -> f64 {
        self.alpha * energy.powf(self.beta)
    }
}

/// Which staircase corners enter a fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Corners with fewer states than this are dropped; low energies are
    /// where box shape still matters.
    pub min_count: u64,
    pub e_lo: f64,
    pub e_hi: f64,
}

/// Default low-count cutoff.
pub const DEFAULT_MIN_COUNT: u64 = 20;

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            min_count: DEFAULT_MIN_COUNT,
            e_lo: 0.0,
            e_hi: f64::INFINITY,
        }
    }
}

/// Ordinary least squares of `ln y` on `ln x`, equal weights.
pub fn fit_log_log(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    if points.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "power-law fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(&(x, y)) = points.iter().find(|&&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::invalid(
            "points",
            format!("log-log fit needs positive coordinates, got ({x}, {y})"),
        ));
    }
    let n = points.len() as f64;
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if !(sxx > 1e-300) {
        return Err(Error::InsufficientData(
            "degenerate fit range: all energies equal".into(),
        ));
    }
    let beta = sxy / sxx;
    let ln_alpha = mean_y - beta * mean_x;
    let rss: f64 = logs
        .iter()
        .map(|p| (p.1 - ln_alpha - beta * p.0).powi(2))
        .sum();
    let lo = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    Ok(PowerLawFit {
        alpha: ln_alpha.exp(),
        beta,
        ln_alpha,
        residual_rms: (rss / n).sqrt(),
        fit_range: (lo, hi),
        point_count: points.len(),
    })
}

/// Fits the staircase corners with `e_lo <= e <= e_hi`.
pub fn fit_powerlaw(staircase: &Staircase, e_lo: f64, e_hi: f64) -> Result<PowerLawFit> {
    let points: Vec<(f64, f64)> = staircase
        .points()
        .iter()
        .filter(|p| p.0 >= e_lo && p.0 <= e_hi)
        .map(|&(e, n)| (e, n as f64))
        .collect();
    fit_log_log(&points)
}

/// Fits the corners selected by `opts`.
pub fn fit_with(staircase: &Staircase, opts: &FitOptions) -> Result<PowerLawFit> {
    let points: Vec<(f64, f64)> = staircase
        .points()
        .iter()
        .filter(|p| p.1 >= opts.min_count && p.0 >= opts.e_lo && p.0 <= opts.e_hi)
        .map(|&(e, n)| (e, n as f64))
        .collect();
    fit_log_log(&points)
}

/// Fits a spectrum's staircase with `opts`.
pub fn fit_spectrum(spectrum: &Spectrum, opts: &FitOptions) -> Result<PowerLawFit> {
    fit_with(&Staircase::from_spectrum(spectrum), opts)
}

/// Number of N-boson states at or below `e_max`, stopping early once the
/// count passes `stop_after`.
fn count_states(states: &[f64], first: usize, n: u32, partial: f64, e_max: f64, count: &mut u64, stop_after: u64) {
    for (offset, &e) in states[first..].iter().enumerate() {
        if partial + n as f64 * e > e_max || *count > stop_after {
            return;
        }
        if n == 1 {
            *count += 1;
        } else {
            count_states(states, first + offset, n - 1, partial + e, e_max, count, stop_after);
        }
    }
}

/// Largest cutoff (to about 0.1%) at which `n` bosons on `single` have at
/// most `target` states, capped at the single-particle completeness limit.
pub fn cutoff_for_states(single: &Spectrum, n: u32, target: u64) -> Result<f64> {
    if n < 1 {
        return Err(Error::invalid("N", "particle number must be at least 1"));
    }
    let states = single.state_energies();
    let ground = *states
        .first()
        .ok_or_else(|| Error::InsufficientData("empty single-particle spectrum".into()))?;
    let count_at = |e: f64| {
        let mut c = 0;
        count_states(&states, 0, n, 0.0, e, &mut c, target);
        c
    };
    let cap = single.e_max();
    if count_at(cap) <= target {
        return Ok(cap);
    }
    let (mut lo, mut hi) = (ground * n as f64, cap);
    while hi - lo > 1e-3 * hi {
        let mid = 0.5 * (lo + hi);
        if count_at(mid) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Settings shared by [`scaling_report`] and [`random_ensemble_stats`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingOptions {
    /// Each N-boson build is cut off where it reaches about this many states.
    pub target_states: u64,
    pub fit: FitOptions,
    /// Theory curve `g_1 = a e^b`.
    pub theory_a: f64,
    pub theory_b: f64,
}

impl Default for ScalingOptions {
    fn default() -> Self {
        ScalingOptions {
            target_states: 200_000,
            fit: FitOptions::default(),
            theory_a: 0.4,
            theory_b: 0.5,
        }
    }
}

/// One `(label, N)` entry of a scaling table.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRow {
    pub label: String,
    pub n: u32,
    pub e_max: f64,
    pub fit: Result<PowerLawFit>,
}

/// Builds, cuts off and fits `n`-boson spectra on `single`.
pub fn fit_nboson(single: &Spectrum, n: u32, opts: &ScalingOptions) -> Result<(f64, PowerLawFit)> {
    let e_max = cutoff_for_states(single, n, opts.target_states)?;
    let spectrum = build_nboson_spectrum(single, n, e_max)?;
    Ok((e_max, fit_spectrum(&spectrum, &opts.fit)?))
}

/// For every base spectrum and every `N`, the fitted `(alpha, beta)` of the
/// N-boson staircase, followed by theory rows labelled `theory` from the
/// closed form with `(opts.theory_a, opts.theory_b)`. Failures stay in
/// their row.
pub fn scaling_report(
    spectra: &[(String, Spectrum)],
    n_range: impl IntoIterator<Item = u32>,
    opts: &ScalingOptions,
) -> Vec<ScalingRow> {
    let ns: Vec<u32> = n_range.into_iter().collect();
    let mut rows: Vec<ScalingRow> = spectra
        .iter()
        .flat_map(|(label, s)| ns.iter().map(move |&n| (label, s, n)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(label, single, n)| match fit_nboson(single, n, opts) {
            Ok((e_max, fit)) => ScalingRow {
                label: label.clone(),
                n,
                e_max,
                fit: Ok(fit),
            },
            Err(err) => ScalingRow {
                label: label.clone(),
                n,
                e_max: f64::NAN,
                fit: Err(err),
            },
        })
        .collect();
    rows.extend(ns.iter().map(|&n| ScalingRow {
        label: "theory".to_string(),
        n,
        e_max: f64::NAN,
        fit: theory_fit(opts.theory_a, opts.theory_b, n),
    }));
    rows
}

/// Closed-form `(alpha, beta)` presented as a zero-residual fit.
pub fn theory_fit(a: f64, b: f64, n: u32) -> Result<PowerLawFit> {
    let c = nboson_closed_form(a, b, n)?;
    Ok(PowerLawFit {
        alpha: c.alpha,
        beta: c.beta,
        ln_alpha: c.alpha.ln(),
        residual_rms: 0.0,
        fit_range: (0.0, f64::INFINITY),
        point_count: 0,
    })
}

/// Mean and sample standard deviation over an ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleStats {
    pub n: u32,
    pub mean_beta: f64,
    pub std_beta: f64,
    pub mean_ln_alpha: f64,
    pub std_ln_alpha: f64,
    pub successes: usize,
}

/// Minimum number of successful ensemble members.
pub const MIN_ENSEMBLE: usize = 10;

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    // shifted sum: exact when all values agree
    let pivot = values[0];
    let mean = pivot + values.iter().map(|v| v - pivot).sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Repeats random spectrum, N-boson build and fit once per seed.
pub fn random_ensemble_stats(
    seeds: &[u64],
    levels_per_spectrum: usize,
    b: f64,
    n: u32,
    opts: &ScalingOptions,
) -> Result<EnsembleStats> {
    let fits: Vec<Result<PowerLawFit>> = seeds
        .par_iter()
        .map(|&seed| {
            let single = random_power_spectrum(levels_per_spectrum, b, seed)?;
            fit_nboson(&single, n, opts).map(|(_, fit)| fit)
        })
        .collect();
    let mut good = Vec::with_capacity(fits.len());
    let mut first_error = None;
    for fit in fits {
        match fit {
            Ok(f) => good.push(f),
            Err(e) => {
                first_error.get_or_insert(e);
            }
        }
    }
    if good.len() < MIN_ENSEMBLE {
        return Err(first_error.unwrap_or_else(|| {
            Error::InsufficientData(format!(
                "ensemble needs at least {MIN_ENSEMBLE} successful seeds, got {}",
                good.len()
            ))
        }));
    }
    let betas: Vec<f64> = good.iter().map(|f| f.beta).collect();
    let ln_alphas: Vec<f64> = good.iter().map(|f| f.ln_alpha).collect();
    let (mean_beta, std_beta) = mean_std(&betas);
    let (mean_ln_alpha, std_ln_alpha) = mean_std(&ln_alphas);
    Ok(EnsembleStats {
        n,
        mean_beta,
        std_beta,
        mean_ln_alpha,
        std_ln_alpha,
        successes: good.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let pts: Vec<(f64, f64)> = (1..50).map(|i| {
            let e = i as f64 * 3.7;
            (e, 2.0 * e.powf(1.5))
        }).collect();
        let fit = fit_log_log(&pts).unwrap();
        assert!((fit.alpha - 2.0).abs() < 1e-10);
        assert!((fit.beta - 1.5).abs() < 1e-10);
        assert!(fit.residual_rms < 1e-12);
        assert_eq!(fit.point_count, 49);
    }

    #[test]
    fn too_few_or_degenerate() {
        assert!(matches!(
            fit_log_log(&[(1.0, 1.0), (2.0, 2.0)]),
            Err(Error::InsufficientData(_))
        ));
        assert!(matches!(
            fit_log_log(&[(2.0, 1.0), (2.0, 2.0), (2.0, 3.0)]),
            Err(Error::InsufficientData(_))
        ));
        assert!(fit_log_log(&[(0.0, 1.0), (2.0, 2.0), (3.0, 3.0)]).is_err());
    }

    #[test]
    fn staircase_range_filter() {
        let st = Staircase::from_points((1..=10).map(|i| (i as f64, (i * i) as u64)).collect()).unwrap();
        let fit = fit_powerlaw(&st, 2.0, 8.0).unwrap();
        assert_eq!(fit.point_count, 7);
        assert!((fit.beta - 2.0).abs() < 1e-12);
        assert!(fit_powerlaw(&st, 20.0, 30.0).is_err());
    }

    #[test]
    fn identical_seeds_have_zero_spread() {
        let opts = ScalingOptions {
            target_states: 2_000,
            ..ScalingOptions::default()
        };
        let stats = random_ensemble_stats(&[5; 12], 200, 0.5, 2, &opts).unwrap();
        assert_eq!(stats.std_beta, 0.0);
        assert_eq!(stats.std_ln_alpha, 0.0);
        assert_eq!(stats.successes, 12);
    }

    #[test]
    fn ensemble_needs_enough_seeds() {
        let opts = ScalingOptions::default();
        assert!(random_ensemble_stats(&[1, 2, 3], 100, 0.5, 1, &opts).is_err());
    }

    #[test]
    fn theory_rows() {
        let fit = theory_fit(0.4, 0.5, 3).unwrap();
        assert_eq!(fit.beta, 4.5);
    }
}
