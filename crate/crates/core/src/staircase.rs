//! Cumulative state number, degeneracy spikes and the windowed density of
//! states derived from a [`Spectrum`].

use crate::error::{Error, Result};
use crate::spectra::{Level, Spectrum};

/// Right-continuous step function `N(e)`: number of states with energy `<= e`.
#[derive(Debug, Clone, PartialEq)]
pub struct Staircase {
    points: Vec<(f64, u64)>,
}

impl Staircase {
    /// One corner point `(e_i, N_i)` per distinct level.
    pub fn from_spectrum(spectrum: &Spectrum) -> Staircase {
        let mut total = 0;
        let points = spectrum
            .levels()
            .iter()
            .map(|level| {
                total += level.degeneracy;
                (level.energy, total)
            })
            .collect();
        Staircase { points }
    }

    /// Builds a staircase from raw corner points, checking monotonicity.
    pub fn from_points(points: Vec<(f64, u64)>) -> Result<Staircase> {
        for pair in points.windows(2) {
            if !(pair[0].0 < pair[1].0 && pair[0].1 < pair[1].1) {
                return Err(Error::invalid(
                    "points",
                    "energies and counts must both be strictly increasing",
                ));
            }
        }
        Ok(Staircase { points })
    }

    pub fn points(&self) -> &[(f64, u64)] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Total number of states.
    pub fn total(&self) -> u64 {
        self.points.last().map_or(0, |p| p.1)
    }

    /// `N(energy)`; zero below the ground state.
    pub fn count_at(&self, energy: f64) -> u64 {
        let idx = self.points.partition_point(|p| p.0 <= energy);
        if idx == 0 {
            0
        } else {
            self.points[idx - 1].1
        }
    }
}

/// Builds the staircase of a spectrum.
pub fn build_staircase(spectrum: &Spectrum) -> Staircase {
    Staircase::from_spectrum(spectrum)
}

/// `N(energy)` for a staircase.
pub fn evaluate_n(staircase: &Staircase, energy: f64) -> u64 {
    staircase.count_at(energy)
}

/// `(energy, degeneracy)` pairs: the spikes of the degeneracy plot.
pub fn degeneracy_series(spectrum: &Spectrum) -> Vec<(f64, u64)> {
    spectrum
        .levels()
        .iter()
        .map(|l| (l.energy, l.degeneracy))
        .collect()
}

/// Sampled density of states from a sliding window.
#[derive(Debug, Clone, PartialEq)]
pub struct DosSeries {
    pub window: f64,
    /// `(center, g)` pairs.
    pub samples: Vec<(f64, f64)>,
}

/// Counts states in `(c - w/2, c + w/2]` for every center `c` and divides
/// by `w`. Adjacent windows therefore partition the states exactly.
pub fn dos_window(spectrum: &Spectrum, window: f64, centers: &[f64]) -> Result<DosSeries> {
    if !(window.is_finite() && window > 0.0) {
        return Err(Error::invalid(
            "window",
            format!("must be positive, got {window}"),
        ));
    }
    let staircase = Staircase::from_spectrum(spectrum);
    let half = window / 2.0;
    let samples = centers
        .iter()
        .map(|&c| {
            let inside = staircase.count_at(c + half) - staircase.count_at(c - half);
            (c, inside as f64 / window)
        })
        .collect();
    Ok(DosSeries { window, samples })
}

/// Window centers from `start` to `end` spaced by `window / 2` (half overlap).
pub fn overlapping_centers(start: f64, end: f64, window: f64) -> Vec<f64> {
    grid(start, end, window / 2.0)
}

/// Centers of disjoint windows tiling `[start, end]`, starting at `start + w/2`.
pub fn tiling_centers(start: f64, end: f64, window: f64) -> Vec<f64> {
    let count = ((end - start) / window).ceil().max(0.0) as usize;
    (0..count)
        .map(|k| start + (k as f64 + 0.5) * window)
        .collect()
}

fn grid(start: f64, end: f64, step: f64) -> Vec<f64> {
    if !(step > 0.0) || end < start {
        return Vec::new();
    }
    let count = ((end - start) / step + 1e-9).floor() as usize + 1;
    (0..count).map(|k| start + k as f64 * step).collect()
}

/// Default window width, following the figure conventions: 10 for small
/// ranges and 50 or 60 for large ones.
pub fn default_window(e_max: f64, dimension: usize) -> f64 {
    match (e_max <= 200.0, dimension) {
        (true, _) => 10.0,
        (false, 2) => 60.0,
        (false, _) => 50.0,
    }
}

/// Splits every `d`-fold level into `d` single levels spread evenly over
/// `[e - delta/2, e + delta/2]`, mimicking a weak perturbation.
pub fn split_degeneracies(spectrum: &Spectrum, delta: f64) -> Result<Spectrum> {
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(Error::invalid("delta", "must be nonnegative"));
    }
    let mut levels = Vec::with_capacity(spectrum.total_states() as usize);
    for level in spectrum.levels() {
        let d = level.degeneracy;
        for k in 0..d {
            let offset = if d == 1 {
                0.0
            } else {
                delta * (k as f64 / (d - 1) as f64 - 0.5)
            };
            levels.push(Level {
                energy: level.energy + offset,
                degeneracy: 1,
                labels: level.labels.get(k as usize).cloned().into_iter().collect(),
            });
        }
    }
    let e_max = spectrum.e_max() + delta / 2.0;
    Spectrum::from_levels(levels, e_max)
}
