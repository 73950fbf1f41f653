//! Spectra of N non-interacting identical bosons.
//!
//! An N-boson state is a multiset of single-particle states, written as a
//! nondecreasing tuple of state indices. Tuples are generated depth first
//! over the ascending state list; a partial tuple of `k` particles with
//! energy `E_k` ending at state `i` is abandoned as soon as
//! `E_k + (N - k) e_i > E_max`, since every extension is at least that
//! expensive. Energies stream into a histogram so the tuples themselves
//! are never stored.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectra::{Level, Spectrum, MERGE_TOLERANCE};

/// One N-boson configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct BosonConfig {
    /// Nondecreasing 1-based indices into the single-particle state list.
    pub occupied: Vec<u32>,
    pub energy: f64,
}

fn check_request(single: &Spectrum, n: u32, e_max: f64) -> Result<()> {
    if n < 1 {
        return Err(Error::invalid("N", "particle number must be at least 1"));
    }
    if !e_max.is_finite() {
        return Err(Error::invalid("e_max", "must be finite"));
    }
    if e_max > single.e_max() {
        return Err(Error::IncompleteBase {
            requested: e_max,
            limit: single.e_max(),
        });
    }
    Ok(())
}

/// Visits the energy of every nondecreasing tuple of `n` states drawn from
/// `states[first..]` whose total is `<= e_max`. `states` must be ascending.
fn visit_tuples<T, F>(states: &[T], first: usize, n: u32, partial: T, e_max: T, visit: &mut F)
where
    T: Copy + PartialOrd + std::ops::Add<Output = T> + std::ops::Mul<Output = T> + From<u32>,
    F: FnMut(T),
{
    let remaining = T::from(n);
    for (offset, &e) in states[first..].iter().enumerate() {
        if partial + remaining * e > e_max {
            break;
        }
        if n == 1 {
            visit(partial + e);
        } else {
            visit_tuples(states, first + offset, n - 1, partial + e, e_max, visit);
        }
    }
}

/// Builds the spectrum of `n` bosons on `single`, complete up to `e_max`.
///
/// `single` must itself be complete up to `e_max`. When the single-particle
/// energies are integer multiples of a common unit the merge is exact;
/// otherwise sums within [`MERGE_TOLERANCE`] are merged.
pub fn build_nboson_spectrum(single: &Spectrum, n: u32, e_max: f64) -> Result<Spectrum> {
    check_request(single, n, e_max)?;
    let states: Vec<f64> = single
        .state_energies()
        .into_iter()
        .filter(|&e| e <= e_max)
        .collect();
    match single.unit() {
        Some(unit) => Ok(build_exact(&states, unit, n, e_max)),
        None => {
            let levels = histogram_float(&states, n, e_max);
            Ok(Spectrum::from_parts(levels, e_max, None))
        }
    }
}

/// Same as [`build_nboson_spectrum`] for an explicit ascending list of
/// single-particle state energies, assumed complete up to `e_max`.
pub fn build_nboson_from_states(states: &[f64], n: u32, e_max: f64) -> Result<Spectrum> {
    if n < 1 {
        return Err(Error::invalid("N", "particle number must be at least 1"));
    }
    if states.windows(2).any(|p| p[0] > p[1]) {
        return Err(Error::invalid("states", "energies must be ascending"));
    }
    let levels = histogram_float(states, n, e_max);
    Ok(Spectrum::from_parts(levels, e_max, None))
}

fn build_exact(states: &[f64], unit: f64, n: u32, e_max: f64) -> Spectrum {
    let keys: Vec<u64> = states.iter().map(|e| (e / unit).round() as u64).collect();
    let mut key_max = (e_max / unit).floor() as u64;
    while key_max > 0 && key_max as f64 * unit > e_max {
        key_max -= 1;
    }
    let counts = (0..keys.len())
        .into_par_iter()
        .map(|first| {
            let mut hist: HashMap<u64, u64> = HashMap::new();
            let head = keys[first];
            if n == 1 {
                if head <= key_max {
                    *hist.entry(head).or_default() += 1;
                }
            } else if head * n as u64 <= key_max {
                visit_tuples(&keys, first, n - 1, head, key_max, &mut |k| {
                    *hist.entry(k).or_default() += 1;
                });
            }
            hist
        })
        .reduce(HashMap::new, merge_counts);
    let mut counts: Vec<(u64, u64)> = counts.into_iter().collect();
    counts.sort_unstable();
    let levels = counts
        .into_iter()
        .map(|(key, degeneracy)| Level {
            energy: key as f64 * unit,
            degeneracy,
            labels: Vec::new(),
        })
        .collect();
    Spectrum::from_parts(levels, e_max, Some(unit))
}

fn merge_counts(mut a: HashMap<u64, u64>, b: HashMap<u64, u64>) -> HashMap<u64, u64> {
    if a.len() < b.len() {
        return merge_counts(b, a);
    }
    for (k, v) in b {
        *a.entry(k).or_default() += v;
    }
    a
}

/// Float histogram keyed by the bit pattern of each sum. Positive floats
/// order the same way as their bits.
fn histogram_float(states: &[f64], n: u32, e_max: f64) -> Vec<Level> {
    let counts = (0..states.len())
        .into_par_iter()
        .map(|first| {
            let mut hist: HashMap<u64, u64> = HashMap::new();
            let head = states[first];
            if n == 1 {
                if head <= e_max {
                    *hist.entry(head.to_bits()).or_default() += 1;
                }
            } else if head * n as f64 <= e_max {
                visit_tuples(states, first, n - 1, head, e_max, &mut |e: f64| {
                    *hist.entry(e.to_bits()).or_default() += 1;
                });
            }
            hist
        })
        .reduce(HashMap::new, merge_counts);
    let mut sums: Vec<(f64, u64)> = counts
        .into_iter()
        .map(|(bits, c)| (f64::from_bits(bits), c))
        .collect();
    sums.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut levels: Vec<Level> = Vec::new();
    for (energy, degeneracy) in sums {
        match levels.last_mut() {
            Some(last) if energy - last.energy <= MERGE_TOLERANCE * energy.abs() => {
                last.degeneracy += degeneracy;
            }
            _ => levels.push(Level {
                energy,
                degeneracy,
                labels: Vec::new(),
            }),
        }
    }
    levels
}

/// Lists every configuration with energy `<= e_max`, ordered by energy and
/// then lexicographically. Fails once more than `limit` would be produced.
pub fn configurations(
    single: &Spectrum,
    n: u32,
    e_max: f64,
    limit: usize,
) -> Result<Vec<BosonConfig>> {
    check_request(single, n, e_max)?;
    let states: Vec<f64> = single
        .state_energies()
        .into_iter()
        .filter(|&e| e <= e_max)
        .collect();
    let mut out = Vec::new();
    let mut tuple = Vec::with_capacity(n as usize);
    collect_configs(&states, 0, n, 0.0, e_max, &mut tuple, &mut out, limit)?;
    out.sort_by(|a, b| a.energy.total_cmp(&b.energy).then_with(|| a.occupied.cmp(&b.occupied)));
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn collect_configs(
    states: &[f64],
    first: usize,
    n: u32,
    partial: f64,
    e_max: f64,
    tuple: &mut Vec<u32>,
    out: &mut Vec<BosonConfig>,
    limit: usize,
) -> Result<()> {
    for (offset, &e) in states[first..].iter().enumerate() {
        if partial + n as f64 * e > e_max {
            break;
        }
        let index = first + offset;
        tuple.push(index as u32 + 1);
        if n == 1 {
            if out.len() == limit {
                return Err(Error::TooManyConfigurations { limit });
            }
            out.push(BosonConfig {
                occupied: tuple.clone(),
                energy: partial + e,
            });
        } else {
            collect_configs(states, index, n - 1, partial + e, e_max, tuple, out, limit)?;
        }
        tuple.pop();
    }
    Ok(())
}
