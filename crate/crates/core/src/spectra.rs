//! Complete single-particle spectra for rigid boxes.
//!
//! Energies are in reduced units where `hbar^2 pi^2 / 2M = 1`. Every
//! enumerator takes a cutoff and returns every level at or below it, with
//! equal energies merged into one level carrying the summed degeneracy.

use std::collections::BTreeMap;
use std::f64::consts::{E, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::specfun::{bessel_zeros_below, BesselKind};

/// Relative tolerance used to merge floating-point energies.
pub const MERGE_TOLERANCE: f64 = 1e-9;

/// Quantum numbers of one state, in the order the geometry defines them.
pub type QuantumNumbers = Vec<u32>;

#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub energy: f64,
    pub degeneracy: u64,
    /// One tuple per state; empty when the spectrum was built without labels.
    pub labels: Vec<QuantumNumbers>,
}

/// A sorted list of distinct levels, complete at and below `e_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    levels: Vec<Level>,
    e_max: f64,
    /// When set, every energy is an exact integer multiple of this unit.
    unit: Option<f64>,
}

impl Spectrum {
    /// Builds a spectrum from already-merged levels, checking the invariants.
    pub fn from_levels(levels: Vec<Level>, e_max: f64) -> Result<Self> {
        if !e_max.is_finite() {
            return Err(Error::invalid("e_max", "must be finite"));
        }
        for pair in levels.windows(2) {
            if !(pair[0].energy < pair[1].energy) {
                return Err(Error::invalid(
                    "levels",
                    format!(
                        "energies must be strictly increasing ({} then {})",
                        pair[0].energy, pair[1].energy
                    ),
                ));
            }
        }
        if let Some(level) = levels.iter().find(|l| l.degeneracy == 0) {
            return Err(Error::invalid(
                "levels",
                format!("zero degeneracy at {}", level.energy),
            ));
        }
        if let Some(last) = levels.last() {
            if last.energy > e_max {
                return Err(Error::invalid(
                    "e_max",
                    format!("level {} lies above e_max {}", last.energy, e_max),
                ));
            }
        }
        Ok(Spectrum {
            levels,
            e_max,
            unit: None,
        })
    }

    /// Sorts individual state energies and merges those within
    /// [`MERGE_TOLERANCE`] of each other.
    pub fn from_state_energies(mut energies: Vec<f64>, e_max: f64) -> Result<Self> {
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::invalid("energies", "must be finite"));
        }
        energies.retain(|&e| e <= e_max);
        energies.sort_by(f64::total_cmp);
        let levels = merge_sorted(energies.into_iter().map(|e| (e, 1, None)));
        Self::from_levels(levels, e_max)
    }

    pub(crate) fn from_parts(levels: Vec<Level>, e_max: f64, unit: Option<f64>) -> Self {
        debug_assert!(levels.windows(2).all(|p| p[0].energy < p[1].energy));
        Spectrum {
            levels,
            e_max,
            unit,
        }
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// Energy at or below which the listing is guaranteed complete.
    pub fn e_max(&self) -> f64 {
        self.e_max
    }

    /// Exact energy quantum, if all energies are integer multiples of one.
    pub fn unit(&self) -> Option<f64> {
        self.unit
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn distinct_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn total_states(&self) -> u64 {
        self.levels.iter().map(|l| l.degeneracy).sum()
    }

    pub fn mean_degeneracy(&self) -> f64 {
        if self.levels.is_empty() {
            return 0.0;
        }
        self.total_states() as f64 / self.levels.len() as f64
    }

    pub fn ground_energy(&self) -> Option<f64> {
        self.levels.first().map(|l| l.energy)
    }

    /// Degeneracy of the level at `energy`, or 0 if there is none.
    pub fn degeneracy_at(&self, energy: f64) -> u64 {
        let tol = MERGE_TOLERANCE * energy.abs().max(f64::MIN_POSITIVE);
        let idx = self.levels.partition_point(|l| l.energy < energy - tol);
        match self.levels.get(idx) {
            Some(l) if (l.energy - energy).abs() <= tol => l.degeneracy,
            _ => 0,
        }
    }

    /// One energy per state, ascending, each level repeated by its degeneracy.
    pub fn state_energies(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.total_states() as usize);
        for level in &self.levels {
            out.extend(std::iter::repeat(level.energy).take(level.degeneracy as usize));
        }
        out
    }

    /// The part of the spectrum at or below `e_max`, which stays complete.
    pub fn truncated(&self, e_max: f64) -> Spectrum {
        let e_max = e_max.min(self.e_max);
        let keep = self.levels.partition_point(|l| l.energy <= e_max);
        Spectrum {
            levels: self.levels[..keep].to_vec(),
            e_max,
            unit: self.unit,
        }
    }

    /// Drops quantum-number labels.
    pub fn without_labels(mut self) -> Spectrum {
        for level in &mut self.levels {
            level.labels = Vec::new();
        }
        self
    }
}

/// Merges sorted `(energy, degeneracy, label)` items whose energies agree to
/// [`MERGE_TOLERANCE`] relative to the first energy of the group.
fn merge_sorted<I>(items: I) -> Vec<Level>
where
    I: IntoIterator<Item = (f64, u64, Option<QuantumNumbers>)>,
{
    let mut levels: Vec<Level> = Vec::new();
    for (energy, degeneracy, label) in items {
        match levels.last_mut() {
            Some(last) if energy - last.energy <= MERGE_TOLERANCE * energy.abs() => {
                last.degeneracy += degeneracy;
                last.labels.extend(label);
            }
            _ => levels.push(Level {
                energy,
                degeneracy,
                labels: label.into_iter().collect(),
            }),
        }
    }
    levels
}

fn check_cutoff(e_max: f64) -> Result<()> {
    if !e_max.is_finite() {
        return Err(Error::invalid("e_max", "must be finite"));
    }
    Ok(())
}

fn check_length(name: &'static str, value: f64) -> Result<()> {
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::invalid(name, format!("must be positive, got {value}")));
    }
    Ok(())
}

/// Box shapes with rigid walls.
#[derive(Debug, Clone, PartialEq)]
pub enum BoxGeometry {
    /// `D`-dimensional rectangular box with the given side lengths.
    Hyperbox { lengths: Vec<f64> },
    Sphere { radius: f64 },
    /// Energies `q^2 pi^2 / H^2 + K_ln^2 / R^2`, in units of `hbar^2 / 2M`.
    Cylinder { height: f64, radius: f64 },
    /// Square of side `side` with `energy = pc`, in units of `pi hbar c`.
    RelativisticSquare { side: f64 },
}

impl BoxGeometry {
    /// Unit cube.
    pub fn cube() -> Self {
        BoxGeometry::Hyperbox {
            lengths: vec![1.0; 3],
        }
    }

    /// Unit hypercube in `dim` dimensions.
    pub fn hypercube(dim: usize) -> Self {
        BoxGeometry::Hyperbox {
            lengths: vec![1.0; dim],
        }
    }

    /// Unit-volume box with sides `1, 2/e, e/2`, which has no degeneracies.
    pub fn incommensurate_rectangle() -> Self {
        BoxGeometry::Hyperbox {
            lengths: vec![1.0, 2.0 / E, E / 2.0],
        }
    }

    /// Sphere of unit volume.
    pub fn unit_sphere() -> Self {
        BoxGeometry::Sphere {
            radius: (3.0 / (4.0 * PI)).cbrt(),
        }
    }

    /// Cylinder of unit volume with the given height-to-radius ratio.
    pub fn unit_cylinder(aspect: f64) -> Self {
        let radius = (1.0 / (PI * aspect)).cbrt();
        BoxGeometry::Cylinder {
            height: aspect * radius,
            radius,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            BoxGeometry::Hyperbox { lengths } => {
                if lengths.is_empty() {
                    return Err(Error::invalid("lengths", "dimension must be at least 1"));
                }
                lengths.iter().try_for_each(|&l| check_length("lengths", l))
            }
            BoxGeometry::Sphere { radius } => check_length("radius", *radius),
            BoxGeometry::Cylinder { height, radius } => {
                check_length("height", *height)?;
                check_length("radius", *radius)
            }
            BoxGeometry::RelativisticSquare { side } => check_length("side", *side),
        }
    }

    /// Volume (length, area, ...) in the box's own dimension.
    pub fn volume(&self) -> f64 {
        match self {
            BoxGeometry::Hyperbox { lengths } => lengths.iter().product(),
            BoxGeometry::Sphere { radius } => 4.0 / 3.0 * PI * radius.powi(3),
            BoxGeometry::Cylinder { height, radius } => PI * radius * radius * height,
            BoxGeometry::RelativisticSquare { side } => side * side,
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            BoxGeometry::Hyperbox { lengths } => lengths.len(),
            BoxGeometry::Sphere { .. } | BoxGeometry::Cylinder { .. } => 3,
            BoxGeometry::RelativisticSquare { .. } => 2,
        }
    }

    pub fn is_unit_volume(&self) -> bool {
        (self.volume() - 1.0).abs() <= 1e-12
    }

    /// Rescales every length uniformly so the volume is 1, keeping the shape.
    pub fn normalized(&self) -> Self {
        let scale = self.volume().powf(-1.0 / self.dimension() as f64);
        match self {
            BoxGeometry::Hyperbox { lengths } => BoxGeometry::Hyperbox {
                lengths: lengths.iter().map(|l| l * scale).collect(),
            },
            BoxGeometry::Sphere { radius } => BoxGeometry::Sphere {
                radius: radius * scale,
            },
            BoxGeometry::Cylinder { height, radius } => BoxGeometry::Cylinder {
                height: height * scale,
                radius: radius * scale,
            },
            BoxGeometry::RelativisticSquare { side } => BoxGeometry::RelativisticSquare {
                side: side * scale,
            },
        }
    }

    /// Every level with energy `<= e_max`.
    pub fn enumerate(&self, e_max: f64) -> Result<Spectrum> {
        self.validate()?;
        match self {
            BoxGeometry::Hyperbox { lengths } => enumerate_hyperbox(lengths, e_max),
            BoxGeometry::Sphere { radius } => {
                check_cutoff(e_max)?;
                let k_max = PI * radius * e_max.max(0.0).sqrt();
                let mut spectrum = enumerate_sphere_with_radius(*radius, k_max)?;
                spectrum.e_max = e_max;
                Ok(spectrum)
            }
            BoxGeometry::Cylinder { height, radius } => enumerate_cylinder(*height, *radius, e_max),
            BoxGeometry::RelativisticSquare { side } => enumerate_relativistic_square(*side, e_max),
        }
    }

    /// Spectrum holding at least `states` states; the cutoff starts at twice
    /// the ground energy and grows by half each try.
    pub fn enumerate_states(&self, states: u64) -> Result<Spectrum> {
        self.validate()?;
        let mut e_max = self.ground_energy_estimate() * 2.0;
        for _ in 0..200 {
            let spectrum = self.enumerate(e_max)?;
            if spectrum.total_states() >= states {
                return Ok(spectrum);
            }
            e_max *= 1.5;
        }
        Err(Error::NoConvergence {
            what: format!("cutoff search for {states} states"),
        })
    }

    fn ground_energy_estimate(&self) -> f64 {
        match self {
            BoxGeometry::Hyperbox { lengths } => lengths.iter().map(|l| 1.0 / (l * l)).sum(),
            BoxGeometry::Sphere { radius } => 1.0 / (radius * radius),
            BoxGeometry::Cylinder { height, radius } => {
                PI * PI / (height * height) + 5.78 / (radius * radius)
            }
            BoxGeometry::RelativisticSquare { side } => 2f64.sqrt() / side,
        }
    }
}

/// Integer weights `w_i` and scale `q` with `1 / L_i^2 = q w_i`, when the
/// squared inverse lengths are commensurate with small integer ratios.
/// `q` is tried as the smallest inverse square divided by 1, 2, ... 64.
fn integer_weights(lengths: &[f64]) -> Option<(f64, Vec<u64>)> {
    let inv: Vec<f64> = lengths.iter().map(|l| 1.0 / (l * l)).collect();
    let smallest = inv.iter().copied().fold(f64::INFINITY, f64::min);
    (1..=64u32).find_map(|k| {
        let q = smallest / k as f64;
        let weights = inv
            .iter()
            .map(|&v| {
                let ratio = v / q;
                let w = ratio.round();
                (w <= 1e6 && (ratio - w).abs() <= 1e-12 * ratio).then_some(w as u64)
            })
            .collect::<Option<Vec<u64>>>()?;
        Some((q, weights))
    })
}

/// All levels `sum (n_i / L_i)^2 <= e_max` with every `n_i >= 1`.
pub fn enumerate_hyperbox(lengths: &[f64], e_max: f64) -> Result<Spectrum> {
    if lengths.is_empty() {
        return Err(Error::invalid("D", "dimension must be at least 1"));
    }
    lengths.iter().try_for_each(|&l| check_length("lengths", l))?;
    check_cutoff(e_max)?;

    match integer_weights(lengths) {
        Some((q, weights)) => Ok(enumerate_hyperbox_exact(q, &weights, e_max)),
        None => Ok(enumerate_hyperbox_float(lengths, e_max)),
    }
}

fn isqrt(v: u64) -> u64 {
    let mut r = (v as f64).sqrt() as u64;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}

fn enumerate_hyperbox_exact(q: f64, weights: &[u64], e_max: f64) -> Spectrum {
    if e_max < 0.0 {
        return Spectrum::from_parts(Vec::new(), e_max, Some(q));
    }
    // largest integer key with key * q <= e_max
    let mut key_max = (e_max / q).floor() as u64;
    while (key_max + 1) as f64 * q <= e_max {
        key_max += 1;
    }
    while key_max > 0 && key_max as f64 * q > e_max {
        key_max -= 1;
    }
    // minimal contribution of dimensions i.. (all n = 1)
    let mut tail_min = vec![0u64; weights.len() + 1];
    for i in (0..weights.len()).rev() {
        tail_min[i] = tail_min[i + 1] + weights[i];
    }

    let mut states: Vec<(u64, QuantumNumbers)> = Vec::new();
    let mut tuple = vec![0u32; weights.len()];
    fn descend(
        dim: usize,
        committed: u64,
        key_max: u64,
        weights: &[u64],
        tail_min: &[u64],
        tuple: &mut Vec<u32>,
        out: &mut Vec<(u64, QuantumNumbers)>,
    ) {
        if dim == weights.len() {
            out.push((committed, tuple.clone()));
            return;
        }
        if committed + tail_min[dim] > key_max {
            return;
        }
        let budget = key_max - committed - tail_min[dim + 1];
        let n_max = isqrt(budget / weights[dim]);
        for n in 1..=n_max {
            tuple[dim] = n as u32;
            let key = committed + weights[dim] * n * n;
            descend(dim + 1, key, key_max, weights, tail_min, tuple, out);
        }
    }
    descend(0, 0, key_max, weights, &tail_min, &mut tuple, &mut states);
    states.sort_unstable();

    let mut levels: Vec<Level> = Vec::new();
    let mut last_key = None;
    for (key, label) in states {
        if last_key == Some(key) {
            let level = levels.last_mut().expect("level exists for repeated key");
            level.degeneracy += 1;
            level.labels.push(label);
        } else {
            levels.push(Level {
                energy: key as f64 * q,
                degeneracy: 1,
                labels: vec![label],
            });
            last_key = Some(key);
        }
    }
    Spectrum::from_parts(levels, e_max, Some(q))
}

fn enumerate_hyperbox_float(lengths: &[f64], e_max: f64) -> Spectrum {
    let inv: Vec<f64> = lengths.iter().map(|l| 1.0 / (l * l)).collect();
    let mut tail_min = vec![0.0; inv.len() + 1];
    for i in (0..inv.len()).rev() {
        tail_min[i] = tail_min[i + 1] + inv[i];
    }
    let mut states: Vec<(f64, QuantumNumbers)> = Vec::new();
    let mut tuple = vec![0u32; inv.len()];
    fn descend(
        dim: usize,
        committed: f64,
        e_max: f64,
        lengths: &[f64],
        inv: &[f64],
        tail_min: &[f64],
        tuple: &mut Vec<u32>,
        out: &mut Vec<(f64, QuantumNumbers)>,
    ) {
        if dim == inv.len() {
            out.push((committed, tuple.clone()));
            return;
        }
        let budget = e_max - committed - tail_min[dim + 1];
        if budget < inv[dim] {
            return;
        }
        // n <= L sqrt(budget); the explicit check absorbs rounding
        let n_max = (lengths[dim] * budget.sqrt()).floor() as u32 + 1;
        for n in 1..=n_max {
            let term = inv[dim] * (n as f64) * (n as f64);
            if committed + term + tail_min[dim + 1] > e_max {
                break;
            }
            tuple[dim] = n;
            descend(dim + 1, committed + term, e_max, lengths, inv, tail_min, tuple, out);
        }
    }
    descend(0, 0.0, e_max, lengths, &inv, &tail_min, &mut tuple, &mut states);
    states.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    let levels = merge_sorted(states.into_iter().map(|(e, t)| (e, 1, Some(t))));
    Spectrum::from_parts(levels, e_max, None)
}

/// Unit-volume sphere: every `(l, n)` with `k_ln <= k_max`.
pub fn enumerate_sphere(k_max: f64) -> Result<Spectrum> {
    enumerate_sphere_with_radius((3.0 / (4.0 * PI)).cbrt(), k_max)
}

/// Sphere of radius `radius`; levels `k_ln^2 / (pi R)^2` with degeneracy `2l + 1`.
pub fn enumerate_sphere_with_radius(radius: f64, k_max: f64) -> Result<Spectrum> {
    check_length("radius", radius)?;
    if !(k_max.is_finite() && k_max > 0.0) {
        return Err(Error::invalid("k_max", format!("must be positive, got {k_max}")));
    }
    let scale = 1.0 / (PI * radius).powi(2);
    let mut items: Vec<(f64, u64, Option<QuantumNumbers>)> = Vec::new();
    for l in 0u32.. {
        let zeros = bessel_zeros_below(BesselKind::Spherical, l, k_max)?;
        if zeros.is_empty() {
            // first zeros increase with l
            break;
        }
        for z in zeros {
            items.push((z.root * z.root * scale, 2 * l as u64 + 1, Some(vec![l, z.index])));
        }
    }
    items.sort_by(|a, b| a.0.total_cmp(&b.0));
    let e_max = k_max * k_max * scale;
    Ok(Spectrum::from_parts(merge_sorted(items), e_max, None))
}

/// Cylinder levels `q^2 pi^2 / H^2 + K_ln^2 / R^2` (units of `hbar^2 / 2M`);
/// degeneracy 2 for `l >= 1`. Labels are `(q, l, n)`.
pub fn enumerate_cylinder(height: f64, radius: f64, e_max: f64) -> Result<Spectrum> {
    check_length("height", height)?;
    check_length("radius", radius)?;
    check_cutoff(e_max)?;
    let axial = PI * PI / (height * height);
    let radial_budget = e_max - axial;
    if radial_budget <= 0.0 {
        return Ok(Spectrum::from_parts(Vec::new(), e_max, None));
    }
    let k_limit = radius * radial_budget.sqrt();
    let inv_r2 = 1.0 / (radius * radius);
    let mut items: Vec<(f64, u64, Option<QuantumNumbers>)> = Vec::new();
    for l in 0u32.. {
        let zeros = bessel_zeros_below(BesselKind::Ordinary, l, k_limit)?;
        if zeros.is_empty() {
            break;
        }
        let degeneracy = if l == 0 { 1 } else { 2 };
        for z in zeros {
            let radial = z.root * z.root * inv_r2;
            for q in 1u32.. {
                let energy = axial * (q as f64).powi(2) + radial;
                if energy > e_max {
                    break;
                }
                items.push((energy, degeneracy, Some(vec![q, l, z.index])));
            }
        }
    }
    items.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(Spectrum::from_parts(merge_sorted(items), e_max, None))
}

/// Square box with `energy = sqrt(nx^2 + ny^2) / side`.
pub fn enumerate_relativistic_square(side: f64, e_max: f64) -> Result<Spectrum> {
    check_length("side", side)?;
    check_cutoff(e_max)?;
    if e_max <= 0.0 {
        return Ok(Spectrum::from_parts(Vec::new(), e_max, None));
    }
    let energy_of = |s: u64| (s as f64).sqrt() / side;
    let mut s_max = ((e_max * side).powi(2)).floor() as u64;
    while energy_of(s_max + 1) <= e_max {
        s_max += 1;
    }
    while s_max > 0 && energy_of(s_max) > e_max {
        s_max -= 1;
    }
    let mut grouped: BTreeMap<u64, Vec<QuantumNumbers>> = BTreeMap::new();
    if s_max >= 2 {
        for nx in 1..=isqrt(s_max - 1) {
            let rest = s_max - nx * nx;
            for ny in 1..=isqrt(rest) {
                grouped
                    .entry(nx * nx + ny * ny)
                    .or_default()
                    .push(vec![nx as u32, ny as u32]);
            }
        }
    }
    let levels = grouped
        .into_iter()
        .map(|(s, labels)| Level {
            energy: energy_of(s),
            degeneracy: labels.len() as u64,
            labels,
        })
        .collect();
    Ok(Spectrum::from_parts(levels, e_max, None))
}

/// Seeded random spectrum with density `amplitude * e^exponent`.
///
/// Draws `count` uniform variates, sorts them and maps each through
/// `y = ((b + 1) count x / a)^(1 / (b + 1))`, which for `a = pi/4`,
/// `b = 1/2` is `((6/pi) count)^(2/3) x^(2/3)`.
pub fn random_power_spectrum_with_amplitude(
    count: usize,
    amplitude: f64,
    exponent: f64,
    seed: u64,
) -> Result<Spectrum> {
    if count < 1 {
        return Err(Error::invalid("count", "must be at least 1"));
    }
    if !(exponent.is_finite() && exponent > -1.0) {
        return Err(Error::invalid(
            "b",
            format!("density exponent must exceed -1, got {exponent}"),
        ));
    }
    check_length("a", amplitude)?;
    let power = 1.0 / (exponent + 1.0);
    let scale = ((exponent + 1.0) * count as f64 / amplitude).powf(power);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xs: Vec<f64> = (0..count).map(|_| rng.gen::<f64>()).collect();
    xs.sort_by(f64::total_cmp);
    let mut levels: Vec<Level> = Vec::with_capacity(count);
    for x in xs {
        let energy = scale * x.powf(power);
        match levels.last_mut() {
            Some(last) if last.energy == energy => last.degeneracy += 1,
            _ => levels.push(Level {
                energy,
                degeneracy: 1,
                labels: Vec::new(),
            }),
        }
    }
    Ok(Spectrum::from_parts(levels, scale, None))
}

/// [`random_power_spectrum_with_amplitude`] with the 3-D box amplitude `pi/4`.
pub fn random_power_spectrum(count: usize, exponent: f64, seed: u64) -> Result<Spectrum> {
    random_power_spectrum_with_amplitude(count, PI / 4.0, exponent, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_ground_state_only() {
        let s = enumerate_hyperbox(&[1.0, 1.0, 1.0], 3.0).unwrap();
        assert_eq!(s.levels().len(), 1);
        assert_eq!(s.levels()[0].energy, 3.0);
        assert_eq!(s.levels()[0].degeneracy, 1);
        assert_eq!(s.levels()[0].labels, vec![vec![1, 1, 1]]);
    }

    #[test]
    fn below_ground_state_is_empty() {
        let s = enumerate_hyperbox(&[1.0, 1.0, 1.0], 2.5).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn rejects_bad_boxes() {
        assert!(enumerate_hyperbox(&[], 10.0).is_err());
        assert!(enumerate_hyperbox(&[1.0, 0.0], 10.0).is_err());
        assert!(enumerate_hyperbox(&[1.0, -2.0], 10.0).is_err());
        assert!(enumerate_hyperbox(&[1.0], f64::NAN).is_err());
        assert!(enumerate_sphere(0.0).is_err());
        assert!(random_power_spectrum(10, -1.0, 1).is_err());
        assert!(random_power_spectrum(0, 0.5, 1).is_err());
    }

    #[test]
    fn one_dimensional_box_is_squares() {
        let s = enumerate_hyperbox(&[1.0], 400.0).unwrap();
        let energies: Vec<f64> = s.levels().iter().map(|l| l.energy).collect();
        let expect: Vec<f64> = (1..=20).map(|n| (n * n) as f64).collect();
        assert_eq!(energies, expect);
        assert!(s.levels().iter().all(|l| l.degeneracy == 1));
    }

    #[test]
    fn square_degeneracies() {
        let s = enumerate_hyperbox(&[1.0, 1.0], 100.0).unwrap();
        assert_eq!(s.degeneracy_at(65.0), 4);
        assert_eq!(s.degeneracy_at(36.0), 0);
        assert_eq!(s.degeneracy_at(50.0), 3);
        let level = s.levels().iter().find(|l| l.energy == 50.0).unwrap();
        let mut labels = level.labels.clone();
        labels.sort();
        assert_eq!(labels, vec![vec![1, 7], vec![5, 5], vec![7, 1]]);
    }

    #[test]
    fn commensurate_lengths_take_exact_path() {
        let s = enumerate_hyperbox(&[1.0, 0.5], 50.0).unwrap();
        assert_eq!(s.unit(), Some(1.0));
        // 1 + 4 = 5, 4 + 4 = 8, 9 + 4 = 13, 1 + 16 = 17
        let energies: Vec<f64> = s.levels().iter().take(4).map(|l| l.energy).collect();
        assert_eq!(energies, vec![5.0, 8.0, 13.0, 17.0]);
    }

    #[test]
    fn rectangle_ground_state() {
        let s = BoxGeometry::incommensurate_rectangle().enumerate(10.0).unwrap();
        let expect = 1.0 + E * E / 4.0 + 4.0 / (E * E);
        assert!((s.levels()[0].energy - expect).abs() < 1e-12);
        assert!((expect - 3.3886).abs() < 1e-4);
        assert_eq!(s.levels()[0].degeneracy, 1);
        assert!(s.unit().is_none());
    }

    #[test]
    fn sphere_levels() {
        let s = enumerate_sphere(20.0).unwrap();
        let ground = PI * PI / (3.0 * PI * PI / 4.0).powf(2.0 / 3.0);
        assert!((s.levels()[0].energy - ground).abs() < 1e-10 * ground);
        assert_eq!(s.levels()[0].labels, vec![vec![0, 1]]);
        let l2 = s.levels().iter().find(|l| l.labels.contains(&vec![2, 1])).unwrap();
        assert_eq!(l2.degeneracy, 5);
    }

    #[test]
    fn cylinder_degeneracy_by_azimuthal_order() {
        let s = enumerate_cylinder(1.0, 1.0, 200.0).unwrap();
        for level in s.levels() {
            let expect: u64 = level
                .labels
                .iter()
                .map(|t| if t[1] == 0 { 1 } else { 2 })
                .sum();
            assert_eq!(level.degeneracy, expect);
        }
        let k01 = 2.4048255576957724_f64;
        assert!((s.levels()[0].energy - (PI * PI + k01 * k01)).abs() < 1e-9);
    }

    #[test]
    fn relativistic_square_low_levels() {
        let s = enumerate_relativistic_square(1.0, 9.0).unwrap();
        assert!((s.levels()[0].energy - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(s.levels()[0].degeneracy, 1);
        assert_eq!(s.degeneracy_at(65f64.sqrt()), 4);
    }

    #[test]
    fn random_spectrum_scale_and_order() {
        let s = random_power_spectrum(500, 0.5, 7).unwrap();
        let scale = (6.0 / PI * 500.0).powf(2.0 / 3.0);
        assert!((s.e_max() - scale).abs() < 1e-9 * scale);
        assert_eq!(s.total_states(), 500);
        assert_eq!(s.distinct_levels(), 500);
        assert!(s.levels().iter().all(|l| l.energy <= scale));
        assert_eq!(s, random_power_spectrum(500, 0.5, 7).unwrap());
        assert_ne!(s, random_power_spectrum(500, 0.5, 8).unwrap());
    }

    #[test]
    fn unit_volume_constructors() {
        assert!(BoxGeometry::cube().is_unit_volume());
        assert!(BoxGeometry::incommensurate_rectangle().is_unit_volume());
        assert!(BoxGeometry::unit_sphere().is_unit_volume());
        assert!(BoxGeometry::unit_cylinder(0.3).is_unit_volume());
        let g = BoxGeometry::Hyperbox {
            lengths: vec![2.0, 3.0, 0.5],
        }
        .normalized();
        assert!(g.is_unit_volume());
    }

    #[test]
    fn from_levels_checks_order() {
        let level = |e| Level {
            energy: e,
            degeneracy: 1,
            labels: Vec::new(),
        };
        assert!(Spectrum::from_levels(vec![level(2.0), level(1.0)], 5.0).is_err());
        assert!(Spectrum::from_levels(vec![level(1.0), level(6.0)], 5.0).is_err());
        assert!(Spectrum::from_levels(vec![level(1.0), level(2.0)], 5.0).is_ok());
    }
}
