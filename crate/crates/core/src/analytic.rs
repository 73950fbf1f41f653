//! Closed-form level counting: Weyl's law in `D` dimensions, the beta
//! integral, the N-boson convolution model and its power-law solution.
//!
//! The convolution `g_N(E) = int_0^E g_{N-1}(E') g_1(E - E') dE'` counts
//! some N-boson states more than once. That is the model being reproduced,
//! so no exchange correction is applied.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specfun::HalfInteger;

/// Power-law density of states `g(E) = a E^b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticDos {
    pub a: f64,
    pub b: f64,
}

impl AnalyticDos {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::invalid("a", format!("must be positive, got {a}")));
        }
        if !(b.is_finite() && b > -1.0) {
            return Err(Error::invalid("b", format!("must exceed -1, got {b}")));
        }
        Ok(AnalyticDos { a, b })
    }

    pub fn density(&self, energy: f64) -> f64 {
        self.a * energy.powf(self.b)
    }

    /// `int_0^E g = a E^(b+1) / (b+1)`.
    pub fn cumulative(&self, energy: f64) -> f64 {
        self.a * energy.powf(self.b + 1.0) / (self.b + 1.0)
    }
}

fn check_dimension(dim: u32) -> Result<()> {
    if dim < 1 {
        return Err(Error::invalid("D", "dimension must be at least 1"));
    }
    Ok(())
}

/// `C_D = pi^(D/2) / (D/2)!`, the volume of the unit `D`-ball.
fn unit_ball(dim: u32) -> Result<f64> {
    let half = HalfInteger::from_twice(dim as i64);
    Ok(PI.powf(dim as f64 / 2.0) / half.factorial()?)
}

/// Volume of a `D`-ball of radius `radius`.
pub fn sphere_volume(dim: u32, radius: f64) -> Result<f64> {
    check_dimension(dim)?;
    if !(radius >= 0.0) {
        return Err(Error::invalid("R", format!("must be nonnegative, got {radius}")));
    }
    Ok(unit_ball(dim)? * radius.powi(dim as i32))
}

fn check_energy(energy: f64) -> Result<()> {
    if !(energy >= 0.0) {
        return Err(Error::invalid(
            "energy",
            format!("must be nonnegative, got {energy}"),
        ));
    }
    Ok(())
}

/// Smooth state count of a unit hypercube: `C_D e^(D/2) / 2^D`.
pub fn weyl_counting(dim: u32, energy: f64) -> Result<f64> {
    check_dimension(dim)?;
    check_energy(energy)?;
    Ok(unit_ball(dim)? / 2f64.powi(dim as i32) * energy.powf(dim as f64 / 2.0))
}

/// Derivative of [`weyl_counting`] with respect to energy.
pub fn weyl_dos(dim: u32, energy: f64) -> Result<f64> {
    check_dimension(dim)?;
    check_energy(energy)?;
    let d = dim as f64;
    Ok(d / 2.0 * unit_ball(dim)? / 2f64.powi(dim as i32) * energy.powf(d / 2.0 - 1.0))
}

/// Weyl counting law of a unit hypercube as a power law `N = alpha e^beta`.
pub fn weyl_power_law(dim: u32) -> Result<(f64, f64)> {
    check_dimension(dim)?;
    Ok((
        unit_ball(dim)? / 2f64.powi(dim as i32),
        dim as f64 / 2.0,
    ))
}

/// `int_0^E x^n (E - x)^m dx = n! m! / (n + m + 1)! E^(n + m + 1)`.
pub fn beta_integral(n: HalfInteger, m: HalfInteger, energy: f64) -> Result<f64> {
    for (name, v) in [("n", n), ("m", m)] {
        if v.twice() <= -2 {
            return Err(Error::invalid(
                name,
                format!("exponent {} makes the integral diverge", v.value()),
            ));
        }
    }
    check_energy(energy)?;
    let top = n + m + HalfInteger::from_int(1);
    let ratio = n.factorial()? * m.factorial()? / top.factorial()?;
    Ok(ratio * energy.powf(top.value()))
}

/// A density of states sampled at positive energies, interpolated as a
/// local power law (linear in log-log) and extrapolated the same way.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledDensity {
    points: Vec<(f64, f64)>,
}

impl SampledDensity {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InsufficientData(
                "sampled density needs at least two points".into(),
            ));
        }
        for &(e, g) in &points {
            if !(e > 0.0 && e.is_finite()) || !(g >= 0.0 && g.is_finite()) {
                return Err(Error::invalid(
                    "points",
                    format!("need positive energies and nonnegative densities, got ({e}, {g})"),
                ));
            }
        }
        if points.windows(2).any(|p| !(p[0].0 < p[1].0)) {
            return Err(Error::invalid("points", "energies must increase"));
        }
        Ok(SampledDensity { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    fn between(a: (f64, f64), b: (f64, f64), x: f64) -> f64 {
        if a.1 > 0.0 && b.1 > 0.0 {
            let slope = (b.1 / a.1).ln() / (b.0 / a.0).ln();
            a.1 * (x / a.0).powf(slope)
        } else {
            let t = (x - a.0) / (b.0 - a.0);
            (a.1 + t * (b.1 - a.1)).max(0.0)
        }
    }

    /// Log-log slope of the first two samples.
    pub fn leading_exponent(&self) -> f64 {
        let (a, b) = (self.points[0], self.points[1]);
        if a.1 > 0.0 && b.1 > 0.0 {
            (b.1 / a.1).ln() / (b.0 / a.0).ln()
        } else {
            0.0
        }
    }

    pub fn density(&self, energy: f64) -> f64 {
        let pts = &self.points;
        let n = pts.len();
        if energy <= 0.0 {
            let p = self.leading_exponent();
            return if p > 0.0 {
                0.0
            } else if p == 0.0 {
                pts[0].1
            } else {
                f64::INFINITY
            };
        }
        let idx = pts.partition_point(|p| p.0 < energy);
        match idx {
            0 => Self::between(pts[0], pts[1], energy),
            i if i >= n => Self::between(pts[n - 2], pts[n - 1], energy),
            i => Self::between(pts[i - 1], pts[i], energy),
        }
    }
}

/// Either a closed-form power law or sampled values.
#[derive(Debug, Clone, PartialEq)]
pub enum Density {
    PowerLaw(AnalyticDos),
    Sampled(SampledDensity),
}

impl Density {
    pub fn density(&self, energy: f64) -> f64 {
        match self {
            Density::PowerLaw(p) => {
                if energy <= 0.0 {
                    match p.b {
                        b if b > 0.0 => 0.0,
                        b if b == 0.0 => p.a,
                        _ => f64::INFINITY,
                    }
                } else {
                    p.density(energy)
                }
            }
            Density::Sampled(s) => s.density(energy),
        }
    }

    fn leading_exponent(&self) -> f64 {
        match self {
            Density::PowerLaw(p) => p.b,
            Density::Sampled(s) => s.leading_exponent(),
        }
    }
}

impl From<AnalyticDos> for Density {
    fn from(p: AnalyticDos) -> Self {
        Density::PowerLaw(p)
    }
}

impl From<SampledDensity> for Density {
    fn from(s: SampledDensity) -> Self {
        Density::Sampled(s)
    }
}

/// Quadrature controls for [`convolve_dos_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvolutionOptions {
    /// Initial Simpson intervals on each half of `[0, E]` (made even).
    pub intervals: usize,
    /// Accept once halving the step changes the result by at most this.
    pub rel_tol: f64,
    /// Maximum number of step halvings.
    pub max_refinements: u32,
}

impl Default for ConvolutionOptions {
    fn default() -> Self {
        ConvolutionOptions {
            intervals: 64,
            rel_tol: 1e-6,
            max_refinements: 12,
        }
    }
}

fn simpson<F: Fn(f64) -> f64>(f: &F, intervals: usize) -> f64 {
    let h = 1.0 / intervals as f64;
    let mut sum = f(0.0) + f(1.0);
    for k in 1..intervals {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(k as f64 * h);
    }
    sum * h / 3.0
}

/// Power of the substitution `x = (E/2) s^m` that removes an `x^p` endpoint
/// singularity.
fn substitution_power(p: f64) -> f64 {
    if p >= -0.5 {
        2.0
    } else {
        (1.0 / (p + 1.0)).ceil().max(2.0)
    }
}

/// `near(x) far(E - x)` over `x in [0, E/2]`, with `x = (E/2) s^m`.
struct HalfIntegrand<'a> {
    near: &'a Density,
    far: &'a Density,
    energy: f64,
    power: f64,
}

impl<'a> HalfIntegrand<'a> {
    fn new(near: &'a Density, far: &'a Density, energy: f64) -> Self {
        HalfIntegrand {
            near,
            far,
            energy,
            power: substitution_power(near.leading_exponent()),
        }
    }

    fn raw(&self, s: f64) -> f64 {
        let half = self.energy / 2.0;
        let m = self.power;
        let x = half * s.powf(m);
        self.near.density(x) * self.far.density(self.energy - x) * half * m * s.powf(m - 1.0)
    }

    fn at(&self, s: f64) -> f64 {
        let v = self.raw(s);
        if v.is_finite() {
            v
        } else {
            // integrable endpoint: take the limit
            self.raw(1e-12)
        }
    }
}

/// `int_0^E f(x) h(E - x) dx`. Each half of the interval is mapped onto
/// `s in [0, 1]` with `x = (E/2) s^m` measured from its singular end.
fn convolve_at(
    f: &Density,
    h: &Density,
    energy: f64,
    opts: &ConvolutionOptions,
) -> Result<f64> {
    if energy <= 0.0 {
        return Ok(0.0);
    }
    let left = HalfIntegrand::new(f, h, energy);
    let right = HalfIntegrand::new(h, f, energy);
    let left = |s: f64| left.at(s);
    let right = |s: f64| right.at(s);
    let total = |n: usize| simpson(&left, n) + simpson(&right, n);

    let mut intervals = opts.intervals.max(2);
    intervals += intervals % 2;
    let mut previous = total(intervals);
    let mut change = f64::INFINITY;
    for _ in 0..opts.max_refinements {
        intervals *= 2;
        let current = total(intervals);
        change = if current == 0.0 {
            (current - previous).abs()
        } else {
            ((current - previous) / current).abs()
        };
        previous = current;
        if change <= opts.rel_tol {
            return Ok(current);
        }
    }
    Err(Error::GridTooCoarse { energy, change })
}

/// Numerical `g_N(E) = int_0^E g_prev(E') g_1(E - E') dE'` on `grid`
/// (positive energies, ascending) with default quadrature options.
pub fn convolve_dos(prev: &Density, single: &Density, grid: &[f64]) -> Result<SampledDensity> {
    convolve_dos_with(prev, single, grid, &ConvolutionOptions::default())
}

pub fn convolve_dos_with(
    prev: &Density,
    single: &Density,
    grid: &[f64],
    opts: &ConvolutionOptions,
) -> Result<SampledDensity> {
    let points = grid
        .iter()
        .map(|&e| convolve_at(prev, single, e, opts).map(|g| (e, g)))
        .collect::<Result<Vec<_>>>()?;
    SampledDensity::new(points)
}

/// Applies [`convolve_dos`] `n - 1` times starting from `single`, giving the
/// sampled N-boson density on `grid`.
pub fn iterate_convolution(
    single: &AnalyticDos,
    n: u32,
    grid: &[f64],
    opts: &ConvolutionOptions,
) -> Result<SampledDensity> {
    if n < 1 {
        return Err(Error::invalid("N", "must be at least 1"));
    }
    let one = Density::PowerLaw(*single);
    let mut current = SampledDensity::new(grid.iter().map(|&e| (e, single.density(e))).collect())?;
    for _ in 1..n {
        current = convolve_dos_with(&Density::Sampled(current), &one, grid, opts)?;
    }
    Ok(current)
}

/// `g_N(E) = coefficient E^exponent` and `N_N(E) = alpha E^beta` for N
/// bosons on `g_1(E) = a E^b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NBosonClosedForm {
    pub n: u32,
    pub coefficient: f64,
    pub exponent: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl NBosonClosedForm {
    pub fn density(&self, energy: f64) -> f64 {
        self.coefficient * energy.powf(self.exponent)
    }

    pub fn cumulative(&self, energy: f64) -> f64 {
        self.alpha * energy.powf(self.beta)
    }

    pub fn ln_alpha(&self) -> f64 {
        self.alpha.ln()
    }
}

/// Iterated convolution of `a E^b` in closed form:
/// `g_N = b!^N a^N / (Nb + N - 1)! E^(Nb + N - 1)` and
/// `N_N = b!^N a^N / (Nb + N)! E^(Nb + N)`. `b` must be a multiple of 1/2.
pub fn nboson_closed_form(a: f64, b: f64, n: u32) -> Result<NBosonClosedForm> {
    let single = AnalyticDos::new(a, b)?;
    if n < 1 {
        return Err(Error::invalid("N", "must be at least 1"));
    }
    let b_half = HalfInteger::from_f64(single.b)?;
    let n_i = n as i64;
    // Nb + N - 1 and Nb + N
    let g_top = b_half * n_i + HalfInteger::from_int(n_i - 1);
    let n_top = b_half * n_i + HalfInteger::from_int(n_i);

    let direct = || -> Option<(f64, f64)> {
        let numerator = b_half.factorial().ok()?.powi(n as i32) * a.powi(n as i32);
        let coefficient = numerator / g_top.factorial().ok()?;
        let alpha = numerator / n_top.factorial().ok()?;
        (coefficient.is_normal() && alpha.is_normal()).then_some((coefficient, alpha))
    };
    let (coefficient, alpha) = match direct() {
        Some(v) => v,
        None => {
            let ln_num = n as f64 * (b_half.ln_factorial()? + a.ln());
            let coefficient = (ln_num - g_top.ln_factorial()?).exp();
            let alpha = (ln_num - n_top.ln_factorial()?).exp();
            if !(coefficient.is_normal() && alpha.is_normal()) {
                return Err(Error::Overflow {
                    what: format!("closed form for N = {n}, b = {b}"),
                });
            }
            (coefficient, alpha)
        }
    };
    Ok(NBosonClosedForm {
        n,
        coefficient,
        exponent: g_top.value(),
        alpha,
        beta: n_top.value(),
    })
}
