//! Bessel functions of real argument, their positive zeros, and factorials
//! of half-integer arguments.
//!
//! Ordinary Bessel functions `J_l` are evaluated by Miller's backward
//! recurrence normalised with `J_0^2 + 2 sum J_k^2 = 1`. Spherical Bessel
//! functions `j_l` use upward recurrence from the closed trigonometric forms
//! when `x > l` and backward recurrence normalised with
//! `sum (2k+1) j_k^2 = 1` otherwise.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Which family of Bessel function a zero belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BesselKind {
    /// `J_l`, regular Bessel function of the first kind.
    Ordinary,
    /// `j_l(x) = sqrt(pi / 2x) J_{l+1/2}(x)`.
    Spherical,
}

/// The `index`-th positive zero of the order-`order` Bessel function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselZero {
    pub kind: BesselKind,
    pub order: u32,
    pub index: u32,
    pub root: f64,
}

/// Scan step used to bracket zeros. Consecutive zeros of both families are
/// never closer than ~3.1, so a step of pi/8 cannot step over a pair.
const SCAN_STEP: f64 = PI / 8.0;
const BISECTION_TOL: f64 = 1e-12;
const RESCALE_AT: f64 = 1e100;

/// Starting order for backward recurrence; well above both `l` and the
/// transition region around `x`.
fn miller_start(order: u32, x: f64) -> usize {
    let top = (order as f64).max(x);
    let m = top + 30.0 + 10.0 * top.cbrt();
    let m = m.ceil() as usize;
    m + (m & 1)
}

/// `J_l(x)` for `x >= 0`.
pub fn bessel_j(order: u32, x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x == 0.0 {
        return if order == 0 { 1.0 } else { 0.0 };
    }
    let start = miller_start(order, x);
    let two_over_x = 2.0 / x;
    // f_{k+1}, f_k
    let mut above = 0.0_f64;
    let mut current = 1e-30_f64;
    let mut sum_sq = 0.0_f64;
    let mut sum_even = 0.0_f64;
    let mut target = 0.0_f64;
    for k in (0..=start).rev() {
        if k as u32 == order {
            target = current;
        }
        if k == 0 {
            sum_sq += current * current;
            sum_even += current;
        } else {
            sum_sq += 2.0 * current * current;
            if k % 2 == 0 {
                sum_even += 2.0 * current;
            }
            let below = k as f64 * two_over_x * current - above;
            above = current;
            current = below;
            if current.abs() > RESCALE_AT {
                current /= RESCALE_AT;
                above /= RESCALE_AT;
                target /= RESCALE_AT;
                sum_even /= RESCALE_AT;
                sum_sq /= RESCALE_AT * RESCALE_AT;
            }
        }
    }
    // sum_even is the unnormalised image of J_0 + 2 sum J_2k = 1
    let sign = if sum_even < 0.0 { -1.0 } else { 1.0 };
    sign * target / sum_sq.sqrt()
}

fn spherical_j0(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

fn spherical_j1(x: f64) -> f64 {
    if x.abs() < 1e-3 {
        x / 3.0 - x * x * x / 30.0
    } else {
        (x.sin() / x - x.cos()) / x
    }
}

/// `j_l(x)` for `x >= 0`.
pub fn spherical_bessel_j(order: u32, x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x == 0.0 {
        return if order == 0 { 1.0 } else { 0.0 };
    }
    match order {
        0 => return spherical_j0(x),
        1 => return spherical_j1(x),
        _ => {}
    }
    if x > order as f64 {
        let mut prev = spherical_j0(x);
        let mut cur = spherical_j1(x);
        for k in 1..order {
            let next = (2 * k + 1) as f64 / x * cur - prev;
            prev = cur;
            cur = next;
        }
        return cur;
    }

    let start = miller_start(order, x);
    let mut above = 0.0_f64;
    let mut current = 1e-30_f64;
    let mut sum_sq = 0.0_f64;
    let mut target = 0.0_f64;
    let mut f1 = 0.0_f64;
    for k in (0..=start).rev() {
        if k as u32 == order {
            target = current;
        }
        if k == 1 {
            f1 = current;
        }
        sum_sq += (2 * k + 1) as f64 * current * current;
        if k == 0 {
            break;
        }
        let below = (2 * k + 1) as f64 / x * current - above;
        above = current;
        current = below;
        if current.abs() > RESCALE_AT {
            current /= RESCALE_AT;
            above /= RESCALE_AT;
            target /= RESCALE_AT;
            f1 /= RESCALE_AT;
            sum_sq /= RESCALE_AT * RESCALE_AT;
        }
    }
    let f0 = current;
    let (exact, unnormalised) = {
        let j0 = spherical_j0(x);
        let j1 = spherical_j1(x);
        if j0.abs() >= j1.abs() {
            (j0, f0)
        } else {
            (j1, f1)
        }
    };
    let sign = if exact * unnormalised < 0.0 { -1.0 } else { 1.0 };
    sign * target / sum_sq.sqrt()
}

fn evaluate(kind: BesselKind, order: u32, x: f64) -> f64 {
    match kind {
        BesselKind::Ordinary => bessel_j(order, x),
        BesselKind::Spherical => spherical_bessel_j(order, x),
    }
}

fn bisect(kind: BesselKind, order: u32, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut f_lo = evaluate(kind, order, lo);
    for _ in 0..200 {
        if hi - lo <= BISECTION_TOL {
            return Ok(0.5 * (lo + hi));
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = evaluate(kind, order, mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence {
        what: format!("{kind:?} Bessel zero of order {order} near {lo}"),
    })
}

/// Lazily scans upward from `max(l, 1)` yielding successive zeros.
struct ZeroScan {
    kind: BesselKind,
    order: u32,
    x: f64,
    fx: f64,
}

impl ZeroScan {
    fn new(kind: BesselKind, order: u32) -> Self {
        let x = (order as f64).max(1.0);
        ZeroScan {
            kind,
            order,
            x,
            fx: evaluate(kind, order, x),
        }
    }

    /// Next zero, or `None` once the scan passes `limit`.
    fn next_below(&mut self, limit: f64) -> Result<Option<f64>> {
        while self.x <= limit {
            let next_x = self.x + SCAN_STEP;
            let next_f = evaluate(self.kind, self.order, next_x);
            let (lo, f_lo) = (self.x, self.fx);
            self.x = next_x;
            self.fx = next_f;
            if f_lo == 0.0 {
                return Ok(Some(lo));
            }
            if (f_lo < 0.0) != (next_f < 0.0) {
                return bisect(self.kind, self.order, lo, next_x).map(Some);
            }
        }
        Ok(None)
    }
}

/// The `n`-th positive zero (1-based) of `J_l` or `j_l`.
pub fn bessel_zero(kind: BesselKind, order: u32, index: u32) -> Result<BesselZero> {
    if index < 1 {
        return Err(Error::invalid("n", "zero index must be at least 1"));
    }
    // McMahon: zeros sit near pi (n + nu/2 - 1/4); allow generous slack.
    let nu = match kind {
        BesselKind::Ordinary => order as f64,
        BesselKind::Spherical => order as f64 + 0.5,
    };
    let limit = PI * (index as f64 + nu / 2.0 + 2.0) + 2.0 * nu + 10.0;
    let mut scan = ZeroScan::new(kind, order);
    let mut found = 0;
    while let Some(root) = scan.next_below(limit)? {
        found += 1;
        if found == index {
            return Ok(BesselZero {
                kind,
                order,
                index,
                root,
            });
        }
    }
    Err(Error::NoConvergence {
        what: format!("{kind:?} Bessel zero ({order}, {index}): scan passed {limit}"),
    })
}

/// All positive zeros of `J_l` or `j_l` that are `<= x_max`, ascending.
pub fn bessel_zeros_below(kind: BesselKind, order: u32, x_max: f64) -> Result<Vec<BesselZero>> {
    let mut scan = ZeroScan::new(kind, order);
    let mut zeros = Vec::new();
    while let Some(root) = scan.next_below(x_max)? {
        if root > x_max {
            break;
        }
        zeros.push(BesselZero {
            kind,
            order,
            index: zeros.len() as u32 + 1,
            root,
        });
    }
    Ok(zeros)
}

/// A number of the form `k / 2` for integer `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInteger {
    twice: i64,
}

impl HalfInteger {
    pub const fn from_twice(twice: i64) -> Self {
        HalfInteger { twice }
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInteger { twice: 2 * n }
    }

    /// Accepts `x` when `2x` is within 1e-9 of an integer.
    pub fn from_f64(x: f64) -> Result<Self> {
        let twice = (2.0 * x).round();
        if !x.is_finite() || (2.0 * x - twice).abs() > 1e-9 || twice.abs() > 1e15 {
            return Err(Error::invalid("x", format!("{x} is not a multiple of 1/2")));
        }
        Ok(HalfInteger {
            twice: twice as i64,
        })
    }

    pub fn twice(self) -> i64 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// `Gamma(x + 1)`.
    pub fn factorial(self) -> Result<f64> {
        if self.twice < -1 {
            return Err(Error::invalid(
                "x",
                format!("factorial undefined for {} < -1/2", self.value()),
            ));
        }
        let value = if self.twice % 2 == 0 {
            (1..=self.twice / 2).map(|k| k as f64).product::<f64>()
        } else {
            // (m + 1/2)! = sqrt(pi) * prod_{j=0}^{m} (j + 1/2)
            let m = (self.twice - 1) / 2;
            PI.sqrt() * (0..=m).map(|j| j as f64 + 0.5).product::<f64>()
        };
        if !value.is_finite() {
            return Err(Error::Overflow {
                what: format!("({})!", self.value()),
            });
        }
        Ok(value)
    }
}

impl HalfInteger {
    /// `ln Gamma(x + 1)`, finite for any admissible `x`.
    pub fn ln_factorial(self) -> Result<f64> {
        if self.twice < -1 {
            return Err(Error::invalid(
                "x",
                format!("factorial undefined for {} < -1/2", self.value()),
            ));
        }
        Ok(if self.twice % 2 == 0 {
            (1..=self.twice / 2).map(|k| (k as f64).ln()).sum()
        } else {
            let m = (self.twice - 1) / 2;
            0.5 * PI.ln() + (0..=m).map(|j| (j as f64 + 0.5).ln()).sum::<f64>()
        })
    }
}

impl std::ops::Add for HalfInteger {
    type Output = HalfInteger;
    fn add(self, rhs: HalfInteger) -> HalfInteger {
        HalfInteger::from_twice(self.twice + rhs.twice)
    }
}

impl std::ops::Mul<i64> for HalfInteger {
    type Output = HalfInteger;
    fn mul(self, rhs: i64) -> HalfInteger {
        HalfInteger::from_twice(self.twice * rhs)
    }
}

/// `Gamma(x + 1)` for `x` a multiple of 1/2 with `x >= -1/2`.
pub fn half_integer_factorial(x: f64) -> Result<f64> {
    HalfInteger::from_f64(x)?.factorial()
}
