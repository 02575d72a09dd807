//! Closed-form comparators: the shallow-water dam-break solution, the
//! Whitham-modulation estimate of the leading wave of an undular bore, and
//! the phase velocity of the linearised Serre equations.

use crate::error::{Error, Result};

const BISECTION_TOL: f64 = 1e-13;
const BISECTION_MAX_ITER: usize = 200;

/// Bisection on `[lo, hi]` for a sign change of `f`. Stops when the bracket
/// is no wider than 1e-13 or after 200 halvings.
pub fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> Result<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Domain(format!(
            "no sign change on [{lo}, {hi}]: f = {f_lo}, {f_hi}"
        )));
    }
    for _ in 0..BISECTION_MAX_ITER {
        if hi - lo <= BISECTION_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Which part of the shallow-water dam-break wave a point lies in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwweRegion {
    /// Undisturbed upstream water.
    I,
    /// Rarefaction fan.
    II,
    /// Constant state behind `x_u2`.
    III,
    /// Constant state between `x_u2` and the shock.
    IV,
    /// Undisturbed downstream water.
    V,
}

/// Shallow-water dam-break solution for depths `h1` (left) over `h0` (right).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwweSolution {
    pub h0: f64,
    pub h1: f64,
    pub g: f64,
    pub x0: f64,
    /// Depth of the intermediate state.
    pub h2: f64,
    /// Velocity of the intermediate state.
    pub u2: f64,
    /// Shock speed.
    pub s2: f64,
}

/// Residual of the implicit relation for the intermediate depth; zero at `h2`.
pub fn swwe_h2_residual(h0: f64, h1: f64, h2: f64) -> f64 {
    let ratio = 2.0 * h2 / (h2 - h0) * (h1.sqrt() - h2.sqrt()) / h0.sqrt();
    0.5 * h0 * ((1.0 + 8.0 * ratio * ratio).sqrt() - 1.0) - h2
}

/// Solve the dam-break problem of the shallow water wave equations.
/// `x0` only enters the positional helpers.
pub fn solve_swwe_dambreak(h0: f64, h1: f64, g: f64, x0: f64) -> Result<SwweSolution> {
    if !(h0 > 0.0 && h1 > h0) {
        return Err(Error::Domain(format!(
            "dam break needs h1 > h0 > 0, got h0 = {h0}, h1 = {h1}"
        )));
    }
    // The residual is +inf at h0 and -h1 at h1.
    let lo = h0 + (h1 - h0) * f64::EPSILON;
    let h2 = bisect(lo, h1, |h2| swwe_h2_residual(h0, h1, h2))?;
    let u2 = 2.0 * ((g * h1).sqrt() - (g * h2).sqrt());
    let s2 = h2 * u2 / (h2 - h0);
    Ok(SwweSolution {
        h0,
        h1,
        g,
        x0,
        h2,
        u2,
        s2,
    })
}

impl SwweSolution {
    /// Position of the contact between regions III and IV: `x0 + u2 t`.
    pub fn x_u2(&self, t: f64) -> f64 {
        self.x0 + self.u2 * t
    }

    /// Shock position `x0 + S2 t`.
    pub fn x_s2(&self, t: f64) -> f64 {
        self.x0 + self.s2 * t
    }

    /// Head of the rarefaction fan, `x0 - t sqrt(g h1)`.
    pub fn x_fan_head(&self, t: f64) -> f64 {
        self.x0 - t * (self.g * self.h1).sqrt()
    }

    /// Tail of the rarefaction fan, where the fan velocity reaches `u2`.
    pub fn x_fan_tail(&self, t: f64) -> f64 {
        self.x0 + t * (1.5 * self.u2 - (self.g * self.h1).sqrt())
    }

    pub fn region(&self, x: f64, t: f64) -> SwweRegion {
        if x <= self.x_fan_head(t) {
            SwweRegion::I
        } else if x <= self.x_fan_tail(t) {
            SwweRegion::II
        } else if x <= self.x_u2(t) {
            SwweRegion::III
        } else if x <= self.x_s2(t) {
            SwweRegion::IV
        } else {
            SwweRegion::V
        }
    }

    /// `(h, u)` at `(x, t)` for `t > 0`. The fan uses the standard
    /// centred-rarefaction formulas in the similarity variable `(x - x0)/t`.
    pub fn profile(&self, x: f64, t: f64) -> (f64, f64) {
        match self.region(x, t) {
            SwweRegion::I => (self.h1, 0.0),
            SwweRegion::II => {
                let c1 = (self.g * self.h1).sqrt();
                let xi = (x - self.x0) / t;
                let c = 2.0 * c1 - xi;
                (c * c / (9.0 * self.g), 2.0 / 3.0 * (xi + c1))
            }
            SwweRegion::III | SwweRegion::IV => (self.h2, self.u2),
            SwweRegion::V => (self.h0, 0.0),
        }
    }
}

/// Whitham-modulation estimate of the leading wave.
///
/// The modulation relation is solved for a dimensionless amplitude `a`;
/// the crest depth is `h0 (1 + a)` and the speed `sqrt(g h0 (1 + a))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhithamPrediction {
    pub h0: f64,
    pub g: f64,
    pub x0: f64,
    /// Bore height `(h0/4)(sqrt(h1/h0) + 1)^2`.
    pub h_b: f64,
    /// `h_b / h0`.
    pub delta: f64,
    /// Dimensionless amplitude `a`.
    pub a_plus_dimless: f64,
    /// Crest depth of the leading wave, m.
    pub a_plus: f64,
    /// Speed of the leading wave, m/s.
    pub s_plus: f64,
}

impl WhithamPrediction {
    pub fn x_s_plus(&self, t: f64) -> f64 {
        self.x0 + self.s_plus * t
    }
}

/// `delta / (a+1)^(1/4) - (3/(4 - sqrt(a+1)))^(21/10) (2/(1 + sqrt(a+1)))^(2/5)`.
pub fn whitham_residual(delta: f64, a: f64) -> f64 {
    let s = (a + 1.0).sqrt();
    delta / (a + 1.0).powf(0.25) - (3.0 / (4.0 - s)).powf(2.1) * (2.0 / (1.0 + s)).powf(0.4)
}

pub fn whitham_leading_wave(h0: f64, h1: f64, g: f64, x0: f64) -> Result<WhithamPrediction> {
    if !(h0 > 0.0 && h1 > 0.0) {
        return Err(Error::Domain(format!(
            "depths must be positive, got h0 = {h0}, h1 = {h1}"
        )));
    }
    let r = (h1 / h0).sqrt() + 1.0;
    let h_b = 0.25 * h0 * r * r;
    let delta = h_b / h0;
    let a = if delta <= 1.0 {
        0.0
    } else {
        // The second term diverges as sqrt(a+1) -> 4, i.e. a -> 15.
        let hi = 15.0 - 1e-9;
        if whitham_residual(delta, hi) >= 0.0 {
            return Err(Error::Domain(format!(
                "bore ratio {delta} exceeds the range of the modulation relation"
            )));
        }
        bisect(0.0, hi, |a| whitham_residual(delta, a))?
    };
    Ok(WhithamPrediction {
        h0,
        g,
        x0,
        h_b,
        delta,
        a_plus_dimless: a,
        a_plus: h0 * (a + 1.0),
        s_plus: (g * h0 * (a + 1.0)).sqrt(),
    })
}

/// Which family of linear waves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// Phase velocity of the Serre equations linearised about `(h_bar, u_bar)`:
/// `u_bar ± sqrt(g h_bar) sqrt(3 / (h_bar^2 k^2 + 3))`.
pub fn phase_velocity(h_bar: f64, u_bar: f64, k: f64, g: f64, branch: Branch) -> f64 {
    let c = (g * h_bar).sqrt() * (3.0 / (h_bar * h_bar * k * k + 3.0)).sqrt();
    match branch {
        Branch::Plus => u_bar + c,
        Branch::Minus => u_bar - c,
    }
}
