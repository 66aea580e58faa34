//! Closed-form Lamb-Oseen vortex kinematics.
//!
//! The circumferential velocity of a decaying point vortex has no closed-form
//! time integral. The displacement used here blends its two asymptotic
//! regimes (early linear travel and the late `r / (4 nu)` plateau) with a
//! two-argument L^p norm at `p = -3/4`. Everything is SI: metres, seconds,
//! radians.

use std::f64::consts::PI;

use thiserror::Error;

use crate::xform::Point2;

/// Exponent of the norm that blends the short- and long-time regimes.
pub const NORM_EXPONENT: f64 = -0.75;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum DomainError {
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("norm exponent must be nonzero")]
    ZeroExponent,
    #[error("norm argument must be non-negative, got {0}")]
    NegativeArgument(f64),
    #[error("negative-exponent norm of a zero argument is undefined")]
    ZeroWithNegativeExponent,
    #[error("invalid vortex parameters: {0}")]
    Params(&'static str),
}

/// One impulse of circulation: strength, fluid, elapsed time and location.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VortexParams {
    /// Circulation in m²/s. The sign selects the sense of rotation.
    pub gamma: f64,
    /// Kinematic viscosity in m²/s.
    pub nu: f64,
    /// Time since the impulse in seconds.
    pub t: f64,
    pub center: Point2,
}

impl VortexParams {
    pub fn new(gamma: f64, nu: f64, t: f64, center: Point2) -> Result<Self, DomainError> {
        let params = VortexParams {
            gamma,
            nu,
            t,
            center,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), DomainError> {
        if !self.gamma.is_finite() {
            return Err(DomainError::Params("gamma must be finite"));
        }
        if !(self.nu > 0.0 && self.nu.is_finite()) {
            return Err(DomainError::Params("nu must be positive and finite"));
        }
        if !(self.t >= 0.0 && self.t.is_finite()) {
            return Err(DomainError::Params("t must be non-negative and finite"));
        }
        if !(self.center.x.is_finite() && self.center.y.is_finite()) {
            return Err(DomainError::Params("center must be finite"));
        }
        Ok(())
    }

    /// Same vortex with the circulation reversed.
    pub fn reversed(&self) -> Self {
        VortexParams {
            gamma: -self.gamma,
            ..*self
        }
    }

    /// Rotation every point approaches as `t` grows without bound, `gamma / (4 nu)`.
    pub fn saturation_angle(&self) -> f64 {
        self.gamma / (4.0 * self.nu)
    }
}

/// Two-argument L^p norm `(x^p + y^p)^(1/p)`.
pub fn lp_norm(x: f64, y: f64, p: f64) -> Result<f64, DomainError> {
    if p == 0.0 || p.is_nan() {
        return Err(DomainError::ZeroExponent);
    }
    for v in [x, y] {
        if v < 0.0 || v.is_nan() {
            return Err(DomainError::NegativeArgument(v));
        }
        if v == 0.0 && p < 0.0 {
            return Err(DomainError::ZeroWithNegativeExponent);
        }
    }
    Ok(norm_unchecked(x, y, p))
}

// Factor out the dominant argument so the ratio raised to `p` stays in [0, 1].
// Accepts +inf and, for p < 0, returns 0 when either argument is 0.
#[inline]
fn norm_unchecked(x: f64, y: f64, p: f64) -> f64 {
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    if p < 0.0 {
        if lo == 0.0 {
            return 0.0;
        }
        lo * (1.0 + (hi / lo).powf(p)).powf(1.0 / p)
    } else {
        if hi == 0.0 {
            return 0.0;
        }
        hi * (1.0 + (lo / hi).powf(p)).powf(1.0 / p)
    }
}

fn check_radius(r: f64) -> Result<(), DomainError> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(DomainError::NonPositiveRadius(r))
    }
}

/// Lamb-Oseen circumferential velocity `gamma/(2 pi r) * (1 - exp(-r²/(4 nu t)))`.
///
/// At `t = 0` the value is the limit `gamma / (2 pi r)`.
pub fn circumferential_velocity(p: &VortexParams, r: f64) -> Result<f64, DomainError> {
    check_radius(r)?;
    let scale = p.gamma / (2.0 * PI * r);
    if p.t == 0.0 {
        return Ok(scale);
    }
    let x = r * r / (4.0 * p.nu * p.t);
    Ok(scale * -(-x).exp_m1())
}

// 4 nu t / (2 pi r²), the single dimensionless group of the fit.
#[inline]
fn diffusion_ratio(p: &VortexParams, r: f64) -> f64 {
    4.0 * p.nu * p.t / (2.0 * PI * r * r)
}

/// Closed-form circumferential travel of fluid at radius `r` after time `t`.
pub fn displacement(p: &VortexParams, r: f64) -> Result<f64, DomainError> {
    check_radius(r)?;
    if p.t == 0.0 {
        return Ok(0.0);
    }
    let blend = (1.0 + diffusion_ratio(p, r).powf(0.75)).powf(-4.0 / 3.0);
    Ok(p.gamma * p.t / (2.0 * PI * r) * blend)
}

/// Time derivative of [`displacement`].
pub fn displacement_rate(p: &VortexParams, r: f64) -> Result<f64, DomainError> {
    check_radius(r)?;
    let scale = p.gamma / (2.0 * PI * r);
    if p.t == 0.0 {
        return Ok(scale);
    }
    Ok(scale * (1.0 + diffusion_ratio(p, r).powf(0.75)).powf(-7.0 / 3.0))
}

/// Rotation angle in radians of the fluid at radius `r`, `displacement / r`.
///
/// Finite everywhere: at `r = 0` (and `t > 0`) it takes the limit
/// `gamma / (4 nu)`; at `t = 0` it is zero.
#[inline]
pub fn angle(p: &VortexParams, r: f64) -> f64 {
    if p.t == 0.0 {
        return 0.0;
    }
    let zeta = if r == 0.0 {
        f64::INFINITY
    } else {
        p.t / (2.0 * PI * r * r)
    };
    p.gamma * norm_three_quarters(zeta, 1.0 / (4.0 * p.nu))
}

// `norm_unchecked(x, y, -3/4)` using roots instead of `powf`.
#[inline]
fn norm_three_quarters(x: f64, y: f64) -> f64 {
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    if lo == 0.0 {
        return 0.0;
    }
    if hi == f64::INFINITY {
        return lo;
    }
    let q = (hi / lo).sqrt().sqrt();
    let s = 1.0 + 1.0 / (q * q * q);
    let c = s.cbrt();
    let c2 = c * c;
    lo / (c2 * c2)
}
