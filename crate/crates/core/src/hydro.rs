//! Can a stylus in a marbling tank shed vortexes or pull a bubble?
//!
//! Small calculators for the Reynolds number of a moving stylus, the suction
//! behind it, the pressures that resist a bubble forming, and the spacing of
//! a Karman vortex street once shedding starts.

use std::f64::consts::PI;

use thiserror::Error;

/// Reynolds number above which a bluff body sheds alternating vortexes.
pub const SHEDDING_THRESHOLD: f64 = 90.0;

/// Upper validity limit of the drag correlation.
pub const DRAG_CORRELATION_MAX_RE: f64 = 800.0;

pub const STANDARD_GRAVITY: f64 = 9.81;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum HydroError {
    #[error("{0} must be positive and finite")]
    NonPositive(&'static str),
    #[error("degenerate geometry: {0}")]
    Geometry(&'static str),
    #[error("Reynolds number {0} is outside the drag correlation range (0, 800)")]
    DragRange(f64),
    #[error("Reynolds number {0} does not exceed 90; no vortex shedding")]
    NoShedding(f64),
}

fn positive(name: &'static str, v: f64) -> Result<f64, HydroError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(HydroError::NonPositive(name))
    }
}

fn non_negative(name: &'static str, v: f64) -> Result<f64, HydroError> {
    if v >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(HydroError::NonPositive(name))
    }
}

/// Tank liquid. SI units throughout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidProps {
    /// Kinematic viscosity, m²/s.
    pub nu: f64,
    /// Density, kg/m³.
    pub rho: f64,
    /// Surface tension, N/m.
    pub sigma: f64,
    /// Gravitational acceleration, m/s².
    pub g: f64,
}

impl FluidProps {
    pub const WATER: FluidProps = FluidProps {
        nu: 1e-6,
        rho: 997.0,
        sigma: 0.0728,
        g: STANDARD_GRAVITY,
    };

    /// Water with the viscosity replaced.
    pub fn water_with_viscosity(nu: f64) -> Self {
        FluidProps { nu, ..Self::WATER }
    }

    pub fn validate(&self) -> Result<(), HydroError> {
        positive("nu", self.nu)?;
        positive("rho", self.rho)?;
        positive("sigma", self.sigma)?;
        positive("g", self.g)?;
        Ok(())
    }
}

impl Default for FluidProps {
    fn default() -> Self {
        Self::WATER
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StylusShape {
    /// Upright cylinder (dowel) dipped into the liquid.
    Cylinder,
    Sphere,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StylusGeom {
    pub shape: StylusShape,
    pub diameter: f64,
    /// Submerged depth, m.
    pub depth: f64,
}

impl StylusGeom {
    pub fn new(shape: StylusShape, diameter: f64, depth: f64) -> Result<Self, HydroError> {
        let geom = StylusGeom {
            shape,
            diameter,
            depth,
        };
        geom.validate()?;
        Ok(geom)
    }

    pub fn validate(&self) -> Result<(), HydroError> {
        positive("diameter", self.diameter)?;
        if !(self.depth > 0.0 && self.depth.is_finite()) {
            return Err(HydroError::Geometry("submerged depth must be positive"));
        }
        if self.shape == StylusShape::Sphere && self.depth > self.diameter {
            return Err(HydroError::Geometry("sphere depth cannot exceed its diameter"));
        }
        Ok(())
    }
}

/// Submerged volume over wetted area.
///
/// A cylinder wets its side and bottom; a sphere wets a cap of height
/// `depth`. A cylinder dipped to its radius and a half-submerged sphere both
/// give `r / 3`.
pub fn characteristic_length(geom: &StylusGeom) -> Result<f64, HydroError> {
    geom.validate()?;
    let r = geom.diameter / 2.0;
    let h = geom.depth;
    let (volume, area) = match geom.shape {
        StylusShape::Cylinder => (PI * r * r * h, 2.0 * PI * r * h + PI * r * r),
        StylusShape::Sphere => (PI * h * h * (3.0 * r - h) / 3.0, 2.0 * PI * r * h),
    };
    Ok(volume / area)
}

pub fn reynolds(speed: f64, length: f64, nu: f64) -> Result<f64, HydroError> {
    Ok(positive("speed", speed)? * positive("length", length)? / positive("nu", nu)?)
}

/// Schiller-Naumann sphere drag, valid for `0 < Re < 800`.
pub fn drag_coefficient(re: f64) -> Result<f64, HydroError> {
    if !(re > 0.0 && re < DRAG_CORRELATION_MAX_RE) {
        return Err(HydroError::DragRange(re));
    }
    Ok(24.0 / re * (1.0 + 0.15 * re.powf(0.687)))
}

/// Drag force over frontal area: `C_D(Re) * rho V² / 2`, in N/m².
///
/// The frontal area cancels, so the diameter only enters through `re`; it is
/// still checked for validity.
pub fn drag_suction(speed: f64, diameter: f64, rho: f64, re: f64) -> Result<f64, HydroError> {
    positive("diameter", diameter)?;
    let head = positive("rho", rho)? * non_negative("speed", speed)?.powi(2) / 2.0;
    Ok(drag_coefficient(re)? * head)
}

/// Residual buoyancy of a half-submerged sphere over its cross-section, `rho g (2/3) r`.
pub fn buoyant_pressure(diameter: f64, rho: f64, g: f64) -> Result<f64, HydroError> {
    let r = positive("diameter", diameter)? / 2.0;
    Ok(positive("rho", rho)? * non_negative("g", g)? * 2.0 / 3.0 * r)
}

/// Surface tension acting across the stylus width over its frontal area, `4 sigma / (pi d)`.
pub fn surface_tension_pressure(diameter: f64, sigma: f64) -> Result<f64, HydroError> {
    let d = positive("diameter", diameter)?;
    Ok(non_negative("sigma", sigma)? * d / (PI * d * d / 4.0))
}

/// Suction must beat each restoring pressure on its own.
pub fn forms_bubble(suction: f64, buoyant: f64, surface: f64) -> bool {
    suction > buoyant && suction > surface
}

pub fn sheds_vortexes(re: f64) -> bool {
    re > SHEDDING_THRESHOLD
}

/// Roshko's low-Reynolds Strouhal law `0.212 (1 - 21.2 / Re)`.
pub fn strouhal(re: f64) -> Result<f64, HydroError> {
    if !sheds_vortexes(re) || !re.is_finite() {
        return Err(HydroError::NoShedding(re));
    }
    Ok(0.212 * (1.0 - 21.2 / re))
}

/// Distance travelled per shed vortex, `D / St(Re)`.
pub fn karman_spacing(diameter: f64, re: f64) -> Result<f64, HydroError> {
    let st = strouhal(re)?;
    Ok(positive("diameter", diameter)? / st)
}

/// Travel before the first vortex leaves the stylus: one street wavelength.
pub fn min_travel_before_shedding(diameter: f64, re: f64) -> Result<f64, HydroError> {
    karman_spacing(diameter, re)
}

/// Everything the CLI reports for one stylus moving through one liquid.
#[derive(Debug, Clone, PartialEq)]
pub struct StylusReport {
    pub geom: StylusGeom,
    pub fluid: FluidProps,
    pub speed: f64,
    pub characteristic_length: f64,
    /// Reynolds number on the characteristic length; drives drag and suction.
    pub reynolds: f64,
    /// Reynolds number on the diameter; drives shedding.
    pub reynolds_diameter: f64,
    pub drag_coefficient: Option<f64>,
    pub suction: Option<f64>,
    pub buoyant_pressure: f64,
    pub surface_tension_pressure: f64,
    pub forms_bubble: Option<bool>,
    pub sheds_vortexes: bool,
    pub karman_spacing: Option<f64>,
}

pub fn analyze(geom: &StylusGeom, fluid: &FluidProps, speed: f64) -> Result<StylusReport, HydroError> {
    fluid.validate()?;
    let length = characteristic_length(geom)?;
    let re = reynolds(speed, length, fluid.nu)?;
    let re_d = reynolds(speed, geom.diameter, fluid.nu)?;
    let drag = drag_coefficient(re).ok();
    let suction = drag_suction(speed, geom.diameter, fluid.rho, re).ok();
    let buoyant = buoyant_pressure(geom.diameter, fluid.rho, fluid.g)?;
    let surface = surface_tension_pressure(geom.diameter, fluid.sigma)?;
    Ok(StylusReport {
        geom: *geom,
        fluid: *fluid,
        speed,
        characteristic_length: length,
        reynolds: re,
        reynolds_diameter: re_d,
        drag_coefficient: drag,
        suction,
        buoyant_pressure: buoyant,
        surface_tension_pressure: surface,
        forms_bubble: suction.map(|s| forms_bubble(s, buoyant, surface)),
        sheds_vortexes: sheds_vortexes(re_d),
        karman_spacing: karman_spacing(geom.diameter, re_d).ok(),
    })
}
