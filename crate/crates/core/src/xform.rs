//! Invertible plane deformations and scenes built from them.
//!
//! Each map has a closed-form inverse because it preserves some distance:
//! vortexes and circle strokes preserve the radius about their center, line
//! strokes preserve the distance to their axis. Drops are the exception in
//! that their inverse can land inside the drop, where the paint is the drop's
//! own color.

use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::vortexmath::{self, VortexParams};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// 2-D cross product `self.x * other.y - self.y * other.x`.
    #[inline]
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    /// Row vector times `[[cos a, sin a], [-sin a, cos a]]`.
    ///
    /// This is a counterclockwise rotation by `a` in a y-up frame.
    #[inline]
    pub fn rotated(self, a: f64) -> Point2 {
        let (s, c) = a.sin_cos();
        Point2 {
            x: self.x * c - self.y * s,
            y: self.x * s + self.y * c,
        }
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    #[inline]
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    #[inline]
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    #[inline]
    fn mul(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    #[inline]
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// 8-bit sRGB triple, treated as plain bytes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Rgb(pub [u8; 3]);

impl Rgb {
    pub const BLACK: Rgb = Rgb([0, 0, 0]);
    pub const WHITE: Rgb = Rgb([255, 255, 255]);

    pub const fn new(r: u8, g: u8, b: u8) -> Self {
        Rgb([r, g, b])
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum XformError {
    #[error("{0} must be positive and finite")]
    NonPositive(&'static str),
    #[error("{0} must be finite")]
    NonFinite(&'static str),
    #[error("direction vector is zero")]
    ZeroDirection,
    #[error(transparent)]
    Vortex(#[from] vortexmath::DomainError),
}

fn positive(name: &'static str, v: f64) -> Result<(), XformError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(XformError::NonPositive(name))
    }
}

fn finite_point(name: &'static str, p: Point2) -> Result<(), XformError> {
    if p.is_finite() {
        Ok(())
    } else {
        Err(XformError::NonFinite(name))
    }
}

/// Stylus drawn along a straight line.
///
/// Paint at perpendicular distance `d` from the line moves parallel to it by
/// `z * lambda / (lambda + d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineStroke {
    pub origin: Point2,
    direction: Point2,
    pub z: f64,
    pub lambda: f64,
}

/// Normalise a direction, leaving vectors that are already unit length untouched.
pub fn normalize_direction(d: Point2) -> Result<Point2, XformError> {
    if !d.is_finite() {
        return Err(XformError::NonFinite("direction"));
    }
    let n = d.norm();
    if n == 0.0 {
        return Err(XformError::ZeroDirection);
    }
    if (n - 1.0).abs() <= 4.0 * f64::EPSILON {
        Ok(d)
    } else {
        Ok(d * (1.0 / n))
    }
}

impl LineStroke {
    /// `direction` need not be unit length; it is normalised here.
    pub fn new(origin: Point2, direction: Point2, z: f64, lambda: f64) -> Result<Self, XformError> {
        finite_point("origin", origin)?;
        if !z.is_finite() {
            return Err(XformError::NonFinite("z"));
        }
        positive("lambda", lambda)?;
        Ok(LineStroke {
            origin,
            direction: normalize_direction(direction)?,
            z,
            lambda,
        })
    }

    pub fn direction(&self) -> Point2 {
        self.direction
    }

    #[inline]
    fn shift(&self, p: Point2) -> Point2 {
        let d = self.direction.cross(p - self.origin).abs();
        self.direction * (self.z * self.lambda / (self.lambda + d))
    }

    #[inline]
    pub fn forward(&self, p: Point2) -> Point2 {
        p + self.shift(p)
    }

    #[inline]
    pub fn inverse(&self, p: Point2) -> Point2 {
        p - self.shift(p)
    }
}

/// Stylus circling `center` at radius `radius`.
///
/// Paint at distance `d` from the circle is rotated about the center by
/// `z * lambda / (lambda + d)`; positive `z` is counterclockwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleStroke {
    pub center: Point2,
    pub radius: f64,
    pub z: f64,
    pub lambda: f64,
}

impl CircleStroke {
    pub fn new(center: Point2, radius: f64, z: f64, lambda: f64) -> Result<Self, XformError> {
        finite_point("center", center)?;
        positive("radius", radius)?;
        if !z.is_finite() {
            return Err(XformError::NonFinite("z"));
        }
        positive("lambda", lambda)?;
        Ok(CircleStroke {
            center,
            radius,
            z,
            lambda,
        })
    }

    #[inline]
    pub fn sweep(&self, r: f64) -> f64 {
        self.z * self.lambda / (self.lambda + (r - self.radius).abs())
    }

    #[inline]
    pub fn forward(&self, p: Point2) -> Point2 {
        let v = p - self.center;
        self.center + v.rotated(self.sweep(v.norm()))
    }

    #[inline]
    pub fn inverse(&self, p: Point2) -> Point2 {
        let v = p - self.center;
        self.center + v.rotated(-self.sweep(v.norm()))
    }
}

/// Paint drop of radius `rho` that pushes existing paint outward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Drop {
    pub center: Point2,
    pub rho: f64,
    pub color: Rgb,
}

impl Drop {
    pub fn new(center: Point2, rho: f64, color: Rgb) -> Result<Self, XformError> {
        finite_point("center", center)?;
        positive("rho", rho)?;
        Ok(Drop { center, rho, color })
    }

    /// Undefined at the center itself, where `None` is returned.
    pub fn forward(&self, p: Point2) -> Option<Point2> {
        let v = p - self.center;
        let d2 = v.dot(v);
        if d2 == 0.0 {
            return None;
        }
        Some(self.center + v * (1.0 + self.rho * self.rho / d2).sqrt())
    }

    #[inline]
    pub fn inverse(&self, p: Point2) -> Traced {
        let v = p - self.center;
        let d2 = v.dot(v);
        let rho2 = self.rho * self.rho;
        if d2 <= rho2 {
            Traced::Inside(self.color)
        } else {
            Traced::At(self.center + v * (1.0 - rho2 / d2).sqrt())
        }
    }
}

/// Outcome of pulling a point back through a deformation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Traced {
    At(Point2),
    /// The point lies in paint deposited by a drop of this color.
    Inside(Rgb),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Deformation {
    Vortex(VortexParams),
    Line(LineStroke),
    Circle(CircleStroke),
    Drop(Drop),
}

#[inline]
pub fn vortex_forward(p: Point2, v: &VortexParams) -> Point2 {
    let rel = p - v.center;
    v.center + rel.rotated(vortexmath::angle(v, rel.norm()))
}

#[inline]
pub fn vortex_inverse(p: Point2, v: &VortexParams) -> Point2 {
    let rel = p - v.center;
    v.center + rel.rotated(-vortexmath::angle(v, rel.norm()))
}

impl Deformation {
    /// Push a point forward. `None` only for the center of a drop.
    pub fn forward(&self, p: Point2) -> Option<Point2> {
        match self {
            Deformation::Vortex(v) => Some(vortex_forward(p, v)),
            Deformation::Line(s) => Some(s.forward(p)),
            Deformation::Circle(s) => Some(s.forward(p)),
            Deformation::Drop(d) => d.forward(p),
        }
    }

    #[inline]
    pub fn inverse(&self, p: Point2) -> Traced {
        match self {
            Deformation::Vortex(v) => Traced::At(vortex_inverse(p, v)),
            Deformation::Line(s) => Traced::At(s.inverse(p)),
            Deformation::Circle(s) => Traced::At(s.inverse(p)),
            Deformation::Drop(d) => d.inverse(p),
        }
    }
}

/// Ordered deformations over a background; earliest step first.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Scene {
    pub background: Rgb,
    pub steps: Vec<Deformation>,
}

impl Scene {
    pub fn new(background: Rgb) -> Self {
        Scene {
            background,
            steps: Vec::new(),
        }
    }

    pub fn push(&mut self, step: Deformation) -> &mut Self {
        self.steps.push(step);
        self
    }

    /// Walk the steps backwards from `p` to where its paint came from.
    #[inline]
    pub fn trace_source(&self, p: Point2) -> Traced {
        let mut q = p;
        for step in self.steps.iter().rev() {
            match step.inverse(q) {
                Traced::At(next) => q = next,
                inside @ Traced::Inside(_) => return inside,
            }
        }
        Traced::At(q)
    }

    /// Color at `p` when the untouched surface is the flat background.
    pub fn trace_back(&self, p: Point2) -> Rgb {
        match self.trace_source(p) {
            Traced::Inside(c) => c,
            Traced::At(_) => self.background,
        }
    }
}
