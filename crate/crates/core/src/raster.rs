//! Backward-mapping renderer and PPM output.
//!
//! Every sub-sample is traced back through the scene to the undeformed base
//! pattern, so no grid state is carried between pixels. Rows are rendered in
//! parallel; each pixel depends only on its own coordinates, which keeps the
//! output identical for any thread count.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use crate::xform::{Point2, Rgb, Scene, Traced};

#[derive(Debug, Error)]
pub enum RasterError {
    #[error("viewport: {0}")]
    Viewport(&'static str),
    #[error("supersample factor must be 1, 2 or 4, got {0}")]
    Supersample(u32),
    #[error("cannot encode an empty image")]
    EmptyImage,
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

/// Physical rectangle mapped onto a pixel grid with square pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    /// Lower-left corner.
    pub min: Point2,
    pub width: f64,
    pub height: f64,
    pub pixels_x: u32,
    pub pixels_y: u32,
}

impl Viewport {
    pub fn new(min: Point2, width: f64, height: f64, pixels_x: u32, pixels_y: u32) -> Result<Self, RasterError> {
        let vp = Viewport {
            min,
            width,
            height,
            pixels_x,
            pixels_y,
        };
        vp.validate()?;
        Ok(vp)
    }

    pub fn validate(&self) -> Result<(), RasterError> {
        if !self.min.is_finite() {
            return Err(RasterError::Viewport("corner must be finite"));
        }
        if !(self.width > 0.0 && self.width.is_finite() && self.height > 0.0 && self.height.is_finite()) {
            return Err(RasterError::Viewport("width and height must be positive"));
        }
        if self.pixels_x == 0 || self.pixels_y == 0 {
            return Err(RasterError::Viewport("pixel counts must be at least 1"));
        }
        let sx = self.width / f64::from(self.pixels_x);
        let sy = self.height / f64::from(self.pixels_y);
        if (sx - sy).abs() > 1e-9 * sx.max(sy) {
            return Err(RasterError::Viewport("pixels must be square"));
        }
        Ok(())
    }

    /// Side length of one pixel in metres.
    pub fn pixel_size(&self) -> f64 {
        self.width / f64::from(self.pixels_x)
    }

    /// Physical position of fractional pixel coordinates; row 0 is the top.
    #[inline]
    pub fn to_world(&self, col: f64, row: f64) -> Point2 {
        Point2::new(
            self.min.x + col * self.width / f64::from(self.pixels_x),
            self.min.y + self.height - row * self.height / f64::from(self.pixels_y),
        )
    }

    /// Fractional pixel coordinates of a physical point; inverse of [`Viewport::to_world`].
    pub fn to_pixel(&self, p: Point2) -> (f64, f64) {
        (
            (p.x - self.min.x) * f64::from(self.pixels_x) / self.width,
            (self.min.y + self.height - p.y) * f64::from(self.pixels_y) / self.height,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Undeformed paint pattern the scene is traced back onto.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasePattern {
    Solid(Rgb),
    /// `first` on the negative side of the axis coordinate, `second` elsewhere.
    HalfPlane { axis: Axis, first: Rgb, second: Rgb },
    /// Bands across x of width `period / 2`, offset by `phase`.
    Stripes { period: f64, phase: f64, first: Rgb, second: Rgb },
    /// Concentric bands of width `period / 2`.
    Rings { center: Point2, period: f64, first: Rgb, second: Rgb },
    /// Squares of side `period / 2`.
    Checker { period: f64, first: Rgb, second: Rgb },
}

impl BasePattern {
    #[inline]
    pub fn color_at(&self, p: Point2) -> Rgb {
        let pick = |first_side: bool, a: Rgb, b: Rgb| if first_side { a } else { b };
        match *self {
            BasePattern::Solid(c) => c,
            BasePattern::HalfPlane { axis, first, second } => {
                let v = match axis {
                    Axis::X => p.x,
                    Axis::Y => p.y,
                };
                pick(v < 0.0, first, second)
            }
            BasePattern::Stripes {
                period,
                phase,
                first,
                second,
            } => pick(((p.x - phase) / period).rem_euclid(1.0) < 0.5, first, second),
            BasePattern::Rings {
                center,
                period,
                first,
                second,
            } => pick((p.distance(center) / period).rem_euclid(1.0) < 0.5, first, second),
            BasePattern::Checker { period, first, second } => {
                let cell = period * 0.5;
                let k = (p.x / cell).floor() + (p.y / cell).floor();
                pick(k.rem_euclid(2.0) == 0.0, first, second)
            }
        }
    }

    /// Flat color standing in for the pattern where a single color is needed.
    pub fn primary_color(&self) -> Rgb {
        match *self {
            BasePattern::Solid(c) => c,
            BasePattern::HalfPlane { first, .. }
            | BasePattern::Stripes { first, .. }
            | BasePattern::Rings { first, .. }
            | BasePattern::Checker { first, .. } => first,
        }
    }
}

/// RGB image, row-major, top row first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    pub width: u32,
    pub height: u32,
    pub data: Vec<u8>,
}

impl RasterImage {
    pub fn new(width: u32, height: u32, fill: Rgb) -> Self {
        let data = fill.0.repeat(width as usize * height as usize);
        RasterImage { width, height, data }
    }

    pub fn get(&self, col: u32, row: u32) -> Rgb {
        let i = 3 * (row as usize * self.width as usize + col as usize);
        Rgb([self.data[i], self.data[i + 1], self.data[i + 2]])
    }

    pub fn set(&mut self, col: u32, row: u32, c: Rgb) {
        let i = 3 * (row as usize * self.width as usize + col as usize);
        self.data[i..i + 3].copy_from_slice(&c.0);
    }

    /// Mean absolute per-channel difference; images must have equal size.
    pub fn mean_abs_diff(&self, other: &RasterImage) -> f64 {
        assert_eq!((self.width, self.height), (other.width, other.height));
        let total: u64 = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| u64::from(a.abs_diff(b)))
            .sum();
        total as f64 / self.data.len() as f64
    }
}

#[inline]
fn sample(scene: &Scene, base: &BasePattern, p: Point2) -> Rgb {
    match scene.trace_source(p) {
        Traced::Inside(c) => c,
        Traced::At(q) => base.color_at(q),
    }
}

fn render_row(scene: &Scene, base: &BasePattern, vp: &Viewport, n: u32, row: u32, out: &mut [u8]) {
    let count = n * n;
    let inv = 1.0 / f64::from(n);
    for col in 0..vp.pixels_x {
        let mut sum = [0u32; 3];
        for sy in 0..n {
            for sx in 0..n {
                let p = vp.to_world(
                    f64::from(col) + (f64::from(sx) + 0.5) * inv,
                    f64::from(row) + (f64::from(sy) + 0.5) * inv,
                );
                let c = sample(scene, base, p);
                for (s, v) in sum.iter_mut().zip(c.0) {
                    *s += u32::from(v);
                }
            }
        }
        let i = 3 * col as usize;
        for (k, s) in sum.iter().enumerate() {
            // round half up
            out[i + k] = ((s + count / 2) / count) as u8;
        }
    }
}

/// Render with `supersample²` stratified samples per pixel on the current rayon pool.
pub fn render(scene: &Scene, base: &BasePattern, vp: &Viewport, supersample: u32) -> Result<RasterImage, RasterError> {
    vp.validate()?;
    if !matches!(supersample, 1 | 2 | 4) {
        return Err(RasterError::Supersample(supersample));
    }
    let mut img = RasterImage::new(vp.pixels_x, vp.pixels_y, Rgb::BLACK);
    let stride = 3 * vp.pixels_x as usize;
    img.data
        .par_chunks_mut(stride)
        .enumerate()
        .for_each(|(row, out)| render_row(scene, base, vp, supersample, row as u32, out));
    Ok(img)
}

/// [`render`] on a dedicated pool of `threads` workers (`None` for the rayon default).
pub fn render_with_threads(
    scene: &Scene,
    base: &BasePattern,
    vp: &Viewport,
    supersample: u32,
    threads: Option<usize>,
) -> Result<RasterImage, RasterError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| RasterError::ThreadPool(e.to_string()))?;
    pool.install(|| render(scene, base, vp, supersample))
}

/// Binary PPM (`P6`) bytes.
pub fn encode_ppm(img: &RasterImage) -> Result<Vec<u8>, RasterError> {
    if img.width == 0 || img.height == 0 {
        return Err(RasterError::EmptyImage);
    }
    let header = format!("P6\n{} {}\n255\n", img.width, img.height);
    let mut bytes = Vec::with_capacity(header.len() + img.data.len());
    bytes.extend_from_slice(header.as_bytes());
    bytes.extend_from_slice(&img.data);
    Ok(bytes)
}

pub fn write_ppm(img: &RasterImage, path: &Path) -> Result<(), RasterError> {
    let bytes = encode_ppm(img)?;
    fs::write(path, bytes).map_err(|source| RasterError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Debug dump of where each pixel center's paint came from: `x,y,src_x,src_y`.
///
/// Pixels covered by a drop have empty source fields.
pub fn trace_csv(scene: &Scene, vp: &Viewport) -> String {
    let mut out = String::from("x,y,src_x,src_y\n");
    for row in 0..vp.pixels_y {
        for col in 0..vp.pixels_x {
            let p = vp.to_world(f64::from(col) + 0.5, f64::from(row) + 0.5);
            match scene.trace_source(p) {
                Traced::At(q) => writeln!(out, "{col},{row},{:e},{:e}", q.x, q.y),
                Traced::Inside(_) => writeln!(out, "{col},{row},,"),
            }
            .expect("writing to a String cannot fail");
        }
    }
    out
}
