//! Numerical reference for the closed-form displacement.
//!
//! The velocity law is integrated over time with a globally adaptive
//! 7/15-point Gauss-Kronrod rule. Nothing here calls into the closed-form
//! displacement; the fit report is the only place where the two meet.

use std::collections::BinaryHeap;
use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::vortexmath::{self, DomainError, VortexParams};
use crate::xform::Point2;

/// Evaluation budget for one integral.
pub const DEFAULT_MAX_EVALUATIONS: usize = 1_000_000;

/// Floor of the denominator in relative errors.
pub const REL_ERROR_FLOOR: f64 = 1e-300;

pub const FIT_CSV_HEADER: &str = "gamma,nu,r,t,fit,oracle,rel_error";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("relative tolerance must lie in (0, 1e-2), got {0}")]
    InvalidTolerance(f64),
    #[error("integration interval [{0}, {1}] is invalid")]
    InvalidInterval(f64, f64),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(
        "no convergence after {evaluations} evaluations: estimate {estimate:e} +/- {error:e}, \
         worst interval [{worst_lo:e}, {worst_hi:e}] with error {worst_error:e}"
    )]
    NoConvergence {
        evaluations: usize,
        estimate: f64,
        error: f64,
        worst_lo: f64,
        worst_hi: f64,
        worst_error: f64,
    },
}

/// Integral value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

// Kronrod abscissae on [0, 1] half of the symmetric rule; odd indices are the Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let dx = half * x;
        let sum = f(center - dx) + f(center + dx);
        kronrod += w * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive Gauss-Kronrod integration of `f` over `[a, b]`.
///
/// Bisects the interval with the largest error estimate until the summed
/// estimate falls below `rel_tol * |value|`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    max_evaluations: usize,
) -> Result<Quadrature, QuadratureError> {
    if !(rel_tol > 0.0 && rel_tol < 1e-2) {
        return Err(QuadratureError::InvalidTolerance(rel_tol));
    }
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(QuadratureError::InvalidInterval(a, b));
    }
    let mut heap = BinaryHeap::new();
    let (value, error) = kronrod15(&f, a, b);
    heap.push(Segment {
        lo: a,
        hi: b,
        value,
        error,
    });
    let mut evaluations = 15;
    let mut total = value;
    let mut total_error = error;
    loop {
        if total_error <= rel_tol * total.abs() || total_error <= f64::MIN_POSITIVE {
            // re-sum to shed drift from the running updates
            let (value, error) = heap
                .iter()
                .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
            if error <= rel_tol * value.abs() || error <= f64::MIN_POSITIVE {
                return Ok(Quadrature {
                    value,
                    error,
                    evaluations,
                });
            }
            total = value;
            total_error = error;
        }
        let worst = heap.pop().expect("heap holds at least one segment");
        let mid = 0.5 * (worst.lo + worst.hi);
        if evaluations + 30 > max_evaluations || !(worst.lo < mid && mid < worst.hi) {
            return Err(QuadratureError::NoConvergence {
                evaluations,
                estimate: total,
                error: total_error,
                worst_lo: worst.lo,
                worst_hi: worst.hi,
                worst_error: worst.error,
            });
        }
        let (lv, le) = kronrod15(&f, worst.lo, mid);
        let (rv, re) = kronrod15(&f, mid, worst.hi);
        evaluations += 30;
        total += lv + rv - worst.value;
        total_error += le + re - worst.error;
        heap.push(Segment {
            lo: worst.lo,
            hi: mid,
            value: lv,
            error: le,
        });
        heap.push(Segment {
            lo: mid,
            hi: worst.hi,
            value: rv,
            error: re,
        });
    }
}

/// Integral of the circumferential velocity over `[t0, t1]` at radius `r`.
///
/// Uses `p.gamma`, `p.nu`; `p.t` is ignored.
pub fn integrate_velocity(
    p: &VortexParams,
    r: f64,
    t0: f64,
    t1: f64,
    tol: f64,
) -> Result<Quadrature, QuadratureError> {
    p.validate()?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(DomainError::NonPositiveRadius(r).into());
    }
    if t0.is_nan() || t0 < 0.0 {
        return Err(QuadratureError::InvalidInterval(t0, t1));
    }
    let scale = p.gamma / (2.0 * PI * r);
    let s = r * r / (4.0 * p.nu);
    // velocity law written out directly; tau = 0 is the bounded limit
    let velocity = move |tau: f64| {
        if tau <= 0.0 {
            scale
        } else {
            scale * -(-s / tau).exp_m1()
        }
    };
    integrate(velocity, t0, t1, tol, DEFAULT_MAX_EVALUATIONS)
}

/// Numerical circumferential travel `int_0^t u_theta(r, tau) d tau`.
pub fn integrate_displacement(p: &VortexParams, r: f64, tol: f64) -> Result<f64, QuadratureError> {
    integrate_displacement_detailed(p, r, tol).map(|q| q.value)
}

pub fn integrate_displacement_detailed(
    p: &VortexParams,
    r: f64,
    tol: f64,
) -> Result<Quadrature, QuadratureError> {
    if p.t.is_nan() || p.t <= 0.0 {
        return Err(QuadratureError::InvalidInterval(0.0, p.t));
    }
    integrate_velocity(p, r, 0.0, p.t, tol)
}

/// One grid point of the closed-form vs. quadrature comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitSample {
    pub gamma: f64,
    pub nu: f64,
    pub r: f64,
    pub t: f64,
    pub fit_value: f64,
    pub oracle_value: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("row gamma={gamma:e} nu={nu:e} r={r:e} t={t:e}: {source}")]
pub struct RowFailure {
    pub gamma: f64,
    pub nu: f64,
    pub r: f64,
    pub t: f64,
    pub source: QuadratureError,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    /// Gamma-major, then nu, r, t.
    pub rows: Vec<Result<FitSample, RowFailure>>,
}

impl FitReport {
    pub fn samples(&self) -> impl Iterator<Item = &FitSample> {
        self.rows.iter().filter_map(|r| r.as_ref().ok())
    }

    pub fn failures(&self) -> impl Iterator<Item = &RowFailure> {
        self.rows.iter().filter_map(|r| r.as_ref().err())
    }

    pub fn max_rel_error(&self) -> Option<f64> {
        self.samples().map(|s| s.rel_error).reduce(f64::max)
    }

    pub fn mean_rel_error(&self) -> Option<f64> {
        let (sum, n) = self
            .samples()
            .fold((0.0, 0usize), |(sum, n), s| (sum + s.rel_error, n + 1));
        (n > 0).then(|| sum / n as f64)
    }

    /// The worst-fitting row.
    pub fn worst(&self) -> Option<&FitSample> {
        self.samples()
            .max_by(|a, b| a.rel_error.total_cmp(&b.rel_error))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(FIT_CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            match row {
                Ok(s) => writeln!(
                    out,
                    "{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
                    s.gamma, s.nu, s.r, s.t, s.fit_value, s.oracle_value, s.rel_error
                ),
                Err(f) => writeln!(out, "{:e},{:e},{:e},{:e},,,", f.gamma, f.nu, f.r, f.t),
            }
            .expect("writing to a String cannot fail");
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("{0} grid is empty")]
    Empty(&'static str),
    #[error("{name} grid value {value} must be positive and finite")]
    NonPositive { name: &'static str, value: f64 },
}

fn check_grid(name: &'static str, values: &[f64], allow_negative: bool) -> Result<(), GridError> {
    if values.is_empty() {
        return Err(GridError::Empty(name));
    }
    for &value in values {
        let ok = value.is_finite() && if allow_negative { value != 0.0 } else { value > 0.0 };
        if !ok {
            return Err(GridError::NonPositive { name, value });
        }
    }
    Ok(())
}

/// Evaluate fit and quadrature over the Cartesian product of the grids.
///
/// Gamma may be negative (either sense of rotation). Rows are computed in
/// parallel; their order does not depend on the schedule.
pub fn fit_error_report(
    gammas: &[f64],
    nus: &[f64],
    radii: &[f64],
    times: &[f64],
    tol: f64,
) -> Result<FitReport, GridError> {
    check_grid("gamma", gammas, true)?;
    check_grid("nu", nus, false)?;
    check_grid("r", radii, false)?;
    check_grid("t", times, false)?;

    let mut points = Vec::with_capacity(gammas.len() * nus.len() * radii.len() * times.len());
    for &gamma in gammas {
        for &nu in nus {
            for &r in radii {
                for &t in times {
                    points.push((gamma, nu, r, t));
                }
            }
        }
    }

    let rows = points
        .par_iter()
        .map(|&(gamma, nu, r, t)| {
            let fail = |source| RowFailure {
                gamma,
                nu,
                r,
                t,
                source,
            };
            let p = VortexParams::new(gamma, nu, t, Point2::ORIGIN)
                .map_err(|e| fail(e.into()))?;
            let fit_value = vortexmath::displacement(&p, r).map_err(|e| fail(e.into()))?;
            let oracle_value = integrate_displacement(&p, r, tol).map_err(fail)?;
            let rel_error = (fit_value - oracle_value).abs() / oracle_value.abs().max(REL_ERROR_FLOOR);
            Ok(FitSample {
                gamma,
                nu,
                r,
                t,
                fit_value,
                oracle_value,
                rel_error,
            })
        })
        .collect();
    Ok(FitReport { rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileMode {
    /// Radius held fixed, time swept; normalised so `4 nu / r² = 1` and `2 pi r / gamma = 1`.
    FixRadius,
    /// Time held fixed, radius swept; normalised so `4 nu t = 1` and `2 pi / gamma = 1`.
    FixTime,
}

impl ProfileMode {
    pub fn abscissa_name(self) -> &'static str {
        match self {
            ProfileMode::FixRadius => "t",
            ProfileMode::FixTime => "r",
        }
    }

    /// Default sweep range of the abscissa.
    pub fn default_range(self) -> (f64, f64) {
        match self {
            ProfileMode::FixRadius => (1e-4, 1e4),
            ProfileMode::FixTime => (1e-2, 1e2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRow {
    pub abscissa: f64,
    pub u_theta: f64,
    pub fit_rate: f64,
}

/// Velocity law and the derivative of the fit on a log-spaced abscissa.
///
/// Panics if `lo`/`hi` are not positive with `lo < hi`, or `points < 2`.
pub fn velocity_profile_compare(mode: ProfileMode, lo: f64, hi: f64, points: usize) -> Vec<ProfileRow> {
    assert!(lo > 0.0 && lo < hi && points >= 2, "invalid profile range");
    let gamma = 2.0 * PI;
    let nu = 0.25;
    let (llo, lhi) = (lo.log10(), hi.log10());
    (0..points)
        .map(|i| {
            let x = match i {
                0 => lo,
                i if i == points - 1 => hi,
                i => 10f64.powf(llo + (lhi - llo) * i as f64 / (points - 1) as f64),
            };
            let (t, r) = match mode {
                ProfileMode::FixRadius => (x, 1.0),
                ProfileMode::FixTime => (1.0, x),
            };
            let p = VortexParams {
                gamma,
                nu,
                t,
                center: Point2::ORIGIN,
            };
            ProfileRow {
                abscissa: x,
                u_theta: vortexmath::circumferential_velocity(&p, r).expect("radius is positive"),
                fit_rate: vortexmath::displacement_rate(&p, r).expect("radius is positive"),
            }
        })
        .collect()
}

pub fn profile_to_csv(mode: ProfileMode, rows: &[ProfileRow]) -> String {
    let mut out = format!("{},u_theta,fit_rate\n", mode.abscissa_name());
    for row in rows {
        writeln!(out, "{:e},{:e},{:e}", row.abscissa, row.u_theta, row.fit_rate)
            .expect("writing to a String cannot fail");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(gamma: f64, nu: f64, t: f64) -> VortexParams {
        VortexParams::new(gamma, nu, t, Point2::ORIGIN).unwrap()
    }

    #[test]
    fn polynomials_are_exact() {
        let q = integrate(|x| x * x, 0.0, 1.0, 1e-12, DEFAULT_MAX_EVALUATIONS).unwrap();
        assert!((q.value - 1.0 / 3.0).abs() < 1e-15);
        let q = integrate(|x| x.sin(), 0.0, 5.0 * PI, 1e-12, DEFAULT_MAX_EVALUATIONS).unwrap();
        assert!((q.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_tolerance_and_interval() {
        assert!(matches!(
            integrate(|x| x, 0.0, 1.0, 0.0, 100),
            Err(QuadratureError::InvalidTolerance(_))
        ));
        assert!(matches!(
            integrate(|x| x, 0.0, 1.0, 0.5, 100),
            Err(QuadratureError::InvalidTolerance(_))
        ));
        assert!(matches!(
            integrate(|x| x, 1.0, 1.0, 1e-6, 100),
            Err(QuadratureError::InvalidInterval(..))
        ));
        assert!(integrate_displacement(&params(1e-3, 1e-6, 0.0), 0.1, 1e-8).is_err());
        assert!(integrate_displacement(&params(1e-3, 1e-6, 1.0), 0.0, 1e-8).is_err());
    }

    #[test]
    fn budget_exhaustion_names_worst_interval() {
        // a jump cannot be integrated to 1e-12 in a few hundred evaluations
        let err = integrate(|x| if x < 0.3 { 0.0 } else { 1.0 }, 0.0, 1.0, 1e-12, 300).unwrap_err();
        match err {
            QuadratureError::NoConvergence {
                worst_lo, worst_hi, ..
            } => assert!(worst_lo <= 0.3 && 0.3 <= worst_hi),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn early_times_travel_linearly() {
        // r²/(4 nu t) = 2.5e9, exp term is zero to double precision
        let p = params(1e-3, 1e-6, 1e-4);
        let r = 0.1;
        let v = integrate_displacement(&p, r, 1e-10).unwrap();
        let linear = 1e-3 * 1e-4 / (2.0 * PI * r);
        assert!((v - linear).abs() <= 1e-10 * linear);
    }

    #[test]
    fn reversed_circulation_cancels() {
        let p = params(1e-3, 1e-6, 1000.0);
        let forward = integrate_displacement(&p, 0.001, 1e-12).unwrap();
        let back = integrate_displacement(&p.reversed(), 0.001, 1e-12).unwrap();
        assert_eq!(forward + back, 0.0);
        let doubled = integrate_displacement(&params(2e-3, 1e-6, 1000.0), 0.001, 1e-12).unwrap();
        assert!((doubled + 2.0 * back).abs() <= 1e-12 * doubled);
    }

    #[test]
    fn halving_tolerance_stays_within_estimate() {
        let p = params(1e-3, 1e-6, 1000.0);
        let coarse = integrate_displacement_detailed(&p, 0.001, 1e-8).unwrap();
        let fine = integrate_displacement_detailed(&p, 0.001, 5e-9).unwrap();
        assert!((coarse.value - fine.value).abs() <= coarse.error);
        let tight = integrate_displacement_detailed(&p, 0.001, 1e-12).unwrap();
        let tighter = integrate_displacement_detailed(&p, 0.001, 5e-13).unwrap();
        assert!((tight.value - tighter.value).abs() <= tight.error.max(1e-16 * tight.value));
    }

    #[test]
    fn additive_over_subintervals() {
        let p = params(1e-3, 1e-6, 1000.0);
        let r = 0.001;
        let tol = 1e-11;
        let whole = integrate_velocity(&p, r, 0.0, 1000.0, tol).unwrap().value;
        let head = integrate_velocity(&p, r, 0.0, 3.7, tol).unwrap().value;
        let tail = integrate_velocity(&p, r, 3.7, 1000.0, tol).unwrap().value;
        assert!(((head + tail) - whole).abs() <= 2.0 * tol * whole);
    }

    #[test]
    fn one_radius_gives_one_row_per_time() {
        let times = [1.0, 10.0, 100.0];
        let report = fit_error_report(&[1e-3], &[1e-6], &[0.01], &times, 1e-10).unwrap();
        assert_eq!(report.rows.len(), times.len());
        let ts: Vec<f64> = report.samples().map(|s| s.t).collect();
        assert_eq!(ts, times);
    }

    #[test]
    fn report_ordering_is_gamma_major() {
        let report =
            fit_error_report(&[1e-3, 2e-3], &[1e-6, 1e-5], &[0.01, 0.1], &[1.0, 10.0], 1e-10).unwrap();
        let keys: Vec<_> = report.samples().map(|s| (s.gamma, s.nu, s.r, s.t)).collect();
        let mut sorted = keys.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(keys, sorted);
        assert_eq!(keys.len(), 16);
    }

    #[test]
    fn reversed_gamma_gives_same_errors() {
        let radii = [0.001, 0.01, 0.1];
        let times = [1.0, 100.0];
        let a = fit_error_report(&[1e-3], &[1e-6], &radii, &times, 1e-10).unwrap();
        let b = fit_error_report(&[-1e-3], &[1e-6], &radii, &times, 1e-10).unwrap();
        let ea: Vec<f64> = a.samples().map(|s| s.rel_error).collect();
        let eb: Vec<f64> = b.samples().map(|s| s.rel_error).collect();
        assert_eq!(ea, eb);
    }

    #[test]
    fn grid_validation() {
        assert_eq!(
            fit_error_report(&[1e-3], &[], &[1.0], &[1.0], 1e-8),
            Err(GridError::Empty("nu"))
        );
        assert!(fit_error_report(&[1e-3], &[1e-6], &[-1.0], &[1.0], 1e-8).is_err());
        assert!(fit_error_report(&[0.0], &[1e-6], &[1.0], &[1.0], 1e-8).is_err());
    }

    #[test]
    fn failures_do_not_abort_report() {
        // tolerance out of range fails every row but still yields rows
        let report = fit_error_report(&[1e-3], &[1e-6], &[0.01], &[1.0, 2.0], 0.5).unwrap();
        assert_eq!(report.rows.len(), 2);
        assert_eq!(report.failures().count(), 2);
        assert_eq!(report.max_rel_error(), None);
        let csv = report.to_csv();
        assert!(csv.ends_with("1e0,,,\n1e-3,1e-6,1e-2,2e0,,,\n"), "{csv}");
    }

    #[test]
    fn early_error_smaller_than_knee() {
        let r = 0.01;
        let nu = 1e-6;
        let knee = r * r / (4.0 * nu);
        let report = fit_error_report(&[1e-3], &[nu], &[r], &[1e-6, knee], 1e-10).unwrap();
        let errs: Vec<f64> = report.samples().map(|s| s.rel_error).collect();
        assert!(errs[0] < errs[1], "{errs:?}");
        assert!(errs[0] < 1e-6);
    }

    #[test]
    fn csv_layout() {
        let report = fit_error_report(&[1e-3], &[1e-6], &[0.01], &[1.0], 1e-10).unwrap();
        let csv = report.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(FIT_CSV_HEADER));
        let row = lines.next().unwrap();
        assert!(row.starts_with("1e-3,1e-6,1e-2,1e0,"));
        assert_eq!(row.split(',').count(), 7);
        assert!(!csv.contains('\r'));
    }

    // Ratio band of fit_rate / u_theta from an independent 200001-point numpy
    // scan over the default ranges: [0.0247071623912, 1.35453269692].
    const PROFILE_RATIO_LOW: f64 = 0.024_707;
    const PROFILE_RATIO_HIGH: f64 = 1.354_533;

    #[test]
    fn profile_limits_fix_radius() {
        let rows = velocity_profile_compare(ProfileMode::FixRadius, 1e-9, 1e12, 50);
        let first = rows.first().unwrap();
        assert!((first.u_theta - 1.0).abs() < 1e-12);
        assert!((first.fit_rate - 1.0).abs() < 1e-5);
        let last = rows.last().unwrap();
        assert!(last.u_theta < 1e-11 && last.fit_rate < 1e-11);
    }

    #[test]
    fn profile_ratio_band() {
        for mode in [ProfileMode::FixRadius, ProfileMode::FixTime] {
            let (lo, hi) = mode.default_range();
            let rows = velocity_profile_compare(mode, lo, hi, 20001);
            for row in rows {
                let ratio = row.fit_rate / row.u_theta;
                assert!(
                    (PROFILE_RATIO_LOW..=PROFILE_RATIO_HIGH).contains(&ratio),
                    "{mode:?} at {}: {ratio}",
                    row.abscissa
                );
            }
        }
    }

    #[test]
    fn profile_csv_header() {
        let rows = velocity_profile_compare(ProfileMode::FixTime, 0.1, 10.0, 3);
        let csv = profile_to_csv(ProfileMode::FixTime, &rows);
        assert!(csv.starts_with("r,u_theta,fit_rate\n"));
        let first: f64 = csv.lines().nth(1).unwrap().split(',').next().unwrap().parse().unwrap();
        assert!((first - 0.1).abs() < 1e-15);
        assert_eq!(csv.lines().count(), 4);
    }
}
