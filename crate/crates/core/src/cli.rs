//! The `marble` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 recipe parse error, 3 I/O error.
//! Diagnostics go to stderr; data goes to the files named on the command
//! line or to stdout.

use std::ffi::OsString;
use std::fs;
use std::hint::black_box;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::figures;
use crate::hydro::{self, FluidProps, StylusGeom, StylusShape};
use crate::oracle::{self, ProfileMode};
use crate::raster::{self, RasterError};
use crate::recipe::{self, ParseError, Recipe};
use crate::vortexmath::{self, VortexParams};
use crate::xform::Point2;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_IO: u8 = 3;

/// Environment variable capping the renderer's worker threads.
pub const THREADS_ENV: &str = "MARBLE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "marble", version, about = "Lamb-Oseen vortex marbling toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Render an .mbl recipe to a binary PPM.
    Render(RenderArgs),
    /// Compare the closed-form displacement with numerical integration over a grid.
    FitReport(FitArgs),
    /// Tabulate the velocity law against the derivative of the closed form.
    ProfileCompare(ProfileArgs),
    /// Render the shipped reference figures.
    Figures(FigureArgs),
    /// Reynolds number, suction and shedding for a stylus in a tank.
    Physics(PhysicsArgs),
}

#[derive(Debug, Args)]
struct RenderArgs {
    recipe: PathBuf,
    /// Output file; defaults to the recipe's `render` path, relative to the recipe.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_parser = ["1", "2", "4"])]
    supersample: Option<String>,
    /// Report rendering and closed-form evaluation throughput.
    #[arg(long)]
    benchmark: bool,
    /// Also write `x,y,src_x,src_y` for every pixel center.
    #[arg(long)]
    trace_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FitArgs {
    #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = [1e-3], allow_negative_numbers = true)]
    gamma: Vec<f64>,
    #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = [1e-6, 1e-5, 1e-4, 1e-3])]
    nu_grid: Vec<f64>,
    #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = [1e-3, 1e-2, 1e-1, 1.0])]
    r_grid: Vec<f64>,
    #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = [1.0, 10.0, 100.0, 1000.0])]
    t_grid: Vec<f64>,
    /// Relative tolerance of the quadrature.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    FixRadius,
    FixTime,
}

#[derive(Debug, Args)]
struct ProfileArgs {
    #[arg(long, value_enum)]
    mode: ModeArg,
    /// Number of log-spaced abscissae.
    #[arg(long, default_value_t = 161)]
    points: usize,
    /// Smallest abscissa; defaults depend on the mode.
    #[arg(long)]
    min: Option<f64>,
    /// Largest abscissa.
    #[arg(long)]
    max: Option<f64>,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "which")]
struct Selection {
    #[arg(long, group = "which")]
    all: bool,
    #[arg(long, group = "which")]
    name: Option<String>,
}

#[derive(Debug, Args)]
struct FigureArgs {
    #[command(flatten)]
    selection: Selection,
    #[arg(long)]
    outdir: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ShapeArg {
    Cylinder,
    Sphere,
}

#[derive(Debug, Args)]
struct PhysicsArgs {
    #[arg(long, value_enum)]
    shape: ShapeArg,
    #[arg(long)]
    diameter: f64,
    /// Submerged depth; half the diameter when omitted.
    #[arg(long)]
    depth: Option<f64>,
    #[arg(long)]
    speed: f64,
    #[arg(long, default_value_t = FluidProps::WATER.nu)]
    nu: f64,
    #[arg(long, default_value_t = FluidProps::WATER.rho)]
    rho: f64,
    #[arg(long, default_value_t = FluidProps::WATER.sigma)]
    sigma: f64,
    /// Print `quantity,value` rows instead of the labelled report.
    #[arg(long)]
    csv: bool,
}

enum Failure {
    Usage(String),
    Parse(PathBuf, ParseError),
    Io(String),
}

impl Failure {
    fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        Failure::Io(format!("{}: {e}", path.display()))
    }
}

impl From<RasterError> for Failure {
    fn from(e: RasterError) -> Self {
        match e {
            RasterError::Io { .. } => Failure::Io(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

/// Thread cap from `MARBLE_THREADS`, if set to a positive integer.
pub fn thread_limit() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Run the CLI on `argv` (program name first) and return the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    let result = match cli.command {
        Command::Render(args) => cmd_render(args, out),
        Command::FitReport(args) => cmd_fit_report(args, out),
        Command::ProfileCompare(args) => cmd_profile(args, out),
        Command::Figures(args) => cmd_figures(args, out),
        Command::Physics(args) => cmd_physics(args, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Parse(path, e)) => {
            let _ = writeln!(err, "{}:{e}", path.display());
            EXIT_PARSE
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_IO
        }
    }
}

fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::io(p, e)),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("stdout: {e}"))),
    }
}

fn load_recipe(path: &Path) -> Result<Recipe, Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::io(path, e))?;
    let text = String::from_utf8(bytes).map_err(|_| Failure::io(path, "recipe is not valid UTF-8"))?;
    recipe::parse(&text).map_err(|e| Failure::Parse(path.to_path_buf(), e))
}

fn render_recipe(r: &Recipe, supersample: u32) -> Result<raster::RasterImage, Failure> {
    Ok(raster::render_with_threads(
        &r.scene(),
        &r.base,
        &r.viewport,
        supersample,
        thread_limit(),
    )?)
}

fn cmd_render(args: RenderArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let r = load_recipe(&args.recipe)?;
    let supersample = match &args.supersample {
        Some(s) => s.parse().expect("restricted by the argument parser"),
        None => r.output.supersample,
    };
    let target = args.output.clone().unwrap_or_else(|| {
        args.recipe
            .parent()
            .unwrap_or_else(|| Path::new(""))
            .join(&r.output.path)
    });
    let start = Instant::now();
    let img = render_recipe(&r, supersample)?;
    let elapsed = start.elapsed().as_secs_f64();
    raster::write_ppm(&img, &target)?;
    if let Some(path) = &args.trace_csv {
        let csv = raster::trace_csv(&r.scene(), &r.viewport);
        fs::write(path, csv).map_err(|e| Failure::io(path, e))?;
    }
    if args.benchmark {
        let samples = f64::from(img.width) * f64::from(img.height) * f64::from(supersample * supersample);
        let speed = measure_speed(20_000, 50);
        let report = format!(
            "pixels: {}x{} supersample {supersample}\n\
             render_seconds: {elapsed:.6}\n\
             pixels_per_second: {:.4e}\n\
             samples_per_second: {:.4e}\n\
             closed_form_evals_per_second: {:.4e}\n\
             quadrature_evals_per_second: {:.4e}\n\
             speedup: {:.1}\n",
            img.width,
            img.height,
            f64::from(img.width) * f64::from(img.height) / elapsed.max(1e-12),
            samples / elapsed.max(1e-12),
            1.0 / speed.closed_form_seconds,
            1.0 / speed.quadrature_seconds,
            speed.speedup(),
        );
        write_output(None, &report, out)?;
    }
    Ok(())
}

/// Per-point cost of the closed-form angle against quadrature of the velocity law.
#[derive(Debug, Clone, Copy)]
pub struct SpeedComparison {
    pub closed_form_seconds: f64,
    pub quadrature_seconds: f64,
}

impl SpeedComparison {
    pub fn speedup(&self) -> f64 {
        self.quadrature_seconds / self.closed_form_seconds
    }
}

/// Time `closed_form_points` angle evaluations and `quadrature_points`
/// integrations at tolerance 1e-8, over the same spread of radii and times.
pub fn measure_speed(closed_form_points: usize, quadrature_points: usize) -> SpeedComparison {
    let point = |i: usize, n: usize| {
        let f = (i as f64 + 0.5) / n as f64;
        let r = 10f64.powf(-3.0 + 3.0 * f);
        let t = 10f64.powf(3.0 - 3.0 * f);
        (VortexParams {
            gamma: 1e-3,
            nu: 1e-6,
            t,
            center: Point2::ORIGIN,
        }, r)
    };

    let closed_inputs: Vec<_> = (0..closed_form_points).map(|i| point(i, closed_form_points)).collect();
    let quad_inputs: Vec<_> = (0..quadrature_points).map(|i| point(i, quadrature_points)).collect();

    // best of three passes for each side
    let best = |pass: &dyn Fn() -> f64| (0..3).map(|_| pass()).fold(f64::INFINITY, f64::min);
    let closed = best(&|| {
        let start = Instant::now();
        let mut acc = 0.0;
        for (p, r) in &closed_inputs {
            acc += vortexmath::angle(black_box(p), black_box(*r));
        }
        black_box(acc);
        start.elapsed().as_secs_f64() / closed_form_points.max(1) as f64
    });
    let quad = best(&|| {
        let start = Instant::now();
        let mut acc = 0.0;
        for (p, r) in &quad_inputs {
            acc += oracle::integrate_displacement(black_box(p), black_box(*r), 1e-8).unwrap_or(0.0) / r;
        }
        black_box(acc);
        start.elapsed().as_secs_f64() / quadrature_points.max(1) as f64
    });

    SpeedComparison {
        closed_form_seconds: closed.max(1e-15),
        quadrature_seconds: quad,
    }
}

fn cmd_fit_report(args: FitArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_limit().unwrap_or(0))
        .build()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let report = pool
        .install(|| oracle::fit_error_report(&args.gamma, &args.nu_grid, &args.r_grid, &args.t_grid, args.tol))
        .map_err(|e| Failure::Usage(e.to_string()))?;
    write_output(args.csv.as_deref(), &report.to_csv(), out)?;
    if args.csv.is_some() {
        let mut summary = format!("rows: {}\nfailed_rows: {}\n", report.rows.len(), report.failures().count());
        if let (Some(max), Some(mean)) = (report.max_rel_error(), report.mean_rel_error()) {
            summary.push_str(&format!("max_rel_error: {max:.6e}\nmean_rel_error: {mean:.6e}\n"));
        }
        if let Some(w) = report.worst() {
            summary.push_str(&format!(
                "worst: gamma={:e} nu={:e} r={:e} t={:e}\n",
                w.gamma, w.nu, w.r, w.t
            ));
        }
        write_output(None, &summary, out)?;
    }
    Ok(())
}

fn cmd_profile(args: ProfileArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let mode = match args.mode {
        ModeArg::FixRadius => ProfileMode::FixRadius,
        ModeArg::FixTime => ProfileMode::FixTime,
    };
    let (lo, hi) = mode.default_range();
    let (lo, hi) = (args.min.unwrap_or(lo), args.max.unwrap_or(hi));
    if !(lo > 0.0 && lo < hi && hi.is_finite() && args.points >= 2) {
        return Err(Failure::Usage(
            "profile range needs 0 < min < max and at least 2 points".into(),
        ));
    }
    let rows = oracle::velocity_profile_compare(mode, lo, hi, args.points);
    write_output(args.csv.as_deref(), &oracle::profile_to_csv(mode, &rows), out)
}

fn cmd_figures(args: FigureArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let names: Vec<&str> = match &args.selection.name {
        Some(name) => {
            if figures::source(name).is_none() {
                let known: Vec<_> = figures::names().collect();
                return Err(Failure::Usage(format!(
                    "unknown figure `{name}`; available: {}",
                    known.join(", ")
                )));
            }
            vec![figures::source(name).map(|_| name.as_str()).expect("checked above")]
        }
        None => figures::names().collect(),
    };
    fs::create_dir_all(&args.outdir).map_err(|e| Failure::io(&args.outdir, e))?;
    for name in names {
        let text = figures::source(name).expect("manifest entries are embedded");
        let r = recipe::parse(text).map_err(|e| Failure::Parse(PathBuf::from(format!("{name}.mbl")), e))?;
        let file = Path::new(&r.output.path)
            .file_name()
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(format!("{name}.ppm")));
        let target = args.outdir.join(file);
        let img = render_recipe(&r, r.output.supersample)?;
        raster::write_ppm(&img, &target)?;
        let _ = writeln!(out, "{}", target.display());
    }
    Ok(())
}

fn cmd_physics(args: PhysicsArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let shape = match args.shape {
        ShapeArg::Cylinder => StylusShape::Cylinder,
        ShapeArg::Sphere => StylusShape::Sphere,
    };
    let usage = |e: hydro::HydroError| Failure::Usage(e.to_string());
    let geom = StylusGeom::new(shape, args.diameter, args.depth.unwrap_or(args.diameter / 2.0)).map_err(usage)?;
    let fluid = FluidProps {
        nu: args.nu,
        rho: args.rho,
        sigma: args.sigma,
        g: hydro::STANDARD_GRAVITY,
    };
    let report = hydro::analyze(&geom, &fluid, args.speed).map_err(usage)?;
    let text = if args.csv {
        physics_csv(&report)
    } else {
        physics_text(&report)
    };
    write_output(None, &text, out)
}

fn opt(v: Option<f64>, precision: usize, unit: &str) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.precision$}{unit}"))
}

fn yes_no(v: bool) -> &'static str {
    if v {
        "yes"
    } else {
        "no"
    }
}

fn physics_text(r: &hydro::StylusReport) -> String {
    let shape = match r.geom.shape {
        StylusShape::Cylinder => "cylinder",
        StylusShape::Sphere => "sphere",
    };
    format!(
        "stylus: {shape}, diameter {} m, submerged {} m, speed {} m/s\n\
         liquid: nu {:e} m^2/s, rho {} kg/m^3, sigma {} N/m\n\
         characteristic length D = {:.5} m\n\
         Re = {:.3} (on D)\n\
         Re_diameter = {:.3}\n\
         drag coefficient C_D = {}\n\
         suction = {}\n\
         buoyant pressure = {:.2} N/m^2\n\
         surface tension pressure = {:.2} N/m^2\n\
         bubble forms: {}\n\
         sheds vortexes (Re_diameter > 90): {}\n\
         karman spacing = {}\n",
        r.geom.diameter,
        r.geom.depth,
        r.speed,
        r.fluid.nu,
        r.fluid.rho,
        r.fluid.sigma,
        r.characteristic_length,
        r.reynolds,
        r.reynolds_diameter,
        opt(r.drag_coefficient, 3, ""),
        opt(r.suction, 2, " N/m^2"),
        r.buoyant_pressure,
        r.surface_tension_pressure,
        r.forms_bubble.map_or("n/a", yes_no),
        yes_no(r.sheds_vortexes),
        opt(r.karman_spacing, 4, " m"),
    )
}

fn physics_csv(r: &hydro::StylusReport) -> String {
    let num = |v: Option<f64>| v.map_or_else(String::new, |x| format!("{x:e}"));
    let flag = |v: Option<bool>| v.map_or_else(String::new, |b| b.to_string());
    let rows = [
        ("characteristic_length", num(Some(r.characteristic_length))),
        ("reynolds", num(Some(r.reynolds))),
        ("reynolds_diameter", num(Some(r.reynolds_diameter))),
        ("drag_coefficient", num(r.drag_coefficient)),
        ("suction", num(r.suction)),
        ("buoyant_pressure", num(Some(r.buoyant_pressure))),
        ("surface_tension_pressure", num(Some(r.surface_tension_pressure))),
        ("forms_bubble", flag(r.forms_bubble)),
        ("sheds_vortexes", r.sheds_vortexes.to_string()),
        ("karman_spacing", num(r.karman_spacing)),
    ];
    let mut s = String::from("quantity,value\n");
    for (k, v) in rows {
        s.push_str(k);
        s.push(',');
        s.push_str(&v);
        s.push('\n');
    }
    s
}
