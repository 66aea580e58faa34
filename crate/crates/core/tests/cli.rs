use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use marbling::figures;

fn marble(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_marble"))
        .args(args)
        .output()
        .expect("spawn marble")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_recipe(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn renders_a_figure_recipe_to_ppm() {
    let dir = tempfile::tempdir().unwrap();
    let recipe = write_recipe(dir.path(), "yinyang.mbl", figures::source("yinyang").unwrap());
    let out = dir.path().join("y.ppm");
    let o = marble(&["render", &recipe, "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let bytes = fs::read(&out).unwrap();
    let header = b"P6\n400 400\n255\n";
    assert_eq!(&bytes[..header.len()], header);
    assert_eq!(bytes.len(), header.len() + 400 * 400 * 3);
}

#[test]
fn default_output_sits_next_to_the_recipe() {
    let dir = tempfile::tempdir().unwrap();
    let recipe = write_recipe(
        dir.path(),
        "tiny.mbl",
        "viewport -1 -1 2 2 8 8\nbase half y #000000 #ffffff\nvortex 0 0 1 0.1 1\nrender tiny.ppm supersample 4\n",
    );
    let o = marble(&["render", &recipe]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(dir.path().join("tiny.ppm").exists());
}

#[test]
fn missing_recipe_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.mbl");
    let o = marble(&["render", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("nope.mbl"));
}

#[test]
fn parse_errors_report_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let recipe = write_recipe(
        dir.path(),
        "bad.mbl",
        "viewport 0 0 1 1 10 10\nbase solid #ffffff\nvortex 0 0 1 -2 1\nrender a.ppm\n",
    );
    let o = marble(&["render", &recipe]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains(":3:14: error[E05]"), "{err}");
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(marble(&["bogus"]).status.code(), Some(1));
    assert_eq!(marble(&["render"]).status.code(), Some(1));
    assert_eq!(
        marble(&["render", "x.mbl", "--supersample", "3"]).status.code(),
        Some(1)
    );
    assert_eq!(marble(&["--help"]).status.code(), Some(0));
}

#[test]
fn physics_report_for_a_thin_paint_layer() {
    let o = marble(&[
        "physics", "--shape", "cylinder", "--diameter", "0.025", "--depth", "0.0125", "--speed", "0.2", "--nu", "1e-3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("characteristic length D = 0.00417 m"), "{text}");
    assert!(text.contains("Re = 0.833 (on D)"), "{text}");
    assert!(text.contains("buoyant pressure = 81.50 N/m^2"), "{text}");
    assert!(text.contains("surface tension pressure = 3.71 N/m^2"), "{text}");
    assert!(text.contains("sheds vortexes (Re_diameter > 90): no"), "{text}");
}

#[test]
fn physics_csv_has_one_row_per_quantity() {
    let o = marble(&[
        "physics", "--shape", "sphere", "--diameter", "0.025", "--speed", "0.2", "--nu", "1e-4", "--csv",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("quantity,value"));
    let rows: Vec<(&str, &str)> = lines.map(|l| l.split_once(',').unwrap()).collect();
    let get = |k: &str| rows.iter().find(|(q, _)| *q == k).unwrap().1;
    let re: f64 = get("reynolds").parse().unwrap();
    assert!((re - 8.333333333333334).abs() < 1e-9);
    let cd: f64 = get("drag_coefficient").parse().unwrap();
    assert!(cd > 4.0 && cd < 5.0);
}

#[test]
fn fit_report_csv_to_file_and_summary_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fit.csv");
    let o = marble(&[
        "fit-report", "--gamma", "1e-3", "--nu-grid", "1e-6", "--r-grid", "1e-3,1e-2", "--t-grid", "1,10,100", "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let table = fs::read_to_string(&csv).unwrap();
    assert_eq!(table.lines().next(), Some("gamma,nu,r,t,fit,oracle,rel_error"));
    assert_eq!(table.lines().count(), 1 + 6);
    assert!(stdout(&o).contains("rows: 6"));
    assert!(stdout(&o).contains("failed_rows: 0"));
}

#[test]
fn fit_report_rejects_a_bad_grid() {
    let o = marble(&["fit-report", "--r-grid", "1e-3,abc"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn profile_compare_rows_cover_the_range() {
    for (mode, name) in [("fix-radius", "t"), ("fix-time", "r")] {
        let o = marble(&["profile-compare", "--mode", mode, "--points", "9", "--min", "0.1", "--max", "10"]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let text = stdout(&o);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], format!("{name},u_theta,fit_rate"));
        assert_eq!(lines.len(), 10);
        assert!(lines[1].starts_with("1e-1,"));
        assert!(lines[9].starts_with("1e1,"));
    }
}

#[test]
fn figures_by_name_and_unknown_name() {
    let dir = tempfile::tempdir().unwrap();
    let outdir = dir.path().to_str().unwrap();
    let o = marble(&["figures", "--name", "irrot-0", "--outdir", outdir]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(dir.path().join("irrot-0.ppm").exists());
    assert!(stdout(&o).trim_end().ends_with("irrot-0.ppm"));

    let o = marble(&["figures", "--name", "no-such-figure", "--outdir", outdir]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn benchmark_flag_reports_rates() {
    let dir = tempfile::tempdir().unwrap();
    let recipe = write_recipe(
        dir.path(),
        "b.mbl",
        "viewport -1 -1 2 2 16 16\nbase checker 0.5 #000000 #ffffff\nvortex 0 0 1 0.1 1\nrender b.ppm\n",
    );
    let o = marble(&["render", &recipe, "--benchmark"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("pixels_per_second:"), "{text}");
    assert!(text.contains("closed_form_evals_per_second:"), "{text}");
    assert!(text.contains("speedup:"), "{text}");
}
