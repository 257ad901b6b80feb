use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_felphase");

fn run(dir: &Path, config: &str, args: &[&str]) -> (i32, String) {
    let cfg = dir.join("run.cfg");
    fs::write(&cfg, config).unwrap();
    let out = Command::new(BIN)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("out"))
        .args(args)
        .output()
        .unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stderr).into_owned())
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(str::to_owned).collect();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn sidecar(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("out").join(name)).unwrap()).unwrap()
}

const SMALL: &str = "alpha = 10\nwp_bar = 0.5\ndwp = 0.5\nn_theta = 16\nn_wp = 24\n";

#[test]
fn unknown_key_exits_with_config_code() {
    let dir = tempfile::tempdir().unwrap();
    let (code, err) = run(dir.path(), "alpha = 10\nlambda = 3\n", &["evolve"]);
    assert_eq!(code, 2);
    assert!(err.contains("lambda"), "{err}");
}

#[test]
fn out_of_domain_parameter_exits_with_config_code() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), "dwp = -1\n", &["evolve"]).0, 2);
    assert_eq!(run(dir.path(), "times = abc\n", &["evolve"]).0, 2);
    assert_eq!(run(dir.path(), "alpha = 4\nmathieu_truncation = 3\n", &["bands"]).0, 2);
}

#[test]
fn unwritable_output_exits_with_failure_code() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("out"), "a file, not a directory").unwrap();
    assert_eq!(run(dir.path(), SMALL, &["distance"]).0, 3);
}

#[test]
fn zero_time_fields_reproduce_the_initial_gaussian() {
    let dir = tempfile::tempdir().unwrap();
    let (code, err) = run(dir.path(), &format!("{SMALL}times = 0\n"), &["evolve"]);
    assert_eq!(code, 0, "{err}");
    for name in ["wigner_t00.csv", "classical_t00.csv"] {
        let (header, rows) = read_csv(&dir.path().join("out").join(name));
        assert_eq!(header[0], "wp\\theta");
        assert_eq!(header.len(), 17);
        assert_eq!(rows.len(), 24);
        for row in &rows {
            let wp = row[0];
            let expected = (-(wp - 0.5f64).powi(2) / (2.0 * 0.25)).exp() / (2.0 * std::f64::consts::PI * (2.0 * std::f64::consts::PI).sqrt() * 0.5);
            for v in &row[1..] {
                assert!((v - expected).abs() < 1e-10, "{name}: {v} vs {expected} at wp={wp}");
            }
        }
    }
    let (header, rows) = read_csv(&dir.path().join("out").join("wigner_t00_p_wp.csv"));
    assert_eq!(header, ["wp", "p"]);
    assert_eq!(rows.len(), 24);
}

#[test]
fn sidecar_lists_every_written_file_and_the_tolerances() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &format!("{SMALL}times = 0, 0.25pi\n"), &["evolve"]).0, 0);
    let meta = sidecar(dir.path(), "evolve.meta.json");
    assert_eq!(meta["command"], "evolve");
    assert_eq!(meta["software"], "felphase");
    for key in ["unitarity", "reality", "density_cutoff", "coefficient_tail", "separatrix"] {
        assert!(meta["tolerances"][key].as_f64().unwrap() > 0.0, "{key}");
    }
    let mut listed: Vec<String> = meta["files"].as_array().unwrap().iter().map(|f| f["file"].as_str().unwrap().to_owned()).collect();
    let mut on_disk: Vec<String> = fs::read_dir(dir.path().join("out"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".csv"))
        .collect();
    listed.sort();
    on_disk.sort();
    assert_eq!(listed, on_disk);
    assert_eq!(listed.len(), 12);
    assert_eq!(meta["parameters"]["grid"]["n_theta"], 16);
}

#[test]
fn repeated_runs_are_bit_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = format!("{SMALL}times = 0.3, 1.1\n");
    assert_eq!(run(a.path(), &cfg, &["distance"]).0, 0);
    assert_eq!(run(b.path(), &cfg, &["--threads", "1", "distance"]).0, 0);
    for name in ["distance.csv", "distance.meta.json"] {
        let x = fs::read(a.path().join("out").join(name)).unwrap();
        let y = fs::read(b.path().join("out").join(name)).unwrap();
        assert_eq!(x, y, "{name}");
    }
}

#[test]
fn distance_vanishes_at_zero_time() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &format!("{SMALL}times = 0, 1\n"), &["distance"]).0, 0);
    let (header, rows) = read_csv(&dir.path().join("out").join("distance.csv"));
    assert_eq!(header, ["tau", "d_cl"]);
    assert!(rows[0][1].abs() < 1e-12);
    assert!(rows[1][1] > 0.0 && rows[1][1] <= 2f64.sqrt());
}

#[test]
fn gain_writes_four_curves_that_start_at_zero() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &format!("{SMALL}times = 0, 0.5, 1\n"), &["gain"]).0, 0);
    for name in ["gain_numeric_quantum.csv", "gain_numeric_classical.csv", "gain_small_signal_quantum.csv", "gain_small_signal_classical.csv"] {
        let (_, rows) = read_csv(&dir.path().join("out").join(name));
        assert_eq!(rows.len(), 3, "{name}");
        assert!(rows[0][1].abs() < 1e-12, "{name}");
    }
}

#[test]
fn bands_report_labeled_energies() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), "alpha = 4\nnu = 0.3\nmathieu_truncation = 14\ntimes = 1\n", &["bands"]).0, 0);
    let (header, rows) = read_csv(&dir.path().join("out").join("bands_energies.csv"));
    assert_eq!(header, ["n", "energy"]);
    assert_eq!(rows.len(), 29);
    // Far from the coupling the labeled band sits near the free parabola.
    let top = rows.last().unwrap();
    assert_eq!(top[0], 14.0);
    assert!((top[1] - 14.3f64.powi(2)).abs() < 1.0, "{top:?}");
    assert!(dir.path().join("out").join("amplitudes_t00.csv").exists());
}

#[test]
fn estimate_reports_timescales() {
    let dir = tempfile::tempdir().unwrap();
    let lab = "electron_density = 1e17\nwave_number = 1e6\ninitial_field = 1e9\nwiggler_field = 1\nwiggler_wavelength = 0.03\nwiggler_parameter = 1\ngamma = 100\n";
    let (code, err) = run(dir.path(), lab, &["estimate"]);
    assert_eq!(code, 0, "{err}");
    let meta = sidecar(dir.path(), "estimate.meta.json");
    assert!(meta["parameters"]["timescales"]["space_charge"].as_f64().unwrap() > 0.0);
}

fn figure_files(id: &str) -> Vec<String> {
    let dir = tempfile::tempdir().unwrap();
    let (code, err) = run(dir.path(), "n_theta = 12\nn_wp = 16\n", &["figure", id]);
    assert_eq!(code, 0, "{err}");
    let meta = sidecar(dir.path(), &format!("figure_{id}.meta.json"));
    let mut names: Vec<String> = meta["files"].as_array().unwrap().iter().map(|f| f["file"].as_str().unwrap().to_owned()).collect();
    names.sort();
    names
}

#[test]
fn figure_two_writes_fields_and_marginals() {
    let names = figure_files("2");
    assert_eq!(names.iter().filter(|n| n.starts_with("fig2_wigner") && !n.contains("_p_")).count(), 6);
    assert_eq!(names.iter().filter(|n| n.starts_with("fig2_classical") && !n.contains("_p_")).count(), 3);
    assert_eq!(names.iter().filter(|n| n.ends_with("_p_wp.csv")).count(), 12);
}

#[test]
fn figure_4a_writes_four_distance_curves() {
    let names = figure_files("4a");
    assert_eq!(names.len(), 4);
    assert!(names.contains(&"fig4a_alpha_1_3_dwp_0.1.csv".to_owned()));
    assert!(names.contains(&"fig4a_alpha_10_dwp_2.csv".to_owned()));
}

#[test]
fn figure_5_writes_cold_and_warm_curves() {
    let names = figure_files("5");
    assert_eq!(names.iter().filter(|n| n.starts_with("fig5_cold")).count(), 3);
    assert_eq!(names.iter().filter(|n| n.starts_with("fig5_warm")).count(), 3);
}

#[test]
fn bad_figure_id_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), "", &["figure", "7"]).0, 2);
}
