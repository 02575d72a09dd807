//! The `serre` binary end to end.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const CONFIG: &str = "\
h0 = 1
h1 = 1.8
x0 = 500
alpha = 40
domain_a = 0
domain_b = 1000
dx = 10/2^6
dt_factor = 0.01
t_end = 30
g = 9.81
scheme = D
snapshot_times = 10
";

fn serre(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_serre"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn csv_rows(path: &Path) -> Vec<csv::StringRecord> {
    csv::Reader::from_path(path)
        .unwrap()
        .records()
        .map(Result::unwrap)
        .collect()
}

#[test]
fn missing_key_exits_with_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.txt", &CONFIG.replace("dt_factor = 0.01\n", ""));
    let out = serre(&["run", "--config", &cfg, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("kind=missing_key") && err.contains("dt_factor"), "{err}");
}

#[test]
fn gentle_bore_run_is_non_oscillatory_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.txt", CONFIG);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = serre(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }

    let rows = csv_rows(&a.join("diagnostics.csv"));
    assert_eq!(rows.len(), 2);
    let last = &rows[1];
    assert_eq!(&last[0].parse::<f64>().unwrap(), &30.0);
    assert_eq!(&last[7], "S1");
    let c1_h: f64 = last[4].parse().unwrap();
    assert!(c1_h < 1e-9, "C1_h = {c1_h:e}");

    let mut names: Vec<_> = fs::read_dir(&a)
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    let expected = ["config.txt", "diagnostics.csv", "snapshot_10.csv", "snapshot_30.csv", "steps.csv"];
    assert_eq!(names, expected);
    for n in names {
        assert_eq!(fs::read(a.join(&n)).unwrap(), fs::read(b.join(&n)).unwrap(), "{n:?}");
    }
}

#[test]
fn scheme_flag_overrides_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.txt", &CONFIG.replace("t_end = 30", "t_end = 1").replace("snapshot_times = 10\n", ""));
    let out = dir.path().join("e");
    let o = serre(&["run", "--config", &cfg, "--out", out.to_str().unwrap(), "--scheme", "E"]);
    assert!(o.status.success());
    let written = fs::read_to_string(out.join("config.txt")).unwrap();
    assert!(written.contains("scheme = E"), "{written}");
}

#[test]
fn compare_on_a_still_basin_reports_no_bore() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.txt",
        &CONFIG
            .replace("h1 = 1.8", "h1 = 1")
            .replace("dx = 10/2^6", "dx = 10/2^3")
            .replace("t_end = 30", "t_end = 2")
            .replace("snapshot_times = 10\n", ""),
    );
    let run = dir.path().join("still");
    let o = serre(&["run", "--config", &cfg, "--out", run.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = serre(&["compare", run.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&run.join("compare.csv"));
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][1], "no bore");
    assert!(rows[0].iter().skip(2).all(str::is_empty));
}

#[test]
fn compare_reports_the_bore() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.txt",
        &CONFIG
            .replace("alpha = 40", "alpha = 2")
            .replace("dx = 10/2^6", "dx = 10/2^4")
            .replace("snapshot_times = 10\n", ""),
    );
    let run = dir.path().join("r");
    assert!(serre(&["run", "--config", &cfg, "--out", run.to_str().unwrap()]).status.success());
    let report = dir.path().join("cmp.csv");
    let o = serre(&["compare", run.to_str().unwrap(), "--out", report.to_str().unwrap()]);
    assert!(o.status.success());
    let row = &csv_rows(&report)[0];
    assert_eq!(&row[1], "bore");
    let (h_mean, h2): (f64, f64) = (row[2].parse().unwrap(), row[3].parse().unwrap());
    assert!((h_mean - h2).abs() / h2 < 0.05, "{h_mean} vs {h2}");
}

#[test]
fn reference_prints_closed_form_values() {
    let o = serre(&["reference"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let value = |key: &str| -> f64 {
        text.lines()
            .find_map(|l| l.strip_prefix(&format!("{key},")))
            .unwrap_or_else(|| panic!("{key} missing from\n{text}"))
            .parse()
            .unwrap()
    };
    assert!((value("h2") - 1.36898).abs() < 1e-4);
    assert!((value("A_plus") - 1.73998).abs() < 1e-4);
    assert!((value("x_S_plus") - 623.9444).abs() < 1e-3);
    assert_eq!(value("t"), 30.0);
}

#[test]
fn converge_writes_tree_and_second_order_rates() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = write(
        dir.path(),
        "m.txt",
        "alphas = 40\nlevels = 4, 5, 6, 7\nt_end = 3\nscheme = E\n",
    );
    let out = dir.path().join("sweep");
    let o = serre(&[
        "converge", "--manifest", &manifest, "--out", out.to_str().unwrap(), "--workers", "2",
        "--scheme", "D", "--exclude-window", "none",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("manifest.txt").exists());
    for k in 4..=7 {
        let cell = out.join("40").join(k.to_string());
        assert!(cell.join("diagnostics.csv").exists() && cell.join("snapshot_3.csv").exists());
        let cfg = fs::read_to_string(cell.join("config.txt")).unwrap();
        assert!(cfg.contains("scheme = D"), "{cfg}");
    }
    let table = csv_rows(&out.join("convergence.csv"));
    assert_eq!(table.len(), 4);
    assert!(table[3][5].is_empty());

    let rates = csv_rows(&out.join("rates.csv"));
    let rate_h: Vec<f64> = rates.iter().filter(|r| !r[4].is_empty()).map(|r| r[4].parse().unwrap()).collect();
    assert_eq!(rate_h.len(), 2);
    assert!(rate_h.iter().all(|r| (1.7..=2.3).contains(r)), "{rate_h:?}");
}

#[test]
fn converge_with_a_failing_cell_flags_partial_results() {
    let dir = tempfile::tempdir().unwrap();
    // A far too long step makes the coarse level lose positivity.
    let manifest = write(
        dir.path(),
        "m.txt",
        "alphas = 0.5\nlevels = 1, 2, 3\nt_end = 5\ndt_factor = 0.9\n",
    );
    let out = dir.path().join("sweep");
    let o = serre(&["converge", "--manifest", &manifest, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("error kind="), "{err}");
    assert!(out.join("convergence_partial.csv").exists());
    assert!(!out.join("convergence.csv").exists());
}

#[test]
fn bad_exclude_window_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = write(dir.path(), "m.txt", "alphas = 40\nlevels = 3, 4\nt_end = 0.1\n");
    let o = serre(&[
        "converge", "--manifest", &manifest, "--out", dir.path().join("s").to_str().unwrap(),
        "--exclude-window", "540,520",
    ]);
    assert_eq!(o.status.code(), Some(2));
}
