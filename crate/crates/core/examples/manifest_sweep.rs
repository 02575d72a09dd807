//! Drive a small convergence sweep from a manifest, as the `converge`
//! subcommand does, and print the resulting tables.
//!
//!     cargo run --release --example manifest_sweep -- [out_dir]

use std::path::PathBuf;

use serre::harness::{run_sweep, write_convergence, ExperimentManifest};

const MANIFEST: &str = "\
# two smoothing lengths, three levels, short time
alphas = 40, 10
levels = 4, 5, 6
t_end = 3
scheme = E
exclude_window = none
workers = 0
";

fn main() {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("serre_manifest_sweep"));
    let manifest = ExperimentManifest::parse(MANIFEST).expect("manifest");
    let report = run_sweep(&manifest, &out).expect("sweep");
    for (cell, fail) in &report.failures {
        eprintln!("alpha {} k {} failed: {fail}", cell.alpha, cell.level);
    }
    let (table, rates) = (out.join("convergence.csv"), out.join("rates.csv"));
    write_convergence(&table, &rates, &report.rows, manifest.exclude_window).expect("write");
    for path in [&table, &rates] {
        println!("== {}", path.display());
        print!("{}", std::fs::read_to_string(path).expect("read back"));
    }
}
