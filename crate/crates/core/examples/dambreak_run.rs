//! Run the smoothed dam break and print what the diagnostics see.
//!
//!     cargo run --release --example dambreak_run -- [alpha] [k] [t_end] [D|E]
//!
//! Defaults: alpha = 2, k = 6, t_end = 30, method D.

use serre::config::{Scheme, SimConfig};
use serre::diagnostics::{diagnose_run, StructureThresholds};
use serre::run::{simulate, RunOptions};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: &str| args.get(i).cloned().unwrap_or_else(|| default.into());
    let alpha: f64 = arg(0, "2").parse().expect("alpha");
    let k: u32 = arg(1, "6").parse().expect("k");
    let t_end: f64 = arg(2, "30").parse().expect("t_end");
    let scheme: Scheme = arg(3, "D").parse().expect("scheme");

    let cfg = SimConfig::dambreak(alpha, k).with_t_end(t_end).with_scheme(scheme);
    let opts = RunOptions {
        snapshot_times: (0..=6).map(|i| t_end * f64::from(i) / 6.0).collect(),
        report_every: 0,
    };
    let out = match simulate(&cfg, &opts) {
        Ok(out) => out,
        Err(fail) => {
            eprintln!("run failed: {fail}");
            std::process::exit(1);
        }
    };
    let records = diagnose_run(&cfg, &out.snapshots, &StructureThresholds::default())
        .expect("diagnostics");

    println!("alpha={alpha} dx={} dt={} method={scheme}", cfg.dx, cfg.dt());
    println!("{:>7} {:>10} {:>10} {:>10} {:>9} {:>9} {:>8} {:>8} {:>12}",
        "t", "C1_h", "C1_uh", "C1_H", "x_A", "A", "h_mean", "u_mean", "structure");
    for r in &records {
        let lead = r.leading.map(|c| (c.x, c.amplitude)).unwrap_or((f64::NAN, f64::NAN));
        let means = r.means.map(|m| (m.h, m.u)).unwrap_or((f64::NAN, f64::NAN));
        println!(
            "{:>7.2} {:>10.2e} {:>10.2e} {:>10.2e} {:>9.2} {:>9.4} {:>8.4} {:>8.4} {:>12}",
            r.t, r.c1[0], r.c1[1], r.c1[2], lead.0, lead.1, means.0, means.1, r.structure.to_string()
        );
    }
}
