//! Classify the bore interior of smoothed dam breaks.
//!
//!     cargo run --release --example structure_survey
//!     cargo run --release --example structure_survey -- 0.1 10 3 400 560
//!
//! With arguments `alpha k t [a b]` a single case is run on `[a, b]`
//! (default `[0, 1000]`). Without, a small survey over alpha at k = 6.

use rayon::prelude::*;
use serre::config::SimConfig;
use serre::diagnostics::bore::{classify_structure, structure_amplitudes};
use serre::diagnostics::StructureThresholds;
use serre::reference::solve_swwe_dambreak;
use serre::run::{simulate, RunOptions};

fn survey(alpha: f64, k: u32, t: f64, a: f64, b: f64) -> String {
    let cfg = SimConfig::dambreak(alpha, k).with_domain(a, b).with_t_end(t);
    let sol = solve_swwe_dambreak(cfg.h0, cfg.h1, cfg.g, cfg.x0).expect("dam break");
    let th = StructureThresholds::default();
    match simulate(&cfg, &RunOptions::default()) {
        Ok(out) => {
            let snap = serre::snapshot::Snapshot::from_state(&out.state);
            let amp = structure_amplitudes(&snap, &sol, &th);
            format!(
                "alpha={alpha:<5} k={k:<2} t={t:<5} left={:.2e} mid={:.2e} right={:.2e} overall={:.2e} -> {}",
                amp.left,
                amp.mid,
                amp.right,
                amp.overall,
                classify_structure(&snap, &sol, &th)
            )
        }
        Err(fail) => format!("alpha={alpha:<5} k={k:<2} t={t:<5} failed: {fail}"),
    }
}

fn main() {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .map(|s| s.parse().expect("numeric argument"))
        .collect();
    match args.as_slice() {
        [alpha, k, t] => println!("{}", survey(*alpha, *k as u32, *t, 0.0, 1000.0)),
        [alpha, k, t, a, b] => println!("{}", survey(*alpha, *k as u32, *t, *a, *b)),
        [] => {
            let lines: Vec<String> = [40.0, 8.0, 4.0, 2.0, 1.0]
                .par_iter()
                .map(|&alpha| survey(alpha, 6, 30.0, 0.0, 1000.0))
                .collect();
            for l in lines {
                println!("{l}");
            }
        }
        _ => eprintln!("usage: structure_survey [alpha k t [a b]]"),
    }
}
