//! Mass, momentum and energy budgets over a run.
//!
//!     cargo run --release --example conservation -- [alpha] [k] [t_end]
//!
//! Momentum is not conserved on a finite domain: the pressure difference at
//! the two walls adds (g t / 2)(h_left^2 - h_right^2), which the momentum
//! error accounts for.

use serre::config::{Scheme, SimConfig};
use serre::diagnostics::{conservation_error, initial_totals, totals};
use serre::run::{simulate, RunOptions};

fn main() {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .map(|s| s.parse().expect("numeric argument"))
        .collect();
    let alpha = args.first().copied().unwrap_or(40.0);
    let k = args.get(1).copied().unwrap_or(6.0) as u32;
    let t_end = args.get(2).copied().unwrap_or(30.0);

    for scheme in [Scheme::D, Scheme::E] {
        let cfg = SimConfig::dambreak(alpha, k).with_t_end(t_end).with_scheme(scheme);
        let initial = initial_totals(&cfg).expect("totals");
        let opts = RunOptions {
            snapshot_times: (0..=5).map(|i| t_end * f64::from(i) / 5.0).collect(),
            report_every: 0,
        };
        let out = simulate(&cfg, &opts).expect("run");
        println!("method {scheme}: initial mass {:.6}, momentum {:.6}, energy {:.6}", initial[0], initial[1], initial[2]);
        for snap in &out.snapshots {
            let now = totals(snap, cfg.g).expect("quadrature");
            let c1 = conservation_error(&initial, &now, snap, cfg.g);
            println!("  t = {:>6.2}  C1_h = {:.2e}  C1_uh = {:.2e}  C1_H = {:.2e}", snap.t, c1[0], c1[1], c1[2]);
        }
    }
}
