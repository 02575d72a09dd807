//! L1 differences between successive refinements and observed orders.
//!
//!     cargo run --release --example convergence_study -- [alpha] [t] [k_min] [k_max]
//!
//! Defaults: alpha = 40, t = 3, k = 4..7, both methods.

use rayon::prelude::*;
use serre::config::{Scheme, SimConfig};
use serre::diagnostics::{convergence_rates, l1_difference, Field};
use serre::run::{simulate, RunOptions};
use serre::snapshot::Snapshot;

fn main() {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .map(|s| s.parse().expect("numeric argument"))
        .collect();
    let alpha = args.first().copied().unwrap_or(40.0);
    let t = args.get(1).copied().unwrap_or(3.0);
    let k_min = args.get(2).copied().unwrap_or(4.0) as u32;
    let k_max = args.get(3).copied().unwrap_or(7.0) as u32;

    for scheme in [Scheme::D, Scheme::E] {
        let finals: Vec<Snapshot> = (k_min..=k_max)
            .into_par_iter()
            .map(|k| {
                let cfg = SimConfig::dambreak(alpha, k).with_t_end(t).with_scheme(scheme);
                let out = simulate(&cfg, &RunOptions::default()).expect("run");
                Snapshot::from_state(&out.state)
            })
            .collect();
        let l1 = |field| -> Vec<f64> {
            finals
                .windows(2)
                .map(|p| l1_difference(&p[0], &p[1], field, None).expect("nested grids"))
                .collect()
        };
        let (eh, eu) = (l1(Field::H), l1(Field::U));
        let (rh, ru) = (convergence_rates(&eh), convergence_rates(&eu));
        println!("method {scheme}, alpha = {alpha}, t = {t}");
        println!("  {:>9} {:>11} {:>11} {:>7} {:>7}", "dx", "L1_h", "L1_u", "p_h", "p_u");
        for i in 0..eh.len() {
            let p = |r: &[f64]| r.get(i).map(|v| format!("{v:7.3}")).unwrap_or_default();
            println!("  {:>9.5} {:>11.3e} {:>11.3e} {} {}", finals[i].dx, eh[i], eu[i], p(&rh), p(&ru));
        }
    }
}
