//! Closed-form quantities that the simulations are measured against.
//!
//!     cargo run --example reference_solutions -- [h1] [t]

use serre::config::STANDARD_GRAVITY as G;
use serre::reference::{phase_velocity, solve_swwe_dambreak, whitham_leading_wave, Branch};

fn main() {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .map(|s| s.parse().expect("numeric argument"))
        .collect();
    let h1 = args.first().copied().unwrap_or(1.8);
    let t = args.get(1).copied().unwrap_or(30.0);
    let (h0, x0) = (1.0, 500.0);

    let s = solve_swwe_dambreak(h0, h1, G, x0).expect("dam break");
    println!("shallow water dam break, h1/h0 = {h1}");
    println!("  h2 = {:.10}  u2 = {:.10}  S2 = {:.10}", s.h2, s.u2, s.s2);
    println!(
        "  at t = {t}: fan [{:.3}, {:.3}], contact {:.3}, shock {:.3}",
        s.x_fan_head(t),
        s.x_fan_tail(t),
        s.x_u2(t),
        s.x_s2(t)
    );
    for x in [300.0, 480.0, 520.0, 600.0, 700.0] {
        let (h, u) = s.profile(x, t);
        println!("  x = {x:>5}: region {:?}, h = {h:.5}, u = {u:.5}", s.region(x, t));
    }

    let w = whitham_leading_wave(h0, h1, G, x0).expect("modulation");
    println!("leading undular-bore wave");
    println!("  h_b = {:.8}  A+ = {:.8}  S+ = {:.8}  x_S+({t}) = {:.3}", w.h_b, w.a_plus, w.s_plus, w.x_s_plus(t));

    println!("linear phase velocity about (h2, u2)");
    for k in [0.01, 0.1, 0.5, 1.0, 2.0, 5.0] {
        println!(
            "  k = {k:>4}: {:+.6} {:+.6}",
            phase_velocity(s.h2, s.u2, k, G, Branch::Plus),
            phase_velocity(s.h2, s.u2, k, G, Branch::Minus)
        );
    }
}
