//! Propagate an exact solitary wave and measure how well its shape and
//! speed are kept.
//!
//!     cargo run --release --example solitary_wave -- [amplitude] [t_end] [k...]
//!
//! The Serre equations carry `h = h0 + a sech^2(kappa (x - c t))` with
//! `c = sqrt(g (h0 + a))`, `kappa = sqrt(3 a) / (2 h0 sqrt(h0 + a))` and
//! `u = c (1 - h0 / h)`. Both time levels are initialised exactly.

use serre::config::{Bootstrap, Scheme, SimConfig};
use serre::grid::{Grid, State, GHOSTS};
use serre::scheme::Stepper;

const H0: f64 = 1.0;
const START: f64 = 50.0;

fn solitary(a: f64, g: f64) -> impl Fn(f64, f64) -> (f64, f64) {
    let c = (g * (H0 + a)).sqrt();
    let kappa = (3.0 * a).sqrt() / (2.0 * H0 * (H0 + a).sqrt());
    move |x, t| {
        let s = 1.0 / (kappa * (x - START - c * t)).cosh();
        let h = H0 + a * s * s;
        (h, c * (1.0 - H0 / h))
    }
}

fn run(a: f64, k: u32, scheme: Scheme, t_end: f64) -> (f64, f64, f64) {
    let mut cfg = SimConfig::dambreak(1.0, k).with_scheme(scheme).with_domain(0.0, 400.0);
    cfg.x0 = 200.0;
    // Level n-1 is set exactly below; use it as given.
    cfg.bootstrap = Bootstrap::Copy;
    let exact = solitary(a, cfg.g);
    let grid = Grid::from_config(&cfg).expect("grid");
    let xs = grid.centers();
    let (h, u): (Vec<f64>, Vec<f64>) = xs.iter().map(|&x| exact(x, 0.0)).unzip();
    let mut state = State::from_profiles(grid, &h, &u, H0, H0);
    let dt = cfg.dt();
    for (i, &x) in xs.iter().enumerate() {
        let (hp, up) = exact(x, -dt);
        state.h_prev[i + GHOSTS] = hp;
        state.u_prev[i + GHOSTS] = up;
    }
    let mut stepper = Stepper::new(&cfg).expect("stepper");
    let steps = (t_end / dt).round() as u64;
    for _ in 0..steps {
        stepper.step(&mut state).expect("step");
    }
    let hs = state.h();
    let (peak, _) = hs
        .iter()
        .enumerate()
        .fold((0, f64::MIN), |best, (i, &v)| if v > best.1 { (i, v) } else { best });
    let l1: f64 = xs.iter().zip(hs).map(|(&x, &v)| (v - exact(x, state.t).0).abs()).sum::<f64>() * cfg.dx;
    (xs[peak], hs[peak], l1)
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let a: f64 = args.first().map_or(0.2, |s| s.parse().expect("amplitude"));
    let t_end: f64 = args.get(1).map_or(20.0, |s| s.parse().expect("t_end"));
    let levels: Vec<u32> = if args.len() > 2 {
        args[2..].iter().map(|s| s.parse().expect("level")).collect()
    } else {
        vec![3, 4, 5, 6]
    };
    let c = (9.81 * (H0 + a)).sqrt();
    println!("amplitude {a}, speed {c:.6}, exact crest at x = {:.3} when t = {t_end}", START + c * t_end);
    for scheme in [Scheme::D, Scheme::E] {
        let mut last = None;
        for &k in &levels {
            let (x, h, l1) = run(a, k, scheme, t_end);
            let order = last.map(|p: f64| format!("{:.2}", (p / l1).log2())).unwrap_or_default();
            println!("  {scheme} k = {k}: crest x = {x:.3} h = {h:.5}  L1 = {l1:.3e} {order}");
            last = Some(l1);
        }
    }
}
