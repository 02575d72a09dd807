//! Uniform cell-centred grid, two-level state storage, the smoothed
//! dam-break initial condition and the Dirichlet ghost layers.

use crate::config::SimConfig;
use crate::error::{Error, Result};

/// Ghost cells on each side. The widest stencil (the five-point third
/// derivative of `u`) reaches `i ± 2`.
pub const GHOSTS: usize = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub a: f64,
    pub b: f64,
    pub dx: f64,
    pub n_cells: usize,
}

impl Grid {
    pub fn new(a: f64, b: f64, n_cells: usize) -> Self {
        Grid {
            a,
            b,
            dx: (b - a) / n_cells as f64,
            n_cells,
        }
    }

    pub fn from_config(cfg: &SimConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Grid::new(cfg.domain_a, cfg.domain_b, cfg.n_cells()?))
    }

    /// Storage length including ghosts.
    pub fn len(&self) -> usize {
        self.n_cells + 2 * GHOSTS
    }

    pub fn is_empty(&self) -> bool {
        self.n_cells == 0
    }

    /// Storage indices of the interior cells.
    pub fn interior(&self) -> std::ops::Range<usize> {
        GHOSTS..GHOSTS + self.n_cells
    }

    /// Centre of storage cell `j` (ghosts included; `j = GHOSTS` is the
    /// first interior cell). Computed directly, never by accumulation.
    pub fn x(&self, j: usize) -> f64 {
        self.a + (j as f64 - GHOSTS as f64 + 0.5) * self.dx
    }

    /// Interior cell centres.
    pub fn centers(&self) -> Vec<f64> {
        self.interior().map(|j| self.x(j)).collect()
    }
}

/// Depth and velocity at time levels n (`curr`) and n-1 (`prev`), with ghosts.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub grid: Grid,
    pub h_curr: Vec<f64>,
    pub u_curr: Vec<f64>,
    pub h_prev: Vec<f64>,
    pub u_prev: Vec<f64>,
    pub t: f64,
    pub step: u64,
    /// Dirichlet depth on the left and right boundaries.
    pub h_left: f64,
    pub h_right: f64,
}

impl State {
    /// Uniform state, both levels equal. Ghosts take the same values.
    pub fn uniform(grid: Grid, h: f64, u: f64) -> Self {
        let n = grid.len();
        let mut s = State {
            grid,
            h_curr: vec![h; n],
            u_curr: vec![u; n],
            h_prev: vec![h; n],
            u_prev: vec![u; n],
            t: 0.0,
            step: 0,
            h_left: h,
            h_right: h,
        };
        s.refresh_ghosts();
        s
    }

    /// Build a state from interior profiles; the previous level copies the
    /// current one.
    pub fn from_profiles(grid: Grid, h: &[f64], u: &[f64], h_left: f64, h_right: f64) -> Self {
        assert_eq!(h.len(), grid.n_cells);
        assert_eq!(u.len(), grid.n_cells);
        let n = grid.len();
        let mut h_curr = vec![0.0; n];
        let mut u_curr = vec![0.0; n];
        h_curr[grid.interior()].copy_from_slice(h);
        u_curr[grid.interior()].copy_from_slice(u);
        let mut s = State {
            grid,
            h_prev: h_curr.clone(),
            u_prev: u_curr.clone(),
            h_curr,
            u_curr,
            t: 0.0,
            step: 0,
            h_left,
            h_right,
        };
        s.refresh_ghosts();
        s
    }

    /// Reset all ghost cells of both levels to the Dirichlet data
    /// (`u = 0`, `h = h_left` / `h_right`). Interior cells are untouched.
    pub fn refresh_ghosts(&mut self) {
        let n = self.grid.len();
        for arr in [&mut self.h_curr, &mut self.h_prev] {
            arr[..GHOSTS].fill(self.h_left);
            arr[n - GHOSTS..].fill(self.h_right);
        }
        for arr in [&mut self.u_curr, &mut self.u_prev] {
            arr[..GHOSTS].fill(0.0);
            arr[n - GHOSTS..].fill(0.0);
        }
    }

    pub fn h(&self) -> &[f64] {
        &self.h_curr[self.grid.interior()]
    }

    pub fn u(&self) -> &[f64] {
        &self.u_curr[self.grid.interior()]
    }

    pub fn min_h(&self) -> f64 {
        self.h().iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_u(&self) -> f64 {
        self.u().iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// `h(x, 0) = h0 + (h1 - h0)/2 * (1 + tanh((x0 - x)/alpha))`.
pub fn dambreak_depth(cfg: &SimConfig, x: f64) -> f64 {
    cfg.h0 + 0.5 * (cfg.h1 - cfg.h0) * (1.0 + ((cfg.x0 - x) / cfg.alpha).tanh())
}

/// Smoothed dam-break initial condition: tanh depth profile, fluid at rest,
/// previous level a copy of the current one. Ghosts hold the Dirichlet data
/// `h1` (left) and `h0` (right).
pub fn smoothed_dambreak_ic(cfg: &SimConfig, grid: &Grid) -> Result<State> {
    cfg.validate()?;
    let h: Vec<f64> = grid.centers().iter().map(|&x| dambreak_depth(cfg, x)).collect();
    let u = vec![0.0; grid.n_cells];
    Ok(State::from_profiles(grid.clone(), &h, &u, cfg.h1, cfg.h0))
}

/// Closed-form totals of the initial condition over `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticTotals {
    pub mass: f64,
    pub momentum: f64,
    pub energy: f64,
    /// The energy expression without the bulk `(b - a)` term and with
    /// `h0^2 - h1^2`, as it is sometimes quoted. Kept for reference only.
    pub energy_uncorrected: f64,
}

/// Totals of mass, momentum and energy for the smoothed dam-break initial
/// condition. Requires `x0` at the domain midpoint.
pub fn analytic_totals(cfg: &SimConfig) -> Result<AnalyticTotals> {
    cfg.validate()?;
    let mid = cfg.midpoint();
    if (cfg.x0 - mid).abs() > 1e-12 * cfg.domain_length().max(1.0) {
        return Err(Error::NotMidpoint {
            x0: cfg.x0,
            midpoint: mid,
        });
    }
    let (h0, h1, a, b, alpha, g) = (cfg.h0, cfg.h1, cfg.domain_a, cfg.domain_b, cfg.alpha, cfg.g);
    let len = b - a;
    let jump2 = (h1 - h0) * (h1 - h0);
    let tail = alpha * jump2 * ((a - b) / (2.0 * alpha)).tanh();
    Ok(AnalyticTotals {
        mass: 0.5 * (h1 + h0) * len,
        momentum: 0.0,
        energy: 0.25 * g * ((h0 * h0 + h1 * h1) * len + tail),
        energy_uncorrected: 0.25 * g * (h0 * h0 - h1 * h1 + tail),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg() -> SimConfig {
        SimConfig::dambreak(2.0, 6)
    }

    #[test]
    fn depth_at_centre_and_far_field() {
        let c = cfg();
        assert_eq!(dambreak_depth(&c, 500.0), 1.4);
        assert!((dambreak_depth(&c, -1e4) - 1.8).abs() < 1e-15);
        assert!((dambreak_depth(&c, 1e4) - 1.0).abs() < 1e-15);
        // 1 + 0.4 (1 + tanh(-1))
        assert!((dambreak_depth(&c, 502.0) - 1.095_362_337_617_694).abs() < 1e-14);
    }

    #[test]
    fn centers_are_exactly_uniform() {
        let grid = Grid::from_config(&cfg()).unwrap();
        assert_eq!(grid.n_cells, 6400);
        assert_eq!(grid.x(GHOSTS), 0.078125);
        assert_eq!(grid.x(GHOSTS + grid.n_cells - 1), 1000.0 - 0.078125);
        let xs = grid.centers();
        for w in xs.windows(2) {
            assert_eq!(w[1] - w[0], grid.dx);
        }
    }

    #[test]
    fn ic_ghosts_and_levels() {
        let c = cfg();
        let grid = Grid::from_config(&c).unwrap();
        let s = smoothed_dambreak_ic(&c, &grid).unwrap();
        assert_eq!(s.h_curr.len(), grid.n_cells + 4);
        assert_eq!(&s.h_curr[..2], &[1.8, 1.8]);
        assert_eq!(&s.h_curr[grid.n_cells + 2..], &[1.0, 1.0]);
        assert_eq!(s.h_prev, s.h_curr);
        assert!(s.u_curr.iter().all(|&u| u == 0.0));
        assert_eq!(s.t, 0.0);
    }

    #[test]
    fn ghost_refresh_idempotent() {
        let c = cfg();
        let grid = Grid::from_config(&c).unwrap();
        let mut s = smoothed_dambreak_ic(&c, &grid).unwrap();
        s.u_curr.iter_mut().for_each(|u| *u = 0.3);
        s.h_curr[0] = 7.0;
        let interior_before = s.u().to_vec();
        s.refresh_ghosts();
        let once = s.clone();
        s.refresh_ghosts();
        assert_eq!(s, once);
        assert_eq!(s.u(), &interior_before[..]);
        assert_eq!(s.h_curr[0], 1.8);
        assert_eq!(s.u_curr[0], 0.0);
    }

    #[test]
    fn totals_mass_and_midpoint_check() {
        let t = analytic_totals(&cfg()).unwrap();
        assert!((t.mass - 1400.0).abs() < 1e-9);
        assert_eq!(t.momentum, 0.0);
        let mut off = cfg();
        off.x0 = 400.0;
        assert!(matches!(analytic_totals(&off), Err(Error::NotMidpoint { .. })));
    }

    // Trapezoid-free check of the energy closed form: adaptive Simpson on
    // g h^2 / 2 over the whole domain.
    #[test]
    fn energy_total_matches_simpson() {
        let c = cfg();
        let f = |x: f64| 0.5 * c.g * dambreak_depth(&c, x).powi(2);
        let n = 200_000;
        let hstep = 1000.0 / n as f64;
        // Compensated sum: plain accumulation of 2e5 terms drifts by ~1e-12.
        let (mut sum, mut comp) = (f(0.0) + f(1000.0), 0.0);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            let y = w * f(i as f64 * hstep) - comp;
            let s = sum + y;
            comp = (s - sum) - y;
            sum = s;
        }
        let simpson = sum * hstep / 3.0;
        let t = analytic_totals(&c).unwrap();
        assert!(((t.energy - simpson) / simpson).abs() < 1e-12, "{} vs {simpson}", t.energy);
        // The uncorrected expression is far off.
        assert!((t.energy_uncorrected - simpson).abs() > 1000.0);
    }

    proptest! {
        #[test]
        fn ic_symmetric_and_decreasing(s in 0.0f64..300.0, alpha in 0.05f64..50.0) {
            let mut c = cfg();
            c.alpha = alpha;
            let left = dambreak_depth(&c, c.x0 - s);
            let right = dambreak_depth(&c, c.x0 + s);
            prop_assert!((left + right - (c.h0 + c.h1)).abs() < 1e-12);
            if s > 0.0 && s / alpha < 15.0 {
                prop_assert!(right < left);
            }
        }

        #[test]
        fn trapezoid_mass_matches_closed_form(alpha in 1.0f64..40.0, level in 2u32..6) {
            let mut c = SimConfig::dambreak(alpha, level);
            c.domain_a = 0.0;
            c.domain_b = 1000.0;
            prop_assume!(c.dx <= alpha / 4.0);
            let grid = Grid::from_config(&c).unwrap();
            // Composite rule over cells; the integrand is flat at both ends.
            let total: f64 = grid.centers().iter().map(|&x| dambreak_depth(&c, x)).sum::<f64>() * c.dx;
            let exact = analytic_totals(&c).unwrap().mass;
            prop_assert!(((total - exact) / exact).abs() < 1e-10);
        }
    }
}
