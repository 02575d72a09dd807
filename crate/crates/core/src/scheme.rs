//! The implicit momentum update shared by both methods, the two mass
//! updates, and their assembly into single time steps.
//!
//! All updates read levels n and n-1 from a [`State`] whose ghosts hold the
//! Dirichlet data, and write interior values of level n+1 into caller
//! buffers of full storage length. Ghost entries of the outputs are set to
//! the boundary data as well.

use crate::config::{Bootstrap, MomentumForm, Scheme, SimConfig};
use crate::error::{Error, Result};
use crate::grid::{State, GHOSTS};
use crate::tridiag::TridiagonalSystem;

/// Per-step summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub step: u64,
    pub t: f64,
    pub min_h: f64,
    pub max_abs_u: f64,
    /// Every row of the momentum system was strictly diagonally dominant.
    pub diag_dominant: bool,
}

/// Scratch buffers reused across steps.
#[derive(Debug, Clone, Default)]
pub struct Workspace {
    pub system: TridiagonalSystem,
    scratch: Vec<f64>,
    solution: Vec<f64>,
    flux: Vec<f64>,
    h_next: Vec<f64>,
    u_next: Vec<f64>,
}

impl Workspace {
    pub fn new(n_cells: usize) -> Self {
        Workspace {
            system: TridiagonalSystem::with_len(n_cells),
            scratch: Vec::with_capacity(n_cells),
            solution: vec![0.0; n_cells],
            flux: vec![0.0; n_cells + 1],
            h_next: vec![0.0; n_cells + 2 * GHOSTS],
            u_next: vec![0.0; n_cells + 2 * GHOSTS],
        }
    }

    fn fit(&mut self, n_cells: usize) {
        if self.system.len() != n_cells {
            *self = Workspace::new(n_cells);
        }
    }
}

/// Fill `ws.system` with the implicit momentum system for level n+1.
///
/// `span` is the time distance between levels n-1 and n+1: `2 dt` for the
/// leapfrog step, `dt` for a forward-Euler start (with `u_prev = u_curr`).
pub fn assemble_momentum(
    state: &State,
    cfg: &SimConfig,
    form: MomentumForm,
    span: f64,
    sys: &mut TridiagonalSystem,
) {
    let n = state.grid.n_cells;
    if sys.len() != n {
        *sys = TridiagonalSystem::with_len(n);
    }
    let dx = state.grid.dx;
    let g = cfg.g;
    let inv2dx = 1.0 / (2.0 * dx);
    let invdx2 = 1.0 / (dx * dx);
    let inv2dx3 = 1.0 / (2.0 * dx * dx * dx);
    let h = &state.h_curr;
    let u = &state.u_curr;
    let up = &state.u_prev;

    for r in 0..n {
        let j = r + GHOSTS;
        let hj = h[j];
        let hx = (h[j + 1] - h[j - 1]) * inv2dx;
        let c2 = match form {
            MomentumForm::Consistent => hj * hj * hx,
            MomentumForm::Literal => hj * hj,
        };
        let c3 = hj * hj * hj / 3.0;

        let ux = (u[j + 1] - u[j - 1]) * inv2dx;
        let uxx = (u[j + 1] - 2.0 * u[j] + u[j - 1]) * invdx2;
        let uxxx = (u[j + 2] - 2.0 * u[j + 1] + 2.0 * u[j - 1] - u[j - 2]) * inv2dx3;
        let x_term = u[j] * hj * ux + g * hj * hx + c2 * ux * ux + c3 * ux * uxx
            - c2 * u[j] * uxx
            - c3 * u[j] * uxxx;

        let upx = (up[j + 1] - up[j - 1]) * inv2dx;
        let upxx = (up[j + 1] - 2.0 * up[j] + up[j - 1]) * invdx2;
        let y_term = span * x_term - hj * up[j] + c2 * upx + c3 * upxx;

        sys.sub[r] = c2 * inv2dx - c3 * invdx2;
        sys.diag[r] = hj + 2.0 * c3 * invdx2;
        sys.sup[r] = -c2 * inv2dx - c3 * invdx2;
        // Ghost velocities are zero, so the boundary columns add nothing.
        sys.rhs[r] = -y_term;
    }
}

fn momentum_into(
    state: &State,
    cfg: &SimConfig,
    span: f64,
    ws: &mut Workspace,
) -> Result<bool> {
    let n = state.grid.n_cells;
    ws.fit(n);
    assemble_momentum(state, cfg, cfg.momentum_form, span, &mut ws.system);
    let dominant = ws.system.is_diagonally_dominant();
    ws.system
        .solve_into(&mut ws.solution, &mut ws.scratch)
        .map_err(|row| Error::SingularSystem {
            step: state.step,
            row,
        })?;
    let u_next = &mut ws.u_next;
    u_next[..GHOSTS].fill(0.0);
    u_next[GHOSTS + n..].fill(0.0);
    for (r, &v) in ws.solution.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite {
                step: state.step,
                field: "u",
                cell: r,
            });
        }
        u_next[r + GHOSTS] = v;
    }
    Ok(dominant)
}

/// Implicit momentum update: velocity at level n+1 (full storage length,
/// zero ghosts).
pub fn momentum_update(state: &State, cfg: &SimConfig) -> Result<Vec<f64>> {
    let mut ws = Workspace::new(state.grid.n_cells);
    momentum_into(state, cfg, 2.0 * cfg.dt(), &mut ws)?;
    Ok(ws.u_next)
}

fn check_depth(h_next: &mut [f64], state: &State) -> Result<()> {
    let n = state.grid.n_cells;
    h_next[..GHOSTS].fill(state.h_left);
    h_next[GHOSTS + n..].fill(state.h_right);
    for (r, &v) in h_next[GHOSTS..GHOSTS + n].iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite {
                step: state.step,
                field: "h",
                cell: r,
            });
        }
        if v <= 0.0 {
            return Err(Error::NonPositiveDepth {
                step: state.step,
                cell: r,
                h: v,
            });
        }
    }
    Ok(())
}

/// Centred leapfrog mass update:
/// `h_i^{n+1} = h_i^{n-1} - span (u_i (h_{i+1} - h_{i-1})/dx + h_i (u_{i+1} - u_{i-1})/dx)`
/// with `span = dt` for the leapfrog step.
pub fn leapfrog_mass_into(state: &State, span: f64, h_next: &mut [f64]) -> Result<()> {
    let dx = state.grid.dx;
    let h = &state.h_curr;
    let u = &state.u_curr;
    let hp = &state.h_prev;
    for j in state.grid.interior() {
        h_next[j] = hp[j]
            - span * (u[j] * (h[j + 1] - h[j - 1]) / dx + h[j] * (u[j + 1] - u[j - 1]) / dx);
    }
    check_depth(h_next, state)
}

pub fn mass_update_leapfrog(state: &State, cfg: &SimConfig) -> Result<Vec<f64>> {
    let mut out = vec![0.0; state.grid.len()];
    leapfrog_mass_into(state, cfg.dt(), &mut out)?;
    Ok(out)
}

/// Mass fluxes `u^{n+1/2} h^{n+1/2}` at the faces between storage cells
/// `GHOSTS - 1 + f` and `GHOSTS + f`, for `f = 0..=n_cells`.
pub fn lax_wendroff_fluxes(state: &State, u_next: &[f64], dt: f64, flux: &mut [f64]) {
    let dx = state.grid.dx;
    let h = &state.h_curr;
    let u = &state.u_curr;
    let lam = dt / (2.0 * dx);
    for (f, out) in flux.iter_mut().enumerate() {
        let l = GHOSTS - 1 + f;
        let r = l + 1;
        let h_half = 0.5 * (h[r] + h[l]) - lam * (u[r] * h[r] - h[l] * u[l]);
        let u_half = (u_next[r] + u[r] + u_next[l] + u[l]) / 4.0;
        *out = u_half * h_half;
    }
}

/// Two-step Lax-Wendroff mass update using the new velocity `u_next`.
pub fn lax_wendroff_mass_into(
    state: &State,
    u_next: &[f64],
    dt: f64,
    flux: &mut Vec<f64>,
    h_next: &mut [f64],
) -> Result<()> {
    let n = state.grid.n_cells;
    flux.resize(n + 1, 0.0);
    lax_wendroff_fluxes(state, u_next, dt, flux);
    let ratio = dt / state.grid.dx;
    let h = &state.h_curr;
    for r in 0..n {
        let j = r + GHOSTS;
        h_next[j] = h[j] - ratio * (flux[r + 1] - flux[r]);
    }
    check_depth(h_next, state)
}

pub fn mass_update_lax_wendroff(
    state: &State,
    u_next: &[f64],
    cfg: &SimConfig,
) -> Result<Vec<f64>> {
    let mut out = vec![0.0; state.grid.len()];
    let mut flux = Vec::new();
    lax_wendroff_mass_into(state, u_next, cfg.dt(), &mut flux, &mut out)?;
    Ok(out)
}

/// Owns the scratch space for repeated steps of one configuration.
#[derive(Debug, Clone)]
pub struct Stepper {
    cfg: SimConfig,
    dt: f64,
    ws: Workspace,
    last_dominant: bool,
}

impl Stepper {
    pub fn new(cfg: &SimConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Stepper {
            cfg: cfg.clone(),
            dt: cfg.dt(),
            ws: Workspace::new(cfg.n_cells()?),
            last_dominant: true,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Advance one step of the configured method. On error the state is left
    /// at the last completed level.
    pub fn step(&mut self, state: &mut State) -> Result<StepReport> {
        let euler_start = state.step == 0 && self.cfg.bootstrap == Bootstrap::ForwardEuler;
        self.advance(state, self.dt, euler_start)?;
        state.step += 1;
        state.t = state.step as f64 * self.dt;
        Ok(self.report(state))
    }

    /// A single step of length `dt_short` from level n alone (forward-Euler
    /// form), used to land exactly on a time that is not a multiple of `dt`.
    /// Both stored levels are equal afterwards.
    pub fn partial_step(&mut self, state: &mut State, dt_short: f64) -> Result<StepReport> {
        state.h_prev.copy_from_slice(&state.h_curr);
        state.u_prev.copy_from_slice(&state.u_curr);
        self.advance(state, dt_short, true)?;
        state.h_prev.copy_from_slice(&state.h_curr);
        state.u_prev.copy_from_slice(&state.u_curr);
        state.t += dt_short;
        Ok(self.report(state))
    }

    fn advance(&mut self, state: &mut State, dt: f64, euler: bool) -> Result<()> {
        let ws = &mut self.ws;
        ws.fit(state.grid.n_cells);
        // Leapfrog spans cover two steps; the Euler start covers one.
        let (mom_span, mass_span) = if euler { (dt, 0.5 * dt) } else { (2.0 * dt, dt) };
        let dominant = match self.cfg.scheme {
            Scheme::D => {
                leapfrog_mass_into(state, mass_span, &mut ws.h_next)?;
                momentum_into(state, &self.cfg, mom_span, ws)?
            }
            Scheme::E => {
                let d = momentum_into(state, &self.cfg, mom_span, ws)?;
                lax_wendroff_mass_into(state, &ws.u_next, dt, &mut ws.flux, &mut ws.h_next)?;
                d
            }
        };
        self.last_dominant = dominant;
        std::mem::swap(&mut state.h_prev, &mut state.h_curr);
        std::mem::swap(&mut state.u_prev, &mut state.u_curr);
        std::mem::swap(&mut state.h_curr, &mut ws.h_next);
        std::mem::swap(&mut state.u_curr, &mut ws.u_next);
        state.refresh_ghosts();
        Ok(())
    }

    fn report(&self, state: &State) -> StepReport {
        StepReport {
            step: state.step,
            t: state.t,
            min_h: state.min_h(),
            max_abs_u: state.max_abs_u(),
            diag_dominant: self.last_dominant,
        }
    }
}
