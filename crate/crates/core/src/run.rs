//! Driving a stepper to target times and collecting snapshots.

use std::fmt;
use std::path::Path;

use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::grid::{smoothed_dambreak_ic, Grid, State};
use crate::scheme::{StepReport, Stepper};
use crate::snapshot::{fmt17, Snapshot};

/// How close (in units of `dt`) a target must be to the step lattice to be
/// reached by whole steps only.
const LATTICE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Times at which to keep a snapshot, in any order.
    pub snapshot_times: Vec<f64>,
    /// Keep a step report every this many steps (0 keeps none).
    pub report_every: u64,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub snapshots: Vec<Snapshot>,
    pub reports: Vec<StepReport>,
    pub state: State,
    /// The final time was off the step lattice and was reached with a
    /// shortened last step.
    pub shortened_final_step: bool,
}

/// A run that stopped early. Carries the last level that was completed.
#[derive(Debug)]
pub struct RunFailure {
    pub error: Error,
    pub last_good: Snapshot,
    pub snapshots: Vec<Snapshot>,
    pub reports: Vec<StepReport>,
}

impl fmt::Display for RunFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (last good state at t = {})", self.error, self.last_good.t)
    }
}

impl std::error::Error for RunFailure {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

/// Whole steps from `t0` to `t`, and the leftover time if `t` is off the
/// lattice.
pub fn steps_between(t0: f64, t: f64, dt: f64) -> (u64, Option<f64>) {
    let span = t - t0;
    let n = (span / dt).round();
    if (span - n * dt).abs() <= LATTICE_TOL * dt {
        (n.max(0.0) as u64, None)
    } else {
        let whole = (span / dt).floor();
        (whole as u64, Some(span - whole * dt))
    }
}

/// Advance `state` to `t_target`. Returns whether a shortened step was
/// needed to land on it.
pub fn run_to(
    stepper: &mut Stepper,
    state: &mut State,
    t_target: f64,
    reports: &mut Vec<StepReport>,
    report_every: u64,
) -> Result<bool> {
    let dt = stepper.dt();
    if t_target < state.t - LATTICE_TOL * dt {
        return Err(Error::TimeReversal {
            target: t_target,
            current: state.t,
        });
    }
    let (n, rest) = steps_between(state.t, t_target, dt);
    for _ in 0..n {
        let r = stepper.step(state)?;
        if report_every > 0 && r.step % report_every == 0 {
            reports.push(r);
        }
    }
    if let Some(rest) = rest {
        let r = stepper.partial_step(state, rest)?;
        reports.push(r);
    }
    Ok(rest.is_some())
}

/// Run `cfg` from the smoothed dam-break initial condition to `cfg.t_end`.
pub fn simulate(cfg: &SimConfig, opts: &RunOptions) -> std::result::Result<RunOutput, RunFailure> {
    let start = Grid::from_config(cfg)
        .and_then(|g| smoothed_dambreak_ic(cfg, &g))
        .map_err(|e| RunFailure {
            error: e,
            last_good: Snapshot {
                t: 0.0,
                a: cfg.domain_a,
                dx: cfg.dx,
                x: Vec::new(),
                h: Vec::new(),
                u: Vec::new(),
            },
            snapshots: Vec::new(),
            reports: Vec::new(),
        })?;
    run_from(cfg, start, cfg.t_end, opts)
}

/// Run `cfg`'s method from an arbitrary state to `t_end`. Snapshots off the
/// step lattice are taken from a copy advanced by a shortened step, so the
/// main trajectory stays on the lattice.
pub fn run_from(
    cfg: &SimConfig,
    mut state: State,
    t_end: f64,
    opts: &RunOptions,
) -> std::result::Result<RunOutput, RunFailure> {
    let mut snapshots = Vec::new();
    let mut reports = Vec::new();
    let fail = |error: Error, state: &State, snapshots: Vec<Snapshot>, reports: Vec<StepReport>| RunFailure {
        error,
        last_good: Snapshot::from_state(state),
        snapshots,
        reports,
    };
    let mut stepper = match Stepper::new(cfg) {
        Ok(s) => s,
        Err(e) => return Err(fail(e, &state, snapshots, reports)),
    };
    let mut times: Vec<f64> = opts
        .snapshot_times
        .iter()
        .copied()
        .filter(|&t| t <= t_end)
        .collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let dt = stepper.dt();

    for t in times {
        let (_, rest) = steps_between(state.t, t, dt);
        let lattice_t = t - rest.unwrap_or(0.0);
        if let Err(e) = run_to(&mut stepper, &mut state, lattice_t, &mut reports, opts.report_every) {
            return Err(fail(e, &state, snapshots, reports));
        }
        match rest {
            None => snapshots.push(Snapshot::from_state(&state)),
            Some(rest) => {
                let mut side = state.clone();
                let mut side_stepper = stepper.clone();
                match side_stepper.partial_step(&mut side, rest) {
                    Ok(_) => snapshots.push(Snapshot::from_state(&side)),
                    Err(e) => return Err(fail(e, &state, snapshots, reports)),
                }
            }
        }
    }
    let shortened = match run_to(&mut stepper, &mut state, t_end, &mut reports, opts.report_every) {
        Ok(s) => s,
        Err(e) => return Err(fail(e, &state, snapshots, reports)),
    };
    Ok(RunOutput {
        snapshots,
        reports,
        state,
        shortened_final_step: shortened,
    })
}

/// Write step reports as `step,t,min_h,max_abs_u`.
pub fn write_reports(path: &Path, reports: &[StepReport]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Csv {
        path: path.into(),
        line: 0,
        msg: e.to_string(),
    })?;
    let io = |e: csv::Error| Error::Csv {
        path: path.into(),
        line: 0,
        msg: e.to_string(),
    };
    w.write_record(["step", "t", "min_h", "max_abs_u"]).map_err(io)?;
    for r in reports {
        w.write_record([r.step.to_string(), fmt17(r.t), fmt17(r.min_h), fmt17(r.max_abs_u)])
            .map_err(io)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SimConfig {
        SimConfig::dambreak(2.0, 4).with_t_end(0.0)
    }

    #[test]
    fn zero_target_gives_initial_snapshot() {
        let opts = RunOptions {
            snapshot_times: vec![0.0],
            report_every: 1,
        };
        let out = simulate(&cfg(), &opts).unwrap();
        assert_eq!(out.snapshots.len(), 1);
        assert_eq!(out.snapshots[0].t, 0.0);
        assert!(out.reports.is_empty());
        assert_eq!(out.state.step, 0);
    }

    #[test]
    fn step_count_is_rounded_quotient() {
        let c = cfg().with_t_end(3.0);
        let out = simulate(&c, &RunOptions::default()).unwrap();
        assert_eq!(out.state.step, (3.0 / c.dt()).round() as u64);
        assert!(!out.shortened_final_step);
        assert_eq!(out.state.t, 3.0);
    }

    #[test]
    fn off_lattice_end_is_shortened() {
        let c = cfg().with_t_end(1.0 + 0.25 * cfg().dt());
        let out = simulate(&c, &RunOptions::default()).unwrap();
        assert!(out.shortened_final_step);
        assert!((out.state.t - c.t_end).abs() < 1e-12);
    }

    #[test]
    fn off_lattice_snapshot_leaves_trajectory_alone() {
        let c = cfg().with_t_end(2.0);
        let plain = simulate(&c, &RunOptions::default()).unwrap();
        let opts = RunOptions {
            snapshot_times: vec![1.0 + 0.5 * c.dt(), 0.5],
            report_every: 0,
        };
        let with = simulate(&c, &opts).unwrap();
        assert_eq!(plain.state, with.state);
        assert_eq!(with.snapshots.len(), 2);
        assert_eq!(with.snapshots[0].t, 0.5);
        assert!((with.snapshots[1].t - (1.0 + 0.5 * c.dt())).abs() < 1e-12);
    }

    #[test]
    fn going_backwards_is_rejected() {
        let c = cfg();
        let grid = Grid::from_config(&c).unwrap();
        let mut s = smoothed_dambreak_ic(&c, &grid).unwrap();
        s.t = 1.0;
        let mut st = Stepper::new(&c).unwrap();
        let err = run_to(&mut st, &mut s, 0.5, &mut Vec::new(), 0).unwrap_err();
        assert!(matches!(err, Error::TimeReversal { .. }));
    }

    #[test]
    fn failure_keeps_last_good_level() {
        let c = SimConfig::dambreak(2.0, 4)
            .with_scheme(crate::config::Scheme::D)
            .with_t_end(1.0);
        let grid = Grid::from_config(&c).unwrap();
        let mut s = State::uniform(grid, 0.01, 0.0);
        let j = s.grid.interior().start + 10;
        s.u_curr[j] = 500.0;
        let fail = run_from(&c, s.clone(), 1.0, &RunOptions::default()).unwrap_err();
        assert!(matches!(fail.error, Error::NonPositiveDepth { .. }));
        assert_eq!(fail.last_good.h, s.h().to_vec());
    }
}
