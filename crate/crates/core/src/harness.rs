//! Experiment manifests and the file layout of runs, sweeps and reports.
//!
//! A sweep writes one directory per `(alpha, k)` cell:
//!
//! ```text
//! <out>/manifest.txt
//! <out>/convergence.csv
//! <out>/rates.csv
//! <out>/<alpha>/<k>/config.txt
//! <out>/<alpha>/<k>/snapshot_<t>.csv
//! <out>/<alpha>/<k>/diagnostics.csv
//! <out>/<alpha>/<k>/steps.csv
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::config::{dx_for_level, parse_list, Scheme, SimConfig};
use crate::diagnostics::{
    diagnose_run, l1_difference, write_diagnostics, DiagnosticsRecord, Field,
    StructureThresholds, DAGGER_WINDOW,
};
use crate::diagnostics::bore::{bore_means, leading_wave};
use crate::error::{Error, Result};
use crate::reference::{solve_swwe_dambreak, whitham_leading_wave};
use crate::run::{simulate, write_reports, RunFailure, RunOptions, RunOutput};
use crate::snapshot::{fmt17, Snapshot};

/// Step reports are kept every this many steps in written runs.
pub const REPORT_EVERY: u64 = 100;

const MANIFEST_KEYS: [&str; 8] = [
    "alphas",
    "levels",
    "exclude_window",
    "eps1",
    "rho",
    "mid_half_width",
    "flank_width",
    "workers",
];

/// A sweep over smoothing lengths and refinement levels.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentManifest {
    /// Every cell starts from this configuration, with `alpha` and `dx`
    /// replaced.
    pub base: SimConfig,
    pub alphas: Vec<f64>,
    /// Levels `k` with `dx = 10 / 2^k`, strictly increasing.
    pub levels: Vec<u32>,
    pub exclude_window: Option<(f64, f64)>,
    pub thresholds: StructureThresholds,
    pub out_dir: Option<PathBuf>,
    /// Concurrent cells; 0 lets the thread pool decide.
    pub workers: usize,
}

impl ExperimentManifest {
    /// Parse a manifest. It holds the sweep keys (`alphas`, `levels`, ...)
    /// and any configuration key except `alpha` and `dx`; configuration
    /// keys that are absent keep the dam-break defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut base_text = String::new();
        let mut alphas = None;
        let mut levels = None;
        let mut exclude_window = None;
        let mut thresholds = StructureThresholds::default();
        let mut workers = 0usize;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            let Some((key, value)) = line.split_once('=') else {
                base_text.push_str(raw);
                base_text.push('\n');
                continue;
            };
            let (key, value) = (key.trim(), value.trim());
            if !MANIFEST_KEYS.contains(&key) {
                if key == "alpha" || key == "dx" {
                    return Err(Error::Manifest(format!(
                        "line {line_no}: `{key}` is swept; use `{key}s`/`levels`"
                    )));
                }
                base_text.push_str(raw);
                base_text.push('\n');
                continue;
            }
            // Keep line numbers aligned for errors from the base parser.
            base_text.push('\n');
            let bad = || Error::BadValue {
                key: key.to_string(),
                value: value.to_string(),
                line: line_no,
            };
            let num = || value.parse::<f64>().map_err(|_| bad());
            match key {
                "alphas" => alphas = Some(parse_list(value).ok_or_else(bad)?),
                "levels" => {
                    let v: Option<Vec<u32>> =
                        value.split(',').map(|s| s.trim().parse().ok()).collect();
                    levels = Some(v.ok_or_else(bad)?);
                }
                "exclude_window" => exclude_window = parse_window(value).ok_or_else(bad)?,
                "eps1" => thresholds.eps1 = num()?,
                "rho" => thresholds.rho = num()?,
                "mid_half_width" => thresholds.mid_half_width = num()?,
                "flank_width" => thresholds.flank_width = num()?,
                "workers" => workers = value.parse().map_err(|_| bad())?,
                _ => unreachable!(),
            }
        }
        let base = SimConfig::parse_with_defaults(&base_text)?;
        let manifest = ExperimentManifest {
            out_dir: base.out_dir.clone(),
            base,
            alphas: alphas.ok_or_else(|| Error::MissingKey("alphas".into()))?,
            levels: levels.ok_or_else(|| Error::MissingKey("levels".into()))?,
            exclude_window,
            thresholds,
            workers,
        };
        manifest.validate()?;
        Ok(manifest)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.alphas.is_empty() || self.levels.is_empty() {
            return Err(Error::Manifest("alphas and levels must be non-empty".into()));
        }
        if self.levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Manifest(format!(
                "levels must be strictly increasing, got {:?}",
                self.levels
            )));
        }
        let mut names: Vec<String> = self.alphas.iter().map(|a| alpha_dir(*a)).collect();
        names.sort();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Manifest("alphas must be distinct".into()));
        }
        for cell in self.cells() {
            cell.config.validate()?;
        }
        Ok(())
    }

    /// Every `(alpha, k)` combination, alpha-major.
    pub fn cells(&self) -> Vec<SweepCell> {
        let mut out = Vec::new();
        for &alpha in &self.alphas {
            for &k in &self.levels {
                let mut config = self.base.clone();
                config.alpha = alpha;
                config.dx = dx_for_level(k);
                out.push(SweepCell {
                    alpha,
                    level: k,
                    config,
                });
            }
        }
        out
    }
}

fn parse_window(value: &str) -> Option<Option<(f64, f64)>> {
    match value {
        "" | "none" => Some(None),
        "dagger" => Some(Some(DAGGER_WINDOW)),
        _ => {
            let v = parse_list(value)?;
            match v.as_slice() {
                [lo, hi] if lo < hi => Some(Some((*lo, *hi))),
                _ => None,
            }
        }
    }
}

/// Parse `lo,hi`, `dagger` or `none`.
pub fn parse_exclude_window(value: &str) -> Result<Option<(f64, f64)>> {
    parse_window(value.trim()).ok_or_else(|| Error::BadValue {
        key: "exclude_window".into(),
        value: value.into(),
        line: 0,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub alpha: f64,
    pub level: u32,
    pub config: SimConfig,
}

impl SweepCell {
    pub fn dir(&self, root: &Path) -> PathBuf {
        root.join(alpha_dir(self.alpha)).join(self.level.to_string())
    }
}

fn alpha_dir(alpha: f64) -> String {
    format!("{alpha}")
}

pub fn snapshot_file_name(t: f64) -> String {
    format!("snapshot_{t}.csv")
}

/// Times that a run of `cfg` records: the requested ones up to `t_end`, and
/// `t_end` itself.
pub fn recorded_times(cfg: &SimConfig) -> Vec<f64> {
    let mut times: Vec<f64> = cfg
        .snapshot_times
        .iter()
        .copied()
        .filter(|t| *t <= cfg.t_end)
        .chain(std::iter::once(cfg.t_end))
        .collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    times
}

/// Run one configuration and write its directory. On solver failure the
/// snapshots taken so far and the last good state are still written.
pub fn run_and_write(
    cfg: &SimConfig,
    dir: &Path,
    thresholds: &StructureThresholds,
) -> std::result::Result<(RunOutput, Vec<DiagnosticsRecord>), RunFailure> {
    let opts = RunOptions {
        snapshot_times: recorded_times(cfg),
        report_every: REPORT_EVERY,
    };
    let io_fail = |error: Error| RunFailure {
        error,
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
    };
    fs::create_dir_all(dir).map_err(|e| io_fail(Error::io(dir, e)))?;
    let cfg_path = dir.join("config.txt");
    fs::write(&cfg_path, cfg.to_text()).map_err(|e| io_fail(Error::io(&cfg_path, e)))?;

    let write_all = |snaps: &[Snapshot], reports: &[crate::scheme::StepReport]| -> Result<Vec<DiagnosticsRecord>> {
        for s in snaps {
            s.write_csv(&dir.join(snapshot_file_name(s.t)))?;
        }
        write_reports(&dir.join("steps.csv"), reports)?;
        let records = diagnose_run(cfg, snaps, thresholds)?;
        write_diagnostics(&dir.join("diagnostics.csv"), &records)?;
        Ok(records)
    };

    match simulate(cfg, &opts) {
        Ok(out) => {
            let records = write_all(&out.snapshots, &out.reports).map_err(io_fail)?;
            Ok((out, records))
        }
        Err(fail) => {
            let _ = write_all(&fail.snapshots, &fail.reports);
            if !fail.last_good.is_empty() {
                let name = format!("failed_at_{}.csv", fail.last_good.t);
                let _ = fail.last_good.write_csv(&dir.join(name));
            }
            Err(fail)
        }
    }
}

/// One row of the convergence table.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub alpha: f64,
    pub level: u32,
    pub dx: f64,
    pub c1: [f64; 3],
    /// Against the finest level; `None` on the finest row itself.
    pub l1_vs_finest: Option<[f64; 2]>,
    /// Against the next finer level; `None` on the finest row.
    pub l1_vs_next: Option<[f64; 2]>,
}

pub const CONVERGENCE_HEADER: [&str; 8] =
    ["alpha", "dx", "C1_h", "C1_uh", "C1_H", "L1_h", "L1_u", "excluded_window"];

pub const RATES_HEADER: [&str; 7] =
    ["alpha", "dx", "L1_h_next", "L1_u_next", "rate_h", "rate_u", "excluded_window"];

/// Convergence table of one alpha from final snapshots ordered coarse to
/// fine, with the conservation errors of each level.
pub fn convergence_rows(
    alpha: f64,
    levels: &[u32],
    finals: &[Snapshot],
    c1: &[[f64; 3]],
    exclude: Option<(f64, f64)>,
) -> Result<Vec<ConvergenceRow>> {
    let n = finals.len();
    let pair = |c: &Snapshot, f: &Snapshot| -> Result<[f64; 2]> {
        Ok([
            l1_difference(c, f, Field::H, exclude)?,
            l1_difference(c, f, Field::U, exclude)?,
        ])
    };
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let last = i + 1 == n;
        rows.push(ConvergenceRow {
            alpha,
            level: levels[i],
            dx: finals[i].dx,
            c1: c1[i],
            l1_vs_finest: if last { None } else { Some(pair(&finals[i], &finals[n - 1])?) },
            l1_vs_next: if last { None } else { Some(pair(&finals[i], &finals[i + 1])?) },
        });
    }
    Ok(rows)
}

fn window_label(w: Option<(f64, f64)>) -> String {
    match w {
        None => String::new(),
        Some(w) if w == DAGGER_WINDOW => "dagger".into(),
        Some((lo, hi)) => format!("{lo}:{hi}"),
    }
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(|e| csv_error(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    Error::Csv {
        path: path.into(),
        line: 0,
        msg: e.to_string(),
    }
}

pub fn write_convergence(
    table: &Path,
    rates: &Path,
    rows: &[ConvergenceRow],
    exclude: Option<(f64, f64)>,
) -> Result<()> {
    let label = window_label(exclude);
    let opt = |v: Option<f64>| v.map(fmt17).unwrap_or_default();
    let mut w = csv_writer(table)?;
    w.write_record(CONVERGENCE_HEADER).map_err(|e| csv_error(table, e))?;
    for r in rows {
        w.write_record([
            format!("{}", r.alpha),
            fmt17(r.dx),
            fmt17(r.c1[0]),
            fmt17(r.c1[1]),
            fmt17(r.c1[2]),
            opt(r.l1_vs_finest.map(|v| v[0])),
            opt(r.l1_vs_finest.map(|v| v[1])),
            label.clone(),
        ])
        .map_err(|e| csv_error(table, e))?;
    }
    w.flush().map_err(|e| Error::io(table, e))?;

    let mut w = csv_writer(rates)?;
    w.write_record(RATES_HEADER).map_err(|e| csv_error(rates, e))?;
    for pair in rows.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if a.alpha != b.alpha {
            continue;
        }
        let (Some(ea), eb) = (a.l1_vs_next, b.l1_vs_next) else {
            continue;
        };
        let rate = |k: usize| eb.map(|eb| fmt17((ea[k] / eb[k]).log2())).unwrap_or_default();
        w.write_record([
            format!("{}", a.alpha),
            fmt17(a.dx),
            fmt17(ea[0]),
            fmt17(ea[1]),
            rate(0),
            rate(1),
            label.clone(),
        ])
        .map_err(|e| csv_error(rates, e))?;
    }
    w.flush().map_err(|e| Error::io(rates, e))
}

/// Outcome of a sweep.
#[derive(Debug)]
pub struct SweepReport {
    pub rows: Vec<ConvergenceRow>,
    pub failures: Vec<(SweepCell, RunFailure)>,
}

/// Run every cell of the manifest into `out`, then build the convergence
/// table per alpha. Cells run concurrently on `workers` threads.
pub fn run_sweep(manifest: &ExperimentManifest, out: &Path) -> Result<SweepReport> {
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(manifest.workers)
        .build()
        .map_err(|e| Error::Manifest(format!("thread pool: {e}")))?;
    let cells = manifest.cells();
    let results: Vec<_> = pool.install(|| {
        cells
            .par_iter()
            .map(|cell| run_and_write(&cell.config, &cell.dir(out), &manifest.thresholds))
            .collect()
    });

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let per_alpha = manifest.levels.len();
    let mut results = results.into_iter();
    for (ai, &alpha) in manifest.alphas.iter().enumerate() {
        let mut finals = Vec::new();
        let mut c1 = Vec::new();
        let mut levels = Vec::new();
        for li in 0..per_alpha {
            let cell = &cells[ai * per_alpha + li];
            match results.next().expect("one result per cell") {
                Ok((run, records)) => {
                    finals.push(Snapshot::from_state(&run.state));
                    c1.push(records.last().map(|r| r.c1).unwrap_or([f64::NAN; 3]));
                    levels.push(cell.level);
                }
                Err(fail) => failures.push((cell.clone(), fail)),
            }
        }
        if finals.len() >= 2 {
            rows.extend(convergence_rows(alpha, &levels, &finals, &c1, manifest.exclude_window)?);
        }
    }
    Ok(SweepReport { rows, failures })
}

/// Comparison of a finished run against the closed-form references.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub t: f64,
    /// `None` when no bore formed (including the still basin).
    pub bore: Option<BoreComparison>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoreComparison {
    pub h_mean: f64,
    pub h2: f64,
    pub u_mean: f64,
    pub u2: f64,
    pub means_clipped: bool,
    pub crest_depth: Option<f64>,
    pub a_plus: f64,
    pub x_a: Option<f64>,
    pub x_s2: f64,
    pub x_s_plus: f64,
}

pub const COMPARE_HEADER: [&str; 12] = [
    "t", "status", "h_mean", "h2", "u_mean", "u2", "A", "A_plus", "x_A", "x_S2", "x_S_plus",
    "means_clipped",
];

pub fn compare_snapshot(cfg: &SimConfig, snap: &Snapshot) -> Result<CompareReport> {
    if !(cfg.h1 > cfg.h0) {
        return Ok(CompareReport { t: snap.t, bore: None });
    }
    let sol = solve_swwe_dambreak(cfg.h0, cfg.h1, cfg.g, cfg.x0)?;
    let wh = whitham_leading_wave(cfg.h0, cfg.h1, cfg.g, cfg.x0)?;
    let crest = leading_wave(snap, cfg.h0, cfg.h1);
    let Some(crest) = crest else {
        return Ok(CompareReport { t: snap.t, bore: None });
    };
    let means = bore_means(snap, &sol)?;
    Ok(CompareReport {
        t: snap.t,
        bore: Some(BoreComparison {
            h_mean: means.h,
            h2: sol.h2,
            u_mean: means.u,
            u2: sol.u2,
            means_clipped: means.clipped,
            crest_depth: Some(crest.amplitude),
            a_plus: wh.a_plus,
            x_a: Some(crest.x),
            x_s2: sol.x_s2(snap.t),
            x_s_plus: wh.x_s_plus(snap.t),
        }),
    })
}

pub fn write_compare(path: &Path, report: &CompareReport) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(COMPARE_HEADER).map_err(|e| csv_error(path, e))?;
    let opt = |v: Option<f64>| v.map(fmt17).unwrap_or_default();
    let row: Vec<String> = match &report.bore {
        None => {
            let mut r = vec![fmt17(report.t), "no bore".into()];
            r.resize(COMPARE_HEADER.len(), String::new());
            r
        }
        Some(b) => vec![
            fmt17(report.t),
            "bore".into(),
            fmt17(b.h_mean),
            fmt17(b.h2),
            fmt17(b.u_mean),
            fmt17(b.u2),
            opt(b.crest_depth),
            fmt17(b.a_plus),
            opt(b.x_a),
            fmt17(b.x_s2),
            fmt17(b.x_s_plus),
            b.means_clipped.to_string(),
        ],
    };
    w.write_record(row).map_err(|e| csv_error(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

/// Closed-form quantities for the dam break of `cfg`, as `(name, value)`
/// rows; positions are taken at `cfg.t_end`.
pub fn reference_table(cfg: &SimConfig) -> Result<Vec<(&'static str, f64)>> {
    let sol = solve_swwe_dambreak(cfg.h0, cfg.h1, cfg.g, cfg.x0)?;
    let wh = whitham_leading_wave(cfg.h0, cfg.h1, cfg.g, cfg.x0)?;
    let t = cfg.t_end;
    Ok(vec![
        ("t", t),
        ("h2", sol.h2),
        ("u2", sol.u2),
        ("S2", sol.s2),
        ("x_u2", sol.x_u2(t)),
        ("x_S2", sol.x_s2(t)),
        ("x_fan_head", sol.x_fan_head(t)),
        ("x_fan_tail", sol.x_fan_tail(t)),
        ("h_b", wh.h_b),
        ("A_plus", wh.a_plus),
        ("S_plus", wh.s_plus),
        ("x_S_plus", wh.x_s_plus(t)),
    ])
}

pub fn write_reference(path: &Path, rows: &[(&str, f64)]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["quantity", "value"]).map_err(|e| csv_error(path, e))?;
    for (k, v) in rows {
        w.write_record([k.to_string(), fmt17(*v)])
            .map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Final snapshot of a run directory written by [`run_and_write`].
pub fn load_run(dir: &Path) -> Result<(SimConfig, Snapshot)> {
    let cfg = SimConfig::from_file(&dir.join("config.txt"))?;
    let snap = Snapshot::read_csv(&dir.join(snapshot_file_name(cfg.t_end)), cfg.t_end)?;
    Ok((cfg, snap))
}

/// Apply command-line overrides to a configuration.
pub fn override_scheme(cfg: &mut SimConfig, scheme: Option<Scheme>) {
    if let Some(s) = scheme {
        cfg.scheme = s;
    }
}
