use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use serre::config::{Scheme, SimConfig};
use serre::diagnostics::StructureThresholds;
use serre::error::Error;
use serre::harness::{
    self, compare_snapshot, load_run, parse_exclude_window, reference_table, run_and_write,
    run_sweep, write_compare, write_convergence, write_reference, ExperimentManifest,
};

#[derive(Parser)]
#[command(name = "serre", version, about = "Smoothed dam-break experiments for the Serre equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration and write snapshots and diagnostics.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides `out_dir` in the config).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        scheme: Option<Scheme>,
    },
    /// Run a sweep over alpha and refinement level and tabulate convergence.
    Converge {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        scheme: Option<Scheme>,
        /// `lo,hi`, `dagger` or `none`.
        #[arg(long)]
        exclude_window: Option<String>,
    },
    /// Compare the final state of a run directory with the references.
    Compare {
        /// Directory written by `run` (or one cell of a sweep).
        run_dir: PathBuf,
        /// Report file (default `<run_dir>/compare.csv`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the closed-form reference quantities.
    Reference {
        /// Configuration to take depths and time from (default: the
        /// standard dam break at t = 30).
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failure reported as one `key=value` line on stderr.
struct Failure {
    kind: &'static str,
    message: String,
    code: u8,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            kind: e.kind(),
            message: e.to_string(),
            code: e.exit_code() as u8,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error kind={} message={:?}", f.kind, f.message);
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Run { config, out, scheme } => cmd_run(&config, out, scheme),
        Command::Converge {
            manifest,
            out,
            workers,
            scheme,
            exclude_window,
        } => cmd_converge(&manifest, out, workers, scheme, exclude_window),
        Command::Compare { run_dir, out } => cmd_compare(&run_dir, out),
        Command::Reference { config, out } => cmd_reference(config, out),
    }
}

fn out_dir(flag: Option<PathBuf>, configured: Option<PathBuf>) -> Result<PathBuf, Failure> {
    flag.or(configured).ok_or_else(|| Failure {
        kind: "missing_key",
        message: "no output directory: pass --out or set out_dir".into(),
        code: 2,
    })
}

fn cmd_run(config: &Path, out: Option<PathBuf>, scheme: Option<Scheme>) -> Result<(), Failure> {
    let mut cfg = SimConfig::from_file(config)?;
    harness::override_scheme(&mut cfg, scheme);
    let dir = out_dir(out, cfg.out_dir.clone())?;
    match run_and_write(&cfg, &dir, &StructureThresholds::default()) {
        Ok((run, _)) => {
            if run.shortened_final_step {
                eprintln!("note: final step shortened to land on t = {}", cfg.t_end);
            }
            println!("{}", dir.display());
            Ok(())
        }
        Err(fail) => Err(Failure {
            kind: fail.error.kind(),
            message: fail.to_string(),
            code: 1,
        }),
    }
}

fn cmd_converge(
    manifest_path: &Path,
    out: Option<PathBuf>,
    workers: Option<usize>,
    scheme: Option<Scheme>,
    exclude_window: Option<String>,
) -> Result<(), Failure> {
    let mut m = ExperimentManifest::from_file(manifest_path)?;
    if let Some(w) = workers {
        m.workers = w;
    }
    harness::override_scheme(&mut m.base, scheme);
    if let Some(w) = exclude_window {
        m.exclude_window = parse_exclude_window(&w)?;
    }
    if m.levels.len() < 2 {
        return Err(Error::Manifest("convergence needs at least two levels".into()).into());
    }
    let dir = out_dir(out, m.out_dir.clone())?;
    std::fs::create_dir_all(&dir).map_err(|e| Error::Io {
        path: dir.clone(),
        source: e,
    })?;
    let copy = dir.join("manifest.txt");
    std::fs::copy(manifest_path, &copy).map_err(|e| Error::Io { path: copy, source: e })?;

    let report = run_sweep(&m, &dir)?;
    let (table, rates) = if report.failures.is_empty() {
        ("convergence.csv", "rates.csv")
    } else {
        ("convergence_partial.csv", "rates_partial.csv")
    };
    write_convergence(&dir.join(table), &dir.join(rates), &report.rows, m.exclude_window)?;
    println!("{}", dir.join(table).display());
    if let Some((cell, fail)) = report.failures.first() {
        for (cell, fail) in &report.failures {
            eprintln!(
                "error kind={} alpha={} k={} message={:?}",
                fail.error.kind(),
                cell.alpha,
                cell.level,
                fail.to_string()
            );
        }
        return Err(Failure {
            kind: fail.error.kind(),
            message: format!(
                "{} of {} runs failed (first: alpha={} k={})",
                report.failures.len(),
                m.cells().len(),
                cell.alpha,
                cell.level
            ),
            code: 1,
        });
    }
    Ok(())
}

fn cmd_compare(run_dir: &Path, out: Option<PathBuf>) -> Result<(), Failure> {
    let (cfg, snap) = load_run(run_dir)?;
    let report = compare_snapshot(&cfg, &snap)?;
    let path = out.unwrap_or_else(|| run_dir.join("compare.csv"));
    write_compare(&path, &report)?;
    println!("{}", path.display());
    Ok(())
}

fn cmd_reference(config: Option<PathBuf>, out: Option<PathBuf>) -> Result<(), Failure> {
    let cfg = match config {
        Some(p) => SimConfig::from_file(&p)?,
        None => SimConfig::default(),
    };
    let rows = reference_table(&cfg)?;
    match out {
        Some(path) => {
            write_reference(&path, &rows)?;
            println!("{}", path.display());
        }
        None => {
            println!("quantity,value");
            for (k, v) in rows {
                println!("{k},{}", serre::snapshot::fmt17(v));
            }
        }
    }
    Ok(())
}
