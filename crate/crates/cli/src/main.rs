//! Command-line driver: loads a TOML experiment config, runs the
//! requested pipeline (or the slice a subcommand selects), and writes
//! the JSON report. Exit codes: 0 all checks pass, 2 a check failed,
//! 1 a check or the run itself errored.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use dirindex_core::config::{load_config, ExperimentConfig};
use dirindex_core::report::{emit_plot_data, CheckStatus, PlotKind, RunReport};
use dirindex_core::runner::run;

#[derive(Parser)]
#[command(
    name = "dirindex",
    version,
    about = "L-index in direction: numerical checks on the unit ball"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Parser)]
struct CommonArgs {
    /// Experiment description (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Where to write the JSON report (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the sampling seed from the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Multiplies every default grid density.
    #[arg(long)]
    grid_scale: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlotWhat {
    /// Per-ray growth bound curves: theta, r, lhs, rhs, margin.
    GrowthCurves,
    /// ln|F| over the integrated weight along each ray.
    RatioVsR,
    /// Slice-disc weight variation bounds per eta.
    LambdaVsEta,
}

#[derive(Subcommand)]
enum Command {
    /// Estimates the global index on the sampling grid.
    Index(CommonArgs),
    /// Runs the behavioral criteria (local max, derivative bound, two-circle, max/min).
    Criteria(CommonArgs),
    /// Runs the log-derivative and zero-counting checks.
    Zeros(CommonArgs),
    /// Verifies the growth bound and the limsup ratio along rays.
    Growth(CommonArgs),
    /// Checks a built-in directional equation against its solution.
    PdeCheck(CommonArgs),
    /// Checks the weight's class membership and variation bounds.
    Lclass(CommonArgs),
    /// Runs every criterion the config asks for, optionally emitting plot data.
    Report {
        #[command(flatten)]
        common: CommonArgs,
        /// Extracts one plot-ready CSV series from the report.
        #[arg(long, value_enum)]
        plot: Option<PlotWhat>,
        /// Where to write the CSV (requires --plot).
        #[arg(long, requires = "plot")]
        plot_out: Option<PathBuf>,
    },
}

impl Command {
    fn common(&self) -> &CommonArgs {
        match self {
            Command::Index(c)
            | Command::Criteria(c)
            | Command::Zeros(c)
            | Command::Growth(c)
            | Command::PdeCheck(c)
            | Command::Lclass(c) => c,
            Command::Report { common, .. } => common,
        }
    }

    /// The criteria slice this subcommand pins; `None` keeps the config's list.
    fn criteria(&self) -> Option<&'static [&'static str]> {
        match self {
            Command::Index(_) => Some(&["index"]),
            Command::Criteria(_) => Some(&["thm5", "hayman", "thm8", "thm11"]),
            Command::Zeros(_) => Some(&["zeros"]),
            Command::Growth(_) => Some(&["growth"]),
            Command::PdeCheck(_) => Some(&["pde"]),
            Command::Lclass(_) => Some(&["lclass"]),
            Command::Report { .. } => None,
        }
    }
}

fn init_thread_pool() -> Result<(), String> {
    let Ok(raw) = std::env::var("DIRINDEX_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .parse()
        .map_err(|_| format!("DIRINDEX_THREADS must be a positive integer, got {raw:?}"))?;
    if n == 0 {
        return Err("DIRINDEX_THREADS must be positive".into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn apply_overrides(cfg: &mut ExperimentConfig, cmd: &Command) {
    let common = cmd.common();
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(scale) = common.grid_scale {
        cfg.grid.scale = scale;
    }
    if let Some(list) = cmd.criteria() {
        cfg.criteria = list.iter().map(|s| s.to_string()).collect();
    }
}

fn write_out(path: Option<&PathBuf>, payload: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, payload)
            .map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

fn emit_plots(report: &RunReport, what: PlotWhat, out: Option<&PathBuf>) -> Result<(), String> {
    let kind = match what {
        PlotWhat::GrowthCurves => PlotKind::GrowthCurves,
        PlotWhat::RatioVsR => PlotKind::RatioVsR,
        PlotWhat::LambdaVsEta => PlotKind::LambdaVsEta,
    };
    let csv = emit_plot_data(report, kind).map_err(|e| e.to_string())?;
    write_out(out, &csv)
}

fn execute(cli: Cli) -> Result<RunReport, String> {
    let common = cli.command.common();
    let mut cfg = load_config(&common.config).map_err(|e| e.to_string())?;
    apply_overrides(&mut cfg, &cli.command);
    let report = run(&cfg).map_err(|e| e.to_string())?;
    for check in &report.checks {
        let tag = match check.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Error => "ERROR",
        };
        eprintln!("[{tag}] {}: {}", check.check, check.message);
    }
    for (name, took) in &report.timings {
        eprintln!("       {name}: {:.2}s", took.as_secs_f64());
    }
    let json = report.to_json().map_err(|e| e.to_string())?;
    write_out(common.out.as_ref(), &json)?;
    if let Command::Report {
        plot: Some(what),
        plot_out,
        ..
    } = &cli.command
    {
        emit_plots(&report, *what, plot_out.as_ref())?;
    }
    Ok(report)
}

fn main() -> ExitCode {
    // Usage errors exit 1; only a failed check may exit 2.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let ok = matches!(
                e.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if ok { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    if let Err(msg) = init_thread_pool() {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    match execute(cli) {
        Ok(report) => {
            if report.any_errored() {
                ExitCode::from(1)
            } else if report.any_failed() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
