use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use spinheat::observables::AmplificationMethod;
use spinheat::Execution;
use spinheat_cli::scenario::plot_script;
use spinheat_cli::{load_config, presets, run, CliError, Command, Options, Scenario};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    LinearResponse,
    CentralDifference,
}

/// Heat currents through three field-controlled coupled spins.
#[derive(Debug, Parser)]
#[command(name = "spinheat", version)]
struct Args {
    #[arg(value_enum, required_unless_present = "list_presets")]
    command: Option<Command>,
    /// Named parameter set (see --list-presets).
    #[arg(long, conflicts_with = "config", required_unless_present_any = ["config", "list_presets"])]
    preset: Option<String>,
    /// JSON configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write a gnuplot script for the CSV (requires --out).
    #[arg(long, requires = "out")]
    plot: Option<PathBuf>,
    /// Override kappa_M.
    #[arg(long, allow_negative_numbers = true)]
    kappa_m: Option<f64>,
    /// Initial subspace fraction (fixed-p policy for theta sweeps).
    #[arg(long)]
    p: Option<f64>,
    /// Override the field angle in radians.
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    /// Number of sweep points.
    #[arg(long)]
    grid: Option<usize>,
    /// Sweep range as LO,HI.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    range: Option<(f64, f64)>,
    /// Derivative scheme for `transistor`.
    #[arg(long, value_enum, default_value = "linear-response")]
    method: Method,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Evaluate sweep points one after another.
    #[arg(long)]
    sequential: bool,
    /// Print the preset registry and exit.
    #[arg(long)]
    list_presets: bool,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected LO,HI")?;
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"));
    Ok((parse(lo)?, parse(hi)?))
}

fn execute(args: Args) -> Result<(), CliError> {
    if args.list_presets {
        for p in presets::all() {
            println!("{:<12} {}", p.name, p.summary);
        }
        return Ok(());
    }
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
    }
    let scenario = match (&args.preset, &args.config) {
        (Some(name), _) => Scenario::from_preset(presets::find(name)?),
        (None, Some(path)) => Scenario::from_config(load_config(path)?),
        (None, None) => unreachable!("clap requires --preset or --config"),
    };
    let options = Options {
        kappa_m: args.kappa_m,
        p: args.p,
        theta: args.theta,
        grid: args.grid,
        range: args.range,
        method: match args.method {
            Method::LinearResponse => AmplificationMethod::LinearResponse,
            Method::CentralDifference => AmplificationMethod::CentralDifference,
        },
        exec: if args.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
    };
    let command = args.command.expect("clap requires a command");
    let report = run(command, &scenario, &options)?;
    if let Some(count) = report.count {
        println!("{count}");
    }
    let csv = report.table.to_csv()?;
    match &args.out {
        Some(path) => std::fs::write(path, &csv).map_err(|e| CliError::Io {
            path: path.clone(),
            source: e,
        })?,
        None if report.count.is_none() => print!("{csv}"),
        None => {}
    }
    if let (Some(plot), Some(out)) = (&args.plot, &args.out) {
        let script = plot_script(command, &out.to_string_lossy());
        std::fs::write(plot, script).map_err(|e| CliError::Io {
            path: plot.clone(),
            source: e,
        })?;
    }
    for note in &report.notes {
        eprintln!("{note}");
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
