//! `wavex`: configuration-driven batch runs of the waveguide solvers.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod tasks;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use log::info;

use config::{RunConfig, TaskKind};
use tasks::{Failure, Outcome};

const EXIT_CHECK: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_SOLVER: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "wavex", version, about = "Helmholtz waveguide solvers with Hardy space and PML exteriors")]
struct Cli {
    #[command(subcommand)]
    verb: Option<Verb>,

    /// TOML configuration; built-in defaults apply to missing fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Worker threads (falls back to WAVEX_THREADS, then to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Exit non-zero if any residual check fails.
    #[arg(long, global = true)]
    check: bool,

    /// Print the default configuration and exit.
    #[arg(long)]
    print_defaults: bool,

    /// Describe the columns of every output file and exit.
    #[arg(long)]
    help_output: bool,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Verb {
    /// Transverse eigenvalues of the cross section.
    Spectrum,
    /// Scattering of the configured incident modes.
    Diffract,
    /// Resonances in a window of the complex frequency plane.
    Resonate,
    /// Hardy error indicator over a grid of Möbius parameters.
    SweepKappa0,
    /// Errors against the exact field of the uniform duct.
    Convergence,
    /// Validate the configuration and run `task.kind` with residual checks.
    Check,
}

fn load(path: Option<&Path>) -> Result<RunConfig, Failure> {
    let Some(path) = path else {
        return Ok(RunConfig::default());
    };
    let text = fs::read_to_string(path).map_err(|e| {
        Failure::Config(config::ConfigError {
            path: String::new(),
            message: format!("cannot read {}: {e}", path.display()),
        })
    })?;
    config::parse(&text).map_err(Failure::Config)
}

fn threads(arg: Option<usize>) -> Result<Option<usize>, Failure> {
    if let Some(n) = arg {
        return Ok(Some(n));
    }
    match std::env::var("WAVEX_THREADS") {
        Ok(v) => v.trim().parse::<usize>().map(Some).map_err(|_| {
            Failure::Config(config::ConfigError {
                path: "WAVEX_THREADS".into(),
                message: format!("expected a thread count, got {v:?}"),
            })
        }),
        Err(_) => Ok(None),
    }
}

fn write_outputs(dir: &Path, outcome: &Outcome) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::Solver(format!("cannot create {}: {e}", dir.display())))?;
    for a in &outcome.artifacts {
        let path = dir.join(&a.name);
        fs::write(&path, &a.contents).map_err(|e| Failure::Solver(format!("cannot write {}: {e}", path.display())))?;
        info!("wrote {}", path.display());
    }
    Ok(())
}

fn execute(cli: &Cli, verb: Verb) -> Result<bool, Failure> {
    let cfg = load(cli.config.as_deref())?;
    if let Some(n) = threads(cli.threads)? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Solver(e.to_string()))?;
    }
    let (task, check) = match verb {
        Verb::Spectrum => (TaskKind::Spectrum, cli.check),
        Verb::Diffract => (TaskKind::Diffract, cli.check),
        Verb::Resonate => (TaskKind::Resonate, cli.check),
        Verb::SweepKappa0 => (TaskKind::SweepKappa0, cli.check),
        Verb::Convergence => (TaskKind::Convergence, cli.check),
        Verb::Check => (cfg.task.kind, true),
    };
    let start = Instant::now();
    let outcome = tasks::run(&cfg, task, check)?;
    write_outputs(&cli.out, &outcome)?;
    eprintln!("{}: done in {:.2} s", task.name(), start.elapsed().as_secs_f64());
    for v in &outcome.violations {
        eprintln!("check failed: {v}");
    }
    Ok(outcome.violations.is_empty())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    // Dense kernels run sequentially so that results do not depend on the pool size.
    faer::set_global_parallelism(faer::Par::Seq);
    if cli.print_defaults {
        print!("{}", config::defaults_toml());
        return ExitCode::SUCCESS;
    }
    if cli.help_output {
        print!("{}", tasks::OUTPUT_HELP);
        return ExitCode::SUCCESS;
    }
    let Some(verb) = cli.verb else {
        eprintln!("error: no verb given (try --help)");
        return ExitCode::from(EXIT_CONFIG);
    };
    match execute(&cli, verb) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_CHECK),
        Err(Failure::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Solver(e)) => {
            eprintln!("error: solver failure: {e}");
            ExitCode::from(EXIT_SOLVER)
        }
    }
}
