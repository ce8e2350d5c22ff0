use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use proxgrad_cli::{cmd_check, cmd_compare, cmd_list, cmd_run, log_filter, CheckTolerances};

/// Monotone and nonmonotone proximal gradient solvers.
#[derive(Parser)]
#[command(name = "proxgrad", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the problem described by a JSON config (or a shipped config name).
    Run {
        config: PathBuf,
        /// Trace path, overriding the config's `output`.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Verify the convergence invariants on a CSV trace.
    Check {
        trace: PathBuf,
        /// Nonmonotonicity window the trace was produced with.
        #[arg(long)]
        m: usize,
        /// Tail step-norm tolerance.
        #[arg(long)]
        step_tol: Option<f64>,
        /// Tail tolerance for γ·‖step‖.
        #[arg(long)]
        gamma_step_tol: Option<f64>,
    },
    /// Run one config with several window sizes and tabulate the results.
    Compare {
        config: PathBuf,
        /// Comma-separated window sizes, e.g. `0,1,5,10`.
        #[arg(long, value_delimiter = ',', required = true)]
        m: Vec<usize>,
        /// Write the comparison CSV here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// List oracle names and shipped configs.
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let env = std::env::var("PROXGRAD_LOG").ok();
    let filter = log_filter(env.as_deref()).unwrap_or_else(|msg| {
        eprintln!("warning: {msg}");
        log::LevelFilter::Warn
    });
    env_logger::Builder::new()
        .filter_level(filter)
        .format_timestamp(None)
        .init();

    let mut out = io::stdout().lock();
    let mut err = io::stderr().lock();
    let code = match cli.command {
        Command::Run { config, output } => cmd_run(&config, output.as_deref(), &mut out, &mut err),
        Command::Check {
            trace,
            m,
            step_tol,
            gamma_step_tol,
        } => cmd_check(
            &trace,
            m,
            CheckTolerances {
                step_tol,
                gamma_step_tol,
            },
            &mut out,
            &mut err,
        ),
        Command::Compare { config, m, output } => {
            cmd_compare(&config, &m, output.as_deref(), &mut out, &mut err)
        }
        Command::List => cmd_list(&mut out),
    };
    ExitCode::from(code as u8)
}
