//! Command-line front end: ingestion, configuration and artifacts.

pub mod artifacts;
pub mod commands;
pub mod config;
pub mod error;
pub mod ingest;

use clap::Parser;

use config::{Cli, CommandKind, RunConfig};
use error::{CliError, CliResult};

/// Applies `CORESET_THREADS` to the global thread pool.
fn configure_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("CORESET_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| CliError::validation(format!("CORESET_THREADS must be a positive integer, got {v:?}")))?;
    // a pool that already exists (tests calling run twice) is fine
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn execute(kind: CommandKind, cfg: &RunConfig) -> CliResult<()> {
    match kind {
        CommandKind::Build => commands::cmd_build(cfg),
        CommandKind::Eval => commands::cmd_eval(cfg),
        CommandKind::Sweep => commands::cmd_sweep(cfg),
        CommandKind::Netlab => commands::cmd_netlab(cfg),
        CommandKind::SubspaceCheck => commands::cmd_subspace_check(cfg),
        CommandKind::Gen => commands::cmd_gen(cfg),
    }
}

/// Parses `args`, runs the subcommand and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (kind, args) = cli.command.split();
    let result = configure_threads()
        .and_then(|_| RunConfig::from_args(&args))
        .and_then(|cfg| execute(kind, &cfg));
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
