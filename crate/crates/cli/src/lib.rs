//! Command-line front end: `fairkm run`, `fairkm sweep` and `fairkm bench`.

pub mod args;
pub mod bench;
pub mod error;
pub mod render;
pub mod report;
pub mod sweep;

use std::io::Write;
use std::path::Path;

pub use args::Cli;
use args::{Command, Format};
pub use error::CliError;

/// Sizes the global thread pool from `FAIRKM_THREADS` when it is set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("FAIRKM_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("FAIRKM_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot size thread pool: {e}")))
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Output {
            path: path.display().to_string(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|source| CliError::Output {
                    path: "standard output".into(),
                    source,
                })
        }
    }
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => {
            args.tuning.check(args.k).map_err(CliError::Usage)?;
            let config = args.tuning.config(args.k);
            let report = report::build(&args.data, &config, args.heuristic, args.timing)?;
            let text = match args.format {
                Format::Json => render::json(&report),
                Format::Csv => render::csv(&report),
                Format::Text => render::text(&report),
            };
            emit(&text, args.output.as_deref())
        }
        Command::Sweep(args) => {
            let text = sweep::sweep(&args)?;
            emit(&text, args.output.as_deref())
        }
        Command::Bench(args) => {
            let outcome = bench::bench(&args)?;
            emit(&bench::render(&outcome, args.format), args.output.as_deref())?;
            for f in &outcome.failures {
                eprintln!("fairkm: {}: {}", f.dataset, f.message);
            }
            if outcome.failures.is_empty() {
                Ok(())
            } else {
                Err(CliError::BenchFailures {
                    failed: outcome.failures.len(),
                    total: outcome.failures.len() + outcome.rows.len(),
                })
            }
        }
    }
}
