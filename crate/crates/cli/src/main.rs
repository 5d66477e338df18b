use std::process::ExitCode;

use clap::Parser;
use fairkm_cli::{configure_threads, execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| execute(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fairkm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
