use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    mwsn_cli::main_with(mwsn_cli::Cli::parse())
}
