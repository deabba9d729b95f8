use std::process::ExitCode;

use clap::Parser;
use congforge::commands::{run, Cli};

fn main() -> ExitCode {
    ExitCode::from(run(Cli::parse()))
}
