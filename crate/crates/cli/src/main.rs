use std::io::{stderr, stdout};
use std::process::ExitCode;

use clap::Parser;
use strata_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = run(&cli, &mut stdout().lock(), &mut stderr().lock());
    ExitCode::from(code as u8)
}
