use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = lcos_cli::Cli::parse();
    match lcos_cli::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(lcos_cli::exit_code(&e))
        }
    }
}
