use std::process::ExitCode;

use clap::Parser;
use treerep::repcli::{exit_code, run, Command};

/// Rank-two representations over local fields and number fields.
#[derive(Parser)]
#[command(name = "repcli", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(report) => {
            if let Some((path, dot)) = &report.dot {
                if let Err(e) = std::fs::write(path, dot) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            print!("{}", report.render());
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
