use std::process::ExitCode;

use clap::Parser;
use morita_cli::{run, Cli, Format};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, outcome.machine_json()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    match cli.format {
        Format::Human => print!("{}", outcome.human()),
        Format::Machine => print!("{}", outcome.machine_json()),
    }
    ExitCode::from(outcome.exit_code() as u8)
}
