use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use quasispin::cli::{run, Cli, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli);
    for m in &outcome.messages {
        eprintln!("quasispin: {m}");
    }
    if let Some(body) = &outcome.body {
        let written = match &cli.global.output {
            Some(path) => std::fs::write(path, body).map_err(|e| format!("cannot write {}: {e}", path.display())),
            None => std::io::stdout().lock().write_all(body.as_bytes()).map_err(|e| e.to_string()),
        };
        if let Err(e) = written {
            eprintln!("quasispin: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    }
    ExitCode::from(outcome.exit_code as u8)
}
