use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use eef_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(report.text.as_bytes()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::from(if report.success { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
