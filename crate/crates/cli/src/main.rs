use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use oddfan_cli::app::{run, Cli, CliError, EXIT_INTERNAL, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let status = match run(cli, &mut out) {
        Ok(status) => status,
        Err(CliError::OutputClosed) => return ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("oddfan: {e}");
            e.exit_code()
        }
    };
    if let Err(e) = out.flush() {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            return ExitCode::from(EXIT_INTERNAL);
        }
    }
    ExitCode::from(status)
}
