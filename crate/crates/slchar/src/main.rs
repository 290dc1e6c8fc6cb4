use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use slchar::cli::Cli;
use slchar::commands::run;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.output.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::from(out.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("slchar: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
