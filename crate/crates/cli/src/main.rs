use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use targetkit_cli::{execute, Args, Outcome, RunConfig, EXIT_INVALID_INPUT};

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_INVALID_INPUT as u8),
            };
        }
    };
    let (command, format) = (args.command, args.format);
    let (code, text) = match RunConfig::from_args(args) {
        Ok(config) => {
            let (code, text) = execute(&config);
            (code, if config.report.is_some() { String::new() } else { text })
        }
        Err(e) => {
            let outcome = Outcome::from_error(command, &e);
            (outcome.exit_code, outcome.render(format))
        }
    };
    print!("{text}");
    ExitCode::from(code as u8)
}
