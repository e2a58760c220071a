use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use peanoquad::args::Cli;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            return ExitCode::from(code);
        }
    };

    let outcome = peanoquad::run(&cli);
    if let Some(msg) = &outcome.stderr {
        eprintln!("{msg}");
    }
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(outcome.render(cli.command.format()).as_bytes());
    let _ = stdout.flush();
    ExitCode::from(outcome.exit_code() as u8)
}
