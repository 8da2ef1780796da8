use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    // help and version go to clap unchanged
    if let Err(e) = mahler_cli::Cli::try_parse_from(&args) {
        if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
            e.exit();
        }
    }
    let out = mahler_cli::run(&args);
    let text = mahler_cli::render(&out);
    match mahler_cli::output_path(&args) {
        Some(p) => {
            if let Err(e) = std::fs::write(&p, &text) {
                eprintln!("cannot write {}: {e}", p.display());
                return ExitCode::from(mahler_cli::EXIT_INPUT as u8);
            }
        }
        None => {
            let _ = std::io::stdout().write_all(text.as_bytes());
        }
    }
    ExitCode::from(out.code as u8)
}
