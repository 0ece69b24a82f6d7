use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use fractal_dirac_cli::args::Cli;
use fractal_dirac_cli::{emit, execute};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let doc = serde_json::json!({ "error": "usage", "message": e.to_string().trim_end() });
            eprintln!("{doc}");
            return ExitCode::from(2);
        }
    };
    match execute(&cli).and_then(|o| emit(&o)) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
