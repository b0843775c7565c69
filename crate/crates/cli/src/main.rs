use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use isopair_cli::{run, CommandConfig, Format, Status};

fn main() -> ExitCode {
    let cfg = match CommandConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { Status::InputError.code() } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(&cfg) {
        Ok(outcome) => {
            let text = outcome.body.into_string();
            let written = match &cfg.global.out {
                Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
                None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(Status::InputError.code() as u8);
            }
            ExitCode::from(outcome.status.code() as u8)
        }
        Err(e) => {
            match cfg.global.format {
                Format::Json => eprintln!("{}", e.to_json()),
                Format::Text => match &e.path {
                    Some(p) => eprintln!("error at {p}: {}", e.message),
                    None => eprintln!("error: {}", e.message),
                },
            }
            ExitCode::from(Status::InputError.code() as u8)
        }
    }
}
