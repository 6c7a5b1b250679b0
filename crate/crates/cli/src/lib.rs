//! `whitforge` command-line front end. Exit status: 0 on success, 1 on
//! malformed input, 2 on mathematical rejection or failed fixtures.

pub mod commands;
pub mod fixtures;
pub mod input;
pub mod notation;
pub mod render;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

pub use commands::{execute, Cli, Command, OutputMode};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Math(#[from] whitforge_core::error::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Math(_) => 2,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            CliError::Parse(msg) => json!({ "error": "ParseError", "message": msg }),
            CliError::Math(e) => {
                let mut v = json!({ "error": e.kind(), "message": e.to_string() });
                if let whitforge_core::error::Error::CheckFailed { clause, .. }
                | whitforge_core::error::Error::ShapeViolation { clause, .. } = e
                {
                    v["clause"] = json!(clause);
                }
                v
            }
        }
    }
}

/// Parses `args`, runs the command and writes to `out` / `err`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => 1,
            };
        }
    };
    match execute(&cli.command) {
        Ok((value, code)) => {
            let text = match cli.output {
                OutputMode::Json => serde_json::to_string_pretty(&value).unwrap_or_default(),
                OutputMode::Text if matches!(cli.command, Command::VerifyFixtures { .. }) => render::fixture_report(&value),
                OutputMode::Text => render::text(&value),
            };
            let _ = writeln!(out, "{}", text.trim_end());
            code
        }
        Err(e) => {
            let text = match cli.output {
                OutputMode::Json => serde_json::to_string_pretty(&e.to_json()).unwrap_or_default(),
                OutputMode::Text => format!("error: {e}"),
            };
            let _ = writeln!(err, "{text}");
            e.exit_code()
        }
    }
}
