//! `xchan`: capacity, GDOF, precoder construction and simulation for the
//! two-user X channel.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use report::Format;

/// Environment variable naming the directory for relative `--output` paths.
pub const OUTPUT_DIR_ENV: &str = "XCHAN_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "xchan", version, about = "Two-user X channel toolkit")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    json: bool,
    /// Write the output here instead of stdout; relative paths resolve
    /// against `XCHAN_OUTPUT_DIR` when it is set.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: commands::Command,
}

pub enum Failure {
    Usage(String),
    Verification(String),
    Io(String),
}

impl From<xchannel::Error> for Failure {
    fn from(e: xchannel::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn output_path(path: PathBuf) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
        _ => path,
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let format = if cli.json { Format::Json } else { cli.format };
    let mut report = commands::execute(&cli.command)?;
    if let serde_json::Value::Object(m) = &mut report.config {
        m.insert("format".into(), serde_json::to_value(format).unwrap_or_default());
    }
    eprintln!("config: {}", serde_json::to_string(&report.config).map_err(|e| Failure::Io(e.to_string()))?);
    let text = report.render(format).map_err(Failure::Io)?;
    match cli.output {
        Some(path) => {
            let path = output_path(path);
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|e| Failure::Io(format!("{}: {e}", parent.display())))?;
            }
            std::fs::write(&path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        }
        None => print!("{text}"),
    }
    if report.ok {
        Ok(())
    } else {
        Err(Failure::Verification("verification failed".into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) | Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
