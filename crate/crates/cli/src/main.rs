mod cli;
mod commands;
mod config;
mod report;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use cli::{Cli, Command};
use report::{ErrorDetail, ErrorReport};

/// Exit status for bad flags or flag combinations.
const EXIT_USAGE: u8 = 2;
/// Exit status for everything that fails after the arguments were accepted.
const EXIT_FAILURE: u8 = 1;

/// A flag value rejected after clap accepted the syntax.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn fail(command: &str, kind: &str, message: String, code: u8) -> ExitCode {
    let body = ErrorReport {
        error: ErrorDetail {
            kind: kind.to_owned(),
            message,
        },
        exit_code: i32::from(code),
    };
    match report::to_json(command, &body) {
        Ok(text) => eprint!("{text}"),
        Err(_) => eprintln!("{{\"error\":{{\"kind\":\"internal\"}}}}"),
    }
    ExitCode::from(code)
}

const COMMANDS: [&str; 8] = [
    "lora-synth",
    "emulate",
    "segment",
    "render",
    "demod",
    "evm",
    "spectrogram",
    "pcap-export",
];

/// Splices defaults from `--config` into the arguments. The file and the
/// subcommand are found by a plain scan because required flags may only
/// be present once the config is applied.
fn with_config(args: Vec<OsString>) -> anyhow::Result<Vec<OsString>> {
    let mut config = None;
    let mut command = None;
    let mut iter = args.iter().skip(1);
    while let Some(a) = iter.next() {
        let Some(s) = a.to_str() else { continue };
        if let Some(v) = s.strip_prefix("--config=") {
            config = Some(std::path::PathBuf::from(v));
        } else if s == "--config" {
            config = iter.next().map(std::path::PathBuf::from);
        } else if command.is_none() {
            command = COMMANDS.iter().find(|&&c| c == s).copied();
        }
    }
    match (config, command) {
        (Some(path), Some(name)) => Ok(config::splice(&args, name, config::flags_for(&path, name)?)),
        _ => Ok(args),
    }
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::LoraSynth(a) => commands::lora_synth(a, cli.seed),
        Command::Emulate(a) => commands::emulate(a),
        Command::Segment(a) => commands::segment(a),
        Command::Render(a) => commands::render(a),
        Command::Demod(a) => commands::demod(a, cli.seed),
        Command::Evm(a) => commands::evm(a),
        Command::Spectrogram(a) => commands::spectrogram_cmd(a),
        Command::PcapExport(a) => commands::pcap_export(a),
    }
}

fn main() -> ExitCode {
    let args: Vec<OsString> = std::env::args_os().collect();
    let args = match with_config(args) {
        Ok(a) => a,
        Err(e) => return fail("cck-lora", "config", format!("{e:#}"), EXIT_USAGE),
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let message = text
                .split("\n\nUsage:")
                .next()
                .unwrap_or_default()
                .trim_start_matches("error: ")
                .split_whitespace()
                .collect::<Vec<_>>()
                .join(" ");
            let name = args
                .iter()
                .find_map(|a| COMMANDS.iter().find(|&&c| a == c))
                .copied()
                .unwrap_or("cck-lora");
            return fail(name, "usage", message, EXIT_USAGE);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let name = cli.command.name();
            if let Some(u) = e.downcast_ref::<UsageError>() {
                return fail(name, "usage", u.0.clone(), EXIT_USAGE);
            }
            let kind = e
                .chain()
                .find_map(|c| c.downcast_ref::<cck_lora::Error>())
                .map_or("io", |c| c.kind());
            fail(name, kind, format!("{e:#}"), EXIT_FAILURE)
        }
    }
}
