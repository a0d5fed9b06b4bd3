//! `njordan`: run stability scenarios from the command line.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 configuration error,
//! 3 runtime failure (overflow, I/O, numerical).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use njordan::report::{emit, Emit, OutputFormat};
use njordan::scenario::{parse_constants, run_correction, run_defects, run_scenario};
use njordan::{config::ScenarioConfig, Error};

#[derive(Parser, Debug)]
#[command(name = "njordan", version, about = "Fixed-point stability lab for n-Jordan derivations on M_k(C)")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Output file (json, text) or directory (csv). Defaults to stdout for json and text.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Overrides the config's seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Suppress stdout; only the exit code reports the outcome.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the full scenario: fit, correct, check, certify.
    Run { config: PathBuf },
    /// Defect statistics and the fitted θ only.
    Defect { config: PathBuf },
    /// Corrector diagnostics only.
    Correct { config: PathBuf },
    /// Print a variant's bound constants, e.g. `constants cor26 theta=1 r=0.25`.
    Constants { variant: String, params: Vec<String> },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::CsvTables,
            Format::Text => OutputFormat::TextSummary,
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config { .. } => 2,
        _ => 3,
    }
}

fn load(path: &Path, seed: Option<u64>) -> Result<ScenarioConfig, Error> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut config = ScenarioConfig::parse(&text)?;
    if let Some(s) = seed {
        config.seed = s;
    }
    Ok(config)
}

fn output<T: Emit>(value: &T, cli: &Cli) -> Result<(), Error> {
    let format = OutputFormat::from(cli.format);
    match (&cli.out, format) {
        (Some(path), _) => emit(value, format, path),
        (None, OutputFormat::CsvTables) => Err(Error::Config {
            path: "--out".into(),
            message: "csv output needs a target directory".into(),
        }),
        (None, _) if cli.quiet => Ok(()),
        (None, OutputFormat::Json) => print(&value.to_json()?),
        (None, OutputFormat::TextSummary) => print(&value.text_summary()),
    }
}

fn print(text: &str) -> Result<(), Error> {
    std::io::stdout().write_all(text.as_bytes()).map_err(|source| Error::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

fn run(cli: &Cli) -> Result<bool, Error> {
    match &cli.command {
        Command::Run { config } => {
            let report = run_scenario(&load(config, cli.seed)?)?;
            output(&report, cli)?;
            Ok(report.pass)
        }
        Command::Defect { config } => {
            let report = run_defects(&load(config, cli.seed)?)?;
            output(&report, cli)?;
            Ok(true)
        }
        Command::Correct { config } => {
            let report = run_correction(&load(config, cli.seed)?)?;
            output(&report, cli)?;
            Ok(true)
        }
        Command::Constants { variant, params } => {
            output(&parse_constants(variant, params)?, cli)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("njordan: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
