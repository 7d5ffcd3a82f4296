//! The `dualdefect` command line. [`run`] does all the work and returns the
//! exit code with the captured output, so tests can drive it without spawning
//! processes.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use dualdefect::cayley::DEFAULT_ENUMERATION_LIMIT;
use dualdefect::config::io::{parse_json, parse_text};
use dualdefect::sampling::{DEFAULT_BOUND, DEFAULT_TRIALS};
use dualdefect::{normalize, PointConfig, SamplingParams};

mod commands;
mod gen;
mod render;

pub use gen::{GenKind, MAX_DIM, MAX_POINTS};

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or malformed input, bad parameters. Exit code 2.
    #[error("{0}")]
    Input(String),
    /// Certification or verification failed. Exit code 1.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

#[derive(Parser, Debug)]
#[command(name = "dualdefect", version)]
#[command(about = "Dual defect of toric varieties with structure certificates")]
pub struct Cli {
    /// Sampling seed (decimal or 0x-prefixed hex)
    #[arg(long, global = true, default_value = "0xA11CE", value_parser = parse_seed)]
    pub seed: u64,

    /// Bound on the random sample coefficients
    #[arg(long, global = true, default_value_t = DEFAULT_BOUND)]
    pub bound: u64,

    /// Independent samples per randomized rank computation
    #[arg(long, global = true, default_value_t = DEFAULT_TRIALS)]
    pub trials: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(clap::Args, Debug, Clone, Copy)]
pub struct ExhaustiveArgs {
    /// Enumerate every projection with simplex image and check the lower bound
    #[arg(long)]
    pub exhaustive: bool,

    /// Skip the exhaustive pass above this many points
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
    pub exhaustive_limit: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the structure certificate of a configuration
    Analyze {
        input: PathBuf,
        #[command(flatten)]
        exhaustive: ExhaustiveArgs,
    },
    /// Run the Hessian-rank oracle only
    Oracle { input: PathBuf },
    /// Re-check a certificate produced by `analyze`
    Verify {
        config: PathBuf,
        certificate: PathBuf,
        #[command(flatten)]
        exhaustive: ExhaustiveArgs,
    },
    /// Generate a corpus of configurations
    Gen(gen::GenArgs),
    /// Analyze every .json and .txt file in a directory
    Batch {
        dir: PathBuf,
        #[command(flatten)]
        exhaustive: ExhaustiveArgs,
    },
}

impl Cli {
    pub fn params(&self) -> SamplingParams {
        SamplingParams::new(self.seed, self.bound, self.trials)
    }
}

/// What a run produced.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Collects warnings, printing each distinct one once.
#[derive(Debug, Default)]
pub struct Warnings(Vec<String>);

impl Warnings {
    pub fn warn(&mut self, msg: String) {
        if !self.0.contains(&msg) {
            self.0.push(msg);
        }
    }

    fn extend(&mut self, other: Warnings) {
        for w in other.0 {
            self.warn(w);
        }
    }

    fn render(&self) -> String {
        self.0.iter().map(|w| format!("warning: {w}\n")).collect()
    }
}

/// A configuration read from disk, already moved into its own lattice.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub config: PointConfig,
    pub expected_delta: Option<usize>,
}

pub fn load_config(path: &Path, warnings: &mut Warnings) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let parsed = if is_json { parse_json(&text) } else { parse_text(&text) }
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    if !parsed.duplicates.is_empty() {
        warnings.warn(format!("{}: merged {} duplicate point(s)", path.display(), parsed.duplicates.len()));
    }
    let norm = normalize(&parsed.config);
    if norm.config.dim() != parsed.config.dim() || norm.theta != dualdefect::GroupHom::identity(norm.config.dim()) {
        warnings.warn(format!(
            "{}: points do not span Z^{} affinely; using coordinates of their affine lattice Z^{}",
            path.display(),
            parsed.config.dim(),
            norm.config.dim()
        ));
    }
    Ok(Loaded { config: norm.config, expected_delta: parsed.expected_delta })
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() { 2 } else { 0 };
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    run_cli(&cli)
}

pub fn run_cli(cli: &Cli) -> Outcome {
    let mut warnings = Warnings::default();
    let result = match &cli.command {
        Command::Analyze { input, exhaustive } => commands::analyze(cli, input, *exhaustive, &mut warnings),
        Command::Oracle { input } => commands::oracle(cli, input, &mut warnings),
        Command::Verify { config, certificate, exhaustive } => {
            commands::verify(cli, config, certificate, *exhaustive, &mut warnings)
        }
        Command::Gen(args) => gen::generate(cli, args, &mut warnings),
        Command::Batch { dir, exhaustive } => commands::batch(cli, dir, *exhaustive, &mut warnings),
    };
    let mut stderr = String::new();
    let (code, report) = match result {
        Ok((code, report)) => (code, Some(report)),
        Err(e) => {
            stderr.push_str(&format!("error: {e}\n"));
            (e.code(), None)
        }
    };
    let mut stdout = String::new();
    let mut code = code;
    if let Some(report) = report {
        let text = render::render(&report, cli.format);
        match &cli.out {
            Some(path) => {
                if let Err(e) = std::fs::write(path, &text) {
                    stderr.push_str(&format!("error: cannot write {}: {e}\n", path.display()));
                    code = 2;
                }
            }
            None => stdout = text,
        }
    }
    Outcome { code, stdout, stderr: warnings.render() + &stderr }
}
