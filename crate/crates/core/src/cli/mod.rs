//! The `ppslab` command: subcommand parsing, dispatch and report output.
//!
//! Every invocation prints a human-readable report on stdout and, with
//! `--out PATH`, writes a [`ReportDocument`] as JSON.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

mod commands;
pub mod files;
pub mod report;

pub use files::{FileError, FileOptions, HvtModelFile, LoadedScenario, ProjectorSpec, ScenarioFile};
pub use report::{inputs_digest, prob, ReportDocument};

use crate::error::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const IMPOSSIBLE: i32 = 3;
    pub const CAP: i32 = 4;
    pub const PARADOX: i32 = 10;
    pub const INCONCLUSIVE: i32 = 11;
}

#[derive(Debug, Parser)]
#[command(name = "ppslab", version, about = "Pre- and post-selected measurement laboratory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// ABL probability of one outcome of one PVM.
    Abl(AblArgs),
    /// Logical PPS paradox check over every PVM in the file.
    Paradox(ParadoxArgs),
    /// Hidden-variable PPS probability from a model file.
    Hvt(HvtArgs),
    /// Search for a disturbance-free noncontextual model.
    Disturbance(DisturbanceArgs),
    /// Enumerate noncontextual 0/1 assignments on the PVM projectors.
    Ks(KsArgs),
    /// Ball-in-a-box model: exact values and Monte Carlo estimates.
    Toybox(ToyboxArgs),
}

#[derive(Debug, Args)]
pub struct OutArg {
    /// Write the machine-readable report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AblArgs {
    pub scenario: PathBuf,
    pub pvm: String,
    pub outcome: String,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct ParadoxArgs {
    pub scenario: PathBuf,
    #[arg(long)]
    pub depth: Option<usize>,
    /// Distance from 0 or 1 within which an ABL value counts as certain.
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct HvtArgs {
    pub model: PathBuf,
    pub measurement: String,
    pub outcome: String,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct DisturbanceArgs {
    pub scenario: PathBuf,
    #[arg(long)]
    pub max_ontic: Option<usize>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct KsArgs {
    pub scenario: PathBuf,
    #[arg(long)]
    pub depth: Option<usize>,
    /// Refuse searches with more free projectors than this (0 lifts the cap).
    #[arg(long, default_value_t = crate::noncontext::DEFAULT_MAX_FREE)]
    pub max_free: usize,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct ToyboxArgs {
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub out: OutArg,
}

/// What a command produced, before rendering.
pub(crate) struct Outcome {
    pub code: i32,
    pub human: String,
    pub results: serde_json::Value,
}

/// A command that stopped early.
pub(crate) struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ImpossiblePostSelection(_) => exit::IMPOSSIBLE,
            Error::SearchSpaceTooLarge { .. } | Error::OnticCapExceeded { .. } => exit::CAP,
            _ => exit::PARSE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<FileError> for Failure {
    fn from(e: FileError) -> Self {
        Failure {
            code: exit::PARSE,
            message: format!("invalid input at {e}"),
        }
    }
}

pub(crate) struct Inputs(Vec<Vec<u8>>);

impl Inputs {
    pub fn read(&mut self, path: &Path) -> Result<String, Failure> {
        let bytes = std::fs::read(path).map_err(|e| Failure {
            code: exit::PARSE,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        let text = String::from_utf8(bytes.clone()).map_err(|e| Failure {
            code: exit::PARSE,
            message: format!("{} is not UTF-8: {e}", path.display()),
        })?;
        self.0.push(bytes);
        Ok(text)
    }
}

fn echo(args: &[OsString]) -> Vec<String> {
    let mut out = Vec::new();
    let mut iter = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned());
    while let Some(a) = iter.next() {
        if a == "--out" {
            iter.next();
        } else if !a.starts_with("--out=") {
            out.push(a);
        }
    }
    out
}

/// Runs one invocation and returns its exit code. `args` includes the
/// program name.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{text}");
                exit::OK
            } else {
                let _ = write!(stderr, "{text}");
                exit::PARSE
            };
        }
    };
    let command = echo(&args);
    let mut inputs = Inputs(Vec::new());
    let (out_path, result) = match &cli.command {
        Command::Abl(a) => (&a.out.out, commands::abl(a, &mut inputs)),
        Command::Paradox(a) => (&a.out.out, commands::paradox(a, &mut inputs)),
        Command::Hvt(a) => (&a.out.out, commands::hvt(a, &mut inputs)),
        Command::Disturbance(a) => (&a.out.out, commands::disturbance(a, &mut inputs)),
        Command::Ks(a) => (&a.out.out, commands::ks(a, &mut inputs)),
        Command::Toybox(a) => (&a.out.out, commands::toybox(a)),
    };
    let outcome = match result {
        Ok(o) => {
            let _ = write!(stdout, "{}", o.human);
            o
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            Outcome {
                code: f.code,
                human: String::new(),
                results: serde_json::json!({ "error": f.message }),
            }
        }
    };
    if let Some(path) = out_path {
        let doc = ReportDocument {
            inputs_digest: inputs_digest(&command, &inputs.0),
            command,
            exit_code: outcome.code,
            results: outcome.results,
        };
        if let Err(e) = std::fs::write(path, doc.to_json()) {
            let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
            return exit::FAILURE;
        }
    }
    outcome.code
}
