//! Command-line front end.
//!
//! [`run`] parses arguments and returns an [`Outcome`] instead of printing,
//! so the binary stays a thin wrapper and tests can call commands directly.

mod bfile;
mod commands;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub use bfile::{align, Alignment, BFile, BFileError, SHIFTS};
pub use commands::{
    cmd_bench, cmd_closed_form, cmd_eval, cmd_generate, cmd_oeis_check, cmd_params, cmd_verify,
};

use crate::exactmath::DEFAULT_PRECISION;
use crate::oracle::DEFAULT_T_CAP;
use crate::recurrence::SequenceKind;

pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const MISMATCH: i32 = 1;
    pub const SQUARE_K: i32 = 2;
    pub const DETECTION_FAILURE: i32 = 3;
    pub const USAGE: i32 = 64;
}

/// What a command would print, and its exit status.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    pub fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            code: exit::SUCCESS,
        }
    }

    pub fn fail(code: i32, stderr: impl Into<String>) -> Self {
        let mut stderr = stderr.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome {
            stdout: String::new(),
            stderr,
            code,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Oracle,
    Recurrence,
    Closed,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Oracle => "oracle",
            Engine::Recurrence => "recurrence",
            Engine::Closed => "closed",
        }
    }
}

/// One evaluated term. `value` is a decimal string so it never passes
/// through a float.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub k: u64,
    pub kind: String,
    pub n: u64,
    pub value: String,
    pub engine: Engine,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ns: Option<u64>,
}

#[derive(Debug, Parser)]
#[command(
    name = "trimult",
    version,
    about = "Triangular numbers that are k times other triangular numbers"
)]
pub struct Cli {
    /// Working precision in bits for the numeric (BigFloat) checks.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION, value_parser = clap::value_parser!(u32).range(64..))]
    pub precision: u32,
    /// Largest t the brute-force oracle examines.
    #[arg(long = "t-cap", global = true, default_value_t = DEFAULT_T_CAP)]
    pub t_cap: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Globals {
    pub precision: u32,
    pub t_cap: u64,
}

impl Default for Globals {
    fn default() -> Self {
        Globals {
            precision: DEFAULT_PRECISION,
            t_cap: DEFAULT_T_CAP,
        }
    }
}

/// Where the parameter bundle comes from.
#[derive(Debug, Clone, Default, Args)]
pub struct ParamsSource {
    /// Read parameters from a JSON file (as printed by `params`) instead of
    /// detecting them.
    #[arg(long = "params-file")]
    pub params_file: Option<PathBuf>,
}

fn parse_k(s: &str) -> Result<u64, String> {
    let k: u64 = s.parse().map_err(|e| format!("{e}"))?;
    if k < 2 {
        return Err("k must be at least 2".into());
    }
    Ok(k)
}

fn parse_kind(s: &str) -> Result<SequenceKind, String> {
    s.parse().map_err(|e| format!("{e}"))
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detect and print the parameter bundle for k.
    Params {
        #[arg(value_parser = parse_k)]
        k: u64,
    },
    /// Evaluate one term.
    Eval {
        #[arg(value_parser = parse_k)]
        k: u64,
        /// t, xi, Tt or Txi
        #[arg(value_parser = parse_kind)]
        kind: SequenceKind,
        n: u64,
        #[arg(long, value_enum, default_value_t = Engine::Closed)]
        engine: Engine,
        /// Include elapsed_ns in the record.
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        source: ParamsSource,
    },
    /// Print the first terms of a sequence.
    Generate {
        #[arg(value_parser = parse_k)]
        k: u64,
        #[arg(value_parser = parse_kind)]
        kind: SequenceKind,
        #[arg(long, default_value_t = 10)]
        count: u64,
        #[arg(long, value_enum, default_value_t = Engine::Recurrence)]
        engine: Engine,
        /// Print `n value` lines instead of JSON records.
        #[arg(long)]
        bfile: bool,
        #[command(flatten)]
        source: ParamsSource,
    },
    /// Print the exact residue forms as JSON.
    ClosedForm {
        #[arg(value_parser = parse_k)]
        k: u64,
        #[arg(long, value_parser = parse_kind, default_value = "t")]
        kind: SequenceKind,
        #[command(flatten)]
        source: ParamsSource,
    },
    /// Cross-check every engine and identity for k.
    Verify {
        #[arg(value_parser = parse_k)]
        k: u64,
        #[arg(long, default_value_t = 50)]
        depth: u64,
        #[command(flatten)]
        source: ParamsSource,
    },
    /// Compare a generated sequence with an OEIS b-file.
    OeisCheck {
        #[arg(value_parser = parse_k)]
        k: u64,
        #[arg(value_parser = parse_kind)]
        kind: SequenceKind,
        bfile: PathBuf,
        #[command(flatten)]
        source: ParamsSource,
    },
    /// Time the closed form against the recurrence; prints CSV.
    Bench {
        #[arg(value_parser = parse_k)]
        k: u64,
        /// Comma-separated term indices.
        #[arg(long, value_delimiter = ',', default_value = "1,1000,100000")]
        n: Vec<u64>,
        #[arg(long, value_parser = parse_kind, default_value = "t")]
        kind: SequenceKind,
        #[command(flatten)]
        source: ParamsSource,
    },
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::fail(exit::USAGE, text)
            } else {
                Outcome::ok(text)
            };
        }
    };
    let g = Globals {
        precision: cli.precision,
        t_cap: cli.t_cap,
    };
    match cli.command {
        Command::Params { k } => cmd_params(k, &g),
        Command::Eval {
            k,
            kind,
            n,
            engine,
            timing,
            source,
        } => cmd_eval(k, kind, n, engine, timing, &source, &g),
        Command::Generate {
            k,
            kind,
            count,
            engine,
            bfile,
            source,
        } => cmd_generate(k, kind, count, engine, bfile, &source, &g),
        Command::ClosedForm { k, kind, source } => cmd_closed_form(k, kind, &source, &g),
        Command::Verify { k, depth, source } => cmd_verify(k, depth, &source, &g),
        Command::OeisCheck {
            k,
            kind,
            bfile,
            source,
        } => cmd_oeis_check(k, kind, &bfile, &source, &g),
        Command::Bench { k, n, kind, source } => cmd_bench(k, kind, &n, &source, &g),
    }
}
