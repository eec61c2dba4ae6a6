//! The `pexider-kit` command-line front end.
//!
//! ```text
//! pexider-kit <build|verify|classify|export|geometry|selftest>
//!     [--config <path>] [--out <path>] [--n <int>] [--tol <float>] [--seed <int>]
//!     [--family <name>] [--case <name>] [--artifact <path>]
//! ```
//!
//! Exit codes: 0 success, 1 residual bound missed, 2 constraint violated,
//! 3 numerical failure, 4 unreadable or ill-typed input, 5 write failure,
//! and for `classify` 0 / 10 / 20 for globally / partially / nowhere affine.

mod artifact;
mod commands;
mod config;

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::families::AuxCase;

pub use artifact::{
    export_csv, fmt_g17, import_csv, read_artifact, read_artifact_str, Artifact, Provenance, ARTIFACT_SCHEMA, CSV_HEADER,
};
pub use commands::{build_tuple, family_bound, run, SELFTEST_SYSTEM_BOUND, TABULATED_BOUND};
pub use config::{load_config, GeometryConfig, GridConfig, ProfilesConfig, RunConfig, CONFIG_SCHEMA};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RESIDUAL: i32 = 1;
pub const EXIT_CONSTRAINT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_SCHEMA: i32 = 4;
pub const EXIT_WRITE: i32 = 5;
pub const EXIT_PARTIAL: i32 = 10;
pub const EXIT_NOWHERE: i32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Build,
    Verify,
    Classify,
    Export,
    Geometry,
    Selftest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Build => "build",
            Command::Verify => "verify",
            Command::Classify => "classify",
            Command::Export => "export",
            Command::Geometry => "geometry",
            Command::Selftest => "selftest",
        }
    }
}

/// Solution family selected for `build`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    PaperExample,
    Affine,
    Partial,
    Profiles,
    /// Samples re-ingested from an exported CSV.
    Tabulated,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "pexider-kit", version, about = "Build, verify and classify solutions of F((x+y)/2)+f1(x)+f2(y)=G(g1(x)+g2(y))")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file (standard output when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Grid points per axis (sample count for `classify`).
    #[arg(long)]
    pub n: Option<usize>,
    /// Residual bound for `build`/`verify`, classifier tolerance for `classify`.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    #[arg(long, value_parser = parse_case)]
    pub case: Option<AuxCase>,
    /// Input artifact (JSON) or exported samples (CSV).
    #[arg(long)]
    pub artifact: Option<PathBuf>,
}

fn parse_case(s: &str) -> Result<AuxCase, String> {
    serde_json::from_value(serde_json::Value::String(s.replace('-', "_"))).map_err(|_| {
        let names: Vec<String> = AuxCase::ALL
            .iter()
            .map(|c| serde_json::to_value(c).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default())
            .collect();
        format!("unknown case {s:?}; expected one of {}", names.join(", "))
    })
}

/// A failure carrying its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }

    /// Constraint violations exit with 2, malformed specifications with 4,
    /// everything else with 3.
    pub fn from_lib(e: Error) -> Self {
        let code = match e.root() {
            Error::Constraint { .. } => EXIT_CONSTRAINT,
            Error::Spec(_) | Error::InvalidInterval { .. } => EXIT_SCHEMA,
            _ => EXIT_NUMERIC,
        };
        Self::new(code, e.to_string())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CliError {}
