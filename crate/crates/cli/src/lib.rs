//! Front end of the `tropaz` binary.
//!
//! Every subcommand reads a fundamental-domain config, runs one stage of the
//! pipeline and writes a schema-versioned JSON document (to `--out` or
//! stdout). Subcommands with a picture also accept `--svg`. Exit codes are 0
//! on success, 2 on validation errors and 3 on guard violations.

pub mod check;
pub mod commands;
pub mod manifest;
pub mod svg;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::path::PathBuf;
use thiserror::Error;
use tropaz_core::lattice::{EdgeType, Slope};
use tropaz_core::rational::{parse_rational, Rational};
use tropaz_numeric::NumericError;

/// Environment variable overriding the default MPFR precision.
pub const PRECISION_ENV: &str = "TROPAZ_PRECISION_BITS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] tropaz_core::Error),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error("invariant check failed: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        let guard = match self {
            CliError::Core(e) => matches!(e, tropaz_core::Error::SizeGuardExceeded { .. }),
            CliError::Numeric(e) => e.is_guard(),
            _ => false,
        };
        if guard {
            3
        } else {
            2
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "tropaz", version, about = "Tropical limits of periodic Aztec diamond dimer models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Fundamental-domain JSON config.
    #[arg(long)]
    pub config: PathBuf,
    /// JSON output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// SVG output path for subcommands that draw.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// MPFR precision in bits.
    #[arg(long)]
    pub precision: Option<u32>,
}

#[derive(Debug, Clone, Args)]
pub struct Quadrature {
    #[arg(long)]
    pub beta: f64,
    /// Quadrature nodes per circle.
    #[arg(long, default_value_t = 256)]
    pub nodes: usize,
}

#[derive(Debug, Clone, Args)]
pub struct Diamond {
    /// Number of `k ell` blocks along each side.
    #[arg(long, default_value_t = 1)]
    pub blocks: usize,
    #[arg(long)]
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RenderObject {
    Subdivision,
    Curve,
    Arctic,
    Limitshape,
    Sample,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tropical surface tension table.
    Tension(Common),
    /// Regular subdivision of the Newton rectangle.
    Subdivision(Common),
    /// Tropical curve dual to the subdivision.
    Curve(Common),
    /// Dual action function and its 1-form.
    Kirchhoff(Common),
    /// Arctic curve segments and regions.
    Arctic(Common),
    /// Limit shape on a grid of the scaled domain.
    Limitshape {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 8)]
        grid: usize,
    },
    /// Zero-temperature Gibbs measure at a slope.
    Gibbs {
        #[command(flatten)]
        common: Common,
        /// Slope as `mu1,mu2`.
        #[arg(long, value_parser = parse_slope, allow_hyphen_values = true)]
        mu: Slope,
        /// Lifted edge `i,j,T` or `i,j,T@m,n`; repeat for joint probabilities.
        #[arg(long = "edge", value_parser = parse_edge)]
        edges: Vec<EdgeSpec>,
    },
    /// Ronkin function at a point.
    Ronkin {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        quad: Quadrature,
        /// Point as `x,y` with rational entries.
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: (Rational, Rational),
    },
    /// Finite-temperature surface tension.
    TensionBeta {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        quad: Quadrature,
        /// Slope; every subdivision vertex when absent.
        #[arg(long, value_parser = parse_slope, allow_hyphen_values = true)]
        mu: Option<Slope>,
    },
    /// Finite-temperature Gibbs edge probabilities.
    GibbsBeta {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        quad: Quadrature,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: (Rational, Rational),
        #[arg(long = "edge", value_parser = parse_edge, required = true)]
        edges: Vec<EdgeSpec>,
    },
    /// Edge marginals of the Aztec diamond.
    AztecMarginals {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        diamond: Diamond,
    },
    /// Expected height function of the Aztec diamond.
    AztecHeight {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        diamond: Diamond,
    },
    /// Exact sample of an Aztec diamond dimer cover.
    Sample {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        diamond: Diamond,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Runs every invariant suite on the config.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// SVG picture of one object.
    Render {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        object: RenderObject,
        #[arg(long, default_value_t = 24)]
        grid: usize,
        #[arg(long, default_value_t = 1)]
        blocks: usize,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// A lifted edge given by cell, type and white copy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSpec {
    pub i: usize,
    pub j: usize,
    pub ty: EdgeType,
    pub copy: (i64, i64),
}

fn parse_pair<T>(text: &str, parse: impl Fn(&str) -> Option<T>) -> Result<(T, T), String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => Ok((parse(a).ok_or_else(|| format!("bad entry {a:?}"))?, parse(b).ok_or_else(|| format!("bad entry {b:?}"))?)),
        _ => Err(format!("expected two comma-separated entries, got {text:?}")),
    }
}

pub fn parse_slope(text: &str) -> Result<Slope, String> {
    parse_pair(text, |s| s.parse::<i64>().ok())
}

pub fn parse_point(text: &str) -> Result<(Rational, Rational), String> {
    parse_pair(text, parse_rational)
}

pub fn parse_edge(text: &str) -> Result<EdgeSpec, String> {
    let (cell, copy) = match text.split_once('@') {
        Some((c, m)) => (c, parse_slope(m)?),
        None => (text, (0, 0)),
    };
    let parts: Vec<&str> = cell.split(',').map(str::trim).collect();
    let [i, j, t] = parts.as_slice() else {
        return Err(format!("expected i,j,T in {text:?}"));
    };
    Ok(EdgeSpec {
        i: i.parse().map_err(|_| format!("bad cell index {i:?}"))?,
        j: j.parse().map_err(|_| format!("bad cell index {j:?}"))?,
        ty: EdgeType::parse(t).ok_or_else(|| format!("bad edge type {t:?}"))?,
        copy,
    })
}

/// Parses `argv`, runs the subcommand and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match commands::execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("tropaz: {e}");
            e.exit_code()
        }
    }
}
