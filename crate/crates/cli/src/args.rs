use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Parser)]
#[command(name = "siegel-dynamics", version, about = "Dynamics of holomorphic self-maps of the ball and the Siegel domain")]
pub struct Cli {
    /// JSON file with default parameters; flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Seed for every random sampler.
    #[arg(long, global = true, env = "SIEGEL_DYNAMICS_SEED")]
    pub seed: Option<u64>,

    /// Numerical tolerance of the command.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tol: Option<f64>,

    /// Directory for report files.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    Both,
}

impl Format {
    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }

    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Classify a map and report its Denjoy-Wolff point and repelling fixed points.
    Classify(MapArgs),
    /// Compute a forward or backward orbit.
    Orbit(OrbitArgs),
    /// Approximate the conjugation to the linear model at a repelling fixed point.
    Conjugate(ConjugateArgs),
    /// Run the verification suite on the bundled fixtures.
    Verify(VerifyArgs),
}

/// A map given as a descriptor file, a bundled fixture name, or quadratic
/// coefficients `(Az + Bw², Cw)`.
#[derive(Debug, Clone, Default, Args)]
pub struct MapArgs {
    /// Descriptor JSON file, or the name of a bundled fixture.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["a_coef", "b_coef", "c_coef"])]
    pub map: Option<String>,

    /// Quadratic coefficient A (real).
    #[arg(long = "A", id = "a_coef", allow_negative_numbers = true)]
    pub a: Option<f64>,

    /// Quadratic coefficient B, `re` or `re,im`.
    #[arg(long = "B", id = "b_coef", allow_hyphen_values = true)]
    pub b: Option<String>,

    /// Quadratic coefficient C, `re` or `re,im`.
    #[arg(long = "C", id = "c_coef", allow_hyphen_values = true)]
    pub c: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub map: MapArgs,

    #[arg(long, conflicts_with = "backward")]
    pub forward: bool,

    /// Default direction.
    #[arg(long)]
    pub backward: bool,

    /// Start point: N real coordinates, or N `re,im` pairs.
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<String>,

    /// Step bound of the backward orbit.
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,

    /// Number of iterations.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct ConjugateArgs {
    #[command(flatten)]
    pub map: MapArgs,

    /// Repelling fixed point: `origin`, `infinity`, `siegel:<coords>` or
    /// `ball:<coords>`. Defaults to the classified one.
    #[arg(long, allow_hyphen_values = true)]
    pub brfp: Option<String>,

    /// Multiplier at the fixed point. Estimated by radial sampling if absent.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,

    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,

    /// Length of the special backward orbit.
    #[arg(long)]
    pub n: Option<usize>,

    /// Radius of the ball around the fixed point that the orbit avoids.
    #[arg(long, allow_negative_numbers = true)]
    pub rho: Option<f64>,

    /// Exit successfully iff the final residual is below this value.
    #[arg(long, allow_negative_numbers = true)]
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantArg {
    Basic,
    Expandable,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Random samples per sampled check.
    #[arg(long)]
    pub samples: Option<usize>,

    /// Directory holding the fixture files; the bundled copies are used otherwise.
    #[arg(long, value_name = "DIR")]
    pub fixtures: Option<PathBuf>,
}
