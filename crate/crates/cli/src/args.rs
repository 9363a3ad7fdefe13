use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::point::{Point, Vertices};

/// Triangular ratio metric calculator and verification harness.
#[derive(Debug, Parser)]
#[command(name = "trimetric", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output encoding.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Write the report to FILE instead of stdout.
    #[arg(long, value_name = "FILE", global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Metric values, contact point and ellipse data for one pair of points.
    Compute(ComputeArgs),
    /// Randomized check of the two-sided distortion bound and its refinement.
    Verify(VerifyArgs),
    /// Search for pairs whose distortion ratio approaches 1 + a.
    Sharpness(SharpnessArgs),
    /// Refined constant, tangency class and preimage radius over a grid of contact angles.
    Scan(ScanArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainKind {
    UnitDisk,
    HalfPlane,
    Disk,
    Polygon,
}

#[derive(Debug, Args, Serialize)]
pub struct ComputeArgs {
    /// Domain containing both points.
    #[arg(long, value_enum, default_value_t = DomainKind::UnitDisk)]
    pub domain: DomainKind,
    /// First point, `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub z1: Point,
    /// Second point, `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub z2: Point,
    /// Polygon vertices in counterclockwise order, `re,im;re,im;...`.
    #[arg(long, allow_hyphen_values = true, required_if_eq("domain", "polygon"))]
    pub vertices: Option<Vertices>,
    /// Disk center for `--domain disk`.
    #[arg(long, allow_hyphen_values = true, default_value = "0,0")]
    pub center: Point,
    /// Disk radius for `--domain disk`.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// Also report the distortion under (z + a)/(1 + a z) (unit disk only).
    #[arg(long, conflicts_with = "z0")]
    pub a: Option<f64>,
    /// Also report the distortion under e^{i beta}(z - z0)/(1 - conj(z0) z) (unit disk only).
    #[arg(long, allow_hyphen_values = true)]
    pub z0: Option<Point>,
    /// Rotation angle of the automorphism given by `--z0`.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0, requires = "z0")]
    pub beta: f64,
    /// Tolerance for the distortion checks.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// A single value of a; without it (or with --all-a) every stratum 0.05, 0.10, ..., 0.95 runs.
    #[arg(long, conflicts_with = "all_a")]
    pub a: Option<f64>,
    /// Run every stratum.
    #[arg(long)]
    pub all_a: bool,
    /// Trials per value of a.
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    /// Master seed; each trial derives its own stream from it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Slack allowed in every bound check.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Smallest distance 1 - |z| of sampled points.
    #[arg(long, default_value_t = 1e-6)]
    pub min_gap: f64,
    /// Skip the intermediate inequalities on internal-tangency trials.
    #[arg(long)]
    pub no_proof_terms: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct SharpnessArgs {
    /// Disk automorphism parameter in (0, 1).
    #[arg(long)]
    pub a: f64,
    /// Objective evaluations.
    #[arg(long, default_value_t = 100_000)]
    pub budget: usize,
    /// Seed for the random restarts.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct ScanArgs {
    /// Disk automorphism parameter in (0, 1).
    #[arg(long)]
    pub a: f64,
    /// Grid points over [0, 2pi).
    #[arg(long, default_value_t = 360)]
    pub steps: usize,
}
