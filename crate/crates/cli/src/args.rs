// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lindfit::estimators::Structure;
use lindfit::liouville::BasisKind;
use serde::{Deserialize, Serialize};

pub const CONFIG_ENV: &str = "LINDFIT_CONFIG";

/// Estimate Markovian relaxation supergenerators from process tomography.
#[derive(Debug, Parser)]
#[command(name = "lindfit", version)]
pub struct Cli {
    /// TOML file with default settings; command-line flags take precedence.
    #[arg(long, global = true, env = CONFIG_ENV)]
    pub config: Option<PathBuf>,

    /// Write the JSON result here (otherwise JSON goes to stdout and the
    /// table to stderr).
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generator: random, reference two-spin, or zero.
    Generate(GenerateArgs),
    /// Propagate a generator and write a tomography dataset.
    Simulate(SimulateArgs),
    /// Estimate a generator from a dataset.
    Estimate(EstimateArgs),
    /// Split a two-spin relaxation supermatrix into T1 and T2 Lindblad operators.
    Decompose(DecomposeArgs),
    /// Project propagators onto the completely positive maps.
    FilterCp(FilterArgs),
    /// Re-express a generator in another operator basis.
    Convert(ConvertArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeneratorKind {
    /// Random Lindblad operators, no Hamiltonian.
    Cp,
    /// Two-spin kite relaxation commuting with the reference Hamiltonian.
    Secular,
    /// Reference two-spin T1 block and T2 rates.
    Reference,
    Zero,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub kind: GeneratorKind,
    /// Hilbert-space dimension (cp and zero only).
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub lindblads: usize,
    /// Squared norm of each random Lindblad, or mean decay rate for secular.
    #[arg(long, default_value_t = 0.3)]
    pub rate_scale: f64,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Generator JSON.
    pub generator: PathBuf,
    /// Comma-separated evolution times in seconds.
    #[arg(long, value_delimiter = ',')]
    pub times: Option<Vec<f64>>,
    /// Gaussian noise relative to the largest element.
    #[arg(long, alias = "noise")]
    pub noise_sigma: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Record input/output density matrices instead of propagators.
    #[arg(long)]
    pub state_pairs: bool,
    /// Basis whose elements define the input states (with --state-pairs).
    #[arg(long, value_enum)]
    pub basis: Option<BasisArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Principal logarithm of one propagator.
    Logm,
    Richardson,
    /// Eigenvalue-tracked logarithms averaged over times.
    Eiglog,
    /// Structured least squares with a complete-positivity penalty.
    Cpfit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StructureArg {
    Full,
    Kite,
    None,
}

impl From<StructureArg> for Structure {
    fn from(s: StructureArg) -> Self {
        match s {
            StructureArg::Full => Structure::FullSymmetric,
            StructureArg::Kite => Structure::RedfieldKite,
            StructureArg::None => Structure::None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisArg {
    Cartesian,
    Transition,
    Zeeman,
}

impl From<BasisArg> for BasisKind {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::Cartesian => BasisKind::Cartesian,
            BasisArg::Transition => BasisKind::Transition,
            BasisArg::Zeeman => BasisKind::Zeeman,
        }
    }
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Dataset JSON.
    pub dataset: PathBuf,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Which time point the logm method uses.
    #[arg(long, default_value_t = 0)]
    pub time_index: usize,
    #[arg(long, value_enum)]
    pub structure: Option<StructureArg>,
    #[arg(long)]
    pub penalty_weight: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Simplex convergence tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Basis of the reported generator.
    #[arg(long, value_enum)]
    pub basis: Option<BasisArg>,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    /// Generator JSON or an estimate report.
    pub generator: PathBuf,
    /// Basis the input is expected to be in; a mismatch is an error.
    #[arg(long, value_enum)]
    pub basis: Option<BasisArg>,
    /// Use the raw T1 block and T2 rates.
    #[arg(long)]
    pub no_symmetrize: bool,
    /// Keep individual population flips even when their rates agree.
    #[arg(long)]
    pub no_merge: bool,
    #[arg(long)]
    pub degeneracy_tol: Option<f64>,
    /// Rebuild the relaxation from the Lindblad operators and report the residual.
    #[arg(long)]
    pub rebuild_check: bool,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    /// Propagator JSON or a dataset.
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    pub generator: PathBuf,
    #[arg(long, value_enum)]
    pub basis: Option<BasisArg>,
}
