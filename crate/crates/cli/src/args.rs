use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "swanson", version, about = "Spectral analysis of a non-self-adjoint quadratic oscillator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Converged lowest eigenvalues
    Spectrum(SpectrumArgs),
    /// Support function and boundary of the numerical range
    Numrange(NumrangeArgs),
    /// Smallest singular value of zI − H_N on a grid
    Pseudospectrum(PseudospectrumArgs),
    /// Metric and compressed Hamiltonian on the first eigenmodes
    Compress(CompressArgs),
    /// Time evolution of a superposition of eigenmodes
    Evolve(EvolveArgs),
    /// Cross-check report of derived and printed formulas
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: f64,
    /// Output file; `.csv` selects CSV where supported, anything else JSON
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 200)]
    pub dim: usize,
    #[arg(long, default_value_t = 10)]
    pub count: usize,
}

#[derive(Debug, Args)]
pub struct NumrangeArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 200)]
    pub dim: usize,
    #[arg(long = "theta-samples", default_value_t = 181)]
    pub theta_samples: usize,
    /// Converged eigenvalues overlaid on the plot
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PseudospectrumArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 200)]
    pub dim: usize,
    #[arg(long, default_value = "-2:14", allow_hyphen_values = true)]
    pub re: String,
    #[arg(long, default_value = "-7:7", allow_hyphen_values = true)]
    pub im: String,
    #[arg(long, default_value_t = 200)]
    pub resolution: usize,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompressArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 8)]
    pub modes: usize,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 8)]
    pub modes: usize,
    /// Real mode coefficients c0,c1,...; padded with zeros and normalized
    #[arg(long, default_value = "1,0,1", allow_hyphen_values = true)]
    pub coeffs: String,
    #[arg(long = "t-max", default_value_t = 10.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 200)]
    pub dim: usize,
}
