//! Command-line front end. [`run`] parses arguments, runs one analysis,
//! writes its outputs and returns the process exit code.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

/// The command-line chapter of the guide runs as a doc-test.
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book {}

pub mod args;
pub mod output;
pub mod plot;

use std::ffi::OsString;
use std::fmt;
use std::path::Path;

use clap::error::ErrorKind;
use clap::Parser;
use serde::{Deserialize, Serialize};

use swanson::linalg::eigenvalues_general;
use swanson::oscillator::ModelConfig;
use swanson::physics::{compress, evolve, recurrence_residual, recurrence_time, time_grid, EvolutionTrace};
use swanson::spectral::{
    converged_spectrum, hyperbola_reference, numerical_range_boundary, pseudospectrum,
    DiscrepancyRecord, GridRegion, NumericalRangeBoundary,
};
use swanson::verify::{verify, CheckStatus, VerificationReport};
use swanson::Complex64 as c64;

use args::{Cli, Command, Common};
use output::{is_csv, to_csv, to_json, write_atomic, Envelope};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

/// Upper bound on time samples for `evolve`.
pub const MAX_TIME_STEPS: usize = 1_000_000;

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Invalid(_) | CliError::Io(_) => EXIT_INVALID,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) | CliError::Numerical(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<swanson::Error> for CliError {
    fn from(e: swanson::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Invalid(e.to_string())
        }
    }
}

fn invalid(flag: &str, msg: impl fmt::Display) -> CliError {
    CliError::Invalid(format!("{flag}: {msg}"))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumConfig {
    pub gamma: f64,
    pub dim: usize,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumrangeConfig {
    pub gamma: f64,
    pub dim: usize,
    pub theta_samples: usize,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumrangeData {
    pub boundary: NumericalRangeBoundary,
    /// Converged eigenvalues drawn inside the boundary.
    pub eigenvalues: Vec<c64>,
    pub discrepancies: Vec<DiscrepancyRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PseudospectrumConfig {
    pub gamma: f64,
    pub dim: usize,
    pub region: GridRegion,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompressConfig {
    pub gamma: f64,
    pub modes: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompressData {
    pub lambdas: Vec<f64>,
    /// Rows of `Q̂`.
    pub metric: Vec<Vec<c64>>,
    /// Rows of `Q̂⁻¹`, the Gram matrix of the eigenfunctions.
    pub gram: Vec<Vec<c64>>,
    /// Rows of `Ĥ`.
    pub h_hat: Vec<Vec<c64>>,
    /// Eigenvalues of `Ĥ` computed from the matrix.
    pub h_hat_eigenvalues: Vec<c64>,
    pub pseudo_hermiticity_residual: f64,
    pub biorthogonality_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolveConfig {
    pub gamma: f64,
    pub modes: usize,
    /// Normalized initial mode coefficients.
    pub coeffs: Vec<f64>,
    pub t_max: f64,
    pub dt: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolveData {
    pub trace: EvolutionTrace,
    pub phys_norm_drift: f64,
    pub std_norm_spread: f64,
    pub recurrence_time: f64,
    pub recurrence_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub gamma: f64,
    pub dim: usize,
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit code. Diagnostics go to stderr, a short summary to stdout.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    print!("{e}");
                    EXIT_OK
                }
                _ => {
                    eprintln!("{}", one_line(&e.to_string()));
                    EXIT_INVALID
                }
            };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Joins a clap message up to its usage block into one line.
fn one_line(msg: &str) -> String {
    msg.lines()
        .take_while(|l| !l.starts_with("Usage:"))
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn execute(cmd: Command) -> Result<i32, CliError> {
    match cmd {
        Command::Spectrum(a) => {
            let cfg = model(&a.common, a.dim)?;
            check_count(a.count, a.dim)?;
            let s = converged_spectrum(&cfg, a.count)?;
            let bytes = if is_csv(&a.common.out) {
                let rows = s.eigenvalues.iter().enumerate().map(|(k, e)| (k, e.value.re, e.value.im, e.error_estimate));
                to_csv(&["index", "re", "im", "error_estimate"], rows).map_err(csv_err)?
            } else {
                json(&Envelope::new(SpectrumConfig { gamma: cfg.gamma, dim: cfg.dim, count: a.count }, &s))?
            };
            write(&a.common.out, &bytes)?;
            println!("{} eigenvalues converged at dim {} -> {}", s.eigenvalues.len(), s.dim, a.common.out.display());
            Ok(EXIT_OK)
        }
        Command::Numrange(a) => {
            let cfg = model(&a.common, a.dim)?;
            check_count(a.count, a.dim)?;
            if a.theta_samples < 3 {
                return Err(invalid("--theta-samples", format!("must be at least 3, got {}", a.theta_samples)));
            }
            let boundary = numerical_range_boundary(&cfg, a.theta_samples)?;
            let eigenvalues = converged_spectrum(&cfg, a.count)?.values();
            let discrepancies = hyperbola_reference(&cfg, a.theta_samples)?.records;
            let svg = a.svg.as_ref().map(|_| plot::curve_svg(&boundary.boundary_points, &eigenvalues)).transpose();
            let svg = svg.map_err(|e| invalid("--svg", e))?;
            let bytes = if is_csv(&a.common.out) {
                let rows = (0..boundary.thetas.len()).map(|k| {
                    let p = boundary.boundary_points[k];
                    (boundary.thetas[k], boundary.support_values[k], p.re, p.im)
                });
                to_csv(&["theta", "support", "x", "y"], rows).map_err(csv_err)?
            } else {
                let config = NumrangeConfig { gamma: cfg.gamma, dim: cfg.dim, theta_samples: a.theta_samples, count: a.count };
                json(&Envelope::new(config, NumrangeData { boundary, eigenvalues, discrepancies }))?
            };
            write(&a.common.out, &bytes)?;
            if let (Some(p), Some(s)) = (&a.svg, svg) {
                write(p, s.as_bytes())?;
            }
            println!("numerical range boundary -> {}", a.common.out.display());
            Ok(EXIT_OK)
        }
        Command::Pseudospectrum(a) => {
            let cfg = model(&a.common, a.dim)?;
            let region = GridRegion {
                re: parse_interval("--re", &a.re)?,
                im: parse_interval("--im", &a.im)?,
                resolution: a.resolution,
            };
            if a.resolution < 2 {
                return Err(invalid("--resolution", format!("must be at least 2, got {}", a.resolution)));
            }
            let grid = pseudospectrum(&cfg, &region)?;
            let svg = a.svg.as_ref().map(|_| plot::contour_svg(&region, &grid.sigma_min)).transpose();
            let svg = svg.map_err(|e| invalid("--svg", e))?;
            let bytes = if is_csv(&a.common.out) {
                to_csv(&["re", "im", "sigma_min"], grid.iter().map(|(z, s)| (z.re, z.im, s))).map_err(csv_err)?
            } else {
                json(&Envelope::new(PseudospectrumConfig { gamma: cfg.gamma, dim: cfg.dim, region }, &grid))?
            };
            write(&a.common.out, &bytes)?;
            if let (Some(p), Some(s)) = (&a.svg, svg) {
                write(p, s.as_bytes())?;
            }
            println!("{0}x{0} pseudospectrum grid -> {1}", a.resolution, a.common.out.display());
            Ok(EXIT_OK)
        }
        Command::Compress(a) => {
            let gamma = check_gamma(a.common.gamma)?;
            check_modes(a.modes)?;
            no_csv(&a.common.out, "compress")?;
            let m = compress(gamma, a.modes)?;
            let rows = |x: &swanson::linalg::OperatorMatrix| (0..x.dim()).map(|i| x.row(i).to_vec()).collect();
            let data = CompressData {
                lambdas: m.lambdas.clone(),
                metric: rows(&m.gram.q),
                gram: rows(&m.gram.q_inv),
                h_hat: rows(&m.h_hat),
                h_hat_eigenvalues: eigenvalues_general(&m.h_hat)?.eigenvalues,
                pseudo_hermiticity_residual: m.pseudo_hermiticity_residual(),
                biorthogonality_residual: m.biorthogonality_residual(),
            };
            write(&a.common.out, &json(&Envelope::new(CompressConfig { gamma, modes: a.modes }, data))?)?;
            println!("compressed model on {} modes -> {}", a.modes, a.common.out.display());
            Ok(EXIT_OK)
        }
        Command::Evolve(a) => {
            let gamma = check_gamma(a.common.gamma)?;
            check_modes(a.modes)?;
            let coeffs = parse_coeffs(&a.coeffs, a.modes)?;
            if !(a.dt > 0.0) || !a.dt.is_finite() {
                return Err(invalid("--dt", format!("must be positive and finite, got {}", a.dt)));
            }
            if !(a.t_max >= 0.0) || !a.t_max.is_finite() {
                return Err(invalid("--t-max", format!("must be finite and non-negative, got {}", a.t_max)));
            }
            if a.t_max / a.dt > MAX_TIME_STEPS as f64 {
                return Err(invalid("--dt", format!("more than {MAX_TIME_STEPS} time steps requested")));
            }
            let m = compress(gamma, a.modes)?;
            let c0: Vec<c64> = coeffs.iter().map(|&x| c64::new(x, 0.0)).collect();
            let trace = evolve(&m, &c0, &time_grid(a.t_max, a.dt)?)?;
            let data = EvolveData {
                phys_norm_drift: trace.phys_norm_drift(),
                std_norm_spread: trace.std_norm_spread(),
                recurrence_time: recurrence_time(gamma),
                recurrence_residual: recurrence_residual(&m, &c0)?,
                trace,
            };
            let bytes = if is_csv(&a.common.out) {
                let t = &data.trace;
                let rows = (0..t.times.len()).map(|k| (t.times[k], t.phys_norms[k], t.std_norms[k]));
                to_csv(&["t", "phys_norm", "std_norm"], rows).map_err(csv_err)?
            } else {
                let config = EvolveConfig { gamma, modes: a.modes, coeffs, t_max: a.t_max, dt: a.dt };
                json(&Envelope::new(config, &data))?
            };
            write(&a.common.out, &bytes)?;
            println!(
                "physical norm drift {:.3e}, standard norm spread {:.3e} -> {}",
                data.phys_norm_drift,
                data.std_norm_spread,
                a.common.out.display()
            );
            Ok(EXIT_OK)
        }
        Command::Verify(a) => {
            let cfg = model(&a.common, a.dim)?;
            no_csv(&a.common.out, "verify")?;
            let report: VerificationReport = verify(&cfg)?;
            write(&a.common.out, &json(&Envelope::new(VerifyConfig { gamma: cfg.gamma, dim: cfg.dim }, &report))?)?;
            for c in &report.checks {
                let status = match c.status {
                    CheckStatus::Pass => "pass",
                    CheckStatus::Fail => "FAIL",
                    CheckStatus::PaperDiscrepancy => "discrepancy",
                };
                println!("{status:<12} {:<36} residual {:.3e} (tol {:.1e})", c.name, c.residual, c.tolerance);
            }
            Ok(verify_exit_code(&report))
        }
    }
}

/// 3 when any check failed; discrepancies with printed formulas alone do not fail.
pub fn verify_exit_code(report: &VerificationReport) -> i32 {
    if report.any_failed() {
        EXIT_VERIFY_FAILED
    } else {
        EXIT_OK
    }
}

fn check_gamma(gamma: f64) -> Result<f64, CliError> {
    if !(gamma.abs() < 1.0) {
        return Err(invalid("--gamma", format!("must satisfy |gamma| < 1, got {gamma}")));
    }
    Ok(gamma)
}

fn model(common: &Common, dim: usize) -> Result<ModelConfig, CliError> {
    let gamma = check_gamma(common.gamma)?;
    if dim < 2 {
        return Err(invalid("--dim", format!("must be at least 2, got {dim}")));
    }
    Ok(ModelConfig::new(gamma, dim)?)
}

fn check_count(count: usize, dim: usize) -> Result<(), CliError> {
    if count == 0 || count > dim {
        return Err(invalid("--count", format!("must be between 1 and dim = {dim}, got {count}")));
    }
    Ok(())
}

fn check_modes(modes: usize) -> Result<(), CliError> {
    if modes < 2 {
        return Err(invalid("--modes", format!("must be at least 2, got {modes}")));
    }
    Ok(())
}

fn no_csv(out: &Path, command: &str) -> Result<(), CliError> {
    if is_csv(out) {
        return Err(invalid("--out", format!("{command} writes JSON only")));
    }
    Ok(())
}

/// `"a:b"` with finite `a < b`.
pub fn parse_interval(flag: &str, s: &str) -> Result<(f64, f64), CliError> {
    let bad = || invalid(flag, format!("expected a:b with finite a < b, got '{s}'"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(bad());
    }
    Ok((a, b))
}

/// Comma-separated reals, zero-padded to `modes` and scaled to unit norm.
pub fn parse_coeffs(s: &str, modes: usize) -> Result<Vec<f64>, CliError> {
    let mut c = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().ok().filter(|x| x.is_finite()))
        .collect::<Option<Vec<f64>>>()
        .ok_or_else(|| invalid("--coeffs", format!("expected comma-separated finite numbers, got '{s}'")))?;
    if c.len() > modes {
        return Err(invalid("--coeffs", format!("{} coefficients given but --modes is {modes}", c.len())));
    }
    let n = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n == 0.0 {
        return Err(invalid("--coeffs", "all coefficients are zero"));
    }
    c.resize(modes, 0.0);
    Ok(c.into_iter().map(|x| x / n).collect())
}

fn json<T: Serialize>(v: &T) -> Result<Vec<u8>, CliError> {
    to_json(v).map_err(|e| CliError::Io(format!("serializing output: {e}")))
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(format!("writing CSV: {e}"))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    write_atomic(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intervals() {
        assert_eq!(parse_interval("--re", "-2:14").unwrap(), (-2.0, 14.0));
        assert!(parse_interval("--re", "3:3").is_err());
        assert!(parse_interval("--im", "1").is_err());
        assert!(parse_interval("--im", "a:b").unwrap_err().to_string().starts_with("--im:"));
    }

    #[test]
    fn coefficients() {
        let c = parse_coeffs("1,0,1", 4).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((c[0] - s).abs() < 1e-15 && (c[2] - s).abs() < 1e-15);
        assert_eq!(c.len(), 4);
        assert!(parse_coeffs("0,0", 4).is_err());
        assert!(parse_coeffs("1,2,3", 2).is_err());
        assert!(parse_coeffs("1,x", 4).is_err());
    }

    #[test]
    fn verify_exit_codes() {
        use swanson::verify::{Check, ExpectedSource};
        let check = |status| Check {
            name: "x".into(),
            computed: 0.0,
            expected: 0.0,
            expected_source: ExpectedSource::PrintedInPaper,
            residual: 1.0,
            tolerance: 0.0,
            status,
            note: String::new(),
        };
        let mut r = VerificationReport { gamma: 0.5, dim: 10, checks: vec![check(CheckStatus::PaperDiscrepancy)] };
        assert_eq!(verify_exit_code(&r), EXIT_OK);
        r.checks.push(check(CheckStatus::Fail));
        assert_eq!(verify_exit_code(&r), EXIT_VERIFY_FAILED);
    }

    #[test]
    fn clap_messages_fit_one_line() {
        let msg = "error: the following required arguments were not provided:\n  --gamma <GAMMA>\n\nUsage: swanson spectrum --gamma <GAMMA>\n";
        assert_eq!(one_line(msg), "error: the following required arguments were not provided: --gamma <GAMMA>");
    }
}
