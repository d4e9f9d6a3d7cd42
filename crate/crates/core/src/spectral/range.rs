use std::f64::consts::PI;

use num_complex::Complex64 as c64;
use serde::{Deserialize, Serialize};

use super::{converged_spectrum, ParityBlocks, Tridiagonal};
use crate::error::{Error, Result};
use crate::linalg::tridiagonal_eigenvalue_bisection;
use crate::oscillator::ModelConfig;

/// Disagreements larger than this are reported.
pub const DISCREPANCY_THRESHOLD: f64 = 1e-6;

/// `count` angles `πk/(count+1)`, symmetric about and including `θ = 0`.
/// An even `count` is rounded up to the next odd number.
pub fn theta_grid(count: usize) -> Vec<f64> {
    let n = count | 1;
    let half = (n / 2) as i64;
    (-half..=half).map(|k| PI * k as f64 / (n + 1) as f64).collect()
}

/// Lowest eigenvalue of one block of `(e^{−iθ}T + e^{iθ}Tᵀ)/2`. The block is
/// hermitian tridiagonal, so a diagonal phase makes it real symmetric with
/// the moduli of its off-diagonal entries.
fn block_support(t: &Tridiagonal, theta: f64) -> f64 {
    let (e_minus, e_plus) = (c64::from_polar(1.0, -theta), c64::from_polar(1.0, theta));
    let diag: Vec<f64> = t.diag.iter().map(|d| d * theta.cos()).collect();
    let off: Vec<f64> = t.upper.iter().zip(&t.lower).map(|(u, l)| (0.5 * (e_minus * u + e_plus * l)).norm()).collect();
    tridiagonal_eigenvalue_bisection(&diag, &off, 0)
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta.abs() < PI / 2.0) {
        return Err(Error::Domain(format!(
            "theta = {theta} is outside (-pi/2, pi/2), where Re(exp(-i theta) H) is unbounded below"
        )));
    }
    Ok(())
}

fn support_from_blocks(blocks: &ParityBlocks, theta: f64) -> f64 {
    block_support(&blocks.even, theta).min(block_support(&blocks.odd, theta))
}

/// `h(θ)`: the lowest eigenvalue of `Re(e^{−iθ}H_N)`. The supporting line of
/// the numerical range at angle `θ` is `x·cosθ + y·sinθ = h(θ)`.
pub fn support_function(cfg: &ModelConfig, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    Ok(support_from_blocks(&ParityBlocks::new(cfg)?, theta))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericalRangeBoundary {
    pub gamma: f64,
    pub dim_used: usize,
    pub thetas: Vec<f64>,
    pub support_values: Vec<f64>,
    /// `|h_N(θ) − h_{2N}(θ)|`
    pub support_errors: Vec<f64>,
    /// Point on the supporting line at `thetas[k]`: the midpoint of its
    /// intersections with the two neighbouring lines.
    pub boundary_points: Vec<c64>,
}

/// Support function on [`theta_grid`] plus the boundary traced by adjacent
/// supporting lines.
pub fn numerical_range_boundary(cfg: &ModelConfig, theta_count: usize) -> Result<NumericalRangeBoundary> {
    cfg.validate()?;
    if theta_count < 3 {
        return Err(Error::InvalidConfig(format!("theta count must be at least 3, got {theta_count}")));
    }
    let thetas = theta_grid(theta_count);
    let blocks = ParityBlocks::new(cfg)?;
    let big = ParityBlocks::new(&cfg.with_dim(2 * cfg.dim)?)?;
    let support_values: Vec<f64> = thetas.iter().map(|&t| support_from_blocks(&blocks, t)).collect();
    let support_errors: Vec<f64> =
        thetas.iter().zip(&support_values).map(|(&t, h)| (h - support_from_blocks(&big, t)).abs()).collect();
    let boundary_points = trace_boundary(&thetas, &support_values);
    Ok(NumericalRangeBoundary { gamma: cfg.gamma, dim_used: cfg.dim, thetas, support_values, support_errors, boundary_points })
}

fn intersect(t1: f64, h1: f64, t2: f64, h2: f64) -> c64 {
    let (s1, c1) = t1.sin_cos();
    let (s2, c2) = t2.sin_cos();
    let det = c1 * s2 - s1 * c2;
    c64::new((h1 * s2 - h2 * s1) / det, (c1 * h2 - c2 * h1) / det)
}

fn trace_boundary(thetas: &[f64], h: &[f64]) -> Vec<c64> {
    let n = thetas.len();
    let vertices: Vec<c64> = (0..n - 1).map(|j| intersect(thetas[j], h[j], thetas[j + 1], h[j + 1])).collect();
    (0..n)
        .map(|j| match (j.checked_sub(1).map(|k| vertices[k]), vertices.get(j)) {
            (Some(a), Some(b)) => 0.5 * (a + b),
            (Some(a), None) => a,
            (None, Some(b)) => *b,
            (None, None) => unreachable!("at least three angles"),
        })
        .collect()
}

/// A printed closed form that disagrees with the numerics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyRecord {
    pub formula: String,
    pub location: String,
    pub printed: f64,
    pub numeric: f64,
    pub difference: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperbolaReference {
    pub gamma: f64,
    /// True at `γ = 0`, where the printed hyperbola collapses to a ray.
    pub degenerate: bool,
    /// Samples of `(x − ½)² − y²/(4γ²) = ¼`, `x ≥ 1`.
    pub curve: Vec<c64>,
    pub thetas: Vec<f64>,
    /// Printed `θ`-eigenvalue formula at `n = 0`; NaN where its root is imaginary.
    pub printed_theta_formula: Vec<f64>,
    /// Support function of the printed hyperbola; NaN outside its asymptotic cone.
    pub printed_hyperbola_support: Vec<f64>,
    pub numeric_support: Vec<f64>,
    pub lowest_eigenvalue: f64,
    pub records: Vec<DiscrepancyRecord>,
}

/// `(n + ½)(cosθ − √(cos²θ − 4γ²sin²θ))`
pub fn printed_theta_formula(gamma: f64, n: usize, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    (n as f64 + 0.5) * (c - (c * c - 4.0 * gamma * gamma * s * s).sqrt())
}

/// Support function of the branch `(x − ½)² − y²/(4γ²) = ¼`, `x ≥ 1`.
pub fn printed_hyperbola_support(gamma: f64, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    0.5 * c + (0.25 * c * c - gamma * gamma * s * s).sqrt()
}

fn worst(thetas: &[f64], printed: &[f64], numeric: &[f64]) -> Option<(f64, f64, f64)> {
    thetas
        .iter()
        .zip(printed.iter().zip(numeric))
        .filter(|(_, (p, _))| p.is_finite())
        .map(|(&t, (&p, &q))| (t, p, q))
        .max_by(|a, b| (a.1 - a.2).abs().total_cmp(&(b.1 - b.2).abs()))
}

/// Evaluates the printed hyperbola and `θ`-eigenvalue formula against the
/// numerical support function and the converged lowest eigenvalue, and
/// records every disagreement above [`DISCREPANCY_THRESHOLD`].
pub fn hyperbola_reference(cfg: &ModelConfig, theta_count: usize) -> Result<HyperbolaReference> {
    let gamma = cfg.gamma;
    let lowest_eigenvalue = converged_spectrum(cfg, 1)?.eigenvalues[0].value.re;
    if gamma == 0.0 {
        return Ok(HyperbolaReference {
            gamma,
            degenerate: true,
            curve: Vec::new(),
            thetas: Vec::new(),
            printed_theta_formula: Vec::new(),
            printed_hyperbola_support: Vec::new(),
            numeric_support: Vec::new(),
            lowest_eigenvalue,
            records: Vec::new(),
        });
    }
    let boundary = numerical_range_boundary(cfg, theta_count)?;
    let thetas = boundary.thetas.clone();
    let numeric_support = boundary.support_values.clone();
    let printed_theta: Vec<f64> = thetas.iter().map(|&t| printed_theta_formula(gamma, 0, t)).collect();
    let printed_hyp: Vec<f64> = thetas.iter().map(|&t| printed_hyperbola_support(gamma, t)).collect();
    let curve: Vec<c64> = (0..=80)
        .map(|k| {
            let u = -3.0 + 6.0 * k as f64 / 80.0;
            c64::new(0.5 + 0.5 * u.cosh(), gamma * u.sinh())
        })
        .collect();

    let mut records = Vec::new();
    let mut push = |formula: &str, location: String, printed: f64, numeric: f64| {
        let difference = (printed - numeric).abs();
        if difference > DISCREPANCY_THRESHOLD {
            records.push(DiscrepancyRecord { formula: formula.into(), location, printed, numeric, difference });
        }
    };
    let mid = thetas.len() / 2;
    push(
        "theta-eigenvalue formula, n = 0",
        "theta = 0 against the lowest eigenvalue of Re(H)".into(),
        printed_theta[mid],
        numeric_support[mid],
    );
    if let Some((t, p, q)) = worst(&thetas, &printed_theta, &numeric_support) {
        push("theta-eigenvalue formula, n = 0", format!("worst sampled angle theta = {t:.6}"), p, q);
    }
    if let Some((t, p, q)) = worst(&thetas, &printed_hyp, &numeric_support) {
        push("hyperbola support function", format!("worst sampled angle theta = {t:.6}"), p, q);
    }
    if lowest_eigenvalue < 1.0 - DISCREPANCY_THRESHOLD {
        push(
            "hyperbola vertex x = 1",
            "lowest converged eigenvalue lies left of the vertex, outside the printed region".into(),
            1.0,
            lowest_eigenvalue,
        );
    }
    Ok(HyperbolaReference {
        gamma,
        degenerate: false,
        curve,
        thetas,
        printed_theta_formula: printed_theta,
        printed_hyperbola_support: printed_hyp,
        numeric_support,
        lowest_eigenvalue,
        records,
    })
}
