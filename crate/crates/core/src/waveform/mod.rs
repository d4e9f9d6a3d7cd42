//! Closed-form eigenfunctions as polynomial-times-gaussian objects, exact
//! quadrature for both inner products, and the differential operators of the
//! model acting on coefficient vectors.

mod function;
mod quadrature;

use num_complex::Complex64 as c64;
use serde::{Deserialize, Serialize};

pub use function::HermiteGaussian;
pub use quadrature::{gaussian_moment, QuadratureRule};

use crate::error::{Error, Result};
use crate::linalg::{hpd_sqrt_family, OperatorMatrix};
use crate::oscillator::{omega, quartic_root, validate_gamma};
use function::{poly_axpy, poly_mul_x};

/// Extra quadrature nodes beyond the exactness minimum.
pub const QUADRATURE_MARGIN: usize = 8;

/// `Φₙ = a*ⁿ exp(−ω x²)`, normalized to unit L² norm after every step.
pub fn phi_n(gamma: f64, n: usize) -> Result<HermiteGaussian> {
    Ok(phi_family(gamma, n)?.pop().expect("family is never empty"))
}

/// `Φ₀ … Φ_{n_max}`.
pub fn phi_family(gamma: f64, n_max: usize) -> Result<Vec<HermiteGaussian>> {
    validate_gamma(gamma)?;
    let mut f = HermiteGaussian::gaussian(omega(gamma))?;
    f = f.scale(c64::new(1.0 / l2_norm(&f)?, 0.0));
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(f.clone());
    for _ in 0..n_max {
        f = apply_operator(gamma, &f, Operator::Raise);
        f = f.scale(c64::new(1.0 / l2_norm(&f)?, 0.0));
        out.push(f.clone());
    }
    Ok(out)
}

/// `a*ⁿ exp(−ω x²)` without normalization, whose norms grow like `n!`.
pub fn phi_n_unnormalized(gamma: f64, n: usize) -> Result<HermiteGaussian> {
    validate_gamma(gamma)?;
    let mut f = HermiteGaussian::gaussian(omega(gamma))?;
    for _ in 0..n {
        f = apply_operator(gamma, &f, Operator::Raise);
    }
    Ok(f)
}

/// `Ψₙ = exp(−γx²)Φₙ`: eigenfunctions of `H`.
pub fn psi_n(gamma: f64, n: usize) -> Result<HermiteGaussian> {
    phi_n(gamma, n)?.shift_exponent(gamma)
}

/// `Ψ̃ₙ = exp(γx²)Φₙ`: eigenfunctions of `H*`, biorthonormal to the `Ψₙ`.
pub fn psi_tilde_n(gamma: f64, n: usize) -> Result<HermiteGaussian> {
    phi_n(gamma, n)?.shift_exponent(-gamma)
}

pub fn psi_family(gamma: f64, n_max: usize) -> Result<Vec<HermiteGaussian>> {
    phi_family(gamma, n_max)?.iter().map(|f| f.shift_exponent(gamma)).collect()
}

pub fn psi_tilde_family(gamma: f64, n_max: usize) -> Result<Vec<HermiteGaussian>> {
    phi_family(gamma, n_max)?.iter().map(|f| f.shift_exponent(-gamma)).collect()
}

fn node_count(f: &HermiteGaussian, g: &HermiteGaussian) -> usize {
    let deg = f.degree().unwrap_or(0) + g.degree().unwrap_or(0);
    deg / 2 + 1 + QUADRATURE_MARGIN
}

/// `∫ f(x)·conj(g(x))·exp(extra·x²) dx`, exactly.
fn weighted_integral(f: &HermiteGaussian, g: &HermiteGaussian, extra: f64, nodes: usize) -> Result<c64> {
    let c = f.exponent() + g.exponent() - extra;
    if !(c > 0.0) {
        return Err(Error::DivergentIntegral { exponent: c });
    }
    if f.is_zero() || g.is_zero() {
        return Ok(c64::new(0.0, 0.0));
    }
    let rule = QuadratureRule::gauss_hermite(nodes, c)?;
    Ok(rule.integrate(|x| function::eval_poly(f.coeffs(), x) * function::eval_poly(g.coeffs(), x).conj()))
}

/// `⟨f, g⟩ = ∫ f·conj(g) dx`.
pub fn inner_product(f: &HermiteGaussian, g: &HermiteGaussian) -> Result<c64> {
    weighted_integral(f, g, 0.0, node_count(f, g))
}

/// [`inner_product`] with `extra` nodes on top of the default count.
pub fn inner_product_refined(f: &HermiteGaussian, g: &HermiteGaussian, extra: usize) -> Result<c64> {
    weighted_integral(f, g, 0.0, node_count(f, g) + extra)
}

/// `⟪f, g⟫ = ⟨exp(γx²)f, exp(γx²)g⟩`.
pub fn physical_inner_product(gamma: f64, f: &HermiteGaussian, g: &HermiteGaussian) -> Result<c64> {
    weighted_integral(f, g, 2.0 * gamma, node_count(f, g))
}

pub fn l2_norm(f: &HermiteGaussian) -> Result<f64> {
    Ok(inner_product(f, f)?.re.max(0.0).sqrt())
}

/// Differential operators of the model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Operator {
    /// `H = −¼∂² + x² − γ(½ + x∂)`
    Hamiltonian,
    /// `H* = −¼∂² + x² + γ(½ + x∂)`
    HamiltonianAdjoint,
    /// `H₀ = −¼∂² + ω²x²`
    Harmonic,
    /// `a = s·x + ∂/(2s)`, `s = (1+γ²)^{1/4}`
    Lower,
    /// `a* = s·x − ∂/(2s)`
    Raise,
    /// `d = exp(−γx²)·a·exp(γx²)`
    PseudoLower,
    /// `d‡ = exp(−γx²)·a*·exp(γx²)`
    PseudoRaise,
}

/// Exact action on the coefficient representation; the gaussian exponent
/// of the input is kept.
pub fn apply_operator(gamma: f64, f: &HermiteGaussian, op: Operator) -> HermiteGaussian {
    let p = f.coeffs();
    let xp = poly_mul_x(p);
    let x2p = poly_mul_x(&xp);
    let re = |v: f64| c64::new(v, 0.0);
    let s = quartic_root(gamma);
    let coeffs = match op {
        Operator::Hamiltonian | Operator::HamiltonianAdjoint => {
            let sign = if op == Operator::Hamiltonian { -1.0 } else { 1.0 };
            let kinetic = poly_axpy(&x2p, re(-0.25), &f.second_derivative_poly());
            let drift = poly_axpy(&poly_mul_x(&f.derivative_poly()), re(0.5), p);
            poly_axpy(&kinetic, re(sign * gamma), &drift)
        }
        Operator::Harmonic => {
            let w = omega(gamma);
            poly_axpy(&x2p.iter().map(|a| a * (w * w)).collect::<Vec<_>>(), re(-0.25), &f.second_derivative_poly())
        }
        Operator::Lower | Operator::Raise => {
            let sign = if op == Operator::Lower { 1.0 } else { -1.0 };
            poly_axpy(&xp.iter().map(|a| a * s).collect::<Vec<_>>(), re(sign / (2.0 * s)), &f.derivative_poly())
        }
        Operator::PseudoLower | Operator::PseudoRaise => {
            let sign = if op == Operator::PseudoLower { 1.0 } else { -1.0 };
            let conj_deriv = poly_axpy(&f.derivative_poly(), re(2.0 * gamma), &xp);
            poly_axpy(&xp.iter().map(|a| a * s).collect::<Vec<_>>(), re(sign / (2.0 * s)), &conj_deriv)
        }
    };
    HermiteGaussian::raw(coeffs, f.exponent())
}

/// `‖op·f − λ·f‖ / ‖f‖` in L².
pub fn eigen_residual(gamma: f64, f: &HermiteGaussian, op: Operator, lambda: f64) -> Result<f64> {
    let r = apply_operator(gamma, f, op).add_scaled(c64::new(-lambda, 0.0), f)?;
    Ok(l2_norm(&r)? / l2_norm(f)?)
}

/// `ω(d‡d + ½)·f`, the factorized form of `H`.
pub fn factorized_hamiltonian(gamma: f64, f: &HermiteGaussian) -> HermiteGaussian {
    let dd = apply_operator(gamma, &apply_operator(gamma, f, Operator::PseudoLower), Operator::PseudoRaise);
    let sum = dd.add_scaled(c64::new(0.5, 0.0), f).expect("operators keep the exponent");
    sum.scale(c64::new(omega(gamma), 0.0))
}

/// Gram matrix of `Ψ₀ … Ψ_{n−1}` and its derived square roots.
#[derive(Clone, Debug)]
pub struct GramData {
    pub n_modes: usize,
    /// `(Q̂⁻¹)_{j,i} = ⟨Ψᵢ, Ψⱼ⟩`
    pub q_inv: OperatorMatrix,
    pub q: OperatorMatrix,
    pub q_sqrt: OperatorMatrix,
    pub q_inv_sqrt: OperatorMatrix,
    /// Eigenvalues of `Q̂⁻¹`, ascending.
    pub eigenvalues: Vec<f64>,
}

impl GramData {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }
}

pub fn gram_matrix(gamma: f64, n_modes: usize) -> Result<GramData> {
    gram_matrix_refined(gamma, n_modes, 0)
}

/// [`gram_matrix`] with `extra` quadrature nodes per entry.
pub fn gram_matrix_refined(gamma: f64, n_modes: usize, extra: usize) -> Result<GramData> {
    if n_modes == 0 {
        return Err(Error::InvalidConfig("n_modes must be at least 1".into()));
    }
    let psi = psi_family(gamma, n_modes - 1)?;
    let mut entries = vec![c64::new(0.0, 0.0); n_modes * n_modes];
    for j in 0..n_modes {
        for i in j..n_modes {
            entries[j * n_modes + i] = inner_product_refined(&psi[i], &psi[j], extra)?;
        }
    }
    let q_inv = OperatorMatrix::hermitian_from_upper(n_modes, |j, i| entries[j * n_modes + i]);
    let fam = hpd_sqrt_family(&q_inv)?;
    Ok(GramData {
        n_modes,
        q_inv,
        q: fam.q,
        q_sqrt: fam.q_sqrt,
        q_inv_sqrt: fam.q_inv_sqrt,
        eigenvalues: fam.eigenvalues,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolutionCheck {
    /// `Σ_{n<N} ⟨f,Ψ̃ₙ⟩⟨Ψₙ,g⟩/⟨Ψₙ,Ψ̃ₙ⟩`
    pub partial_sum: c64,
    /// `⟨f, g⟩`
    pub reference: c64,
    pub gap: f64,
}

/// Truncated biorthogonal expansion of `⟨f, g⟩`.
pub fn resolution_of_identity_check(
    gamma: f64,
    f: &HermiteGaussian,
    g: &HermiteGaussian,
    n_terms: usize,
) -> Result<ResolutionCheck> {
    let mut partial_sum = c64::new(0.0, 0.0);
    if n_terms > 0 {
        let phi = phi_family(gamma, n_terms - 1)?;
        for p in &phi {
            let psi = p.shift_exponent(gamma)?;
            let tilde = p.shift_exponent(-gamma)?;
            partial_sum += inner_product(f, &tilde)? * inner_product(&psi, g)? / inner_product(&psi, &tilde)?;
        }
    }
    let reference = inner_product(f, g)?;
    Ok(ResolutionCheck { partial_sum, reference, gap: (partial_sum - reference).norm() })
}

/// `⟪f,g⟫ / √(⟪f,f⟫⟪g,g⟫)`.
pub fn transition_amplitude_function(gamma: f64, f: &HermiteGaussian, g: &HermiteGaussian) -> Result<c64> {
    let ff = physical_inner_product(gamma, f, f)?.re;
    let gg = physical_inner_product(gamma, g, g)?.re;
    if !(ff > 0.0) || !(gg > 0.0) {
        return Err(Error::DegenerateState);
    }
    Ok(physical_inner_product(gamma, f, g)? / (ff * gg).sqrt())
}
