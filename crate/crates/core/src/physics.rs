//! The model compressed to the span of the first `n` eigenfunctions: the
//! metric `Q̂`, the pseudo-Hermitian matrix `Ĥ = Q̂^{−1/2}·diag(λ)·Q̂^{1/2}`,
//! expectation values, transition amplitudes and time evolution.
//!
//! A state with expansion `f = Σ cₖΨₖ` is represented by the coefficient
//! vector `u = Q̂^{−1/2}c = Σ cₖΨ̂ₖ`, so that `⟨u, v⟩` reproduces the
//! standard product of functions and `⟪u, v⟫ = ⟨Q̂u, v⟩` the physical one.

use num_complex::Complex64 as c64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm, OperatorMatrix};
use crate::oscillator::omega;
use crate::waveform::{gram_matrix, psi_family, GramData, HermiteGaussian};

/// Allowed `|Im⟪Ĥu,u⟫/⟪u,u⟫|` relative to the energy scale.
pub const ENERGY_IMAG_TOLERANCE: f64 = 1e-11;

#[derive(Clone, Debug)]
pub struct CompressedModel {
    pub gamma: f64,
    pub n_modes: usize,
    pub gram: GramData,
    pub h_hat: OperatorMatrix,
    /// `(k + ½)·ω`
    pub lambdas: Vec<f64>,
    /// Column `i` is `Ψ̂ᵢ = Q̂^{−1/2}Êᵢ`.
    pub psi_hat: OperatorMatrix,
    /// Column `i` is `Ψ̃̂ᵢ = Q̂^{1/2}Êᵢ`.
    pub psi_tilde_hat: OperatorMatrix,
}

pub fn compress(gamma: f64, n_modes: usize) -> Result<CompressedModel> {
    let gram = gram_matrix(gamma, n_modes)?;
    let w = omega(gamma);
    let lambdas: Vec<f64> = (0..n_modes).map(|k| (k as f64 + 0.5) * w).collect();
    let h_hat = gram.q_inv_sqrt.matmul(&OperatorMatrix::from_diagonal(&lambdas)).matmul(&gram.q_sqrt);
    let psi_hat = gram.q_inv_sqrt.clone();
    let psi_tilde_hat = gram.q_sqrt.clone();
    Ok(CompressedModel { gamma, n_modes, gram, h_hat, lambdas, psi_hat, psi_tilde_hat })
}

impl CompressedModel {
    fn check_len(&self, v: &[c64]) -> Result<()> {
        if v.len() != self.n_modes {
            return Err(Error::LengthMismatch { expected: self.n_modes, got: v.len() });
        }
        Ok(())
    }

    /// `Ψ̂ᵢ`
    pub fn eigenvector(&self, i: usize) -> Vec<c64> {
        self.psi_hat.column(i)
    }

    /// `Ψ̃̂ᵢ`
    pub fn dual_vector(&self, i: usize) -> Vec<c64> {
        self.psi_tilde_hat.column(i)
    }

    /// Coefficient vector `Q̂^{−1/2}c` of the state `Σ cₖΨₖ`.
    pub fn state_vector(&self, c: &[c64]) -> Result<Vec<c64>> {
        self.check_len(c)?;
        Ok(self.gram.q_inv_sqrt.mul_vec(c))
    }

    /// Expansion coefficients `c = Q̂^{1/2}u` of a coefficient vector.
    pub fn mode_coefficients(&self, u: &[c64]) -> Result<Vec<c64>> {
        self.check_len(u)?;
        Ok(self.gram.q_sqrt.mul_vec(u))
    }

    /// `max |⟨Ψ̃̂ᵢ, Ψ̂ⱼ⟩ − δᵢⱼ|`
    pub fn biorthogonality_residual(&self) -> f64 {
        let n = self.n_modes;
        let mut worst = 0.0f64;
        for i in 0..n {
            let t = self.dual_vector(i);
            for j in 0..n {
                let delta = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(&t, &self.eigenvector(j)) - delta).norm());
            }
        }
        worst
    }

    /// `‖Q̂Ĥ − Ĥ*Q̂‖_max`
    pub fn pseudo_hermiticity_residual(&self) -> f64 {
        (&self.gram.q.matmul(&self.h_hat) - &self.h_hat.adjoint().matmul(&self.gram.q)).max_norm()
    }
}

/// `⟪u, v⟫ = ⟨Q̂u, v⟩`
pub fn physical_inner_product_vec(model: &CompressedModel, u: &[c64], v: &[c64]) -> Result<c64> {
    model.check_len(u)?;
    model.check_len(v)?;
    Ok(dot(&model.gram.q.mul_vec(u), v))
}

/// `⟪Ĥu, u⟫/⟪u, u⟫`, which is real because `Ĥ` is `Q̂`-hermitian.
pub fn energy_expectation(model: &CompressedModel, u: &[c64]) -> Result<f64> {
    let norm = physical_inner_product_vec(model, u, u)?.re;
    if !(norm > 0.0) {
        return Err(Error::DegenerateState);
    }
    let e = physical_inner_product_vec(model, &model.h_hat.mul_vec(u), u)? / norm;
    let scale = e.re.abs().max(1.0);
    if e.im.abs() > ENERGY_IMAG_TOLERANCE * scale {
        return Err(Error::Inaccurate { residual: e.im.abs(), tolerance: ENERGY_IMAG_TOLERANCE * scale });
    }
    Ok(e.re)
}

/// `⟪u, v⟫/√(⟪u, u⟫⟪v, v⟫)`
pub fn transition_amplitude_vec(model: &CompressedModel, u: &[c64], v: &[c64]) -> Result<c64> {
    let uu = physical_inner_product_vec(model, u, u)?.re;
    let vv = physical_inner_product_vec(model, v, v)?.re;
    if !(uu > 0.0) || !(vv > 0.0) {
        return Err(Error::DegenerateState);
    }
    Ok(physical_inner_product_vec(model, u, v)? / (uu * vv).sqrt())
}

/// The function `Σ cₖΨₖ`.
pub fn state_function(gamma: f64, c: &[c64]) -> Result<HermiteGaussian> {
    if c.is_empty() {
        return Err(Error::InvalidConfig("state needs at least one coefficient".into()));
    }
    let psi = psi_family(gamma, c.len() - 1)?;
    let terms: Vec<(c64, &HermiteGaussian)> = c.iter().copied().zip(psi.iter()).collect();
    HermiteGaussian::combination(&terms)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolutionTrace {
    pub times: Vec<f64>,
    /// `cₖ(t) = e^{−iλₖt}cₖ(0)`
    pub coeffs_t: Vec<Vec<c64>>,
    /// `⟪u(t), u(t)⟫`
    pub phys_norms: Vec<f64>,
    /// `⟨u(t), u(t)⟩`
    pub std_norms: Vec<f64>,
}

impl EvolutionTrace {
    /// `(max − min)/max` of the physical norms.
    pub fn phys_norm_drift(&self) -> f64 {
        spread(&self.phys_norms) / self.phys_norms.iter().cloned().fold(0.0, f64::max)
    }

    /// `max − min` of the standard norms.
    pub fn std_norm_spread(&self) -> f64 {
        spread(&self.std_norms)
    }
}

fn spread(v: &[f64]) -> f64 {
    let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
    max - min
}

/// `t₀, t₀+dt, …` up to and including `t_max` (within rounding).
pub fn time_grid(t_max: f64, dt: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0) || !(t_max >= 0.0) || !t_max.is_finite() {
        return Err(Error::InvalidConfig(format!("need dt > 0 and finite t_max >= 0, got dt {dt}, t_max {t_max}")));
    }
    let steps = (t_max / dt + 1e-9).floor() as usize;
    Ok((0..=steps).map(|k| k as f64 * dt).collect())
}

/// Spectral propagation of the mode coefficients `c0`.
pub fn evolve(model: &CompressedModel, c0: &[c64], times: &[f64]) -> Result<EvolutionTrace> {
    model.check_len(c0)?;
    if c0.iter().all(|z| *z == c64::new(0.0, 0.0)) {
        return Err(Error::DegenerateState);
    }
    if let Some(t) = times.iter().find(|t| !t.is_finite()) {
        return Err(Error::InvalidConfig(format!("time grid contains non-finite value {t}")));
    }
    let mut coeffs_t = Vec::with_capacity(times.len());
    let mut phys_norms = Vec::with_capacity(times.len());
    let mut std_norms = Vec::with_capacity(times.len());
    for &t in times {
        let c = propagate(model, c0, t);
        let u = model.state_vector(&c)?;
        phys_norms.push(physical_inner_product_vec(model, &u, &u)?.re);
        std_norms.push(dot(&u, &u).re);
        coeffs_t.push(c);
    }
    Ok(EvolutionTrace { times: times.to_vec(), coeffs_t, phys_norms, std_norms })
}

/// `cₖ(t) = e^{−iλₖt}cₖ`
pub fn propagate(model: &CompressedModel, c: &[c64], t: f64) -> Vec<c64> {
    c.iter().zip(&model.lambdas).map(|(ck, l)| ck * c64::from_polar(1.0, -l * t)).collect()
}

/// `2π/ω`, after which every mode has picked up the same phase.
pub fn recurrence_time(gamma: f64) -> f64 {
    2.0 * std::f64::consts::PI / omega(gamma)
}

/// `‖u(T) − e^{−iλ₀T}u(0)‖/‖u(0)‖` at `T = 2π/ω`.
pub fn recurrence_residual(model: &CompressedModel, c0: &[c64]) -> Result<f64> {
    let t = recurrence_time(model.gamma);
    let u0 = model.state_vector(c0)?;
    let ut = model.state_vector(&propagate(model, c0, t))?;
    let phase = c64::from_polar(1.0, -model.lambdas[0] * t);
    let diff: Vec<c64> = ut.iter().zip(&u0).map(|(a, b)| a - phase * b).collect();
    Ok(norm(&diff) / norm(&u0))
}

/// `exp(−iĤt)` by scaling and squaring of a Taylor series; used to cross-check
/// the spectral propagator.
pub fn dense_propagator(model: &CompressedModel, t: f64) -> OperatorMatrix {
    let a = model.h_hat.scale(c64::new(0.0, -t));
    let norm1 = (0..a.dim()).map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max);
    let squarings = if norm1 > 0.5 { (norm1 / 0.5).log2().ceil() as u32 } else { 0 };
    let a = a.scale_real(0.5f64.powi(squarings as i32));
    let mut term = OperatorMatrix::identity(a.dim());
    let mut sum = term.clone();
    for k in 1..=24 {
        term = term.matmul(&a).scale_real(1.0 / k as f64);
        sum = &sum + &term;
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum);
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize) -> Vec<c64> {
        (0..n).map(|k| c64::new(if k == i { 1.0 } else { 0.0 }, 0.0)).collect()
    }

    #[test]
    fn hermitian_baseline() {
        let m = compress(0.0, 4).unwrap();
        assert!((&m.gram.q - &OperatorMatrix::identity(4)).max_norm() < 1e-13);
        let d = OperatorMatrix::from_diagonal(&[0.5, 1.5, 2.5, 3.5]);
        assert!((&m.h_hat - &d).max_norm() < 1e-13);
        let u = vec![c64::new(1.0, 2.0), c64::new(0.0, -1.0), c64::new(3.0, 0.0), c64::new(0.5, 0.5)];
        let v = vec![c64::new(-1.0, 0.0), c64::new(2.0, 1.0), c64::new(0.0, 1.0), c64::new(1.0, 0.0)];
        assert!((physical_inner_product_vec(&m, &u, &v).unwrap() - dot(&u, &v)).norm() < 1e-12);
    }

    #[test]
    fn entries_match_double_sum() {
        let m = compress(0.5, 6).unwrap();
        for j in 0..6 {
            for i in 0..6 {
                let s: c64 = (0..6).map(|k| m.gram.q_inv_sqrt.get(j, k) * m.lambdas[k] * m.gram.q_sqrt.get(k, i)).sum();
                assert!((s - m.h_hat.get(j, i)).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn physical_orthonormality_and_energies() {
        let m = compress(0.5, 6).unwrap();
        let p0 = m.eigenvector(0);
        let p1 = m.eigenvector(1);
        assert!((physical_inner_product_vec(&m, &p0, &p0).unwrap() - 1.0).norm() < 1e-10);
        assert!(physical_inner_product_vec(&m, &p0, &p1).unwrap().norm() < 1e-10);
        for k in 0..6 {
            assert!((energy_expectation(&m, &m.eigenvector(k)).unwrap() - m.lambdas[k]).abs() < 1e-10);
        }
        let sum: Vec<c64> = p0.iter().zip(&p1).map(|(a, b)| a + b).collect();
        let mid = 0.5 * (m.lambdas[0] + m.lambdas[1]);
        assert!((energy_expectation(&m, &sum).unwrap() - mid).abs() < 1e-10);
        assert_eq!(energy_expectation(&m, &[c64::new(0.0, 0.0); 6]), Err(Error::DegenerateState));
        assert!(matches!(physical_inner_product_vec(&m, &p0, &p0[..3]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn amplitudes() {
        let m = compress(0.5, 6).unwrap();
        let u = m.eigenvector(0);
        assert!((transition_amplitude_vec(&m, &u, &u).unwrap() - 1.0).norm() < 1e-12);
        assert!(transition_amplitude_vec(&m, &u, &m.eigenvector(2)).unwrap().norm() < 1e-10);
    }

    #[test]
    fn stationary_state_keeps_both_norms() {
        let m = compress(0.5, 6).unwrap();
        let tr = evolve(&m, &e(6, 0), &time_grid(5.0, 0.5).unwrap()).unwrap();
        assert!(tr.phys_norm_drift() < 1e-12);
        assert!(tr.std_norm_spread() < 1e-12);
    }

    #[test]
    fn dense_exponential_agrees_with_spectral_path() {
        let m = compress(0.5, 8).unwrap();
        let c0: Vec<c64> = (0..8).map(|k| c64::new(1.0 / (k + 1) as f64, 0.1 * k as f64)).collect();
        let u0 = m.state_vector(&c0).unwrap();
        for t in [0.0, 0.7, 3.0, 10.0] {
            let spectral = m.state_vector(&propagate(&m, &c0, t)).unwrap();
            let dense = dense_propagator(&m, t).mul_vec(&u0);
            let diff: Vec<c64> = spectral.iter().zip(&dense).map(|(a, b)| a - b).collect();
            assert!(norm(&diff) <= 1e-9, "t = {t}: {:e}", norm(&diff));
        }
    }

    #[test]
    fn superposition_recurs() {
        let m = compress(0.5, 8).unwrap();
        assert!(m.biorthogonality_residual() < 1e-10);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut c0 = vec![c64::new(0.0, 0.0); 8];
        c0[0] = c64::new(s, 0.0);
        c0[2] = c64::new(s, 0.0);
        assert!(recurrence_residual(&m, &c0).unwrap() < 1e-10);
    }

    #[test]
    fn time_grid_includes_endpoint() {
        let g = time_grid(10.0, 0.01).unwrap();
        assert_eq!(g.len(), 1001);
        assert!((g[1000] - 10.0).abs() < 1e-12);
        assert!(time_grid(1.0, 0.0).is_err());
    }
}
