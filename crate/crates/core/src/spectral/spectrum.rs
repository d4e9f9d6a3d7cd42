use num_complex::Complex64 as c64;
use serde::{Deserialize, Serialize};

use super::ParityBlocks;
use crate::error::{Error, Result};
use crate::linalg::{condition_number, eigendecompose_general};
use crate::oscillator::{build_hamiltonian, ModelConfig};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumOptions {
    /// Largest `|λ(N) − λ(2N)|` accepted as converged.
    pub tolerance: f64,
    /// The doubling stops once `2N` would exceed this.
    pub max_dim: usize,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions { tolerance: 1e-8, max_dim: 800 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergedEigenvalue {
    pub value: c64,
    /// `|λ(N) − λ(2N)|`
    pub error_estimate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergedSpectrum {
    pub gamma: f64,
    /// The smaller of the two truncations that agreed.
    pub dim: usize,
    /// Values are taken from the larger truncation `2·dim`.
    pub eigenvalues: Vec<ConvergedEigenvalue>,
}

impl ConvergedSpectrum {
    pub fn values(&self) -> Vec<c64> {
        self.eigenvalues.iter().map(|e| e.value).collect()
    }
}

/// The `n_wanted` eigenvalues of smallest real part, confirmed by comparing
/// truncations `N` and `2N` and doubling `N` until they agree.
pub fn converged_spectrum(cfg: &ModelConfig, n_wanted: usize) -> Result<ConvergedSpectrum> {
    converged_spectrum_with(cfg, n_wanted, &SpectrumOptions::default())
}

pub fn converged_spectrum_with(cfg: &ModelConfig, n_wanted: usize, opts: &SpectrumOptions) -> Result<ConvergedSpectrum> {
    cfg.validate()?;
    if n_wanted == 0 {
        return Err(Error::InvalidConfig("count must be at least 1".into()));
    }
    if n_wanted > cfg.dim {
        return Err(Error::InvalidConfig(format!("count {n_wanted} exceeds dim {}", cfg.dim)));
    }
    let mut dim = cfg.dim;
    let mut small = ParityBlocks::new(cfg)?.eigenvalues()?;
    loop {
        let big_cfg = cfg.with_dim(2 * dim)?;
        let big = ParityBlocks::new(&big_cfg)?.eigenvalues()?;
        let eigenvalues: Vec<ConvergedEigenvalue> = small
            .iter()
            .zip(&big)
            .take(n_wanted)
            .map(|(a, b)| ConvergedEigenvalue { value: *b, error_estimate: (a - b).norm() })
            .collect();
        let bad: Vec<usize> =
            (0..n_wanted).filter(|&k| !(eigenvalues[k].error_estimate <= opts.tolerance)).collect();
        if bad.is_empty() {
            return Ok(ConvergedSpectrum { gamma: cfg.gamma, dim, eigenvalues });
        }
        if 4 * dim > opts.max_dim {
            return Err(Error::NotConverged { dim: 2 * dim, indices: bad });
        }
        dim *= 2;
        small = big;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisQuality {
    pub dim: usize,
    /// `κ₂(V)` of the unit-column eigenvector matrix of `H_N`.
    pub condition_number: f64,
}

/// Condition numbers of the eigenvector matrices of `H_N` for each `N`.
/// Their growth with `N` is the finite-size shadow of the eigenfunctions
/// failing to form a Riesz basis.
pub fn basis_quality(gamma: f64, dims: &[usize]) -> Result<Vec<BasisQuality>> {
    dims.iter()
        .map(|&dim| {
            if dim < 4 {
                return Err(Error::InvalidConfig(format!("basis quality needs dim >= 4, got {dim}")));
            }
            let cfg = ModelConfig::new(gamma, dim)?;
            let dec = eigendecompose_general(&build_hamiltonian(&cfg))?;
            let v = dec.eigenvectors.expect("eigenvectors requested");
            Ok(BasisQuality { dim, condition_number: condition_number(&v)? })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_baseline_converges_immediately() {
        let s = converged_spectrum(&ModelConfig::new(0.0, 20).unwrap(), 5).unwrap();
        for (k, e) in s.eigenvalues.iter().enumerate() {
            assert_eq!(e.value, c64::new(k as f64 + 0.5, 0.0));
            assert_eq!(e.error_estimate, 0.0);
        }
    }

    #[test]
    fn doubling_reports_failure_with_indices() {
        let opts = SpectrumOptions { tolerance: 1e-8, max_dim: 24 };
        let err = converged_spectrum_with(&ModelConfig::new(0.9, 6).unwrap(), 5, &opts).unwrap_err();
        match err {
            Error::NotConverged { dim, indices } => {
                assert_eq!(dim, 24);
                assert!(!indices.is_empty());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn orthonormal_basis_at_zero_gamma() {
        for q in basis_quality(0.0, &[4, 12]).unwrap() {
            assert!((q.condition_number - 1.0).abs() < 1e-8);
        }
        assert!(basis_quality(0.5, &[3]).is_err());
    }
}
