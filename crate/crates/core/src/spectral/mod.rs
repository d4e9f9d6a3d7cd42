//! Non-normal diagnostics on truncations of `H`: converged eigenvalues,
//! ε-pseudospectra, the numerical range, the accretivity resolvent bound and
//! the conditioning of the eigenvector basis.

mod pseudo;
mod range;
mod spectrum;

use num_complex::Complex64 as c64;

pub use pseudo::{
    accretivity_check, nontriviality_witnesses, pseudospectrum, AccretivityReport, AccretivitySample, GridRegion,
    PseudospectrumGrid, Witness,
};
pub use range::{
    hyperbola_reference, numerical_range_boundary, printed_hyperbola_support, printed_theta_formula, support_function,
    theta_grid, DiscrepancyRecord, HyperbolaReference, NumericalRangeBoundary, DISCREPANCY_THRESHOLD,
};
pub use spectrum::{
    basis_quality, converged_spectrum, converged_spectrum_with, BasisQuality, ConvergedEigenvalue, ConvergedSpectrum,
    SpectrumOptions,
};

use crate::error::Result;
use crate::linalg::{eigenvalues_general, smallest_singular_value_lu, BandLu, OperatorMatrix};
use crate::oscillator::{build_hamiltonian, parity_split, ModelConfig};

/// One real tridiagonal block: `diag[i]`, `upper[i] = T(i,i+1)`, `lower[i] = T(i+1,i)`.
#[derive(Clone, Debug)]
pub(crate) struct Tridiagonal {
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
}

impl Tridiagonal {
    fn from_matrix(m: &OperatorMatrix) -> Self {
        let n = m.dim();
        Tridiagonal {
            diag: (0..n).map(|i| m.get(i, i).re).collect(),
            upper: (0..n - 1).map(|i| m.get(i, i + 1).re).collect(),
            lower: (0..n - 1).map(|i| m.get(i + 1, i).re).collect(),
        }
    }

    fn len(&self) -> usize {
        self.diag.len()
    }

    fn to_matrix(&self) -> OperatorMatrix {
        OperatorMatrix::from_real_fn(self.len(), |i, j| {
            if i == j {
                self.diag[i]
            } else if j == i + 1 {
                self.upper[i]
            } else if i == j + 1 {
                self.lower[j]
            } else {
                0.0
            }
        })
    }

    /// `σ_min(zI − T)`
    fn sigma_min_shifted(&self, z: c64) -> f64 {
        let lu = BandLu::factor_with(self.len(), 1, 1, |i, j| {
            if i == j {
                z - self.diag[i]
            } else if j == i + 1 {
                c64::new(-self.upper[i], 0.0)
            } else {
                c64::new(-self.lower[j], 0.0)
            }
        });
        smallest_singular_value_lu(&lu)
    }
}

/// The even and odd parity blocks of `H_N`. Every spectral quantity of
/// `H_N` used here is the union or the extremum over the two blocks.
#[derive(Clone, Debug)]
pub(crate) struct ParityBlocks {
    pub even: Tridiagonal,
    pub odd: Tridiagonal,
}

impl ParityBlocks {
    pub fn new(cfg: &ModelConfig) -> Result<Self> {
        let (even, odd) = parity_split(&build_hamiltonian(cfg))?;
        Ok(ParityBlocks { even: Tridiagonal::from_matrix(&even), odd: Tridiagonal::from_matrix(&odd) })
    }

    /// `σ_min(zI − H_N)`
    pub fn sigma_min_shifted(&self, z: c64) -> f64 {
        self.even.sigma_min_shifted(z).min(self.odd.sigma_min_shifted(z))
    }

    /// All eigenvalues of `H_N`, in spectral order.
    pub fn eigenvalues(&self) -> Result<Vec<c64>> {
        let mut all = eigenvalues_general(&self.even.to_matrix())?.eigenvalues;
        all.extend(eigenvalues_general(&self.odd.to_matrix())?.eigenvalues);
        all.sort_by(crate::linalg::spectral_order);
        Ok(all)
    }
}

/// Eigenvalues of the truncation `H_N` (all of them, in spectral order).
pub fn truncation_spectrum(cfg: &ModelConfig) -> Result<Vec<c64>> {
    ParityBlocks::new(cfg)?.eigenvalues()
}

/// `σ_min(zI − H_N)` at a single point.
pub fn sigma_min_at(cfg: &ModelConfig, z: c64) -> Result<f64> {
    Ok(ParityBlocks::new(cfg)?.sigma_min_shifted(z))
}

/// Distance from `z` to the nearest point of `set`.
pub fn distance_to_set(z: c64, set: &[c64]) -> f64 {
    set.iter().map(|w| (z - w).norm()).fold(f64::INFINITY, f64::min)
}
