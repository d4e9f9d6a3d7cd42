//! Dense numerical kernels: hermitian and general eigensolvers, banded LU,
//! extreme singular values and square roots of positive definite matrices.

mod general;
mod hermitian;
mod lu;
mod matrix;
mod sqrt;
mod svd;

use num_complex::Complex64 as c64;

pub use general::{eigendecompose_general, eigenvalues_general, eigenvalues_general_with};
pub use hermitian::{
    eigendecompose_hermitian, eigendecompose_hermitian_with, eigenvalues_hermitian, sturm_count,
    symmetric_tridiagonal_eigen, tridiagonal_eigenvalue_bisection,
};
pub use lu::BandLu;
pub use matrix::{dot, norm, OperatorMatrix, Structure};
pub use sqrt::{hpd_sqrt_family, HpdSqrtFamily};
pub use svd::{condition_number, largest_singular_value, smallest_singular_value, smallest_singular_value_lu};

use crate::error::{Error, Result};

/// Per-call knobs for the eigensolvers.
#[derive(Clone, Debug)]
pub struct Options {
    pub want_vectors: bool,
    /// Relative residual tolerance; scaled by `max(1, ‖A‖_max)`.
    pub tolerance: f64,
}

impl Default for Options {
    fn default() -> Self {
        Options { want_vectors: true, tolerance: 1e-10 }
    }
}

/// Eigenvalues sorted by ascending real part, then ascending imaginary part.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<c64>,
    /// Unit-norm eigenvectors as columns, in the same order as `eigenvalues`.
    pub eigenvectors: Option<OperatorMatrix>,
    /// `‖A·v − λ·v‖₂` per pair; empty when no eigenvectors were computed.
    pub residuals: Vec<f64>,
    pub tolerance: f64,
}

impl SpectralDecomposition {
    pub fn real_parts(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| z.re).collect()
    }
}

pub(crate) fn spectral_order(a: &c64, b: &c64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Sorts, normalizes eigenvector columns and fills in residuals.
pub(crate) fn sort_decomposition(
    a: &OperatorMatrix,
    values: Vec<c64>,
    vectors: Option<OperatorMatrix>,
    opts: &Options,
) -> Result<SpectralDecomposition> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| spectral_order(&values[i], &values[j]));
    let eigenvalues: Vec<c64> = order.iter().map(|&i| values[i]).collect();
    let tolerance = opts.tolerance * a.max_norm().max(1.0);

    let (eigenvectors, residuals) = match vectors {
        None => (None, Vec::new()),
        Some(v) => {
            let mut cols: Vec<Vec<c64>> = order.iter().map(|&k| v.column(k)).collect();
            for c in cols.iter_mut() {
                let nrm = norm(c);
                if nrm > 0.0 {
                    c.iter_mut().for_each(|z| *z /= nrm);
                }
            }
            let residuals: Vec<f64> = cols
                .iter()
                .zip(&eigenvalues)
                .map(|(c, lam)| {
                    let av = a.mul_vec(c);
                    av.iter().zip(c).map(|(x, y)| (x - lam * y).norm_sqr()).sum::<f64>().sqrt()
                })
                .collect();
            if let Some(&worst) = residuals.iter().max_by(|a, b| a.total_cmp(b)) {
                if worst > tolerance {
                    return Err(Error::Inaccurate { residual: worst, tolerance });
                }
            }
            let m = OperatorMatrix::from_fn(n, |i, j| cols[j][i]);
            (Some(m), residuals)
        }
    };
    Ok(SpectralDecomposition { eigenvalues, eigenvectors, residuals, tolerance })
}
