use num_complex::Complex64 as c64;

use super::hermitian::eigendecompose_hermitian;
use super::matrix::OperatorMatrix;
use crate::error::{Error, Result};

/// Inverse and square roots of a hermitian positive definite matrix `Q⁻¹`.
#[derive(Clone, Debug)]
pub struct HpdSqrtFamily {
    /// `Q = (Q⁻¹)⁻¹`
    pub q: OperatorMatrix,
    /// `Q^{1/2}`
    pub q_sqrt: OperatorMatrix,
    /// `Q^{−1/2}`
    pub q_inv_sqrt: OperatorMatrix,
    /// Eigenvalues of the input, ascending.
    pub eigenvalues: Vec<f64>,
}

impl HpdSqrtFamily {
    /// `λ_max/λ_min` of the input.
    pub fn condition_number(&self) -> f64 {
        self.eigenvalues.last().unwrap() / self.eigenvalues[0]
    }
}

/// Takes `Q⁻¹` (hermitian tag required) and returns `Q`, `Q^{1/2}`, `Q^{−1/2}`
/// from one eigendecomposition.
pub fn hpd_sqrt_family(q_inv: &OperatorMatrix) -> Result<HpdSqrtFamily> {
    let dec = eigendecompose_hermitian(q_inv)?;
    let lam = dec.real_parts();
    if let Some(&bad) = lam.iter().find(|l| **l <= 0.0) {
        return Err(Error::NotPositiveDefinite { eigenvalue: bad });
    }
    let u = dec.eigenvectors.expect("eigenvectors requested");
    let n = q_inv.dim();
    let spectral = |f: &dyn Fn(f64) -> f64| {
        let w: Vec<f64> = lam.iter().map(|&l| f(l)).collect();
        OperatorMatrix::hermitian_from_upper(n, |i, j| {
            let s: c64 = (0..n).map(|k| u.get(i, k) * w[k] * u.get(j, k).conj()).sum();
            if i == j {
                c64::new(s.re, 0.0)
            } else {
                s
            }
        })
    };
    Ok(HpdSqrtFamily {
        q: spectral(&|l| 1.0 / l),
        q_sqrt: spectral(&|l| 1.0 / l.sqrt()),
        q_inv_sqrt: spectral(&|l| l.sqrt()),
        eigenvalues: lam,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_diff(a: &OperatorMatrix, b: &OperatorMatrix) -> f64 {
        (a - b).max_norm()
    }

    #[test]
    fn identity_maps_to_identities() {
        let f = hpd_sqrt_family(&OperatorMatrix::identity(4)).unwrap();
        let i = OperatorMatrix::identity(4);
        assert!(max_diff(&f.q, &i) < 1e-15);
        assert!(max_diff(&f.q_sqrt, &i) < 1e-15);
        assert!(max_diff(&f.q_inv_sqrt, &i) < 1e-15);
    }

    #[test]
    fn diagonal_input_follows_inverse_convention() {
        let f = hpd_sqrt_family(&OperatorMatrix::from_diagonal(&[4.0, 9.0])).unwrap();
        assert!(max_diff(&f.q, &OperatorMatrix::from_diagonal(&[0.25, 1.0 / 9.0])) < 1e-15);
        assert!(max_diff(&f.q_sqrt, &OperatorMatrix::from_diagonal(&[0.5, 1.0 / 3.0])) < 1e-15);
        assert!(max_diff(&f.q_inv_sqrt, &OperatorMatrix::from_diagonal(&[2.0, 3.0])) < 1e-15);
    }

    #[test]
    fn indefinite_input_reports_eigenvalue() {
        let err = hpd_sqrt_family(&OperatorMatrix::from_diagonal(&[1.0, -2.0])).unwrap_err();
        assert_eq!(err, Error::NotPositiveDefinite { eigenvalue: -2.0 });
    }

    #[test]
    fn squares_products_and_commutation() {
        let n = 6;
        let a = OperatorMatrix::hermitian_from_upper(n, |i, j| {
            if i == j {
                c64::new(3.0 + i as f64, 0.0)
            } else {
                c64::new(0.3 / (1 + j - i) as f64, 0.1 * (i as f64))
            }
        });
        let f = hpd_sqrt_family(&a).unwrap();
        let tol = 1e-10 * f.condition_number();
        let i = OperatorMatrix::identity(n);
        assert!(max_diff(&f.q.matmul(&a), &i) <= tol);
        assert!(max_diff(&f.q_sqrt.matmul(&f.q_sqrt), &f.q) <= tol);
        assert!(max_diff(&f.q_inv_sqrt.matmul(&f.q_inv_sqrt), &a) <= tol);
        for m in [&f.q, &f.q_sqrt, &f.q_inv_sqrt] {
            assert!(m.commutator(&a).max_norm() <= 1e-10);
            assert!(m.is_exactly_hermitian());
        }
    }
}
