use num_complex::Complex64 as c64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ZERO: c64 = c64::new(0.0, 0.0);

/// `f(x) = p(x)·exp(−c·x²)` with `p` in ascending monomial coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HermiteGaussian {
    coeffs: Vec<c64>,
    exponent: f64,
}

impl HermiteGaussian {
    /// Fails unless `exponent > 0`.
    pub fn new(coeffs: Vec<c64>, exponent: f64) -> Result<Self> {
        if !(exponent > 0.0) || !exponent.is_finite() {
            return Err(Error::NonNormalizable { exponent });
        }
        Ok(Self::raw(coeffs, exponent))
    }

    pub fn from_real(coeffs: &[f64], exponent: f64) -> Result<Self> {
        Self::new(coeffs.iter().map(|&a| c64::new(a, 0.0)).collect(), exponent)
    }

    /// `exp(−c·x²)`
    pub fn gaussian(exponent: f64) -> Result<Self> {
        Self::from_real(&[1.0], exponent)
    }

    pub(crate) fn raw(mut coeffs: Vec<c64>, exponent: f64) -> Self {
        while coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        HermiteGaussian { coeffs, exponent }
    }

    pub fn coeffs(&self) -> &[c64] {
        &self.coeffs
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    /// `None` for the zero function.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest coefficient modulus; 0 for the zero function.
    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, x: f64) -> c64 {
        eval_poly(&self.coeffs, x) * (-self.exponent * x * x).exp()
    }

    pub fn scale(&self, k: c64) -> Self {
        Self::raw(self.coeffs.iter().map(|a| a * k).collect(), self.exponent)
    }

    /// `self + k·other`; both must share the gaussian exponent.
    pub fn add_scaled(&self, k: c64, other: &Self) -> Result<Self> {
        if self.exponent != other.exponent {
            return Err(Error::Contract(format!(
                "cannot add functions with gaussian exponents {} and {}",
                self.exponent, other.exponent
            )));
        }
        Ok(Self::raw(poly_axpy(&self.coeffs, k, &other.coeffs), self.exponent))
    }

    /// `Σ kᵢ·fᵢ` over functions sharing one exponent.
    pub fn combination(terms: &[(c64, &HermiteGaussian)]) -> Result<Self> {
        let (_, first) = terms.first().ok_or_else(|| Error::Contract("empty combination".into()))?;
        let mut acc = Self::raw(Vec::new(), first.exponent);
        for (k, f) in terms {
            acc = acc.add_scaled(*k, f)?;
        }
        Ok(acc)
    }

    /// Multiplies by `exp(−delta·x²)`.
    pub fn shift_exponent(&self, delta: f64) -> Result<Self> {
        Self::new(self.coeffs.clone(), self.exponent + delta)
    }

    /// Coefficients of `g` with `f′ = g·exp(−c x²)`.
    pub(crate) fn derivative_poly(&self) -> Vec<c64> {
        poly_axpy(&poly_deriv(&self.coeffs), c64::new(-2.0 * self.exponent, 0.0), &poly_mul_x(&self.coeffs))
    }

    /// Coefficients of `g` with `f″ = g·exp(−c x²)`.
    pub(crate) fn second_derivative_poly(&self) -> Vec<c64> {
        let q = self.derivative_poly();
        poly_axpy(&poly_deriv(&q), c64::new(-2.0 * self.exponent, 0.0), &poly_mul_x(&q))
    }
}

pub(crate) fn eval_poly(p: &[c64], x: f64) -> c64 {
    p.iter().rev().fold(ZERO, |acc, a| acc * x + a)
}

pub(crate) fn poly_deriv(p: &[c64]) -> Vec<c64> {
    p.iter().enumerate().skip(1).map(|(k, a)| a * k as f64).collect()
}

pub(crate) fn poly_mul_x(p: &[c64]) -> Vec<c64> {
    if p.is_empty() {
        return Vec::new();
    }
    std::iter::once(ZERO).chain(p.iter().copied()).collect()
}

/// `p + k·q`
pub(crate) fn poly_axpy(p: &[c64], k: c64, q: &[c64]) -> Vec<c64> {
    let n = p.len().max(q.len());
    (0..n)
        .map(|i| p.get(i).copied().unwrap_or(ZERO) + k * q.get(i).copied().unwrap_or(ZERO))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> c64 {
        c64::new(re, 0.0)
    }

    #[test]
    fn construction_guards() {
        assert!(matches!(HermiteGaussian::gaussian(0.0), Err(Error::NonNormalizable { .. })));
        assert!(HermiteGaussian::gaussian(-1.0).is_err());
        let f = HermiteGaussian::from_real(&[1.0, 2.0, 0.0, 0.0], 1.0).unwrap();
        assert_eq!(f.degree(), Some(1));
        assert!(HermiteGaussian::from_real(&[0.0], 1.0).unwrap().is_zero());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let f = HermiteGaussian::from_real(&[0.3, -1.0, 0.5, 2.0], 0.7).unwrap();
        let d1 = HermiteGaussian::raw(f.derivative_poly(), f.exponent());
        let d2 = HermiteGaussian::raw(f.second_derivative_poly(), f.exponent());
        let h = 1e-4;
        for &x in &[-1.3, -0.2, 0.0, 0.9, 1.7] {
            let fd1 = (f.eval(x + h) - f.eval(x - h)) / (2.0 * h);
            let fd2 = (f.eval(x + h) - f.eval(x) * 2.0 + f.eval(x - h)) / (h * h);
            assert!((d1.eval(x) - fd1).norm() < 1e-7);
            assert!((d2.eval(x) - fd2).norm() < 1e-5);
        }
    }

    #[test]
    fn linear_combination() {
        let f = HermiteGaussian::from_real(&[1.0], 1.0).unwrap();
        let g = HermiteGaussian::from_real(&[0.0, 1.0], 1.0).unwrap();
        let h = HermiteGaussian::combination(&[(c(2.0), &f), (c(-3.0), &g)]).unwrap();
        assert_eq!(h.coeffs(), &[c(2.0), c(-3.0)]);
        let other = HermiteGaussian::gaussian(2.0).unwrap();
        assert!(f.add_scaled(c(1.0), &other).is_err());
        // cancellation trims to the zero function
        assert!(f.add_scaled(c(-1.0), &f).unwrap().is_zero());
    }
}
