use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::symmetric_tridiagonal_eigen;

/// Gauss rule for the weight `exp(−scale·x²)` on the real line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub scale: f64,
}

impl QuadratureRule {
    /// `count`-point rule, exact for `x^k·exp(−scale·x²)` with `k ≤ 2·count − 1`.
    ///
    /// Nodes start from the eigenvalues of the Hermite Jacobi matrix and are
    /// polished by Newton steps on the orthonormal recurrence; weights come
    /// from the Christoffel function, which keeps the tiny outer weights
    /// accurate to full relative precision.
    pub fn gauss_hermite(count: usize, scale: f64) -> Result<Self> {
        if count == 0 {
            return Err(Error::Contract("quadrature needs at least one node".into()));
        }
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::DivergentIntegral { exponent: scale });
        }
        let off: Vec<f64> = (1..count).map(|k| (k as f64 / 2.0).sqrt()).collect();
        let (mut t, _) = symmetric_tridiagonal_eigen(&vec![0.0; count], &off, false)?;
        t.sort_by(f64::total_cmp);

        let mut weights = Vec::with_capacity(count);
        for ti in t.iter_mut() {
            for _ in 0..3 {
                let (pn, pn1, _) = orthonormal_hermite(count, *ti);
                let step = pn / ((2.0 * count as f64).sqrt() * pn1);
                if step.is_finite() {
                    *ti -= step;
                }
            }
            let (_, _, christoffel) = orthonormal_hermite(count, *ti);
            weights.push(1.0 / christoffel);
        }
        // the rule is symmetric; enforce it exactly
        for i in 0..count / 2 {
            let j = count - 1 - i;
            let x = 0.5 * (t[j] - t[i]);
            let w = 0.5 * (weights[i] + weights[j]);
            t[i] = -x;
            t[j] = x;
            weights[i] = w;
            weights[j] = w;
        }
        if count % 2 == 1 {
            t[count / 2] = 0.0;
        }
        let r = scale.sqrt();
        Ok(QuadratureRule {
            nodes: t.iter().map(|x| x / r).collect(),
            weights: weights.iter().map(|w| w / r).collect(),
            scale,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Highest monomial degree integrated exactly.
    pub fn exact_degree(&self) -> usize {
        2 * self.len() - 1
    }

    /// `Σ wᵢ·f(xᵢ)`, summing mirrored nodes pairwise so odd integrands
    /// cancel exactly.
    pub fn integrate<T, F>(&self, mut f: F) -> T
    where
        F: FnMut(f64) -> T,
        T: std::iter::Sum<T> + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
    {
        let n = self.len();
        let pairs = (0..n / 2).map(|i| (f(self.nodes[i]) + f(self.nodes[n - 1 - i])) * self.weights[i]).collect::<Vec<T>>();
        let middle = (n % 2 == 1).then(|| f(self.nodes[n / 2]) * self.weights[n / 2]);
        pairs.into_iter().chain(middle).sum()
    }
}

/// Orthonormal Hermite polynomials for weight `exp(−t²)`: returns
/// `(p̂ₙ(t), p̂ₙ₋₁(t), Σ_{k<n} p̂ₖ(t)²)`.
fn orthonormal_hermite(n: usize, t: f64) -> (f64, f64, f64) {
    let mut prev = 0.0;
    let mut cur = std::f64::consts::PI.powf(-0.25);
    let mut sum = 0.0;
    for k in 0..n {
        sum += cur * cur;
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * t * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    (cur, prev, sum)
}

/// `∫ x^k exp(−c x²) dx = Γ((k+1)/2)/c^{(k+1)/2}` for even `k`, zero for odd.
pub fn gaussian_moment(k: usize, c: f64) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    // Γ(m + 1/2) = √π·(2m−1)!!/2^m
    let m = k / 2;
    let mut g = std::f64::consts::PI.sqrt();
    for j in 0..m {
        g *= (2 * j + 1) as f64 / 2.0;
    }
    g / c.powf(m as f64 + 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rules_match_tabulated_values() {
        let r = QuadratureRule::gauss_hermite(2, 1.0).unwrap();
        assert!((r.nodes[1] - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((r.weights[0] - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-15);
        let r = QuadratureRule::gauss_hermite(3, 1.0).unwrap();
        assert_eq!(r.nodes[1], 0.0);
        assert!((r.nodes[2] - 1.5f64.sqrt()).abs() < 1e-15);
        assert!((r.weights[1] - 2.0 * std::f64::consts::PI.sqrt() / 3.0).abs() < 1e-15);
    }

    #[test]
    fn moments_are_exact() {
        for &count in &[1usize, 5, 12, 20, 33] {
            for &c in &[0.3, 1.0, 2.0 * 1.118, 3.2] {
                let r = QuadratureRule::gauss_hermite(count, c).unwrap();
                for k in 0..=r.exact_degree() {
                    let q: f64 = r.integrate(|x| x.powi(k as i32));
                    let exact = gaussian_moment(k, c);
                    if k % 2 == 1 {
                        assert_eq!(q, 0.0, "count {count} k {k}");
                    } else {
                        assert!((q - exact).abs() <= 1e-13 * exact, "count {count} c {c} k {k}: {q} vs {exact}");
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_bad_scale() {
        assert!(matches!(QuadratureRule::gauss_hermite(4, 0.0), Err(Error::DivergentIntegral { .. })));
        assert!(QuadratureRule::gauss_hermite(0, 1.0).is_err());
    }
}
