//! Extreme singular values. The smallest one comes from Lanczos on
//! `(A*A)⁻¹`, applied through a single LU factorization of `A`.

use num_complex::Complex64 as c64;

use super::hermitian::{eigenvalues_hermitian, tridiagonal_eigenvalue_bisection};
use super::lu::BandLu;
use super::matrix::{dot, norm, OperatorMatrix};
use crate::error::Result;

const RITZ_TOL: f64 = 1e-10;

/// `σ_min(A)`; exactly 0 when LU meets a zero pivot.
pub fn smallest_singular_value(a: &OperatorMatrix) -> Result<f64> {
    Ok(smallest_singular_value_lu(&BandLu::factor(a)))
}

/// `σ_min` of an already factored matrix.
pub fn smallest_singular_value_lu(lu: &BandLu) -> f64 {
    if lu.is_singular() {
        return 0.0;
    }
    let n = lu.dim();
    let mut q = start_vector(n);
    let mut basis: Vec<Vec<c64>> = Vec::with_capacity(n.min(64));
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();

    loop {
        let mut w = q.clone();
        // a nonsingular factorization never fails on a vector of the right length
        lu.solve_adjoint_in_place(&mut w).expect("adjoint solve");
        lu.solve_in_place(&mut w).expect("solve");
        let a_k = dot(&w, &q).re;
        basis.push(q);
        alpha.push(a_k);
        for (t, v) in w.iter_mut().zip(basis.last().unwrap()) {
            *t -= a_k * v;
        }
        if let (Some(&b), Some(prev)) = (beta.last(), basis.len().checked_sub(2).map(|k| &basis[k])) {
            for (t, v) in w.iter_mut().zip(prev) {
                *t -= b * v;
            }
        }
        reorthogonalize(&mut w, &basis);
        let b_k = norm(&w);

        let k = alpha.len();
        let theta = tridiagonal_eigenvalue_bisection(&alpha, &beta, k - 1);
        if k == n || b_k <= f64::EPSILON * theta {
            return 1.0 / theta.sqrt();
        }
        let s = ritz_last_component(&alpha, &beta, theta);
        if b_k * s.abs() <= RITZ_TOL * theta {
            return 1.0 / theta.sqrt();
        }
        beta.push(b_k);
        q = w.into_iter().map(|z| z / b_k).collect();
    }
}

/// `σ_max(A) = √λ_max(A*A)`.
pub fn largest_singular_value(a: &OperatorMatrix) -> Result<f64> {
    let ata = a.adjoint().matmul(a);
    let g = OperatorMatrix::hermitian_from_upper(a.dim(), |i, j| ata.get(i, j));
    let top = eigenvalues_hermitian(&g)?.last().copied().unwrap_or(0.0);
    Ok(top.max(0.0).sqrt())
}

/// `κ₂(A) = σ_max/σ_min`, infinite for singular input.
pub fn condition_number(a: &OperatorMatrix) -> Result<f64> {
    let smin = smallest_singular_value(a)?;
    if smin == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(largest_singular_value(a)? / smin)
}

/// Deterministic real start vector with no parity structure. Being real, it
/// makes the iteration for `conj(A)` the exact conjugate of the one for `A`.
fn start_vector(n: usize) -> Vec<c64> {
    let v: Vec<c64> = (0..n)
        .map(|i| {
            let t = i as f64;
            c64::new(1.0 + 0.5 * (0.7 * t + 0.3).sin() + 0.25 * (1.3 * t).cos(), 0.0)
        })
        .collect();
    let nv = norm(&v);
    v.into_iter().map(|z| z / nv).collect()
}

/// Classical Gram–Schmidt against the whole basis, repeated once when the
/// first pass removes most of the vector.
fn reorthogonalize(w: &mut [c64], basis: &[Vec<c64>]) {
    for _ in 0..2 {
        let before = norm(w);
        let coeffs: Vec<c64> = basis.iter().map(|q| dot(w, q)).collect();
        for (c, q) in coeffs.iter().zip(basis) {
            for (t, v) in w.iter_mut().zip(q) {
                *t -= c * v;
            }
        }
        if norm(w) > 0.717 * before {
            break;
        }
    }
}

/// Last component of the unit eigenvector of the tridiagonal `T` for the
/// (already accurate) eigenvalue `theta`, by two steps of inverse iteration.
fn ritz_last_component(diag: &[f64], off: &[f64], theta: f64) -> f64 {
    let k = diag.len();
    if k == 1 {
        return 1.0;
    }
    let mut x = vec![1.0; k];
    for _ in 0..2 {
        solve_shifted_tridiagonal(diag, off, theta, &mut x);
        let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x.iter_mut().for_each(|v| *v /= nx);
    }
    x[k - 1]
}

/// Solves `(T − σI)x = b` in place with partial pivoting; exact zero pivots
/// are nudged so the near-singular solve stays finite.
fn solve_shifted_tridiagonal(diag: &[f64], off: &[f64], sigma: f64, b: &mut [f64]) {
    let n = diag.len();
    let scale = diag.iter().chain(off).fold(0.0f64, |m, v| m.max(v.abs())).max(sigma.abs());
    let tiny = f64::EPSILON * scale.max(f64::MIN_POSITIVE);
    let mut d: Vec<f64> = diag.iter().map(|v| v - sigma).collect();
    let mut du = off.to_vec();
    let dl = off;
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                d[i] = tiny;
            }
            let m = dl[i] / d[i];
            d[i + 1] -= m * du[i];
            b[i + 1] -= m * b[i];
        } else {
            let m = d[i] / dl[i];
            d[i] = dl[i];
            let tmp = d[i + 1];
            d[i + 1] = du[i] - m * tmp;
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -m * du2[i];
            }
            du[i] = tmp;
            let bi = b[i];
            b[i] = b[i + 1];
            b[i + 1] = bi - m * b[i + 1];
        }
    }
    if d[n - 1] == 0.0 {
        d[n - 1] = tiny;
    }
    b[n - 1] /= d[n - 1];
    b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for i in (0..n.saturating_sub(2)).rev() {
        b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
}
