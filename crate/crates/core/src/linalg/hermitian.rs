//! Hermitian eigenproblems: Householder reduction to real symmetric
//! tridiagonal form followed by implicit QL, plus Sturm-sequence bisection for
//! single eigenvalues of a symmetric tridiagonal matrix.

use num_complex::Complex64 as c64;

use super::{matrix::OperatorMatrix, sort_decomposition, Options, SpectralDecomposition, Structure};
use crate::error::{Error, Result};

const QL_MAX_ITER: usize = 60;

/// Eigenvalues and orthonormal eigenvectors of a hermitian-tagged matrix.
pub fn eigendecompose_hermitian(a: &OperatorMatrix) -> Result<SpectralDecomposition> {
    eigendecompose_hermitian_with(a, &Options::default())
}

pub fn eigendecompose_hermitian_with(a: &OperatorMatrix, opts: &Options) -> Result<SpectralDecomposition> {
    if a.structure() != Structure::Hermitian {
        return Err(Error::Contract(format!(
            "hermitian eigensolver needs a hermitian-tagged matrix, got {:?}",
            a.structure()
        )));
    }
    let n = a.dim();
    let (d, e, q) = tridiagonalize(a, opts.want_vectors);
    let (values, z) = symmetric_tridiagonal_eigen(&d, &e, opts.want_vectors)?;

    let vectors = match (q, z) {
        (Some(q), Some(z)) => {
            // V = Q·Z with Z real
            let mut v = vec![c64::new(0.0, 0.0); n * n];
            for i in 0..n {
                for k in 0..n {
                    let qik = q[i * n + k];
                    if qik == c64::new(0.0, 0.0) {
                        continue;
                    }
                    for j in 0..n {
                        v[i * n + j] += qik * z[k * n + j];
                    }
                }
            }
            Some(OperatorMatrix::from_raw(n, v))
        }
        _ => None,
    };

    let values: Vec<c64> = values.into_iter().map(|x| c64::new(x, 0.0)).collect();
    sort_decomposition(a, values, vectors, opts)
}

/// Eigenvalues only, ascending.
pub fn eigenvalues_hermitian(a: &OperatorMatrix) -> Result<Vec<f64>> {
    let opts = Options { want_vectors: false, ..Options::default() };
    Ok(eigendecompose_hermitian_with(a, &opts)?.eigenvalues.iter().map(|z| z.re).collect())
}

/// Reduces a hermitian matrix to real symmetric tridiagonal form
/// `A = Q·T·Q*`. Returns the diagonal, the off-diagonal and optionally `Q`.
fn tridiagonalize(a: &OperatorMatrix, want_q: bool) -> (Vec<f64>, Vec<f64>, Option<Vec<c64>>) {
    let n = a.dim();
    let zero = c64::new(0.0, 0.0);
    let mut h = a.as_slice().to_vec();
    let mut q = want_q.then(|| {
        let mut q = vec![zero; n * n];
        for i in 0..n {
            q[i * n + i] = c64::new(1.0, 0.0);
        }
        q
    });

    let mut v = vec![zero; n];
    let mut p = vec![zero; n];
    for k in 0..n.saturating_sub(2) {
        let below: f64 = (k + 2..n).map(|i| h[i * n + k].norm_sqr()).sum();
        if below == 0.0 {
            continue;
        }
        let x0 = h[(k + 1) * n + k];
        let xnorm = (below + x0.norm_sqr()).sqrt();
        let phase = if x0 == zero { c64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * xnorm;

        let m = n - k - 1;
        for (t, i) in (k + 1..n).enumerate() {
            v[t] = h[i * n + k];
        }
        v[0] -= alpha;
        let vnorm2: f64 = v[..m].iter().map(|z| z.norm_sqr()).sum();
        let beta = 2.0 / vnorm2;

        // p = beta·A22·v, w = p − (beta/2)(v*p)·v, A22 −= v·w* + w·v*
        for (t, i) in (k + 1..n).enumerate() {
            let row = &h[i * n + k + 1..i * n + n];
            p[t] = beta * row.iter().zip(&v[..m]).map(|(a, b)| a * b).sum::<c64>();
        }
        let vp: c64 = v[..m].iter().zip(&p[..m]).map(|(a, b)| a.conj() * b).sum();
        let kk = 0.5 * beta * vp;
        for t in 0..m {
            p[t] -= kk * v[t];
        }
        for s in 0..m {
            let (vs, ws) = (v[s], p[s]);
            let row = (k + 1 + s) * n;
            for t in 0..m {
                h[row + k + 1 + t] -= vs * p[t].conj() + ws * v[t].conj();
            }
        }
        h[(k + 1) * n + k] = alpha;
        h[k * n + k + 1] = alpha.conj();
        for i in k + 2..n {
            h[i * n + k] = zero;
            h[k * n + i] = zero;
        }

        if let Some(q) = q.as_mut() {
            // Q ← Q·(I − beta·v·v*)
            for i in 0..n {
                let row = &mut q[i * n + k + 1..i * n + n];
                let s: c64 = row.iter().zip(&v[..m]).map(|(a, b)| a * b).sum();
                let s = beta * s;
                for (r, vt) in row.iter_mut().zip(&v[..m]) {
                    *r -= s * vt.conj();
                }
            }
        }
    }

    // Diagonal unitary scaling makes the off-diagonal real and nonnegative.
    let d: Vec<f64> = (0..n).map(|i| h[i * n + i].re).collect();
    let mut e = vec![0.0; n.saturating_sub(1)];
    let mut phase = c64::new(1.0, 0.0);
    for k in 0..n.saturating_sub(1) {
        let sub = h[(k + 1) * n + k];
        let mag = sub.norm();
        e[k] = mag;
        if mag > 0.0 {
            phase *= sub / mag;
        }
        if let Some(q) = q.as_mut() {
            for i in 0..n {
                q[i * n + k + 1] *= phase;
            }
        }
    }
    (d, e, q)
}

/// Implicit QL with Wilkinson-type shifts on a real symmetric tridiagonal
/// matrix (`off[i]` couples rows `i` and `i+1`).
///
/// Returns unsorted eigenvalues and, when requested, the row-major orthogonal
/// matrix whose columns are the eigenvectors.
pub fn symmetric_tridiagonal_eigen(
    diag: &[f64],
    off: &[f64],
    want_vectors: bool,
) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    let n = diag.len();
    assert!(off.len() + 1 == n || (n == 0 && off.is_empty()), "off-diagonal length must be n-1");
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let mut z = want_vectors.then(|| {
        let mut z = vec![0.0; n * n];
        for i in 0..n {
            z[i * n + i] = 1.0;
        }
        z
    });

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > QL_MAX_ITER {
                return Err(Error::Convergence { iterations: iter, index: l });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_mut() {
                    for k in 0..n {
                        let f = z[k * n + i + 1];
                        z[k * n + i + 1] = s * z[k * n + i] + c * f;
                        z[k * n + i] = c * z[k * n + i] - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok((d, z))
}

/// Number of eigenvalues of the symmetric tridiagonal matrix strictly below `x`.
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let tiny = f64::MIN_POSITIVE / f64::EPSILON;
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let coupling = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] / q };
        q = diag[i] - x - coupling;
        if q == 0.0 {
            q = -tiny;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k`-th smallest (0-based) eigenvalue of a symmetric tridiagonal matrix
/// by bisection on the Sturm count.
pub fn tridiagonal_eigenvalue_bisection(diag: &[f64], off: &[f64], k: usize) -> f64 {
    let n = diag.len();
    assert!(k < n, "eigenvalue index out of range");
    let (mut lo, mut hi) = gershgorin_interval(diag, off);
    let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * scale {
            break;
        }
        if sturm_count(diag, off, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

pub(crate) fn gershgorin_interval(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let pad = 4.0 * f64::EPSILON * lo.abs().max(hi.abs()) + f64::MIN_POSITIVE;
    (lo - pad, hi + pad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::dot;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, seed: u64) -> OperatorMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let entries: Vec<c64> = (0..n * n).map(|_| c64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        OperatorMatrix::hermitian_from_upper(n, |i, j| entries[i * n + j])
    }

    #[test]
    fn identity_has_unit_eigenvalues() {
        let dec = eigendecompose_hermitian(&OperatorMatrix::identity(4)).unwrap();
        for z in &dec.eigenvalues {
            assert_eq!(*z, c64::new(1.0, 0.0));
        }
    }

    #[test]
    fn diagonal_eigenvalues_come_back_sorted() {
        let a = OperatorMatrix::from_diagonal(&[3.0, 1.0, 2.0]).with_structure(Structure::Hermitian).unwrap();
        let vals = eigenvalues_hermitian(&a).unwrap();
        assert_eq!(vals, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn rejects_untagged_input() {
        let a = OperatorMatrix::from_real_fn(2, |i, j| if i == j { 1.0 + i as f64 } else { 0.0 });
        assert!(matches!(eigendecompose_hermitian(&a), Err(Error::Contract(_))));
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let n = 20;
        let a = random_hermitian(n, 7);
        let dec = eigendecompose_hermitian(&a).unwrap();
        let v = dec.eigenvectors.as_ref().unwrap();
        assert!(dec.eigenvalues.iter().all(|z| z.im == 0.0));

        let vhv = &v.adjoint() * v;
        let ortho = (&vhv - &OperatorMatrix::identity(n)).max_norm();
        assert!(ortho <= 1e-10, "orthonormality residual {ortho:e}");

        let lam = OperatorMatrix::from_fn(n, |i, j| if i == j { dec.eigenvalues[i] } else { c64::new(0.0, 0.0) });
        let recon = &(v * &lam) * &v.adjoint();
        let err = (&a - &recon).max_norm();
        assert!(err <= 1e-10 * a.max_norm(), "reconstruction residual {err:e}");
        for r in &dec.residuals {
            assert!(*r <= dec.tolerance);
        }
        for j in 0..n {
            let col = v.column(j);
            assert!((dot(&col, &col).re.sqrt() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn bisection_agrees_with_ql() {
        // -1, 2, -1 second difference matrix: eigenvalues 2 - 2cos(kπ/(n+1))
        let n = 30;
        let d = vec![2.0; n];
        let e = vec![-1.0; n - 1];
        let (mut vals, _) = symmetric_tridiagonal_eigen(&d, &e, false).unwrap();
        vals.sort_by(f64::total_cmp);
        for k in 0..n {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            let bis = tridiagonal_eigenvalue_bisection(&d, &e, k);
            assert!((vals[k] - exact).abs() < 1e-13);
            assert!((bis - exact).abs() < 1e-13);
        }
    }

    #[test]
    fn sturm_count_brackets_spectrum() {
        let d = [1.0, 2.0, 3.0];
        let e = [0.0, 0.0];
        assert_eq!(sturm_count(&d, &e, 0.5), 0);
        assert_eq!(sturm_count(&d, &e, 2.5), 2);
        assert_eq!(sturm_count(&d, &e, 10.0), 3);
    }
}
