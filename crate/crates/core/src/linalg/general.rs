//! Non-hermitian eigenproblems via Householder reduction to upper Hessenberg
//! form and the complex single-shift QR algorithm with Wilkinson shifts.
//! Eigenvectors come from back substitution on the Schur factor.

use num_complex::Complex64 as c64;

use super::{matrix::OperatorMatrix, sort_decomposition, Options, SpectralDecomposition};
use crate::error::{Error, Result};

const ZERO: c64 = c64::new(0.0, 0.0);
const ONE: c64 = c64::new(1.0, 0.0);
const MAX_ITER_PER_EIGENVALUE: usize = 100;

/// Eigenvalues only.
pub fn eigenvalues_general(a: &OperatorMatrix) -> Result<SpectralDecomposition> {
    eigenvalues_general_with(a, &Options { want_vectors: false, ..Options::default() })
}

/// Eigenvalues and unit-norm eigenvectors with per-pair residuals.
pub fn eigendecompose_general(a: &OperatorMatrix) -> Result<SpectralDecomposition> {
    eigenvalues_general_with(a, &Options::default())
}

pub fn eigenvalues_general_with(a: &OperatorMatrix, opts: &Options) -> Result<SpectralDecomposition> {
    let n = a.dim();
    let mut h = a.as_slice().to_vec();
    let mut z = hessenberg_reduce(&mut h, n, opts.want_vectors);
    schur_qr(&mut h, n, z.as_deref_mut())?;

    let values: Vec<c64> = (0..n).map(|i| h[i * n + i]).collect();
    let vectors = z.map(|z| {
        let y = triangular_eigenvectors(&h, n);
        // V = Z·Y
        let mut v = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let zik = z[i * n + k];
                if zik == ZERO {
                    continue;
                }
                for j in k..n {
                    v[i * n + j] += zik * y[k * n + j];
                }
            }
        }
        OperatorMatrix::from_raw(n, v)
    });
    sort_decomposition(a, values, vectors, opts)
}

fn is_hessenberg(h: &[c64], n: usize) -> bool {
    (0..n).all(|i| (0..i.saturating_sub(1)).all(|j| h[i * n + j] == ZERO))
}

/// In-place Householder reduction; returns the accumulated unitary factor
/// when requested. Inputs that are already Hessenberg are left untouched.
fn hessenberg_reduce(h: &mut [c64], n: usize, want_q: bool) -> Option<Vec<c64>> {
    let mut q = want_q.then(|| {
        let mut q = vec![ZERO; n * n];
        for i in 0..n {
            q[i * n + i] = ONE;
        }
        q
    });
    if is_hessenberg(h, n) {
        return q;
    }
    let mut v = vec![ZERO; n];
    for k in 0..n.saturating_sub(2) {
        let below: f64 = (k + 2..n).map(|i| h[i * n + k].norm_sqr()).sum();
        if below == 0.0 {
            continue;
        }
        let x0 = h[(k + 1) * n + k];
        let xnorm = (below + x0.norm_sqr()).sqrt();
        let phase = if x0 == ZERO { ONE } else { x0 / x0.norm() };
        let alpha = -phase * xnorm;
        let m = n - k - 1;
        for (t, i) in (k + 1..n).enumerate() {
            v[t] = h[i * n + k];
        }
        v[0] -= alpha;
        let beta = 2.0 / v[..m].iter().map(|z| z.norm_sqr()).sum::<f64>();

        // left: rows k+1.., columns k..
        for j in k..n {
            let s: c64 = (0..m).map(|t| v[t].conj() * h[(k + 1 + t) * n + j]).sum();
            let s = beta * s;
            for t in 0..m {
                h[(k + 1 + t) * n + j] -= v[t] * s;
            }
        }
        // right: all rows, columns k+1..
        for i in 0..n {
            let row = &mut h[i * n + k + 1..i * n + n];
            let s: c64 = row.iter().zip(&v[..m]).map(|(a, b)| a * b).sum();
            let s = beta * s;
            for (r, vt) in row.iter_mut().zip(&v[..m]) {
                *r -= s * vt.conj();
            }
        }
        h[(k + 1) * n + k] = alpha;
        for i in k + 2..n {
            h[i * n + k] = ZERO;
        }
        if let Some(q) = q.as_mut() {
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
    q
}

/// Complex Givens rotation `G = [[c, s], [-conj(s), c]]` with `G·[a; b] = [r; 0]`.
fn givens(a: c64, b: c64) -> (f64, c64, c64) {
    if b == ZERO {
        return (1.0, ZERO, a);
    }
    if a == ZERO {
        return (0.0, ONE, b);
    }
    let an = a.norm();
    let nu = an.hypot(b.norm());
    let phase = a / an;
    (an / nu, phase * b.conj() / nu, phase * nu)
}

fn abs1(z: c64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Reduces an upper Hessenberg matrix to upper triangular Schur form in place.
/// With `z` present the full Schur form is maintained and the rotations are
/// accumulated into `z`; otherwise only the active window is updated.
fn schur_qr(h: &mut [c64], n: usize, mut z: Option<&mut [c64]>) -> Result<()> {
    let full = z.is_some();
    let norm_est = h.iter().map(|x| abs1(*x)).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let eps = f64::EPSILON;
    let mut hi = n.saturating_sub(1);
    let mut its = 0;

    while hi > 0 {
        // find the start of the unreduced block ending at `hi`
        let mut lo = hi;
        while lo > 0 {
            let mut s = abs1(h[(lo - 1) * n + lo - 1]) + abs1(h[lo * n + lo]);
            if s == 0.0 {
                s = norm_est;
            }
            if abs1(h[lo * n + lo - 1]) <= eps * s {
                h[lo * n + lo - 1] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            its = 0;
            continue;
        }
        its += 1;
        if its > MAX_ITER_PER_EIGENVALUE {
            return Err(Error::Convergence { iterations: its, index: hi });
        }

        let mu = if its % 10 == 0 {
            // exceptional shift
            h[hi * n + hi] + 0.75 * h[hi * n + hi - 1].re.abs()
        } else {
            let a = h[(hi - 1) * n + hi - 1];
            let b = h[(hi - 1) * n + hi];
            let c = h[hi * n + hi - 1];
            let d = h[hi * n + hi];
            let half = 0.5 * (a - d);
            let disc = (half * half + b * c).sqrt();
            let m1 = 0.5 * (a + d) + disc;
            let m2 = 0.5 * (a + d) - disc;
            if (m1 - d).norm() <= (m2 - d).norm() {
                m1
            } else {
                m2
            }
        };

        let col_end = if full { n } else { hi + 1 };
        let row_start = if full { 0 } else { lo };
        for k in lo..hi {
            let (x, y) = if k == lo {
                (h[lo * n + lo] - mu, h[(lo + 1) * n + lo])
            } else {
                (h[k * n + k - 1], h[(k + 1) * n + k - 1])
            };
            let (c, s, _) = givens(x, y);
            let first_col = if k == lo { lo } else { k - 1 };
            for j in first_col..col_end {
                let p = h[k * n + j];
                let q = h[(k + 1) * n + j];
                h[k * n + j] = c * p + s * q;
                h[(k + 1) * n + j] = -s.conj() * p + c * q;
            }
            if k > lo {
                h[(k + 1) * n + k - 1] = ZERO;
            }
            let last_row = (k + 2).min(hi);
            for i in row_start..=last_row {
                let p = h[i * n + k];
                let q = h[i * n + k + 1];
                h[i * n + k] = c * p + s.conj() * q;
                h[i * n + k + 1] = -s * p + c * q;
            }
            if let Some(z) = z.as_deref_mut() {
                for i in 0..n {
                    let p = z[i * n + k];
                    let q = z[i * n + k + 1];
                    z[i * n + k] = c * p + s.conj() * q;
                    z[i * n + k + 1] = -s * p + c * q;
                }
            }
        }
    }
    if full {
        for i in 1..n {
            for j in 0..i {
                h[i * n + j] = ZERO;
            }
        }
    }
    Ok(())
}

/// Eigenvectors of an upper triangular matrix as columns of a row-major array.
fn triangular_eigenvectors(t: &[c64], n: usize) -> Vec<c64> {
    let tnorm = t.iter().map(|x| abs1(*x)).fold(0.0, f64::max);
    let smin = (f64::EPSILON * tnorm).max(f64::MIN_POSITIVE / f64::EPSILON);
    const BIG: f64 = 1e150;
    let mut y = vec![ZERO; n * n];
    let mut col = vec![ZERO; n];
    for k in 0..n {
        let lam = t[k * n + k];
        col[..=k].iter_mut().for_each(|c| *c = ZERO);
        col[k] = ONE;
        for j in (0..k).rev() {
            let s: c64 = (j + 1..=k).map(|m| t[j * n + m] * col[m]).sum();
            let mut den = t[j * n + j] - lam;
            if abs1(den) < smin {
                den = c64::new(smin, 0.0);
            }
            col[j] = -s / den;
            if abs1(col[j]) > BIG {
                let f = 1.0 / abs1(col[j]);
                col[j..=k].iter_mut().for_each(|c| *c *= f);
            }
        }
        for i in 0..=k {
            y[i * n + k] = col[i];
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Structure;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> c64 {
        c64::new(re, im)
    }

    fn assert_multiset(got: &[c64], want: &[c64], tol: f64) {
        assert_eq!(got.len(), want.len());
        let mut used = vec![false; want.len()];
        for g in got {
            let (k, d) = want
                .iter()
                .enumerate()
                .filter(|(k, _)| !used[*k])
                .map(|(k, w)| (k, (g - w).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            assert!(d <= tol, "eigenvalue {g} unmatched (distance {d:e})");
            used[k] = true;
        }
    }

    #[test]
    fn upper_triangular_reads_off_diagonal() {
        let a = OperatorMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(4.0, 1.0), c(-2.0, 0.0)],
            vec![c(0.0, 0.0), c(2.0, 1.0), c(3.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(5.0, 0.0)],
        ])
        .unwrap();
        let dec = eigendecompose_general(&a).unwrap();
        assert_multiset(&dec.eigenvalues, &[c(1.0, 0.0), c(2.0, 1.0), c(5.0, 0.0)], 1e-14);
        assert_eq!(dec.eigenvalues[0], c(1.0, 0.0));
    }

    #[test]
    fn companion_of_z_squared_minus_one() {
        let a = OperatorMatrix::from_real_fn(2, |i, j| if i != j { 1.0 } else { 0.0 });
        let dec = eigenvalues_general(&a).unwrap();
        assert_multiset(&dec.eigenvalues, &[c(-1.0, 0.0), c(1.0, 0.0)], 1e-14);
    }

    #[test]
    fn rotation_generator_has_imaginary_pair() {
        // z² + 1 = 0
        let a = OperatorMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(-1.0, 0.0), c(0.0, 0.0)]]).unwrap();
        let dec = eigendecompose_general(&a).unwrap();
        assert_multiset(&dec.eigenvalues, &[c(0.0, 1.0), c(0.0, -1.0)], 1e-14);
        assert!(dec.residuals.iter().all(|r| *r < 1e-14));
    }

    #[test]
    fn random_matrix_eigenpairs_have_small_residuals() {
        let n = 25;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = OperatorMatrix::from_fn(n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let dec = eigendecompose_general(&a).unwrap();
        assert!(dec.residuals.iter().all(|r| *r <= 1e-12));
        // trace equals the sum of eigenvalues
        let tr: c64 = a.diagonal().iter().sum();
        let sum: c64 = dec.eigenvalues.iter().sum();
        assert!((tr - sum).norm() < 1e-11);
        // eigenvalue-only path agrees
        let vals = eigenvalues_general(&a).unwrap();
        assert_multiset(&vals.eigenvalues, &dec.eigenvalues, 1e-11);
    }

    #[test]
    fn hermitian_input_gives_real_spectrum() {
        let a = OperatorMatrix::hermitian_from_upper(6, |i, j| c((i + 2 * j) as f64, (j as f64) - (i as f64)));
        assert_eq!(a.structure(), Structure::Hermitian);
        let g = eigenvalues_general(&a).unwrap();
        let h = crate::linalg::eigenvalues_hermitian(&a).unwrap();
        for (x, y) in g.eigenvalues.iter().zip(&h) {
            assert!((x.re - y).abs() < 1e-12 && x.im.abs() < 1e-12);
        }
    }

    #[test]
    fn sorted_by_real_then_imaginary() {
        let a = OperatorMatrix::from_fn(3, |i, j| {
            if i == j {
                [c(2.0, 1.0), c(2.0, -1.0), c(0.0, 5.0)][i]
            } else {
                ZERO
            }
        });
        let dec = eigenvalues_general(&a).unwrap();
        assert_eq!(dec.eigenvalues, vec![c(0.0, 5.0), c(2.0, -1.0), c(2.0, 1.0)]);
    }
}
