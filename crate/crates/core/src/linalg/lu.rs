//! LU factorization with partial pivoting for banded matrices, stored in the
//! usual column-major band layout with `kl` extra rows for fill-in.

use num_complex::Complex64 as c64;

use super::matrix::OperatorMatrix;
use crate::error::{Error, Result};

const ZERO: c64 = c64::new(0.0, 0.0);

#[derive(Clone, Debug)]
pub struct BandLu {
    n: usize,
    kl: usize,
    ku: usize,
    ldab: usize,
    ab: Vec<c64>,
    ipiv: Vec<usize>,
    singular: bool,
}

impl BandLu {
    /// Factors `a` using its exact lower/upper bandwidths. Dense input works
    /// too; it is just treated as a band of full width.
    pub fn factor(a: &OperatorMatrix) -> Self {
        let (kl, ku) = a.bandwidths_exact();
        Self::factor_with(a.dim(), kl, ku, |i, j| a.get(i, j))
    }

    /// Factors the `n × n` matrix whose band entries are given by `f(i, j)`.
    /// `f` is only called for `j − ku ≤ i ≤ j + kl`.
    pub fn factor_with(n: usize, kl: usize, ku: usize, f: impl Fn(usize, usize) -> c64) -> Self {
        let kl = kl.min(n.saturating_sub(1));
        let ku = ku.min(n.saturating_sub(1));
        let ldab = 2 * kl + ku + 1;
        let mut lu = BandLu { n, kl, ku, ldab, ab: vec![ZERO; ldab * n], ipiv: vec![0; n], singular: false };
        for j in 0..n {
            for i in j.saturating_sub(ku)..(j + kl + 1).min(n) {
                *lu.at_mut(i, j) = f(i, j);
            }
        }
        lu.decompose();
        lu
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        j * self.ldab + self.kl + self.ku + i - j
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> c64 {
        self.ab[self.idx(i, j)]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut c64 {
        let k = self.idx(i, j);
        &mut self.ab[k]
    }

    fn decompose(&mut self) {
        let n = self.n;
        let kv = self.kl + self.ku;
        for j in 0..n {
            let last_row = (j + self.kl).min(n - 1);
            let last_col = (j + kv).min(n - 1);
            let mut p = j;
            let mut best = self.at(j, j).norm();
            for i in j + 1..=last_row {
                let v = self.at(i, j).norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            self.ipiv[j] = p;
            if best == 0.0 {
                self.singular = true;
                continue;
            }
            if p != j {
                for c in j..=last_col {
                    let (a, b) = (self.idx(j, c), self.idx(p, c));
                    self.ab.swap(a, b);
                }
            }
            let piv = self.at(j, j);
            for i in j + 1..=last_row {
                let l = self.at(i, j) / piv;
                *self.at_mut(i, j) = l;
                if l == ZERO {
                    continue;
                }
                for c in j + 1..=last_col {
                    let u = self.at(j, c);
                    *self.at_mut(i, c) -= l * u;
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// True when some pivot was exactly zero.
    pub fn is_singular(&self) -> bool {
        self.singular
    }

    fn check(&self, b: &[c64]) -> Result<()> {
        if b.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: b.len() });
        }
        if self.singular {
            return Err(Error::Domain("matrix is singular".into()));
        }
        Ok(())
    }

    /// Overwrites `b` with `A⁻¹b`.
    pub fn solve_in_place(&self, b: &mut [c64]) -> Result<()> {
        self.check(b)?;
        let n = self.n;
        let kv = self.kl + self.ku;
        for j in 0..n {
            b.swap(j, self.ipiv[j]);
            let bj = b[j];
            if bj != ZERO {
                for i in j + 1..=(j + self.kl).min(n - 1) {
                    b[i] -= self.at(i, j) * bj;
                }
            }
        }
        for j in (0..n).rev() {
            b[j] /= self.at(j, j);
            let bj = b[j];
            if bj != ZERO {
                for i in j.saturating_sub(kv)..j {
                    b[i] -= self.at(i, j) * bj;
                }
            }
        }
        Ok(())
    }

    /// Overwrites `b` with `(A*)⁻¹b`.
    pub fn solve_adjoint_in_place(&self, b: &mut [c64]) -> Result<()> {
        self.check(b)?;
        let n = self.n;
        let kv = self.kl + self.ku;
        for j in 0..n {
            let mut s = b[j];
            for i in j.saturating_sub(kv)..j {
                s -= self.at(i, j).conj() * b[i];
            }
            b[j] = s / self.at(j, j).conj();
        }
        for j in (0..n).rev() {
            let mut s = b[j];
            for i in j + 1..=(j + self.kl).min(n - 1) {
                s -= self.at(i, j).conj() * b[i];
            }
            b[j] = s;
            b.swap(j, self.ipiv[j]);
        }
        Ok(())
    }

    pub fn solve(&self, b: &[c64]) -> Result<Vec<c64>> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x)?;
        Ok(x)
    }

    pub fn solve_adjoint(&self, b: &[c64]) -> Result<Vec<c64>> {
        let mut x = b.to_vec();
        self.solve_adjoint_in_place(&mut x)?;
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_band(n: usize, kl: usize, ku: usize, seed: u64) -> OperatorMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        OperatorMatrix::from_fn(n, |i, j| {
            if i <= j + kl && j <= i + ku {
                c64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            } else {
                ZERO
            }
        })
    }

    fn residual(a: &OperatorMatrix, x: &[c64], b: &[c64]) -> f64 {
        a.mul_vec(x).iter().zip(b).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn solves_banded_and_dense_systems() {
        for (n, kl, ku, seed) in [(30, 2, 2, 1), (25, 1, 3, 2), (12, 11, 11, 3), (1, 0, 0, 4)] {
            let a = random_band(n, kl, ku, seed);
            let b: Vec<c64> = (0..n).map(|i| c64::new(i as f64, 1.0)).collect();
            let lu = BandLu::factor(&a);
            assert!(!lu.is_singular());
            let x = lu.solve(&b).unwrap();
            assert!(residual(&a, &x, &b) < 1e-10, "n={n} kl={kl} ku={ku}");
            let y = lu.solve_adjoint(&b).unwrap();
            assert!(residual(&a.adjoint(), &y, &b) < 1e-10);
        }
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        let a = OperatorMatrix::from_real_fn(3, |i, j| [[0.0, 1.0, 0.0], [2.0, 0.0, 1.0], [0.0, 3.0, 1.0]][i][j]);
        let b = vec![c64::new(1.0, 0.0), c64::new(2.0, 0.0), c64::new(3.0, 0.0)];
        let x = BandLu::factor(&a).solve(&b).unwrap();
        assert!(residual(&a, &x, &b) < 1e-14);
    }

    #[test]
    fn singular_matrix_is_flagged() {
        let a = OperatorMatrix::from_real_fn(3, |i, j| if i == 1 || j == 1 { 0.0 } else { 1.0 + (i + j) as f64 });
        let lu = BandLu::factor(&a);
        assert!(lu.is_singular());
        assert!(lu.solve(&[ZERO; 3]).is_err());
    }
}
