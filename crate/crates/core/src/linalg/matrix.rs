use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use num_complex::Complex64 as c64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Band or symmetry structure a matrix is known to carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Structure {
    General,
    /// `a(i, j) == conj(a(j, i))` holds bit for bit.
    Hermitian,
    /// Real entries, nonzero only on the three central diagonals.
    RealTridiagonal,
    /// Nonzero only on diagonals `0, ±1, ±2`.
    Pentadiagonal,
}

/// Dense complex square matrix in row-major layout.
///
/// The structure tag is only ever attached after the entries have been checked
/// against it, so kernels may rely on it.
#[derive(Clone, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    data: Vec<c64>,
    structure: Structure,
}

impl OperatorMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        OperatorMatrix {
            dim,
            data: vec![c64::new(0.0, 0.0); dim * dim],
            structure: Structure::General,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal(&vec![1.0; dim])
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> c64) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        OperatorMatrix { dim, data, structure: Structure::General }
    }

    pub fn from_real_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        Self::from_fn(dim, |i, j| c64::new(f(i, j), 0.0))
    }

    /// Real diagonal matrix, tagged hermitian.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self::from_real_fn(diag.len(), |i, j| if i == j { diag[i] } else { 0.0 }).tagged(Structure::Hermitian)
    }

    /// Builds a hermitian matrix from its upper triangle; the lower triangle is
    /// filled with conjugates and the diagonal keeps only its real part.
    pub fn hermitian_from_upper(dim: usize, mut f: impl FnMut(usize, usize) -> c64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = c64::new(f(i, i).re, 0.0);
            for j in i + 1..dim {
                let v = f(i, j);
                m.data[i * dim + j] = v;
                m.data[j * dim + i] = v.conj();
            }
        }
        m.structure = Structure::Hermitian;
        m
    }

    /// Row-major construction from nested rows.
    pub fn from_rows(rows: &[Vec<c64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Contract("matrix must have at least one row".into()));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::LengthMismatch { expected: dim, got: bad.len() });
        }
        Ok(OperatorMatrix {
            dim,
            data: rows.iter().flatten().copied().collect(),
            structure: Structure::General,
        })
    }

    pub(crate) fn from_raw(dim: usize, data: Vec<c64>) -> Self {
        debug_assert_eq!(data.len(), dim * dim);
        OperatorMatrix { dim, data, structure: Structure::General }
    }

    /// Attaches a structure tag after checking the entries satisfy it exactly.
    pub fn with_structure(mut self, structure: Structure) -> Result<Self> {
        let ok = match structure {
            Structure::General => true,
            Structure::Hermitian => self.is_exactly_hermitian(),
            Structure::RealTridiagonal => {
                self.data.iter().all(|z| z.im == 0.0) && self.bandwidths_exact().0 <= 1 && self.bandwidths_exact().1 <= 1
            }
            Structure::Pentadiagonal => {
                let (l, u) = self.bandwidths_exact();
                l <= 2 && u <= 2
            }
        };
        if !ok {
            return Err(Error::Contract(format!("entries do not have {structure:?} structure")));
        }
        self.structure = structure;
        Ok(self)
    }

    fn tagged(mut self, structure: Structure) -> Self {
        self.structure = structure;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure(&self) -> Structure {
        self.structure
    }

    pub fn as_slice(&self) -> &[c64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> c64 {
        self.data[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[c64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<c64> {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }

    pub fn diagonal(&self) -> Vec<c64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn is_exactly_hermitian(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| (i..n).all(|j| self.get(i, j) == self.get(j, i).conj()))
    }

    /// Largest `i - j` and `j - i` over exactly-nonzero entries.
    pub fn bandwidths_exact(&self) -> (usize, usize) {
        let n = self.dim;
        let (mut lower, mut upper) = (0, 0);
        for i in 0..n {
            for j in 0..n {
                if self.data[i * n + j] != c64::new(0.0, 0.0) {
                    if i > j {
                        lower = lower.max(i - j);
                    } else {
                        upper = upper.max(j - i);
                    }
                }
            }
        }
        (lower, upper)
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn adjoint(&self) -> Self {
        let s = if self.structure == Structure::Hermitian { Structure::Hermitian } else { Structure::General };
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj()).tagged(s)
    }

    pub fn transpose(&self) -> Self {
        let s = match self.structure {
            Structure::RealTridiagonal | Structure::Pentadiagonal => self.structure,
            _ => Structure::General,
        };
        Self::from_fn(self.dim, |i, j| self.get(j, i)).tagged(s)
    }

    pub fn scale(&self, k: c64) -> Self {
        let s = match self.structure {
            Structure::Pentadiagonal => Structure::Pentadiagonal,
            Structure::Hermitian if k.im == 0.0 => Structure::Hermitian,
            Structure::RealTridiagonal if k.im == 0.0 => Structure::RealTridiagonal,
            _ => Structure::General,
        };
        OperatorMatrix { dim: self.dim, data: self.data.iter().map(|z| z * k).collect(), structure: s }
    }

    pub fn scale_real(&self, k: f64) -> Self {
        self.scale(c64::new(k, 0.0))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(c64, c64) -> c64) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        // Entrywise ops preserve a structure both operands share; for hermitian
        // inputs conj(a+b) == conj(a)+conj(b) holds exactly in floating point.
        let s = if self.structure == other.structure { self.structure } else { Structure::General };
        OperatorMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect(),
            structure: s,
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = vec![c64::new(0.0, 0.0); n * n];
        for i in 0..n {
            let out_row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == c64::new(0.0, 0.0) {
                    continue;
                }
                let b_row = &other.data[k * n..(k + 1) * n];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Self::from_raw(n, out)
    }

    /// `[A, B] = AB - BA`
    pub fn commutator(&self, other: &Self) -> Self {
        &self.matmul(other) - &other.matmul(self)
    }

    pub fn mul_vec(&self, v: &[c64]) -> Vec<c64> {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `A + z·I`
    pub fn shift_diagonal(&self, z: c64) -> Self {
        let mut m = self.clone();
        for i in 0..self.dim {
            m.data[i * self.dim + i] += z;
        }
        if z.im != 0.0 && m.structure != Structure::Pentadiagonal {
            m.structure = Structure::General;
        }
        m
    }

    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// The leading `k × k` principal submatrix.
    pub fn leading_block(&self, k: usize) -> Self {
        assert!(k >= 1 && k <= self.dim, "block size out of range");
        let s = self.structure;
        Self::from_fn(k, |i, j| self.get(i, j)).tagged(s)
    }

    /// Principal submatrix on the given index set.
    pub fn submatrix(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), |i, j| self.get(idx[i], idx[j]))
    }

    /// Splits a matrix whose entries vanish whenever `i + j` is odd into its
    /// even-index and odd-index principal blocks.
    pub fn parity_blocks(&self) -> Result<(Self, Self)> {
        let n = self.dim;
        if n < 2 {
            return Err(Error::Contract("parity split needs dimension at least 2".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if (i + j) % 2 == 1 && self.get(i, j) != c64::new(0.0, 0.0) {
                    return Err(Error::Contract(format!("entry ({i}, {j}) couples opposite parities")));
                }
            }
        }
        let even: Vec<usize> = (0..n).step_by(2).collect();
        let odd: Vec<usize> = (1..n).step_by(2).collect();
        let keep = if self.structure == Structure::Hermitian { Structure::Hermitian } else { Structure::General };
        Ok((self.submatrix(&even).tagged(keep), self.submatrix(&odd).tagged(keep)))
    }
}

impl Index<(usize, usize)> for OperatorMatrix {
    type Output = c64;
    fn index(&self, (i, j): (usize, usize)) -> &c64 {
        &self.data[i * self.dim + j]
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: Self) -> OperatorMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: Self) -> OperatorMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: Self) -> OperatorMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for OperatorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "OperatorMatrix {}x{} ({:?})", self.dim, self.dim, self.structure)?;
        for i in 0..self.dim.min(8) {
            let row: Vec<String> = self.row(i).iter().take(8).map(|z| format!("{:.4}{:+.4}i", z.re, z.im)).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Standard inner product `⟨u, v⟩ = Σ u_i conj(v_i)`, linear in the first slot.
pub fn dot(u: &[c64], v: &[c64]) -> c64 {
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm(v: &[c64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
