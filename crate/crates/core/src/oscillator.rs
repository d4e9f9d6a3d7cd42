//! Number-basis truncations of `H = b*b + (γ/2)(b*² − b²) + 1/2`, built from
//! the shift matrix `B` and the quadratic generators, plus the ladder pair
//! `D`, `D‡` and the explicit ground vector.

use num_complex::Complex64 as c64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{norm, OperatorMatrix, Structure};

/// Default truncation size for spectrum work.
pub const DEFAULT_DIM: usize = 200;

/// Relative size of the trailing entries of `Υₙ` tolerated by [`excited_vector`].
pub const TAIL_LIMIT: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub gamma: f64,
    pub dim: usize,
}

impl ModelConfig {
    pub fn new(gamma: f64, dim: usize) -> Result<Self> {
        let cfg = ModelConfig { gamma, dim };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        validate_gamma(self.gamma)?;
        if self.dim < 2 {
            return Err(Error::InvalidConfig(format!("dim must be at least 2, got {}", self.dim)));
        }
        Ok(())
    }

    /// Same γ, different truncation.
    pub fn with_dim(&self, dim: usize) -> Result<Self> {
        Self::new(self.gamma, dim)
    }

    /// `ω = √(1+γ²)`, the level spacing.
    pub fn omega(&self) -> f64 {
        omega(self.gamma)
    }

    pub fn eta(&self) -> f64 {
        eta(self.gamma)
    }
}

pub(crate) fn validate_gamma(gamma: f64) -> Result<()> {
    if !gamma.is_finite() || gamma.abs() >= 1.0 {
        return Err(Error::InvalidConfig(format!("gamma must satisfy |gamma| < 1, got {gamma}")));
    }
    Ok(())
}

pub fn omega(gamma: f64) -> f64 {
    (1.0 + gamma * gamma).sqrt()
}

/// `(1+γ²)^{1/4}`
pub fn quartic_root(gamma: f64) -> f64 {
    omega(gamma).sqrt()
}

/// `η = (1 − γ − ω)/(1 + γ + ω)`
pub fn eta(gamma: f64) -> f64 {
    let w = omega(gamma);
    (1.0 - gamma - w) / (1.0 + gamma + w)
}

/// `B` with `B(i, i+1) = √(i+1)`, and its transpose.
pub fn build_shift_matrices(cfg: &ModelConfig) -> (OperatorMatrix, OperatorMatrix) {
    let b = OperatorMatrix::from_real_fn(cfg.dim, |i, j| if j == i + 1 { (j as f64).sqrt() } else { 0.0 });
    let bt = b.transpose();
    (b, bt)
}

/// `(A₀, A₊, A₋)`: the number operator and the matrices of `b*²`, `b²`.
pub fn build_quadratic_generators(cfg: &ModelConfig) -> (OperatorMatrix, OperatorMatrix, OperatorMatrix) {
    let n = cfg.dim;
    let a0 = OperatorMatrix::from_diagonal(&(0..n).map(|k| k as f64).collect::<Vec<_>>());
    let ap = OperatorMatrix::from_real_fn(n, |i, j| if i == j + 2 { (((j + 1) * (j + 2)) as f64).sqrt() } else { 0.0 });
    let am = ap.transpose();
    (a0, ap, am)
}

/// `H_N = A₀ + (γ/2)(A₊ − A₋) + I/2`, tagged pentadiagonal.
pub fn build_hamiltonian(cfg: &ModelConfig) -> OperatorMatrix {
    let (a0, ap, am) = build_quadratic_generators(cfg);
    let skew = (&ap - &am).scale_real(cfg.gamma / 2.0);
    let h = &(&a0 + &skew) + &OperatorMatrix::identity(cfg.dim).scale_real(0.5);
    h.with_structure(Structure::Pentadiagonal).expect("H couples only indices two apart")
}

/// Even- and odd-index blocks of a pentadiagonal `H`; both are real
/// tridiagonal with antisymmetric off-diagonals.
pub fn parity_split(h: &OperatorMatrix) -> Result<(OperatorMatrix, OperatorMatrix)> {
    if h.structure() != Structure::Pentadiagonal {
        return Err(Error::Contract(format!("parity_split needs a pentadiagonal matrix, got {:?}", h.structure())));
    }
    let (even, odd) = h.parity_blocks()?;
    Ok((even.with_structure(Structure::RealTridiagonal)?, odd.with_structure(Structure::RealTridiagonal)?))
}

/// `(n + 1/2)·ω` for `n = 0..=n_max`.
pub fn analytic_spectrum(cfg: &ModelConfig, n_max: usize) -> Vec<f64> {
    let w = cfg.omega();
    (0..=n_max).map(|n| (n as f64 + 0.5) * w).collect()
}

/// Coefficients of `B` and `Bᵀ` in `D` and `D‡`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderCoefficients {
    pub d_b: f64,
    pub d_bt: f64,
    pub ddag_b: f64,
    pub ddag_bt: f64,
}

impl LadderCoefficients {
    pub fn new(gamma: f64) -> Self {
        let s = quartic_root(gamma);
        LadderCoefficients {
            d_b: 0.5 * (s + (1.0 + gamma) / s),
            d_bt: 0.5 * (s - (1.0 - gamma) / s),
            ddag_b: 0.5 * (s - (1.0 + gamma) / s),
            ddag_bt: 0.5 * (s + (1.0 - gamma) / s),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LadderPair {
    /// Lowering matrix: `[H, D] = −ω·D` away from the truncation corner.
    pub d: OperatorMatrix,
    /// Raising matrix: `[H, D‡] = ω·D‡` away from the truncation corner.
    pub d_ddag: OperatorMatrix,
    pub eta: f64,
    pub coefficients: LadderCoefficients,
}

pub fn build_ladder(cfg: &ModelConfig) -> LadderPair {
    let (b, bt) = build_shift_matrices(cfg);
    let c = LadderCoefficients::new(cfg.gamma);
    let d = &b.scale_real(c.d_b) + &bt.scale_real(c.d_bt);
    let d_ddag = &b.scale_real(c.ddag_b) + &bt.scale_real(c.ddag_bt);
    LadderPair { d, d_ddag, eta: cfg.eta(), coefficients: c }
}

/// Max-norm residuals of the ladder relations on the leading block that the
/// truncation corner does not reach.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderResiduals {
    /// `[D, D‡] − I`
    pub commutator: f64,
    /// `[H, D‡] − ω·D‡`
    pub raising: f64,
    /// `[H, D] + ω·D`
    pub lowering: f64,
    /// `H − ω(D‡D + I/2)`
    pub factorization: f64,
}

/// Rows and columns dropped at the corner by [`ladder_residuals`].
pub const LADDER_CORNER: usize = 3;

pub fn ladder_residuals(cfg: &ModelConfig) -> Result<LadderResiduals> {
    cfg.validate()?;
    if cfg.dim <= LADDER_CORNER {
        return Err(Error::InvalidConfig(format!("ladder residuals need dim > {LADDER_CORNER}, got {}", cfg.dim)));
    }
    let keep = cfg.dim - LADDER_CORNER;
    let w = cfg.omega();
    let h = build_hamiltonian(cfg);
    let l = build_ladder(cfg);
    let id = OperatorMatrix::identity(cfg.dim);
    let res = |m: OperatorMatrix| m.leading_block(keep).max_norm();
    let factor = &l.d_ddag.matmul(&l.d) + &id.scale_real(0.5);
    Ok(LadderResiduals {
        commutator: res(&l.d.commutator(&l.d_ddag) - &id),
        raising: res(&h.commutator(&l.d_ddag) - &l.d_ddag.scale_real(w)),
        lowering: res(&h.commutator(&l.d) + &l.d.scale_real(w)),
        factorization: res(&h - &factor.scale_real(w)),
    })
}

/// `Υ₀`: entry `2k` is `η^k·√((2k−1)!!/(2k)!!)`, odd entries vanish.
pub fn ground_vector(cfg: &ModelConfig) -> Result<Vec<c64>> {
    let eta = cfg.eta();
    if eta.abs() >= 1.0 {
        return Err(Error::Domain(format!("|eta| = {} does not give a decaying ground vector", eta.abs())));
    }
    let mut v = vec![c64::new(0.0, 0.0); cfg.dim];
    let mut r = 1.0;
    v[0] = c64::new(1.0, 0.0);
    for k in 1..=(cfg.dim - 1) / 2 {
        r *= eta * ((2 * k - 1) as f64 / (2 * k) as f64).sqrt();
        v[2 * k] = c64::new(r, 0.0);
    }
    Ok(v)
}

/// `Υₙ = D‡ⁿΥ₀`, unnormalized. Fails when the last `n + 2` entries carry
/// more than [`TAIL_LIMIT`] of the norm.
pub fn excited_vector(cfg: &ModelConfig, n: usize) -> Result<Vec<c64>> {
    let ladder = build_ladder(cfg);
    let mut v = ground_vector(cfg)?;
    for _ in 0..n {
        v = ladder.d_ddag.mul_vec(&v);
    }
    let t = tail_fraction(&v, n + 2);
    if t > TAIL_LIMIT {
        return Err(Error::TailContamination { tail: t, limit: TAIL_LIMIT });
    }
    Ok(v)
}

/// `‖last k entries‖ / ‖v‖`.
pub fn tail_fraction(v: &[c64], k: usize) -> f64 {
    let start = v.len().saturating_sub(k);
    let total = norm(v);
    if total == 0.0 {
        return 0.0;
    }
    norm(&v[start..]) / total
}

/// `‖(A·v − λ·v)[..len−skip]‖ / ‖v‖`: an eigen-residual that ignores the
/// rows touched by the truncation corner.
pub fn tail_excluded_residual(a: &OperatorMatrix, v: &[c64], lambda: c64, skip: usize) -> f64 {
    let keep = v.len().saturating_sub(skip);
    let av = a.mul_vec(v);
    let r: Vec<c64> = av[..keep].iter().zip(&v[..keep]).map(|(x, y)| x - lambda * y).collect();
    norm(&r) / norm(v)
}
