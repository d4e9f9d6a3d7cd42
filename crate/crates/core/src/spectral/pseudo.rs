use num_complex::Complex64 as c64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{distance_to_set, ParityBlocks};
use crate::error::{Error, Result};
use crate::oscillator::ModelConfig;

/// Rectangle `[re.0, re.1] × [im.0, im.1]` sampled with `resolution` nodes per axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridRegion {
    pub re: (f64, f64),
    pub im: (f64, f64),
    pub resolution: usize,
}

impl Default for GridRegion {
    fn default() -> Self {
        GridRegion { re: (-2.0, 14.0), im: (-7.0, 7.0), resolution: 200 }
    }
}

impl GridRegion {
    pub fn validate(&self) -> Result<()> {
        let ok = |(a, b): (f64, f64)| a.is_finite() && b.is_finite() && a < b;
        if !ok(self.re) || !ok(self.im) {
            return Err(Error::InvalidConfig(format!(
                "grid region must be bounded and non-degenerate, got re {:?} im {:?}",
                self.re, self.im
            )));
        }
        if self.resolution < 2 {
            return Err(Error::InvalidConfig(format!("resolution must be at least 2, got {}", self.resolution)));
        }
        Ok(())
    }

    fn coord((a, b): (f64, f64), k: usize, n: usize) -> f64 {
        a + (b - a) * k as f64 / (n - 1) as f64
    }

    pub fn re_at(&self, j: usize) -> f64 {
        Self::coord(self.re, j, self.resolution)
    }

    pub fn im_at(&self, i: usize) -> f64 {
        Self::coord(self.im, i, self.resolution)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PseudospectrumGrid {
    pub region: GridRegion,
    /// `sigma_min[i][j] = σ_min(zI − H_N)` at `z = re_at(j) + i·im_at(i)`.
    pub sigma_min: Vec<Vec<f64>>,
    pub dim_used: usize,
    pub gamma: f64,
}

impl PseudospectrumGrid {
    pub fn node(&self, i: usize, j: usize) -> c64 {
        c64::new(self.region.re_at(j), self.region.im_at(i))
    }

    /// `(z, σ_min)` over all nodes, row by row.
    pub fn iter(&self) -> impl Iterator<Item = (c64, f64)> + '_ {
        self.sigma_min
            .iter()
            .enumerate()
            .flat_map(move |(i, row)| row.iter().enumerate().map(move |(j, &s)| (self.node(i, j), s)))
    }
}

/// `σ_min(zI − H_N)` on a grid. Rows are computed independently in parallel
/// and written to their own slots, so the result does not depend on scheduling.
pub fn pseudospectrum(cfg: &ModelConfig, region: &GridRegion) -> Result<PseudospectrumGrid> {
    cfg.validate()?;
    region.validate()?;
    let blocks = ParityBlocks::new(cfg)?;
    let n = region.resolution;
    let sigma_min: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let y = region.im_at(i);
            (0..n).map(|j| blocks.sigma_min_shifted(c64::new(region.re_at(j), y))).collect()
        })
        .collect();
    Ok(PseudospectrumGrid { region: *region, sigma_min, dim_used: cfg.dim, gamma: cfg.gamma })
}

/// A grid node where the resolvent is much larger than the distance to the
/// spectrum predicts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub z: c64,
    pub distance: f64,
    pub sigma_min: f64,
}

impl Witness {
    pub fn ratio(&self) -> f64 {
        self.distance / self.sigma_min
    }
}

/// Nodes with `dist(z, spectrum) ≥ factor·σ_min(z)`.
pub fn nontriviality_witnesses(grid: &PseudospectrumGrid, spectrum: &[c64], factor: f64) -> Vec<Witness> {
    grid.iter()
        .filter_map(|(z, s)| {
            let d = distance_to_set(z, spectrum);
            (d >= factor * s).then_some(Witness { z, distance: d, sigma_min: s })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AccretivitySample {
    pub lambda: c64,
    /// `‖(H_N − λ)⁻¹‖₂`
    pub lhs: f64,
    /// `1/|Re λ|`
    pub rhs: f64,
    /// `rhs − lhs`
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AccretivityReport {
    pub samples: Vec<AccretivitySample>,
    pub all_hold: bool,
}

/// Checks `‖(H_N − λ)⁻¹‖₂ ≤ 1/|Re λ|` at each sample in the open left half-plane.
pub fn accretivity_check(cfg: &ModelConfig, lambdas: &[c64]) -> Result<AccretivityReport> {
    cfg.validate()?;
    if let Some(bad) = lambdas.iter().find(|l| !(l.re < 0.0)) {
        return Err(Error::Domain(format!("accretivity samples need Re(lambda) < 0, got {bad}")));
    }
    let blocks = ParityBlocks::new(cfg)?;
    let samples: Vec<AccretivitySample> = lambdas
        .par_iter()
        .map(|&lambda| {
            let s = blocks.sigma_min_shifted(lambda);
            let lhs = if s == 0.0 { f64::INFINITY } else { 1.0 / s };
            let rhs = 1.0 / lambda.re.abs();
            AccretivitySample { lambda, lhs, rhs, margin: rhs - lhs }
        })
        .collect();
    let all_hold = samples.iter().all(|s| s.lhs <= s.rhs);
    Ok(AccretivityReport { samples, all_hold })
}
