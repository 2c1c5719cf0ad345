//! Smooth dyadic resolution of unity and the block operators `Δ_j`, `Q_j`.
//!
//! The cutoff `Ψ` equals 1 on `|ξ| ≤ 1`, vanishes on `|ξ| ≥ 3/2` and is
//! glued in between by the normalized exponential bump. With
//! `Ψ_j = Ψ(2^{-j} ·)` the bands are `φ_0 = Ψ_0` and `φ_j = Ψ_j - Ψ_{j-1}`,
//! so `Σ_{k≤j} φ_k = Ψ_j` telescopes on the lattice.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::Grid;

fn bump(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// Smooth step rising from 0 at `t ≤ 0` to 1 at `t ≥ 1`.
fn transition(t: f64) -> f64 {
    let a = bump(t);
    let b = bump(1.0 - t);
    a / (a + b)
}

/// The radial cutoff `Ψ(r)`: 1 for `r ≤ 1`, 0 for `r ≥ 3/2`, C^∞ and
/// non-increasing in between.
pub fn smooth_cutoff(r: f64) -> f64 {
    let r = r.abs();
    if r <= 1.0 {
        1.0
    } else if r >= 1.5 {
        0.0
    } else {
        1.0 - transition(2.0 * (r - 1.0))
    }
}

/// `φ_j(r)` evaluated from the definition, for any `j ≥ 0`.
pub fn band_multiplier(j: usize, r: f64) -> f64 {
    if j == 0 {
        smooth_cutoff(r)
    } else {
        smooth_cutoff(r / 2f64.powi(j as i32)) - smooth_cutoff(r / 2f64.powi(j as i32 - 1))
    }
}

/// Sampled partition of unity on a grid's frequency lattice.
#[derive(Clone, Debug)]
pub struct DyadicSystem {
    grid: Grid,
    radii: Vec<f64>,
    /// `Ψ_j` for `j = 0..=jmax`.
    cutoffs: Vec<Vec<f64>>,
    /// `φ_j` for `j = 0..=jmax`.
    phi: Vec<Vec<f64>>,
    jmax: usize,
}

impl DyadicSystem {
    pub fn new(grid: &Grid) -> DyadicSystem {
        let jmax = grid.jmax();
        let radii = grid.radii();
        let cutoffs: Vec<Vec<f64>> = (0..=jmax)
            .map(|j| {
                let scale = 2f64.powi(-(j as i32));
                radii.iter().map(|&r| smooth_cutoff(r * scale)).collect()
            })
            .collect();
        let phi = (0..=jmax)
            .map(|j| {
                if j == 0 {
                    cutoffs[0].clone()
                } else {
                    cutoffs[j]
                        .iter()
                        .zip(&cutoffs[j - 1])
                        .map(|(a, b)| a - b)
                        .collect()
                }
            })
            .collect();
        DyadicSystem {
            grid: grid.clone(),
            radii,
            cutoffs,
            phi,
            jmax,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn jmax(&self) -> usize {
        self.jmax
    }

    /// `|ξ|` per lattice point, row-major.
    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Sampled `Ψ` (equal to `φ_0`).
    pub fn psi(&self) -> &[f64] {
        &self.cutoffs[0]
    }

    pub fn phi(&self, j: usize) -> Result<&[f64]> {
        self.check_band(j)?;
        Ok(&self.phi[j])
    }

    /// Sampled `Ψ_j = Ψ(2^{-j} ·)`.
    pub fn cutoff(&self, j: usize) -> Result<&[f64]> {
        self.check_band(j)?;
        Ok(&self.cutoffs[j])
    }

    fn check_band(&self, j: usize) -> Result<()> {
        if j > self.jmax {
            Err(Error::BandOutOfRange { j, jmax: self.jmax })
        } else {
            Ok(())
        }
    }

    fn check_field(&self, f: &Field) -> Result<()> {
        if *f.grid() == self.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// `Δ_j f`: exact lattice multiplication by `φ_j`.
    pub fn delta(&self, f: &Field, j: usize) -> Result<Field> {
        self.check_field(f)?;
        Ok(f.multiply_spectrum(self.phi(j)?))
    }

    /// `Q_j f`: multiplication by `Ψ_j`; equal to `Σ_{k≤j} Δ_k f`.
    pub fn q(&self, f: &Field, j: usize) -> Result<Field> {
        self.check_field(f)?;
        Ok(f.multiply_spectrum(self.cutoff(j)?))
    }

    /// `Q_j f` with the convention `Q_j f = 0` for negative `j`.
    pub fn q_signed(&self, f: &Field, j: i64) -> Result<Field> {
        if j < 0 {
            self.check_field(f)?;
            Ok(Field::zeros(&self.grid))
        } else {
            self.q(f, j as usize)
        }
    }

    /// Littlewood-Paley decomposition into `Δ_0 f, ..., Δ_{J_max} f`.
    pub fn decompose(&self, f: &Field) -> Result<BandDecomposition> {
        self.check_field(f)?;
        let blocks = (0..=self.jmax)
            .map(|j| f.multiply_spectrum(&self.phi[j]))
            .collect();
        Ok(BandDecomposition { blocks })
    }

    /// Largest deviation of `Ψ + Σ_{j≥1} φ_j` from 1 over lattice points
    /// with `|ξ| ≤ 2^{J_max}`.
    pub fn partition_defect(&self) -> f64 {
        let limit = 2f64.powi(self.jmax as i32);
        (0..self.radii.len())
            .filter(|&i| self.radii[i] <= limit)
            .map(|i| {
                let total: f64 = self.phi.iter().map(|p| p[i]).sum();
                (total - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// The blocks `Δ_j f` of one field.
#[derive(Clone, Debug)]
pub struct BandDecomposition {
    pub blocks: Vec<Field>,
}

impl BandDecomposition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `Σ_j Δ_j f`.
    pub fn reconstruct(&self) -> Field {
        let grid = self.blocks[0].grid();
        Field::sum(grid, &self.blocks).expect("blocks share a grid")
    }
}
