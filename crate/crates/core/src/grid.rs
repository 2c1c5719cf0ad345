//! The discrete torus and its integer frequency lattice.
//!
//! A [`Grid`] stands in for ℝⁿ: every axis is periodic with the same
//! physical period, samples sit on a uniform mesh, and the frequency
//! lattice per axis is `{-size/2, ..., size/2 - 1}`. Continuous
//! frequencies are `2π k / period`, so with the default period `2π` the
//! modulus `|ξ|` of a lattice vector is exactly its Euclidean length.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest admissible number of points per axis.
pub const MIN_SIZE: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    sizes: Vec<usize>,
    period: f64,
}

impl Grid {
    /// Cubic grid with `size` points along each of `dim` axes.
    pub fn new(dim: usize, size: usize, period: f64) -> Result<Self> {
        Self::with_sizes(vec![size; dim], period)
    }

    /// Grid on `[0, 2π)ⁿ`.
    pub fn periodic(dim: usize, size: usize) -> Result<Self> {
        Self::new(dim, size, 2.0 * PI)
    }

    pub fn with_sizes(sizes: Vec<usize>, period: f64) -> Result<Self> {
        if sizes.is_empty() || sizes.len() > 3 {
            return Err(Error::Dimension(sizes.len()));
        }
        if let Some(&bad) = sizes
            .iter()
            .find(|&&s| !s.is_power_of_two() || s < MIN_SIZE)
        {
            return Err(Error::GridSize(bad));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::Period(period));
        }
        let grid = Grid { sizes, period };
        let jmax = grid.raw_jmax();
        if jmax < 2 {
            return Err(Error::GridTooSmall { jmax });
        }
        Ok(grid)
    }

    pub fn dim(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Total number of sample points.
    pub fn len(&self) -> usize {
        self.sizes.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Continuous frequency of one lattice step, `2π / period`.
    pub fn frequency_step(&self) -> f64 {
        2.0 * PI / self.period
    }

    /// Nyquist radius `ρ`: half the smallest axis size, in continuous units.
    pub fn nyquist_radius(&self) -> f64 {
        let min = *self.sizes.iter().min().expect("non-empty sizes");
        self.frequency_step() * (min / 2) as f64
    }

    /// Largest band index `j` with `3·2^{j-1} ≤ ρ`, so that `supp φ_j`
    /// fits inside the lattice.
    pub fn jmax(&self) -> usize {
        self.raw_jmax() as usize
    }

    fn raw_jmax(&self) -> i64 {
        let rho = self.nyquist_radius();
        // 3·2^{j-1} ≤ ρ for j = 0 always holds when ρ ≥ 1.5.
        let mut j: i64 = -1;
        while 3.0 * 2f64.powi(j as i32) <= rho {
            j += 1;
        }
        j
    }

    /// Signed integer wavenumber of array index `i` along an axis of `size` points.
    pub fn wavenumber(index: usize, size: usize) -> i64 {
        if index < size / 2 {
            index as i64
        } else {
            index as i64 - size as i64
        }
    }

    /// Array index of wavenumber `k` along an axis of `size` points, if it
    /// lies on the lattice.
    pub fn index_of(k: i64, size: usize) -> Option<usize> {
        let half = (size / 2) as i64;
        if k < -half || k >= half {
            return None;
        }
        Some(k.rem_euclid(size as i64) as usize)
    }

    /// Integer lattice vector of the flat (row-major) index.
    pub fn lattice_vector(&self, flat: usize) -> [i64; 3] {
        let mut out = [0i64; 3];
        let mut rest = flat;
        for axis in (0..self.dim()).rev() {
            let size = self.sizes[axis];
            out[axis] = Self::wavenumber(rest % size, size);
            rest /= size;
        }
        out
    }

    /// Flat index of an integer lattice vector, if it lies on the lattice.
    pub fn flat_index(&self, k: &[i64]) -> Option<usize> {
        if k.len() != self.dim() {
            return None;
        }
        let mut flat = 0usize;
        for (axis, &size) in self.sizes.iter().enumerate() {
            flat = flat * size + Self::index_of(k[axis], size)?;
        }
        Some(flat)
    }

    /// `|ξ|` for the lattice point at `flat`.
    pub fn radius(&self, flat: usize) -> f64 {
        let k = self.lattice_vector(flat);
        let sq: i64 = k.iter().map(|v| v * v).sum();
        self.frequency_step() * (sq as f64).sqrt()
    }

    /// `|ξ|` for every lattice point in row-major order.
    pub fn radii(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.radius(i)).collect()
    }

    /// Physical coordinates of the sample at `flat`.
    pub fn point(&self, flat: usize) -> [f64; 3] {
        let mut out = [0.0; 3];
        let mut rest = flat;
        for axis in (0..self.dim()).rev() {
            let size = self.sizes[axis];
            out[axis] = self.period * (rest % size) as f64 / size as f64;
            rest /= size;
        }
        out
    }

    /// Same geometry with `factor` times as many points per axis.
    pub(crate) fn refined(&self, factor: usize) -> Grid {
        Grid {
            sizes: self.sizes.iter().map(|s| s * factor).collect(),
            period: self.period,
        }
    }

    /// Same geometry with `size` points per axis.
    pub fn resized(&self, size: usize) -> Result<Grid> {
        Grid::with_sizes(vec![size; self.dim()], self.period)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: enumerate `j` upward and keep the last one whose
    /// outer support edge fits.
    fn jmax_oracle(size: usize) -> i64 {
        let rho = (size / 2) as f64;
        (0..40)
            .filter(|&j| 3.0 * 2f64.powi(j - 1) <= rho)
            .max()
            .map(i64::from)
            .unwrap_or(-1)
    }

    #[test]
    fn jmax_matches_enumeration() {
        for size in [16, 32, 64, 128, 256, 512, 1024] {
            let g = Grid::periodic(1, size).unwrap();
            assert_eq!(g.jmax() as i64, jmax_oracle(size), "size {size}");
        }
        assert_eq!(Grid::periodic(1, 256).unwrap().jmax(), 6);
        assert_eq!(Grid::periodic(1, 256).unwrap().nyquist_radius(), 128.0);
        // 3·2¹ = 6 ≤ 8 < 12 = 3·2²
        let g = Grid::periodic(2, 16).unwrap();
        assert_eq!(g.nyquist_radius(), 8.0);
        assert_eq!(g.jmax(), 2);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(matches!(Grid::periodic(1, 8), Err(Error::GridSize(8))));
        assert!(matches!(Grid::periodic(1, 48), Err(Error::GridSize(48))));
        assert!(matches!(Grid::periodic(4, 16), Err(Error::Dimension(4))));
        assert!(matches!(Grid::new(1, 64, -1.0), Err(Error::Period(_))));
        // A long period shrinks the continuous Nyquist radius below band 2.
        assert!(matches!(
            Grid::new(1, 16, 20.0 * PI),
            Err(Error::GridTooSmall { .. })
        ));
    }

    #[test]
    fn lattice_indexing_round_trips() {
        let g = Grid::periodic(3, 16).unwrap();
        for flat in [0, 1, 7, 8, 15, 16, 255, 4095] {
            let k = g.lattice_vector(flat);
            assert_eq!(g.flat_index(&k[..3]), Some(flat));
            assert!(k.iter().all(|&v| (-8..8).contains(&v)));
        }
        assert_eq!(g.flat_index(&[8, 0, 0]), None);
        assert_eq!(Grid::wavenumber(9, 16), -7);
    }
}
