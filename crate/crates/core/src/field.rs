//! Complex fields on a [`Grid`] with synchronized physical and spectral data.
//!
//! Spectral coefficients are Fourier-series coefficients on the unit-measure
//! torus: `c_k = (1/M) Σ_x f(x) e^{-ik·x}` and `f(x) = Σ_k c_k e^{ik·x}`, so a
//! unimodular wave `e^{ik·x}` has the single coefficient `1` and
//! `Σ |c_k|² = (1/M) Σ |f(x)|²`.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Which representation a coefficient array is in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Physical,
    Spectral,
}

/// Scaling convention of the stored spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// Forward transform divides by the number of points; inverse does not.
    FourierSeries,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    grid: Grid,
    physical: Vec<Complex64>,
    spectral: Vec<Complex64>,
}

impl Field {
    pub fn zeros(grid: &Grid) -> Field {
        let n = grid.len();
        Field {
            grid: grid.clone(),
            physical: vec![Complex64::new(0.0, 0.0); n],
            spectral: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn from_physical(grid: &Grid, physical: Vec<Complex64>) -> Result<Field> {
        check_len(grid, physical.len())?;
        let spectral = forward_transform(grid, &physical);
        Ok(Field {
            grid: grid.clone(),
            physical,
            spectral,
        })
    }

    pub fn from_spectral(grid: &Grid, spectral: Vec<Complex64>) -> Result<Field> {
        check_len(grid, spectral.len())?;
        let physical = inverse_transform(grid, &spectral);
        Ok(Field {
            grid: grid.clone(),
            physical,
            spectral,
        })
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(grid: &Grid, f: impl Fn(&[f64]) -> Complex64) -> Field {
        let physical: Vec<_> = (0..grid.len())
            .map(|i| f(&grid.point(i)[..grid.dim()]))
            .collect();
        Field::from_physical(grid, physical).expect("length matches grid")
    }

    /// `amplitude · e^{ik·x}` for an integer lattice vector `k`.
    pub fn plane_wave(grid: &Grid, k: &[i64], amplitude: Complex64) -> Result<Field> {
        let flat = grid.flat_index(k).ok_or_else(|| {
            Error::Parameter(format!("wavevector {k:?} is not on the lattice"))
        })?;
        let mut spectral = vec![Complex64::new(0.0, 0.0); grid.len()];
        spectral[flat] = amplitude;
        Field::from_spectral(grid, spectral)
    }

    pub fn constant(grid: &Grid, value: Complex64) -> Field {
        let mut spectral = vec![Complex64::new(0.0, 0.0); grid.len()];
        spectral[0] = value;
        Field::from_spectral(grid, spectral).expect("length matches grid")
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn physical(&self) -> &[Complex64] {
        &self.physical
    }

    pub fn spectral(&self) -> &[Complex64] {
        &self.spectral
    }

    pub fn normalization(&self) -> Normalization {
        Normalization::FourierSeries
    }

    pub fn is_zero(&self) -> bool {
        self.spectral.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    /// Applies a real frequency multiplier.
    pub fn multiply_spectrum(&self, multiplier: &[f64]) -> Field {
        debug_assert_eq!(multiplier.len(), self.spectral.len());
        let spectral = self
            .spectral
            .iter()
            .zip(multiplier)
            .map(|(c, m)| c * m)
            .collect();
        Field::from_spectral(&self.grid, spectral).expect("length matches grid")
    }

    pub fn scale(&self, alpha: Complex64) -> Field {
        let spectral = self.spectral.iter().map(|c| c * alpha).collect();
        Field::from_spectral(&self.grid, spectral).expect("length matches grid")
    }

    /// `self + alpha · other`, computed on the spectra.
    pub fn add_scaled(&self, other: &Field, alpha: Complex64) -> Result<Field> {
        self.require_same_grid(other)?;
        let spectral = self
            .spectral
            .iter()
            .zip(&other.spectral)
            .map(|(a, b)| a + b * alpha)
            .collect();
        Field::from_spectral(&self.grid, spectral)
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.add_scaled(other, Complex64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.add_scaled(other, Complex64::new(-1.0, 0.0))
    }

    /// Spectral sum of `fields` in the given order.
    pub fn sum<'a>(grid: &Grid, fields: impl IntoIterator<Item = &'a Field>) -> Result<Field> {
        let mut acc = vec![Complex64::new(0.0, 0.0); grid.len()];
        for f in fields {
            if f.grid != *grid {
                return Err(Error::GridMismatch);
            }
            for (a, c) in acc.iter_mut().zip(&f.spectral) {
                *a += c;
            }
        }
        Field::from_spectral(grid, acc)
    }

    /// `(mean |f|²)^{1/2}` from the physical samples.
    pub fn l2_physical(&self) -> f64 {
        let s: f64 = self.physical.iter().map(|c| c.norm_sqr()).sum();
        (s / self.physical.len() as f64).sqrt()
    }

    /// `(Σ |c_k|²)^{1/2}` from the spectral coefficients.
    pub fn l2_spectral(&self) -> f64 {
        self.spectral.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// L₂ distance, measured on the spectra.
    pub fn l2_distance(&self, other: &Field) -> Result<f64> {
        self.require_same_grid(other)?;
        Ok(self
            .spectral
            .iter()
            .zip(&other.spectral)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Largest `|ξ|` among coefficients whose magnitude exceeds
    /// `tol · max |c|`; `None` for the zero field.
    pub fn spectral_radius(&self, tol: f64) -> Option<f64> {
        let max = self.spectral.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            return None;
        }
        self.spectral
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > tol * max)
            .map(|(i, _)| self.grid.radius(i))
            .reduce(f64::max)
    }

    pub(crate) fn require_same_grid(&self, other: &Field) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}

fn check_len(grid: &Grid, got: usize) -> Result<()> {
    if got == grid.len() {
        Ok(())
    } else {
        Err(Error::LengthMismatch {
            expected: grid.len(),
            got,
        })
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(size: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(size)
        } else {
            p.plan_fft_forward(size)
        }
    })
}

/// Unnormalized n-D transform over a row-major array, axis by axis.
pub(crate) fn transform_in_place(sizes: &[usize], data: &mut [Complex64], inverse: bool) {
    let total: usize = sizes.iter().product();
    debug_assert_eq!(total, data.len());
    let mut stride = total;
    for &size in sizes {
        stride /= size;
        let fft = plan(size, inverse);
        if stride == 1 {
            fft.process(data);
            continue;
        }
        let block = size * stride;
        let mut line = vec![Complex64::new(0.0, 0.0); size];
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        for outer in (0..total).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for (t, v) in line.iter_mut().enumerate() {
                    *v = data[base + t * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (t, v) in line.iter().enumerate() {
                    data[base + t * stride] = *v;
                }
            }
        }
    }
}

/// Physical samples to Fourier-series coefficients.
pub fn forward_transform(grid: &Grid, physical: &[Complex64]) -> Vec<Complex64> {
    let mut data = physical.to_vec();
    transform_in_place(grid.sizes(), &mut data, false);
    let scale = 1.0 / data.len() as f64;
    for v in &mut data {
        *v *= scale;
    }
    data
}

/// Fourier-series coefficients to physical samples.
pub fn inverse_transform(grid: &Grid, spectral: &[Complex64]) -> Vec<Complex64> {
    let mut data = spectral.to_vec();
    transform_in_place(grid.sizes(), &mut data, true);
    data
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn pseudo_random(n: usize, salt: u64) -> Vec<Complex64> {
        // Weyl sequence; only needs to be irregular, not random.
        (0..n)
            .map(|i| {
                let t = (i as f64 + 1.0) * (0.618_033_988_75 + salt as f64 * 0.1);
                Complex64::new((t * 7.3).sin(), (t * 3.1).cos())
            })
            .collect()
    }

    #[test]
    fn plane_wave_has_single_coefficient() {
        let g = Grid::periodic(1, 64).unwrap();
        let f = Field::plane_wave(&g, &[4], Complex64::new(1.0, 0.0)).unwrap();
        for (i, v) in f.physical().iter().enumerate() {
            let x = 2.0 * PI * i as f64 / 64.0;
            assert!((v - Complex64::new((4.0 * x).cos(), (4.0 * x).sin())).norm() < 1e-13);
        }
        let back = Field::from_physical(&g, f.physical().to_vec()).unwrap();
        assert!((back.spectral()[4] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn round_trip_and_parseval_in_every_dimension() {
        for (dim, size) in [(1, 128), (2, 32), (3, 16)] {
            let g = Grid::periodic(dim, size).unwrap();
            let c = pseudo_random(g.len(), dim as u64);
            let f = Field::from_spectral(&g, c.clone()).unwrap();
            let back = forward_transform(&g, f.physical());
            let err: f64 = back.iter().zip(&c).map(|(a, b)| (a - b).norm_sqr()).sum();
            let norm: f64 = c.iter().map(|v| v.norm_sqr()).sum();
            assert!((err / norm).sqrt() < 1e-12);
            let rel = (f.l2_physical() - f.l2_spectral()).abs() / f.l2_spectral();
            assert!(rel < 1e-10, "dim {dim}: {rel}");
        }
    }

    #[test]
    fn mismatched_lengths_and_grids_are_rejected() {
        let g = Grid::periodic(1, 32).unwrap();
        let h = Grid::periodic(1, 64).unwrap();
        assert!(matches!(
            Field::from_physical(&g, vec![Complex64::new(0.0, 0.0); 10]),
            Err(Error::LengthMismatch { expected: 32, got: 10 })
        ));
        assert!(matches!(
            Field::zeros(&g).add(&Field::zeros(&h)),
            Err(Error::GridMismatch)
        ));
    }
}
