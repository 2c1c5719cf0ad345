//! Deterministic field generators with known or computable norms.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::dyadic::DyadicSystem;
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::field::Field;
use crate::grid::Grid;
use crate::norms::{lp_norm, sequence_norm};

/// Default largest product arity the bank is prepared for.
pub const DEFAULT_M_MAX: usize = 3;

/// A lacunary series `Σ_j a_j e^{i k_j x_1}` with one plateau frequency per band.
#[derive(Clone, Debug)]
pub struct LacunaryField {
    pub field: Field,
    /// `a_j` indexed by band, zero for bands without a term.
    pub amplitudes: Vec<f64>,
    pub wavenumbers: Vec<Option<i64>>,
}

impl LacunaryField {
    /// Closed-form `∥f | B^s_{p,q}∥ = ∥f | F^s_{p,q}∥ = ∥(a_j) | ℓ^s_q∥`, for every `p`.
    pub fn oracle(&self, s: f64, q: Exponent) -> f64 {
        sequence_norm(&self.amplitudes, s, q)
    }
}

/// Integer wavenumber on the plateau of `φ_j`, where the neighbouring
/// bands vanish.
pub fn plateau_wavenumber(grid: &Grid, j: usize) -> Result<i64> {
    let step = grid.frequency_step();
    let (lo, hi) = plateau(j);
    let k = (lo / step).ceil() as i64;
    let r = k as f64 * step;
    let on_lattice = (k as usize) < grid.sizes().iter().min().unwrap() / 2;
    if r < lo || r > hi || !on_lattice {
        return Err(Error::OffPlateau { j, k });
    }
    Ok(k)
}

/// `[3·2^{j-2}, 2^j]` for `j ≥ 1`, `[0, 1]` for `j = 0`.
fn plateau(j: usize) -> (f64, f64) {
    if j == 0 {
        (0.0, 1.0)
    } else {
        (3.0 * 2f64.powi(j as i32 - 2), 2f64.powi(j as i32))
    }
}

/// `Σ a_j e^{i k_j x_1}` for `j = first_band, first_band + 1, ...`.
pub fn lacunary_field(
    grid: &Grid,
    sys: &DyadicSystem,
    first_band: usize,
    amplitudes: &[f64],
) -> Result<LacunaryField> {
    if sys.grid() != grid {
        return Err(Error::GridMismatch);
    }
    let bands = (first_band + amplitudes.len()).max(1);
    let mut full = vec![0.0; bands.max(sys.jmax() + 1)];
    let mut wavenumbers = vec![None; full.len()];
    let mut spectral = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (offset, &a) in amplitudes.iter().enumerate() {
        let j = first_band + offset;
        if j > sys.jmax() {
            return Err(Error::BandOutOfRange { j, jmax: sys.jmax() });
        }
        let k = plateau_wavenumber(grid, j)?;
        let mut kv = vec![0i64; grid.dim()];
        kv[0] = k;
        let flat = grid.flat_index(&kv).ok_or(Error::OffPlateau { j, k })?;
        spectral[flat] += Complex64::new(a, 0.0);
        full[j] = a;
        wavenumbers[j] = Some(k);
    }
    full.truncate(sys.jmax() + 1);
    wavenumbers.truncate(sys.jmax() + 1);
    Ok(LacunaryField {
        field: Field::from_spectral(grid, spectral)?,
        amplitudes: full,
        wavenumbers,
    })
}

/// Integer vectors in `[-r, r]^n` in lexicographic order; independent of the grid size.
fn lattice_ball(dim: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (-r..=r).map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

fn band_seed(seed: u64, j: usize) -> u64 {
    seed ^ (j as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Random-phase field with `∥Δ_j f∥_p = 2^{-js}` on every populated band,
/// hence `∥f | B^s_{p,∞}∥ = 1`.
///
/// Band `j` fills the lattice points of its plateau (intersected with
/// `|ξ| ≤ band_limit`) with unit-modulus coefficients drawn from a
/// SplitMix64 stream keyed by `(seed, j)`.
pub fn random_band_field(
    grid: &Grid,
    sys: &DyadicSystem,
    s: f64,
    p: Exponent,
    seed: u64,
    band_limit: f64,
) -> Result<Field> {
    if sys.grid() != grid {
        return Err(Error::GridMismatch);
    }
    let step = grid.frequency_step();
    let mut spectral = vec![Complex64::new(0.0, 0.0); grid.len()];
    for j in 0..=sys.jmax() {
        let (lo, hi) = plateau(j);
        let hi = hi.min(band_limit);
        if hi < lo {
            continue;
        }
        let mut rng = SplitMix64::seed_from_u64(band_seed(seed, j));
        let mut band = vec![Complex64::new(0.0, 0.0); grid.len()];
        let mut any = false;
        for k in lattice_ball(grid.dim(), (hi / step).floor() as i64) {
            let r = step * (k.iter().map(|v| v * v).sum::<i64>() as f64).sqrt();
            if r < lo || r > hi {
                continue;
            }
            let Some(flat) = grid.flat_index(&k) else { continue };
            let theta = 2.0 * PI * rng.random::<f64>();
            band[flat] = Complex64::from_polar(1.0, theta);
            any = true;
        }
        if !any {
            continue;
        }
        let band = Field::from_spectral(grid, band)?;
        let scale = 2f64.powf(-(j as f64) * s) / lp_norm(&band, p);
        for (acc, c) in spectral.iter_mut().zip(band.spectral()) {
            *acc += c * scale;
        }
    }
    Field::from_spectral(grid, spectral)
}

/// Zeroes coefficients above `band_limit`, restores Hermitian symmetry so
/// the field stays real, and rescales to `max |f| = 1`.
fn truncate_real(f: &Field, band_limit: f64) -> Result<Field> {
    let grid = f.grid();
    let radii = grid.radii();
    let mut spectral: Vec<Complex64> = f
        .spectral()
        .iter()
        .zip(&radii)
        .map(|(c, &r)| if r <= band_limit { *c } else { Complex64::new(0.0, 0.0) })
        .collect();
    let sym: Vec<Complex64> = (0..grid.len())
        .map(|i| {
            let k = grid.lattice_vector(i);
            let neg: Vec<i64> = k[..grid.dim()].iter().map(|v| -v).collect();
            match grid.flat_index(&neg) {
                Some(m) => 0.5 * (spectral[i] + spectral[m].conj()),
                None => Complex64::new(0.0, 0.0),
            }
        })
        .collect();
    spectral = sym;
    let g = Field::from_spectral(grid, spectral)?;
    let max = g.physical().iter().map(|c| c.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return Err(Error::DegenerateWidth(0.0));
    }
    Ok(g.scale(Complex64::new(1.0 / max, 0.0)))
}

/// Periodized Gaussian `exp(-|x - c|²/(2w²))`, spectrally truncated and
/// normalized to `max |f| = 1`.
pub fn gaussian_bump(grid: &Grid, center: &[f64], width: f64, band_limit: f64) -> Result<Field> {
    if !(width > 0.0 && width.is_finite()) {
        return Err(Error::DegenerateWidth(width));
    }
    if center.len() != grid.dim() {
        return Err(Error::Parameter(format!(
            "center has {} coordinates, grid has {} axes",
            center.len(),
            grid.dim()
        )));
    }
    let l = grid.period();
    let raw = Field::from_fn(grid, |x| {
        let mut d2 = 0.0;
        for (xi, ci) in x.iter().zip(center) {
            let d = (xi - ci).rem_euclid(l);
            let d = d.min(l - d);
            d2 += d * d;
        }
        Complex64::new((-d2 / (2.0 * width * width)).exp(), 0.0)
    });
    truncate_real(&raw, band_limit)
}

/// Smooth periodic step along the first axis: rises across `x_1 = L/4`,
/// falls across `x_1 = 3L/4`, with Gaussian-smoothed edges of width
/// `edge_width`. Values lie in `[0, 1]`.
pub fn smoothed_step(grid: &Grid, edge_width: f64, band_limit: f64) -> Result<Field> {
    if !(edge_width > 0.0 && edge_width.is_finite()) {
        return Err(Error::DegenerateWidth(edge_width));
    }
    let l = grid.period();
    let scale = std::f64::consts::SQRT_2 * edge_width;
    let raw = Field::from_fn(grid, |x| {
        let v: f64 = (-3..=3)
            .map(|m| {
                let y = x[0] + m as f64 * l;
                0.5 * (libm::erf((y - 0.25 * l) / scale) - libm::erf((y - 0.75 * l) / scale))
            })
            .sum();
        Complex64::new(v, 0.0)
    });
    truncate_real(&raw, band_limit)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeneratorKind {
    Lacunary {
        #[serde(default = "default_first_band")]
        first_band: usize,
        amplitudes: Vec<f64>,
    },
    RandomBand {
        s: f64,
        p: Exponent,
        seed: u64,
    },
    GaussianBump {
        center: Vec<f64>,
        width: f64,
    },
    SmoothedStep {
        edge_width: f64,
    },
    PureWave {
        wavevector: Vec<i64>,
        #[serde(default = "default_amplitude")]
        amplitude: f64,
    },
}

fn default_first_band() -> usize {
    0
}

fn default_amplitude() -> f64 {
    1.0
}

fn default_m_max() -> usize {
    DEFAULT_M_MAX
}

fn default_period() -> f64 {
    2.0 * PI
}

/// Grid parameters as they appear in manifests.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dim: usize,
    pub size: usize,
    #[serde(default = "default_period")]
    pub period: f64,
}

impl GridSpec {
    pub fn build(&self) -> Result<Grid> {
        Grid::new(self.dim, self.size, self.period)
    }
}

/// A reproducible recipe for one field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub kind: GeneratorKind,
    pub grid: GridSpec,
    /// Largest product arity the field must survive without aliasing.
    #[serde(default = "default_m_max")]
    pub m_max: usize,
    /// Explicit spectral radius; defaults to `ρ / m_max`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub band_limit: Option<f64>,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, dim: usize, size: usize) -> GeneratorSpec {
        GeneratorSpec {
            kind,
            grid: GridSpec {
                dim,
                size,
                period: default_period(),
            },
            m_max: DEFAULT_M_MAX,
            band_limit: None,
        }
    }

    pub fn with_band_limit(mut self, limit: f64) -> GeneratorSpec {
        self.band_limit = Some(limit);
        self
    }

    pub fn with_m_max(mut self, m_max: usize) -> GeneratorSpec {
        self.m_max = m_max;
        self
    }

    /// Same recipe on a grid with `size` points per axis.
    pub fn at_size(&self, size: usize) -> GeneratorSpec {
        let mut out = self.clone();
        out.grid.size = size;
        out
    }

    pub fn effective_band_limit(&self, grid: &Grid) -> f64 {
        let natural = grid.nyquist_radius() / self.m_max.max(1) as f64;
        self.band_limit.map_or(natural, |b| b.min(natural))
    }

    pub fn generate(&self, sys: &DyadicSystem) -> Result<Field> {
        let grid = self.grid.build()?;
        if *sys.grid() != grid {
            return Err(Error::GridMismatch);
        }
        let limit = self.effective_band_limit(&grid);
        let field = match &self.kind {
            GeneratorKind::Lacunary {
                first_band,
                amplitudes,
            } => lacunary_field(&grid, sys, *first_band, amplitudes)?.field,
            GeneratorKind::RandomBand { s, p, seed } => {
                random_band_field(&grid, sys, *s, *p, *seed, limit)?
            }
            GeneratorKind::GaussianBump { center, width } => {
                gaussian_bump(&grid, center, *width, limit)?
            }
            GeneratorKind::SmoothedStep { edge_width } => smoothed_step(&grid, *edge_width, limit)?,
            GeneratorKind::PureWave {
                wavevector,
                amplitude,
            } => Field::plane_wave(&grid, wavevector, Complex64::new(*amplitude, 0.0))?,
        };
        if let Some(radius) = field.spectral_radius(0.0) {
            if radius > limit * (1.0 + 1e-12) {
                return Err(Error::BandLimit { radius, limit });
            }
        }
        Ok(field)
    }

    /// Builds the grid and dyadic system, then the field.
    pub fn materialize(&self) -> Result<(DyadicSystem, Field)> {
        let grid = self.grid.build()?;
        let sys = DyadicSystem::new(&grid);
        let f = self.generate(&sys)?;
        Ok((sys, f))
    }
}

/// The frozen one-dimensional bank: 24 fields covering every generator.
/// Valid for `size ≥ 128` at the default `m_max`.
pub fn default_bank(size: usize) -> Vec<GeneratorSpec> {
    let mut bank = Vec::new();
    let spec = |kind| GeneratorSpec::new(kind, 1, size);
    bank.push(spec(GeneratorKind::Lacunary {
        first_band: 1,
        amplitudes: vec![0.5, 0.25, 0.125, 0.0625],
    }));
    bank.push(spec(GeneratorKind::Lacunary {
        first_band: 0,
        amplitudes: vec![1.0, -0.5, 0.75, 0.25, 0.1],
    }));
    bank.push(spec(GeneratorKind::Lacunary {
        first_band: 2,
        amplitudes: vec![2.0, 1.0, 0.5],
    }));
    for (i, (s, p)) in [(1.0, 2.0), (0.5, 1.0), (2.0, 4.0), (-0.5, 2.0), (0.0, 0.5), (1.5, 1.0)]
        .into_iter()
        .enumerate()
    {
        for seed in 0..2u64 {
            bank.push(spec(GeneratorKind::RandomBand {
                s,
                p: Exponent::new(p).unwrap(),
                seed: 1000 + 17 * i as u64 + seed,
            }));
        }
    }
    let l = 2.0 * PI;
    for w in [0.15, 0.3, 0.6] {
        bank.push(spec(GeneratorKind::GaussianBump {
            center: vec![l * 0.5],
            width: w,
        }));
    }
    for w in [0.3, 0.6] {
        bank.push(spec(GeneratorKind::SmoothedStep { edge_width: w }));
    }
    for k in [0i64, 3, -5, 10] {
        bank.push(spec(GeneratorKind::PureWave {
            wavevector: vec![k],
            amplitude: 1.0,
        }));
    }
    bank
}

/// A small two-dimensional bank on `size²` grids, `size ≥ 64`.
pub fn planar_bank(size: usize) -> Vec<GeneratorSpec> {
    let spec = |kind| GeneratorSpec::new(kind, 2, size);
    vec![
        spec(GeneratorKind::Lacunary {
            first_band: 1,
            amplitudes: vec![1.0, 0.5, 0.25],
        }),
        spec(GeneratorKind::RandomBand {
            s: 1.0,
            p: Exponent::new(2.0).unwrap(),
            seed: 7,
        }),
        spec(GeneratorKind::RandomBand {
            s: 0.0,
            p: Exponent::new(1.0).unwrap(),
            seed: 8,
        }),
        spec(GeneratorKind::GaussianBump {
            center: vec![PI, PI],
            width: 0.4,
        }),
        spec(GeneratorKind::SmoothedStep { edge_width: 0.5 }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::{besov_norm, SpaceSpec};

    fn e(v: f64) -> Exponent {
        Exponent::new(v).unwrap()
    }

    #[test]
    fn plateau_frequencies() {
        let g = Grid::periodic(1, 256).unwrap();
        assert_eq!(plateau_wavenumber(&g, 0).unwrap(), 0);
        assert_eq!(plateau_wavenumber(&g, 1).unwrap(), 2);
        for j in 2..=6 {
            assert_eq!(plateau_wavenumber(&g, j).unwrap(), 3 << (j - 2));
        }
        let coarse = Grid::periodic(1, 16).unwrap();
        assert!(matches!(
            plateau_wavenumber(&coarse, 4),
            Err(Error::OffPlateau { j: 4, k: 12 })
        ));
    }

    #[test]
    fn lacunary_examples() {
        let g = Grid::periodic(1, 256).unwrap();
        let sys = DyadicSystem::new(&g);
        let a: Vec<f64> = (3..=6).map(|j| 2f64.powi(-j)).collect();
        let lf = lacunary_field(&g, &sys, 3, &a).unwrap();
        assert!((lf.oracle(1.0, Exponent::INFINITY) - 1.0).abs() < 1e-15);
        let one = lacunary_field(&g, &sys, 5, &[1.0]).unwrap();
        for s in [-1.0, 0.5, 2.0] {
            assert!((one.oracle(s, e(0.5)) - 2f64.powf(5.0 * s)).abs() < 1e-12);
        }
        let empty = lacunary_field(&g, &sys, 0, &[]).unwrap();
        assert!(empty.field.is_zero());
        assert_eq!(empty.oracle(1.0, e(2.0)), 0.0);
    }

    #[test]
    fn random_band_has_unit_besov_norm() {
        let g = Grid::periodic(1, 128).unwrap();
        let sys = DyadicSystem::new(&g);
        for (s, p) in [(1.0, 2.0), (0.5, 1.0), (-1.0, 4.0), (4.0, 2.0)] {
            let f = random_band_field(&g, &sys, s, e(p), 3, 64.0).unwrap();
            let b = besov_norm(&f, &SpaceSpec::besov(s, e(p), Exponent::INFINITY), &sys).unwrap();
            assert!((0.25..=1.5).contains(&b), "s={s} p={p}: {b}");
            if s >= 4.0 {
                let bands = sys.decompose(&f).unwrap();
                let norms: Vec<f64> = bands.blocks.iter().map(|b| lp_norm(b, e(p))).collect();
                assert!(norms.windows(2).all(|w| w[1] <= 0.5 * w[0] + 1e-15));
            }
        }
        let a = random_band_field(&g, &sys, 1.0, e(2.0), 1, 40.0).unwrap();
        let b = random_band_field(&g, &sys, 1.0, e(2.0), 2, 40.0).unwrap();
        assert!(a.l2_distance(&b).unwrap() > 0.1);
    }

    #[test]
    fn bump_and_step_shapes() {
        let g = Grid::periodic(1, 128).unwrap();
        let c = g.point(64)[0];
        let bump = gaussian_bump(&g, &[c], 0.3, 21.0).unwrap();
        for d in 1..64 {
            let a = bump.physical()[64 + d];
            let b = bump.physical()[(64 + 128 - d) % 128];
            assert!((a - b).norm() < 1e-12);
        }
        let max = bump.physical().iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!((max - 1.0).abs() < 1e-14);
        assert!(bump.physical().iter().all(|v| v.im.abs() < 1e-14));

        let step = smoothed_step(&g, 0.5, 21.0).unwrap();
        let vals: Vec<f64> = step.physical().iter().map(|v| v.re).collect();
        assert!(vals.iter().all(|&v| (-1e-12..=1.0 + 1e-12).contains(&v)));
        // rising edge around L/4 = index 32: monotone from the trough to the crest
        assert!(vals[0..=64].windows(2).all(|w| w[1] >= w[0] - 1e-12));
        assert!(matches!(gaussian_bump(&g, &[c], 0.0, 21.0), Err(Error::DegenerateWidth(_))));
        assert!(matches!(smoothed_step(&g, -1.0, 21.0), Err(Error::DegenerateWidth(_))));
    }

    #[test]
    fn narrower_bumps_have_larger_positive_smoothness_norms() {
        let g = Grid::periodic(1, 128).unwrap();
        let sys = DyadicSystem::new(&g);
        let spec = SpaceSpec::besov(1.0, e(2.0), e(2.0));
        let norms: Vec<f64> = [0.6, 0.3, 0.15]
            .iter()
            .map(|&w| besov_norm(&gaussian_bump(&g, &[PI], w, 21.0).unwrap(), &spec, &sys).unwrap())
            .collect();
        assert!(norms[0] < norms[1] && norms[1] < norms[2], "{norms:?}");
    }

    #[test]
    fn generators_are_bitwise_deterministic() {
        for spec in default_bank(128).into_iter().chain(planar_bank(64)) {
            let (sys, a) = spec.materialize().unwrap();
            let b = spec.generate(&sys).unwrap();
            assert_eq!(a, b, "{spec:?}");
            let json = serde_json::to_string(&spec).unwrap();
            assert_eq!(serde_json::from_str::<GeneratorSpec>(&json).unwrap(), spec);
        }
    }

    #[test]
    fn band_limit_is_enforced() {
        let spec = GeneratorSpec::new(
            GeneratorKind::PureWave {
                wavevector: vec![30],
                amplitude: 1.0,
            },
            1,
            64,
        );
        assert!(matches!(spec.materialize(), Err(Error::BandLimit { .. })));
    }
}
