//! Lebesgue, sequence and mixed quasi-norms, and the Besov and
//! Triebel-Lizorkin quasi-norms built from them.
//!
//! The torus carries unit total measure: `∥f∥_p = (mean |f|^p)^{1/p}`, and
//! `∥f∥_∞` is the largest sample modulus. Sums over bands stop at `J_max`,
//! which is exact for grid fields.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dyadic::{BandDecomposition, DyadicSystem};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::field::Field;

/// `(Σ x_i^p)^{1/p}` over nonnegative `x`, or `max x_i` for `p = ∞`.
/// Scaled by the maximum so large exponents cannot overflow.
fn power_sum(values: impl Iterator<Item = f64> + Clone, p: Exponent, divisor: f64) -> f64 {
    let max = values.clone().fold(0.0, f64::max);
    if p.is_infinite() || max == 0.0 {
        return max;
    }
    let p = p.value();
    let s: f64 = values.map(|v| (v / max).powf(p)).sum();
    max * (s / divisor).powf(1.0 / p)
}

/// `∥·∥_p` of raw samples under the unit-measure normalization.
pub fn lp_norm_samples(samples: &[Complex64], p: Exponent) -> f64 {
    power_sum(samples.iter().map(|c| c.norm()), p, samples.len() as f64)
}

/// `∥f∥_p` on the unit-measure torus.
pub fn lp_norm(f: &Field, p: Exponent) -> f64 {
    lp_norm_samples(f.physical(), p)
}

/// The `ℓ^s_q` quasi-norm `(Σ_j (2^{js} |a_j|)^q)^{1/q}`; `sup_j 2^{js}|a_j|` for `q = ∞`.
pub fn sequence_norm(a: &[f64], s: f64, q: Exponent) -> f64 {
    power_sum(
        a.iter()
            .enumerate()
            .map(move |(j, v)| 2f64.powf(j as f64 * s) * v.abs()),
        q,
        1.0,
    )
}

/// `∥{2^{js} Δ_j f} | L_p(ℓ_q)∥`.
pub fn lp_of_lq(blocks: &BandDecomposition, s: f64, p: Exponent, q: Exponent) -> Result<f64> {
    if p.is_infinite() {
        return Err(Error::TriebelInfiniteP);
    }
    if blocks.is_empty() {
        return Ok(0.0);
    }
    let weights: Vec<f64> = (0..blocks.len()).map(|j| 2f64.powf(j as f64 * s)).collect();
    let points = blocks.blocks[0].physical().len();
    let mut pointwise = Vec::with_capacity(points);
    for x in 0..points {
        let column = blocks
            .blocks
            .iter()
            .zip(&weights)
            .map(|(b, w)| w * b.physical()[x].norm());
        pointwise.push(power_sum(column, q, 1.0));
    }
    Ok(power_sum(pointwise.iter().copied(), p, points as f64))
}

/// `∥{2^{js} Δ_j f} | ℓ_q(L_p)∥`.
pub fn lq_of_lp(blocks: &BandDecomposition, s: f64, p: Exponent, q: Exponent) -> f64 {
    let per_band: Vec<f64> = blocks.blocks.iter().map(|b| lp_norm(b, p)).collect();
    sequence_norm(&per_band, s, q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "B", alias = "besov")]
    Besov,
    #[serde(rename = "F", alias = "triebel-lizorkin")]
    TriebelLizorkin,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Besov => "Besov",
            Family::TriebelLizorkin => "Triebel-Lizorkin",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Family::Besov => "B",
            Family::TriebelLizorkin => "F",
        }
    }
}

/// A function-space quasi-norm `B^s_{p,q}` or `F^s_{p,q}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpaceSpec")]
pub struct SpaceSpec {
    pub family: Family,
    pub s: f64,
    pub p: Exponent,
    pub q: Exponent,
}

#[derive(Deserialize)]
struct RawSpaceSpec {
    family: Family,
    s: f64,
    p: Exponent,
    q: Exponent,
}

impl TryFrom<RawSpaceSpec> for SpaceSpec {
    type Error = Error;

    fn try_from(raw: RawSpaceSpec) -> Result<SpaceSpec> {
        SpaceSpec::new(raw.family, raw.s, raw.p, raw.q)
    }
}

impl SpaceSpec {
    pub fn new(family: Family, s: f64, p: Exponent, q: Exponent) -> Result<SpaceSpec> {
        if !s.is_finite() {
            return Err(Error::Parameter(format!("smoothness {s} is not finite")));
        }
        if family == Family::TriebelLizorkin && p.is_infinite() {
            return Err(Error::TriebelInfiniteP);
        }
        Ok(SpaceSpec { family, s, p, q })
    }

    pub fn besov(s: f64, p: Exponent, q: Exponent) -> SpaceSpec {
        SpaceSpec::new(Family::Besov, s, p, q).expect("Besov accepts every exponent")
    }

    pub fn triebel(s: f64, p: Exponent, q: Exponent) -> Result<SpaceSpec> {
        SpaceSpec::new(Family::TriebelLizorkin, s, p, q)
    }

    /// Differential dimension `s - n/p`.
    pub fn differential_dimension(&self, n: usize) -> f64 {
        self.s - n as f64 * self.p.reciprocal()
    }

    /// Quasi-norm from an existing decomposition.
    pub fn norm_of_bands(&self, bands: &BandDecomposition) -> Result<f64> {
        match self.family {
            Family::Besov => Ok(lq_of_lp(bands, self.s, self.p, self.q)),
            Family::TriebelLizorkin => lp_of_lq(bands, self.s, self.p, self.q),
        }
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}^{}_{{{},{}}}",
            self.family.symbol(),
            self.s,
            self.p,
            self.q
        )
    }
}

/// `∥f | B^s_{p,q}∥ = ∥{Δ_j f} | ℓ^s_q(L_p)∥`.
pub fn besov_norm(f: &Field, spec: &SpaceSpec, sys: &DyadicSystem) -> Result<f64> {
    if spec.family != Family::Besov {
        return Err(Error::FamilyMismatch {
            expected: Family::Besov.name(),
            got: spec.family.name(),
        });
    }
    Ok(lq_of_lp(&sys.decompose(f)?, spec.s, spec.p, spec.q))
}

/// `∥f | F^s_{p,q}∥ = ∥{Δ_j f} | L_p(ℓ^s_q)∥`.
pub fn triebel_norm(f: &Field, spec: &SpaceSpec, sys: &DyadicSystem) -> Result<f64> {
    if spec.family != Family::TriebelLizorkin {
        return Err(Error::FamilyMismatch {
            expected: Family::TriebelLizorkin.name(),
            got: spec.family.name(),
        });
    }
    lp_of_lq(&sys.decompose(f)?, spec.s, spec.p, spec.q)
}

/// Dispatches on the family.
pub fn space_norm(f: &Field, spec: &SpaceSpec, sys: &DyadicSystem) -> Result<f64> {
    spec.norm_of_bands(&sys.decompose(f)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    fn e(v: f64) -> Exponent {
        Exponent::new(v).unwrap()
    }

    #[test]
    fn lp_of_simple_samples() {
        let s = [Complex64::new(3.0, 0.0), Complex64::new(4.0, 0.0)];
        assert!((lp_norm_samples(&s, e(2.0)) - 12.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(lp_norm_samples(&s, Exponent::INFINITY), 4.0);
        assert_eq!(lp_norm_samples(&[Complex64::new(0.0, 0.0); 4], e(0.5)), 0.0);
    }

    #[test]
    fn lp_of_constant_and_wave_is_modulus() {
        let g = Grid::periodic(1, 64).unwrap();
        let c = Field::constant(&g, Complex64::new(-3.0, 0.0));
        let w = Field::plane_wave(&g, &[5], Complex64::new(0.0, 1.0)).unwrap();
        for p in [0.5, 1.0, 2.0, 7.0, f64::INFINITY] {
            assert!((lp_norm(&c, e(p)) - 3.0).abs() < 1e-13);
            assert!((lp_norm(&w, e(p)) - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn sequence_norm_cases() {
        assert_eq!(sequence_norm(&[1.0, 0.0, 0.0], 3.0, e(0.5)), 1.0);
        assert_eq!(sequence_norm(&[1.0, 1.0], 1.0, e(1.0)), 3.0);
        let a: Vec<f64> = (0..8).map(|j| 2f64.powf(-0.7 * j as f64)).collect();
        assert!((sequence_norm(&a, 0.7, Exponent::INFINITY) - 1.0).abs() < 1e-15);
        // q = 64 is already close to the supremum.
        let b = [0.3, 1.0, 0.2];
        let big = sequence_norm(&b, 0.0, e(64.0));
        assert!((1.0..1.0 + 1e-3).contains(&big));
    }

    #[test]
    fn pure_wave_norms() {
        let g = Grid::periodic(1, 128).unwrap();
        let sys = DyadicSystem::new(&g);
        let f = Field::plane_wave(&g, &[4], Complex64::new(1.0, 0.0)).unwrap();
        let b = SpaceSpec::besov(2.0, e(2.0), Exponent::INFINITY);
        assert!((besov_norm(&f, &b, &sys).unwrap() - 16.0).abs() < 1e-12);
        for q in [0.5, 1.0, 2.0, f64::INFINITY] {
            let spec = SpaceSpec::triebel(2.0, e(2.0), e(q)).unwrap();
            assert!((triebel_norm(&f, &spec, &sys).unwrap() - 16.0).abs() < 1e-12);
        }
    }

    #[test]
    fn family_and_exponent_errors() {
        let g = Grid::periodic(1, 64).unwrap();
        let sys = DyadicSystem::new(&g);
        let f = Field::zeros(&g);
        let b = SpaceSpec::besov(1.0, e(2.0), e(2.0));
        assert!(matches!(
            triebel_norm(&f, &b, &sys),
            Err(Error::FamilyMismatch { .. })
        ));
        assert!(matches!(
            SpaceSpec::triebel(1.0, Exponent::INFINITY, e(2.0)),
            Err(Error::TriebelInfiniteP)
        ));
        assert!(serde_json::from_str::<SpaceSpec>(
            r#"{"family":"F","s":1.0,"p":"inf","q":2}"#
        )
        .is_err());
        assert_eq!(besov_norm(&f, &b, &sys).unwrap(), 0.0);
    }
}
