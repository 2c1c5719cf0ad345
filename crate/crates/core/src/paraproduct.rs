//! Paramultiplication of `m` factors.
//!
//! The product `∏ f_i` splits into the band-dominant parts
//! `Π_{1,k} = Σ_{j≥N} (∏_{i≠k} Q_{j-N} f_i) Δ_j f_k` and the diagonal
//! remainder `Π_2`, which is taken as the exact residual
//! `∏ f_i - Σ_k Π_{1,k}`. A direct enumeration over band index tuples
//! cross-checks the residual on small instances.
//!
//! Products are formed on a grid refined `m` times per axis, so the
//! spectral convolution never wraps around; the result is then restricted
//! to the original lattice.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dyadic::DyadicSystem;
use crate::error::{Error, Result};
use crate::field::{forward_transform, inverse_transform, Field};
use crate::grid::Grid;

/// Default threshold for counting a coefficient as part of a support.
pub const SUPPORT_TOL: f64 = 1e-12;

/// Smallest natural number `N` with `N > 1 + log₂(3(m-1))`.
pub fn min_gap(m: usize) -> Result<usize> {
    if m < 2 {
        return Err(Error::FactorCount(m));
    }
    let bound = 1.0 + (3.0 * (m - 1) as f64).log2();
    Ok(bound.floor() as usize + 1)
}

/// Lifts fields onto a refined grid and brings products back.
pub(crate) struct Padder {
    grid: Grid,
    fine: Grid,
    /// Fine-grid flat index of each coarse lattice point.
    map: Vec<usize>,
}

impl Padder {
    pub(crate) fn new(grid: &Grid, factor: usize) -> Padder {
        let fine = grid.refined(factor.max(1));
        let map = (0..grid.len())
            .map(|i| {
                let k = grid.lattice_vector(i);
                fine.flat_index(&k[..grid.dim()])
                    .expect("coarse lattice embeds in the fine lattice")
            })
            .collect();
        Padder {
            grid: grid.clone(),
            fine,
            map,
        }
    }

    /// Fine-grid samples of the trigonometric polynomial with coefficients
    /// `spectrum · multiplier`.
    pub(crate) fn lift(&self, spectrum: &[Complex64], multiplier: Option<&[f64]>) -> Vec<Complex64> {
        let mut padded = vec![Complex64::new(0.0, 0.0); self.fine.len()];
        for (i, &dst) in self.map.iter().enumerate() {
            padded[dst] = match multiplier {
                Some(m) => spectrum[i] * m[i],
                None => spectrum[i],
            };
        }
        inverse_transform(&self.fine, &padded)
    }

    /// Pointwise product of lifted factors, in the given order.
    pub(crate) fn multiply(&self, factors: &[&[Complex64]]) -> Vec<Complex64> {
        let mut out = factors[0].to_vec();
        for f in &factors[1..] {
            for (o, v) in out.iter_mut().zip(f.iter()) {
                *o *= v;
            }
        }
        out
    }

    /// Restricts fine samples to a field on the coarse lattice.
    pub(crate) fn restrict(&self, samples: &[Complex64]) -> Field {
        let coeffs = forward_transform(&self.fine, samples);
        let spectral = self.map.iter().map(|&i| coeffs[i]).collect();
        Field::from_spectral(&self.grid, spectral).expect("map covers the grid")
    }
}

/// Alias-free product of fields on one grid: the result's coefficients are
/// the exact convolution of the factors' spectra, restricted to the lattice.
pub fn dealiased_product(fields: &[&Field]) -> Result<Field> {
    let first = fields.first().ok_or(Error::FactorCount(0))?;
    for f in &fields[1..] {
        first.require_same_grid(f)?;
    }
    if fields.len() == 1 {
        return Ok((*first).clone());
    }
    let padder = Padder::new(first.grid(), fields.len());
    let lifted: Vec<Vec<Complex64>> = fields.iter().map(|f| padder.lift(f.spectral(), None)).collect();
    let refs: Vec<&[Complex64]> = lifted.iter().map(Vec::as_slice).collect();
    Ok(padder.restrict(&padder.multiply(&refs)))
}

/// One `(∏_{i≠k} Q_{j-N} f_i) Δ_j f_k` term.
#[derive(Clone, Debug)]
pub struct BandTerm {
    pub k: usize,
    pub j: usize,
    pub field: Field,
}

#[derive(Clone, Debug)]
pub struct ProductDecomposition {
    pub m: usize,
    pub gap: usize,
    pub grid: Grid,
    /// `Π_{1,k}` for `k = 0..m` (factor index zero-based).
    pub pi1: Vec<Field>,
    /// Band terms per factor, `j = N..=J_max`.
    pub pi1_bands: Vec<Vec<BandTerm>>,
    /// `Π_2` as the residual of the product.
    pub pi2: Field,
    /// Per-band parts of `Π_2`: index tuples whose largest entry is `j`.
    pub pi2_bands: Vec<(usize, Field)>,
    /// Dealiased `∏ f_i`.
    pub product: Field,
}

impl ProductDecomposition {
    /// `Σ_k Π_{1,k} + Π_2`.
    pub fn reconstruct(&self) -> Field {
        let sum = Field::sum(&self.grid, &self.pi1).expect("shared grid");
        sum.add(&self.pi2).expect("shared grid")
    }

    /// `Σ_k Π_{1,k}`.
    pub fn pi1_total(&self) -> Field {
        Field::sum(&self.grid, &self.pi1).expect("shared grid")
    }
}

fn check_inputs(fields: &[Field], sys: &DyadicSystem) -> Result<()> {
    if fields.len() < 2 {
        return Err(Error::FactorCount(fields.len()));
    }
    if fields.iter().any(|f| f.grid() != sys.grid()) {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

/// Splits `∏ f_i` into `Π_{1,k}` and `Π_2` with band gap `gap`.
pub fn decompose_product(
    fields: &[Field],
    sys: &DyadicSystem,
    gap: usize,
) -> Result<ProductDecomposition> {
    check_inputs(fields, sys)?;
    let m = fields.len();
    let min = min_gap(m)?;
    if gap < min {
        return Err(Error::GapTooSmall { gap, min, m });
    }
    let grid = sys.grid().clone();
    let jmax = sys.jmax();
    let padder = Padder::new(&grid, m);

    // lifted_q[j][i] = Q_j f_i on the fine grid
    let lifted_q: Vec<Vec<Vec<Complex64>>> = (0..=jmax)
        .into_par_iter()
        .map(|j| {
            let cut = sys.cutoff(j).expect("j <= jmax");
            fields.iter().map(|f| padder.lift(f.spectral(), Some(cut))).collect()
        })
        .collect();
    let band_js: Vec<usize> = (gap..=jmax).collect();
    let lifted_delta: Vec<Vec<Vec<Complex64>>> = band_js
        .par_iter()
        .map(|&j| {
            let phi = sys.phi(j).expect("j <= jmax");
            fields.iter().map(|f| padder.lift(f.spectral(), Some(phi))).collect()
        })
        .collect();

    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|k| band_js.iter().enumerate().map(move |(idx, _)| (k, idx)))
        .collect();
    let terms: Vec<BandTerm> = pairs
        .par_iter()
        .map(|&(k, idx)| {
            let j = band_js[idx];
            let low = &lifted_q[j - gap];
            let factors: Vec<&[Complex64]> = (0..m)
                .map(|i| {
                    if i == k {
                        lifted_delta[idx][i].as_slice()
                    } else {
                        low[i].as_slice()
                    }
                })
                .collect();
            BandTerm {
                k,
                j,
                field: padder.restrict(&padder.multiply(&factors)),
            }
        })
        .collect();
    let mut pi1_bands: Vec<Vec<BandTerm>> = vec![Vec::new(); m];
    for t in terms {
        pi1_bands[t.k].push(t);
    }
    let pi1: Vec<Field> = pi1_bands
        .iter()
        .map(|bands| Field::sum(&grid, bands.iter().map(|b| &b.field)))
        .collect::<Result<_>>()?;

    let lifted_full: Vec<Vec<Complex64>> = fields.iter().map(|f| padder.lift(f.spectral(), None)).collect();
    let refs: Vec<&[Complex64]> = lifted_full.iter().map(Vec::as_slice).collect();
    let product = padder.restrict(&padder.multiply(&refs));
    let pi2 = product.sub(&Field::sum(&grid, &pi1)?)?;

    // ∏ Q_j f_i collects every tuple with all indices ≤ j.
    let partial: Vec<Field> = lifted_q
        .par_iter()
        .map(|lq| {
            let refs: Vec<&[Complex64]> = lq.iter().map(Vec::as_slice).collect();
            padder.restrict(&padder.multiply(&refs))
        })
        .collect();
    let mut pi2_bands = Vec::with_capacity(jmax + 1);
    for j in 0..=jmax {
        let mut part = if j == 0 {
            partial[0].clone()
        } else {
            partial[j].sub(&partial[j - 1])?
        };
        if j >= gap {
            for bands in &pi1_bands {
                part = part.sub(&bands[j - gap].field)?;
            }
        }
        pi2_bands.push((j, part));
    }

    Ok(ProductDecomposition {
        m,
        gap,
        grid,
        pi1,
        pi1_bands,
        pi2,
        pi2_bands,
        product,
    })
}

/// Largest size accepted by [`enumerate_pi2_direct`].
pub const ENUMERATION_MAX_FACTORS: usize = 3;
pub const ENUMERATION_MAX_JMAX: usize = 7;

/// `Π_2` by direct summation of `∏ Δ_{k_i} f_i` over the index tuples that
/// no `Π_{1,k}` collects: the largest index `j` is matched by another index
/// (ties included) lying above `j - N`.
pub fn enumerate_pi2_direct(fields: &[Field], sys: &DyadicSystem, gap: usize) -> Result<Field> {
    check_inputs(fields, sys)?;
    let m = fields.len();
    let jmax = sys.jmax();
    if m > ENUMERATION_MAX_FACTORS || jmax > ENUMERATION_MAX_JMAX {
        return Err(Error::InstanceTooLarge(format!(
            "m = {m} (max {ENUMERATION_MAX_FACTORS}), J_max = {jmax} (max {ENUMERATION_MAX_JMAX})"
        )));
    }
    let grid = sys.grid();
    let padder = Padder::new(grid, m);
    // blocks[i][k] = Δ_k f_i on the fine grid, None when identically zero.
    let blocks: Vec<Vec<Option<Vec<Complex64>>>> = fields
        .iter()
        .map(|f| {
            (0..=jmax)
                .map(|k| {
                    let phi = sys.phi(k).expect("k <= jmax");
                    let zero = f.spectral().iter().zip(phi).all(|(c, w)| *w == 0.0 || c.norm() == 0.0);
                    (!zero).then(|| padder.lift(f.spectral(), Some(phi)))
                })
                .collect()
        })
        .collect();

    let mut acc = vec![Complex64::new(0.0, 0.0); padder.fine.len()];
    let mut tuple = vec![0usize; m];
    loop {
        if collected_by_pi2(&tuple, gap) {
            let factors: Option<Vec<&[Complex64]>> = tuple
                .iter()
                .enumerate()
                .map(|(i, &k)| blocks[i][k].as_deref())
                .collect();
            if let Some(factors) = factors {
                for (a, v) in acc.iter_mut().zip(padder.multiply(&factors)) {
                    *a += v;
                }
            }
        }
        // odometer over [0, jmax]^m, last index fastest
        let mut pos = m;
        loop {
            if pos == 0 {
                return Ok(padder.restrict(&acc));
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] <= jmax {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

fn collected_by_pi2(tuple: &[usize], gap: usize) -> bool {
    let mut sorted = tuple.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted[1] as i64 > sorted[0] as i64 - gap as i64
}

/// Measured support of one term against a derived and a claimed bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermSupport {
    /// Factor index for `Π_{1,k}` terms; `None` for `Π_2` parts.
    pub k: Option<usize>,
    pub j: usize,
    pub min_radius: Option<f64>,
    pub max_radius: Option<f64>,
    pub safe_bounds: (f64, f64),
    pub claimed_bounds: (f64, f64),
    pub safe_pass: bool,
    pub claimed_pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportReport {
    pub tol: f64,
    pub pi1_terms: Vec<TermSupport>,
    pub pi2_terms: Vec<TermSupport>,
    /// Hard check: every `Π_{1,k}` band term inside `[2^{j-2}, 2^{j+1}]`.
    pub pi1_safe: bool,
    /// Fraction of `Π_{1,k}` band terms inside `[2^{j-1}, 2^{j+1}]`.
    pub pi1_claimed_pass_rate: f64,
    /// Fraction of `Π_2` parts inside `|ξ| ≤ 3m·2^{j-1}`.
    pub pi2_safe_pass_rate: f64,
    /// Fraction of `Π_2` parts inside `|ξ| ≤ 2^{j+N-2}`.
    pub pi2_claimed_pass_rate: f64,
}

fn measured_support(f: &Field, radii: &[f64], tol: f64) -> Option<(f64, f64)> {
    let max = f.spectral().iter().map(|c| c.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return None;
    }
    f.spectral()
        .iter()
        .zip(radii)
        .filter(|(c, _)| c.norm() > tol * max)
        .map(|(_, &r)| (r, r))
        .reduce(|a, b| (a.0.min(b.0), a.1.max(b.1)))
}

fn within(support: Option<(f64, f64)>, bounds: (f64, f64)) -> bool {
    const SLACK: f64 = 1e-12;
    match support {
        None => true,
        Some((lo, hi)) => lo >= bounds.0 * (1.0 - SLACK) && hi <= bounds.1 * (1.0 + SLACK),
    }
}

fn rate(terms: &[TermSupport], pick: impl Fn(&TermSupport) -> bool) -> f64 {
    if terms.is_empty() {
        1.0
    } else {
        terms.iter().filter(|t| pick(t)).count() as f64 / terms.len() as f64
    }
}

/// Measures the spectral support of every band term of `pd`.
pub fn verify_supports(pd: &ProductDecomposition, sys: &DyadicSystem, tol: f64) -> SupportReport {
    let radii = sys.radii();
    let pow = |e: i64| 2f64.powi(e as i32);
    let mut pi1_terms = Vec::new();
    for bands in &pd.pi1_bands {
        for t in bands {
            let j = t.j as i64;
            let support = measured_support(&t.field, radii, tol);
            let safe = (pow(j - 2), pow(j + 1));
            let claimed = (pow(j - 1), pow(j + 1));
            pi1_terms.push(TermSupport {
                k: Some(t.k),
                j: t.j,
                min_radius: support.map(|s| s.0),
                max_radius: support.map(|s| s.1),
                safe_bounds: safe,
                claimed_bounds: claimed,
                safe_pass: within(support, safe),
                claimed_pass: within(support, claimed),
            });
        }
    }
    let pi2_terms: Vec<TermSupport> = pd
        .pi2_bands
        .iter()
        .map(|(j, f)| {
            let j = *j as i64;
            let support = measured_support(f, radii, tol);
            let safe = (0.0, 3.0 * pd.m as f64 * pow(j - 1));
            let claimed = (0.0, pow(j + pd.gap as i64 - 2));
            TermSupport {
                k: None,
                j: j as usize,
                min_radius: support.map(|s| s.0),
                max_radius: support.map(|s| s.1),
                safe_bounds: safe,
                claimed_bounds: claimed,
                safe_pass: within(support, safe),
                claimed_pass: within(support, claimed),
            }
        })
        .collect();
    SupportReport {
        tol,
        pi1_safe: pi1_terms.iter().all(|t| t.safe_pass),
        pi1_claimed_pass_rate: rate(&pi1_terms, |t| t.claimed_pass),
        pi2_safe_pass_rate: rate(&pi2_terms, |t| t.safe_pass),
        pi2_claimed_pass_rate: rate(&pi2_terms, |t| t.claimed_pass),
        pi1_terms,
        pi2_terms,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wave(g: &Grid, k: i64) -> Field {
        Field::plane_wave(g, &[k], Complex64::new(1.0, 0.0)).unwrap()
    }

    /// Oracle: `N > 1 + log₂(3(m-1))` iff `2^{N-1} > 3(m-1)`.
    fn min_gap_oracle(m: usize) -> usize {
        (1..64).find(|&n| (1u64 << (n - 1)) > 3 * (m as u64 - 1)).unwrap()
    }

    #[test]
    fn gap_rule() {
        assert_eq!(min_gap(2).unwrap(), 3);
        assert_eq!(min_gap(3).unwrap(), 4);
        assert_eq!(min_gap(9).unwrap(), 6);
        for m in 2..200 {
            assert_eq!(min_gap(m).unwrap(), min_gap_oracle(m), "m = {m}");
        }
        assert!(matches!(min_gap(1), Err(Error::FactorCount(1))));
    }

    #[test]
    fn product_of_waves_and_identity() {
        let g = Grid::periodic(1, 64).unwrap();
        let p = dealiased_product(&[&wave(&g, 4), &wave(&g, 2)]).unwrap();
        assert!(p.l2_distance(&wave(&g, 6)).unwrap() < 1e-14);
        let f = wave(&g, -7).add(&wave(&g, 3)).unwrap();
        let one = Field::constant(&g, Complex64::new(1.0, 0.0));
        assert!(dealiased_product(&[&f, &one]).unwrap().l2_distance(&f).unwrap() < 1e-14);
        let h = Grid::periodic(1, 32).unwrap();
        assert!(matches!(
            dealiased_product(&[&f, &Field::zeros(&h)]),
            Err(Error::GridMismatch)
        ));
    }

    #[test]
    fn product_drops_modes_beyond_the_lattice() {
        // 20 + 20 = 40 does not fit on a 64-point lattice; nothing aliases back.
        let g = Grid::periodic(1, 64).unwrap();
        let p = dealiased_product(&[&wave(&g, 20), &wave(&g, 20)]).unwrap();
        assert!(p.l2_spectral() < 1e-14);
    }

    #[test]
    fn high_band_times_low_wave() {
        let g = Grid::periodic(1, 256).unwrap();
        let sys = DyadicSystem::new(&g);
        let f = wave(&g, 32);
        let h = wave(&g, 1);
        let pd = decompose_product(&[f.clone(), h.clone()], &sys, 3).unwrap();
        let expected = wave(&g, 33);
        let term = pd.pi1_bands[0].iter().find(|t| t.j == 5).unwrap();
        assert!(term.field.l2_distance(&expected).unwrap() < 1e-13);
        for t in pd.pi1_bands.iter().flatten() {
            if t.j != 5 || t.k != 0 {
                assert!(t.field.l2_spectral() < 1e-14, "k={} j={}", t.k, t.j);
            }
        }
        assert!(pd.pi2.l2_spectral() < 1e-13);
        let report = verify_supports(&pd, &sys, SUPPORT_TOL);
        let t = report
            .pi1_terms
            .iter()
            .find(|t| t.k == Some(0) && t.j == 5)
            .unwrap();
        assert_eq!((t.min_radius, t.max_radius), (Some(33.0), Some(33.0)));
        assert!(t.safe_pass && t.claimed_pass);
    }

    #[test]
    fn band_zero_factors_go_to_remainder() {
        let g = Grid::periodic(1, 128).unwrap();
        let sys = DyadicSystem::new(&g);
        let f = wave(&g, 1);
        let pd = decompose_product(&[f.clone(), f.clone()], &sys, 3).unwrap();
        assert!(pd.pi1.iter().all(|p| p.l2_spectral() < 1e-15));
        assert!(pd.pi2.l2_distance(&wave(&g, 2)).unwrap() < 1e-14);
        let direct = enumerate_pi2_direct(&[f.clone(), f], &sys, 3).unwrap();
        assert!(direct.l2_distance(&wave(&g, 2)).unwrap() < 1e-14);
    }

    #[test]
    fn separated_bands_leave_no_remainder_tuples() {
        let g = Grid::periodic(1, 128).unwrap();
        let sys = DyadicSystem::new(&g);
        // band 0 and band 5 are more than N = 3 bands apart
        let fields = [wave(&g, 1), wave(&g, 24)];
        let direct = enumerate_pi2_direct(&fields, &sys, 3).unwrap();
        assert_eq!(direct.l2_spectral(), 0.0);
        let pd = decompose_product(&fields, &sys, 3).unwrap();
        assert!(pd.pi2.l2_spectral() <= 1e-12 * pd.product.l2_spectral());
    }

    #[test]
    fn guards() {
        let g = Grid::periodic(1, 64).unwrap();
        let sys = DyadicSystem::new(&g);
        let f = wave(&g, 3);
        assert!(matches!(
            decompose_product(&[f.clone(), f.clone()], &sys, 2),
            Err(Error::GapTooSmall { gap: 2, min: 3, m: 2 })
        ));
        assert!(matches!(
            decompose_product(std::slice::from_ref(&f), &sys, 3),
            Err(Error::FactorCount(1))
        ));
        let four = vec![f.clone(); 4];
        assert!(matches!(
            enumerate_pi2_direct(&four, &sys, 5),
            Err(Error::InstanceTooLarge(_))
        ));
        let big = Grid::periodic(1, 1024).unwrap();
        let bsys = DyadicSystem::new(&big);
        let bf = wave(&big, 3);
        assert!(matches!(
            enumerate_pi2_direct(&[bf.clone(), bf], &bsys, 3),
            Err(Error::InstanceTooLarge(_))
        ));
    }

    #[test]
    fn zero_term_passes_vacuously() {
        let g = Grid::periodic(1, 64).unwrap();
        let sys = DyadicSystem::new(&g);
        let z = Field::zeros(&g);
        let pd = decompose_product(&[z.clone(), z], &sys, 3).unwrap();
        let r = verify_supports(&pd, &sys, SUPPORT_TOL);
        assert!(r.pi1_safe);
        assert!(r.pi1_terms.iter().all(|t| t.min_radius.is_none() && t.safe_pass));
    }
}
