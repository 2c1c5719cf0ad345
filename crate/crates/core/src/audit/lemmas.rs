//! Single-inequality checks: the Hardy-type summation bound, the Nikolskii
//! inequality, and the four `Q_j` / `Δ_j` estimates.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use super::record::{AuditRecord, Provenance};
use crate::dyadic::{smooth_cutoff, DyadicSystem};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::field::Field;
use crate::grid::Grid;
use crate::hypotheses::PARAM_EPS;
use crate::norms::{besov_norm, lp_norm, lp_norm_samples, sequence_norm, triebel_norm, SpaceSpec};

/// Absolute slack on the Hardy bound, covering summation rounding.
pub const HARDY_SLACK: f64 = 1e-9;

/// `(1 - γ^τ)^{-1/τ}` with `τ = min(1, q)`.
///
/// For `q ≥ 1` this is Young's inequality with the kernel `γ^i`; for
/// `q < 1` it follows from `(Σ a_i)^q ≤ Σ a_i^q`.
pub fn hardy_bound(gamma: f64, q: Exponent) -> f64 {
    let tau = q.tau();
    (1.0 - gamma.powf(tau)).powf(-1.0 / tau)
}

/// `δ_k = Σ_{j ≤ k} γ^{k-j} ε_j`.
pub fn hardy_sequence(eps: &[f64], gamma: f64) -> Vec<f64> {
    let mut acc = 0.0;
    eps.iter()
        .map(|&e| {
            acc = gamma * acc + e;
            acc
        })
        .collect()
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma < 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("gamma = {gamma} is outside (0, 1)")))
    }
}

/// `∥δ∥_{ℓ_q} / ∥ε∥_{ℓ_q}` against the derived Hardy constant.
pub fn check_hardy(eps: &[f64], gamma: f64, q: Exponent) -> Result<AuditRecord> {
    check_gamma(gamma)?;
    if eps.iter().any(|e| !(*e >= 0.0 && e.is_finite())) {
        return Err(Error::Parameter("sequence entries must be finite and nonnegative".into()));
    }
    let a = sequence_norm(eps, 0.0, q);
    let d = sequence_norm(&hardy_sequence(eps, gamma), 0.0, q);
    Ok(AuditRecord::new("hardy", d, a)
        .input("gamma", gamma)
        .input("q", q)
        .input("len", eps.len())
        .bounded(hardy_bound(gamma, q), HARDY_SLACK, Provenance::Derived, "(1-gamma^tau)^(-1/tau)"))
}

fn random_sequence(rng: &mut SplitMix64, max_len: usize) -> Vec<f64> {
    let len = rng.random_range(1..=max_len);
    match rng.random_range(0..5u8) {
        0 => (0..len).map(|_| rng.random::<f64>()).collect(),
        1 => (0..len)
            .map(|_| if rng.random::<f64>() < 0.2 { rng.random::<f64>() } else { 0.0 })
            .collect(),
        2 => {
            let r: f64 = rng.random_range(0.5..1.5);
            (0..len).map(|k| r.powi(k as i32)).collect()
        }
        3 => (0..len).map(|_| 1.0 + 0.05 * rng.random::<f64>()).collect(),
        _ => {
            let mut v = vec![0.0; len];
            v[rng.random_range(0..len)] = 1.0;
            v
        }
    }
}

/// Worst ratio over `samples` random sequences of length `≤ max_len`.
pub fn hardy_random(gamma: f64, q: Exponent, samples: usize, max_len: usize, seed: u64) -> Result<AuditRecord> {
    check_gamma(gamma)?;
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut worst = (0.0, 1.0);
    for _ in 0..samples {
        let eps = random_sequence(&mut rng, max_len);
        let a = sequence_norm(&eps, 0.0, q);
        if a == 0.0 {
            continue;
        }
        let d = sequence_norm(&hardy_sequence(&eps, gamma), 0.0, q);
        if d / a > worst.0 / worst.1 {
            worst = (d, a);
        }
    }
    Ok(AuditRecord::new("hardy.random", worst.0, worst.1)
        .input("gamma", gamma)
        .input("q", q)
        .input("samples", samples)
        .input("max_len", max_len)
        .input("seed", seed)
        .bounded(hardy_bound(gamma, q), HARDY_SLACK, Provenance::Derived, "(1-gamma^tau)^(-1/tau)"))
}

/// Worst ratio over every sequence of length `≤ max_len` with entries in `lattice`.
pub fn hardy_exhaustive(gamma: f64, q: Exponent, max_len: usize, lattice: &[f64]) -> Result<AuditRecord> {
    check_gamma(gamma)?;
    let base = lattice.len();
    let mut worst = (0.0, 1.0);
    let mut count = 0usize;
    for len in 1..=max_len {
        let total = base.pow(len as u32);
        let mut eps = vec![0.0; len];
        for code in 0..total {
            let mut c = code;
            for e in eps.iter_mut() {
                *e = lattice[c % base];
                c /= base;
            }
            let a = sequence_norm(&eps, 0.0, q);
            if a == 0.0 {
                continue;
            }
            count += 1;
            let d = sequence_norm(&hardy_sequence(&eps, gamma), 0.0, q);
            if d / a > worst.0 / worst.1 {
                worst = (d, a);
            }
        }
    }
    Ok(AuditRecord::new("hardy.exhaustive", worst.0, worst.1)
        .input("gamma", gamma)
        .input("q", q)
        .input("max_len", max_len)
        .input("sequences", count)
        .bounded(hardy_bound(gamma, q), HARDY_SLACK, Provenance::Derived, "(1-gamma^tau)^(-1/tau)"))
}

fn exp_le(a: Exponent, b: Exponent) -> bool {
    b.is_infinite() || (!a.is_infinite() && a.value() <= b.value())
}

/// `∥f∥_q / (γ^{n(1/p - 1/q)} ∥f∥_p)` for `f` with spectrum in `|ξ| ≤ γ`.
pub fn check_nikolskii(f: &Field, p: Exponent, q: Exponent, gamma: f64) -> Result<AuditRecord> {
    if !exp_le(p, q) {
        return Err(Error::Parameter(format!("p = {p} exceeds q = {q}")));
    }
    if gamma.is_nan() || gamma <= 0.0 {
        return Err(Error::Parameter(format!("support radius {gamma} must be positive")));
    }
    if let Some(radius) = f.spectral_radius(crate::paraproduct::SUPPORT_TOL) {
        if radius > gamma * (1.0 + 1e-12) {
            return Err(Error::BandLimit { radius, limit: gamma });
        }
    }
    let n = f.grid().dim() as f64;
    let power = gamma.powf(n * (p.reciprocal() - q.reciprocal()));
    Ok(AuditRecord::new("nikolskii", lp_norm(f, q), power * lp_norm(f, p))
        .input("p", p)
        .input("q", q)
        .input("gamma", gamma)
        .input("n", n))
}

/// Coefficient pattern `g(|ξ|/γ)` used for the Nikolskii scaling check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NikolskiiProfile {
    /// `Ψ(1.5 r)`: smooth, supported in `r < 1`.
    Smooth,
    /// Indicator of `r ≤ 1` (Dirichlet kernel).
    Dirichlet,
}

impl NikolskiiProfile {
    pub fn weight(self, r: f64) -> f64 {
        match self {
            NikolskiiProfile::Smooth => smooth_cutoff(1.5 * r),
            NikolskiiProfile::Dirichlet => {
                if r <= 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    fn name(self) -> &'static str {
        match self {
            NikolskiiProfile::Smooth => "smooth",
            NikolskiiProfile::Dirichlet => "dirichlet",
        }
    }
}

/// The field with coefficients `profile(|ξ|/γ)`.
pub fn profile_field(grid: &Grid, profile: NikolskiiProfile, gamma: f64) -> Result<Field> {
    if gamma > grid.nyquist_radius() {
        return Err(Error::BandLimit {
            radius: gamma,
            limit: grid.nyquist_radius(),
        });
    }
    let spectral = grid
        .radii()
        .into_iter()
        .map(|r| Complex64::new(profile.weight(r / gamma), 0.0))
        .collect();
    Field::from_spectral(grid, spectral)
}

/// Nikolskii ratios for one profile dilated through `gammas`, followed by
/// a record whose ratio is `max/min` over them.
pub fn nikolskii_scaling(
    grid: &Grid,
    profile: NikolskiiProfile,
    gammas: &[f64],
    p: Exponent,
    q: Exponent,
) -> Result<Vec<AuditRecord>> {
    let mut out = Vec::with_capacity(gammas.len() + 1);
    for &g in gammas {
        let f = profile_field(grid, profile, g)?;
        out.push(check_nikolskii(&f, p, q, g)?.input("profile", profile.name()));
    }
    let ratios: Vec<f64> = out.iter().filter_map(|r| r.ratio).collect();
    let hi = ratios.iter().copied().fold(f64::NAN, f64::max);
    let lo = ratios.iter().copied().fold(f64::NAN, f64::min);
    let gammas_list = gammas.iter().map(|g| g.to_string()).collect::<Vec<_>>().join("/");
    let spread = AuditRecord::new("nikolskii.scaling", hi, lo)
        .input("profile", profile.name())
        .input("p", p)
        .input("q", q)
        .input("gammas", gammas_list);
    out.push(spread);
    Ok(out)
}

/// `ε_j` of the `Q_j` estimate in `L_p`.
pub fn epsilon_qj(j: usize, s: f64, p: Exponent) -> f64 {
    if s.abs() <= PARAM_EPS {
        (j as f64 + 1.0).powf(1.0 / p.tau())
    } else if s < 0.0 {
        2f64.powf(-(j as f64) * s)
    } else {
        1.0
    }
}

fn besov_inf(f: &Field, s: f64, p: Exponent, sys: &DyadicSystem) -> Result<f64> {
    let b = besov_norm(f, &SpaceSpec::besov(s, p, Exponent::INFINITY), sys)?;
    if b == 0.0 {
        return Err(Error::ZeroField);
    }
    Ok(b)
}

/// `∥Q_j f∥_p / ε_j` for `j = 0..=J_max`.
pub fn qj_lp_profile(f: &Field, s: f64, p: Exponent, sys: &DyadicSystem) -> Result<Vec<f64>> {
    (0..=sys.jmax())
        .map(|j| Ok(lp_norm(&sys.q(f, j)?, p) / epsilon_qj(j, s, p)))
        .collect()
}

fn argmax(v: &[f64]) -> usize {
    v.iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, &x)| if x > best.1 { (i, x) } else { best })
        .0
}

/// `max_j ∥Q_j f∥_p / (ε_j ∥f | B^s_{p,∞}∥)`.
pub fn check_qj_lp(f: &Field, s: f64, p: Exponent, sys: &DyadicSystem) -> Result<AuditRecord> {
    let b = besov_inf(f, s, p, sys)?;
    let prof = qj_lp_profile(f, s, p, sys)?;
    let j = argmax(&prof);
    Ok(AuditRecord::new("qj_lp", prof[j], b)
        .input("s", s)
        .input("p", p)
        .input("argmax_j", j))
}

/// `max_j ∥Δ_j f∥_t / (2^{(n/p - n/t - s) j} ∥f | B^s_{p,∞}∥)`.
pub fn check_delta_lt(f: &Field, s: f64, p: Exponent, t: Exponent, sys: &DyadicSystem) -> Result<AuditRecord> {
    if !exp_le(p, t) {
        return Err(Error::Parameter(format!("p = {p} exceeds t = {t}")));
    }
    let b = besov_inf(f, s, p, sys)?;
    let n = sys.grid().dim() as f64;
    let rate = n * p.reciprocal() - n * t.reciprocal() - s;
    let prof: Vec<f64> = (0..=sys.jmax())
        .map(|j| Ok(lp_norm(&sys.delta(f, j)?, t) / 2f64.powf(rate * j as f64)))
        .collect::<Result<_>>()?;
    let j = argmax(&prof);
    Ok(AuditRecord::new("delta_lt", prof[j], b)
        .input("s", s)
        .input("p", p)
        .input("t", t)
        .input("argmax_j", j))
}

/// `1 / (1/p - s/n)_+`, infinite when the bracket vanishes.
pub fn sobolev_endpoint(s: f64, p: Exponent, n: usize) -> f64 {
    let d = p.reciprocal() - s / n as f64;
    if d <= PARAM_EPS {
        f64::INFINITY
    } else {
        1.0 / d
    }
}

/// `max_j ∥Q_j f∥_t / (ε_j ∥f | B^s_{p,∞}∥)` for `p < t ≤ 1/(1/p - s/n)_+`,
/// with `ε_j = (j+1)^{1/min(1,t)}` at the endpoint and `1` below it.
pub fn check_qj_lt(f: &Field, s: f64, p: Exponent, t: Exponent, sys: &DyadicSystem) -> Result<AuditRecord> {
    let n = sys.grid().dim();
    let end = sobolev_endpoint(s, p, n);
    let above_p = !exp_le(t, p);
    let below_end = end.is_infinite() || (!t.is_infinite() && t.value() <= end * (1.0 + PARAM_EPS));
    if !(above_p && below_end) {
        return Err(Error::Parameter(format!(
            "t = {t} must lie in (p, {end}] for s = {s}, p = {p}"
        )));
    }
    let endpoint = if end.is_infinite() {
        t.is_infinite()
    } else {
        !t.is_infinite() && (t.value() - end).abs() <= PARAM_EPS * end.max(1.0)
    };
    let b = besov_inf(f, s, p, sys)?;
    let prof: Vec<f64> = (0..=sys.jmax())
        .map(|j| {
            let eps = if endpoint {
                (j as f64 + 1.0).powf(1.0 / t.tau())
            } else {
                1.0
            };
            Ok(lp_norm(&sys.q(f, j)?, t) / eps)
        })
        .collect::<Result<_>>()?;
    let j = argmax(&prof);
    Ok(AuditRecord::new("qj_lt", prof[j], b)
        .input("s", s)
        .input("p", p)
        .input("t", t)
        .input("endpoint", endpoint)
        .input("argmax_j", j))
}

/// `∥max_{j ≤ J_max} |Q_j f|∥_p / ∥f | F^0_{p,2}∥`; undefined for the zero field.
pub fn check_maximal_qsup(f: &Field, p: Exponent, sys: &DyadicSystem) -> Result<AuditRecord> {
    if p.is_infinite() {
        return Err(Error::TriebelInfiniteP);
    }
    let mut sup = vec![0.0f64; f.grid().len()];
    for j in 0..=sys.jmax() {
        let qf = sys.q(f, j)?;
        for (m, c) in sup.iter_mut().zip(qf.physical()) {
            *m = m.max(c.norm());
        }
    }
    let samples: Vec<Complex64> = sup.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
    let lhs = lp_norm_samples(&samples, p);
    let rhs = triebel_norm(f, &SpaceSpec::triebel(0.0, p, Exponent::new(2.0)?)?, sys)?;
    Ok(AuditRecord::new("maximal_qsup", lhs, rhs).input("p", p))
}
