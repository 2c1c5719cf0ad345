//! Embedding and multiplication sweeps over generated fields at several
//! grid resolutions.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::record::{AuditRecord, Provenance, SweepResult};
use crate::dyadic::DyadicSystem;
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::field::Field;
use crate::grid::Grid;
use crate::hypotheses::{check_embedding_hypotheses, check_theorem_hypotheses, EmbeddingMode, TheoremMode};
use crate::norms::{besov_norm, triebel_norm, SpaceSpec};
use crate::paraproduct::{decompose_product, min_gap};
use crate::testbank::{default_bank, plateau_wavenumber, GeneratorKind, GeneratorSpec};

/// Largest allowed ratio between the worst constants at two resolutions.
pub const STABILITY_FACTOR: f64 = 4.0;
/// Largest allowed relative change of a ratio when one factor is rescaled.
pub const HOMOGENEITY_TOL: f64 = 1e-9;
/// Scale applied to one factor in the homogeneity check.
pub const HOMOGENEITY_SCALE: f64 = 1e3;

pub const DEFAULT_RESOLUTIONS: [usize; 2] = [128, 256];

pub fn kind_name(kind: &GeneratorKind) -> &'static str {
    match kind {
        GeneratorKind::Lacunary { .. } => "lacunary",
        GeneratorKind::RandomBand { .. } => "random-band",
        GeneratorKind::GaussianBump { .. } => "gaussian-bump",
        GeneratorKind::SmoothedStep { .. } => "smoothed-step",
        GeneratorKind::PureWave { .. } => "pure-wave",
    }
}

/// `max/min` of per-resolution worst ratios, gated by [`STABILITY_FACTOR`].
fn stability_record(name: &str, worst: &[(usize, f64)]) -> AuditRecord {
    let hi = worst.iter().map(|w| w.1).fold(f64::NAN, f64::max);
    let lo = worst.iter().map(|w| w.1).fold(f64::NAN, f64::min);
    let sizes = worst.iter().map(|w| w.0.to_string()).collect::<Vec<_>>().join("/");
    AuditRecord::new(name, hi, lo)
        .input("resolutions", sizes)
        .bounded(STABILITY_FACTOR, 0.0, Provenance::Gate, "resolution stability")
}

fn worst_ratio<'a>(records: impl Iterator<Item = &'a AuditRecord>) -> f64 {
    records.filter_map(|r| r.ratio).fold(f64::NAN, f64::max)
}

/// Pins every spec without an explicit band limit to its limit on the
/// coarsest grid, so the same trigonometric polynomial is generated at
/// every resolution.
fn pin_band_limits(bank: &[GeneratorSpec], coarse: usize) -> Result<Vec<GeneratorSpec>> {
    bank.iter()
        .map(|spec| {
            let coarse_spec = spec.at_size(coarse);
            let grid = coarse_spec.grid.build()?;
            Ok(spec.clone().with_band_limit(coarse_spec.effective_band_limit(&grid)))
        })
        .collect()
}

fn check_resolutions(resolutions: &[usize]) -> Result<usize> {
    resolutions
        .iter()
        .copied()
        .min()
        .ok_or_else(|| Error::Parameter("at least one resolution is required".into()))
}

/// `norm_target(f) / norm_source(f)` for each field; zero fields give
/// undefined records.
pub fn audit_embedding_fields(
    source: &SpaceSpec,
    target: &SpaceSpec,
    fields: &[Field],
    sys: &DyadicSystem,
) -> Result<Vec<AuditRecord>> {
    fields
        .par_iter()
        .enumerate()
        .map(|(i, f)| {
            let bands = sys.decompose(f)?;
            let lhs = target.norm_of_bands(&bands)?;
            let rhs = source.norm_of_bands(&bands)?;
            Ok(AuditRecord::new("embedding", lhs, rhs)
                .input("source", source)
                .input("target", target)
                .input("field", i))
        })
        .collect()
}

/// One embedding to audit; the bank defaults to the frozen 1-D bank.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingAudit {
    pub source: SpaceSpec,
    pub target: SpaceSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bank: Option<Vec<GeneratorSpec>>,
}

impl EmbeddingAudit {
    pub fn new(source: SpaceSpec, target: SpaceSpec) -> EmbeddingAudit {
        EmbeddingAudit {
            source,
            target,
            bank: None,
        }
    }

    pub fn mode(&self) -> EmbeddingMode {
        if self.source.family == self.target.family {
            EmbeddingMode::SameFamily
        } else {
            EmbeddingMode::FrankeJawerth
        }
    }
}

/// Runs one embedding over the bank at every resolution. Refuses to run
/// when the embedding hypotheses fail.
pub fn audit_embedding(cfg: &EmbeddingAudit, resolutions: &[usize]) -> Result<SweepResult> {
    let coarse = check_resolutions(resolutions)?;
    let bank = match &cfg.bank {
        Some(b) => b.clone(),
        None => default_bank(coarse),
    };
    let dim = bank.first().map_or(1, |s| s.grid.dim);
    if bank.iter().any(|s| s.grid.dim != dim) {
        return Err(Error::Parameter("bank mixes grid dimensions".into()));
    }
    check_embedding_hypotheses(&cfg.source, &cfg.target, dim, cfg.mode()).require()?;
    let bank = pin_band_limits(&bank, coarse)?;
    let mut records = Vec::new();
    let mut worst = Vec::new();
    for &size in resolutions {
        let grid = Grid::new(dim, size, bank.first().map_or(2.0 * PI, |s| s.grid.period))?;
        let sys = DyadicSystem::new(&grid);
        let fields: Vec<Field> = bank
            .par_iter()
            .map(|s| s.at_size(size).generate(&sys))
            .collect::<Result<_>>()?;
        let recs: Vec<AuditRecord> = audit_embedding_fields(&cfg.source, &cfg.target, &fields, &sys)?
            .into_iter()
            .zip(&bank)
            .map(|(r, s)| r.input("kind", kind_name(&s.kind)).input("resolution", size))
            .collect();
        worst.push((size, worst_ratio(recs.iter())));
        records.extend(recs);
    }
    if worst.len() > 1 {
        records.push(
            stability_record("embedding.stability", &worst)
                .input("source", cfg.source)
                .input("target", cfg.target),
        );
    }
    let config = serde_json::to_value(cfg)?;
    Ok(SweepResult::new(config, resolutions.to_vec(), records))
}

/// Embeddings in one dimension whose hypotheses hold.
pub fn embedding_catalog() -> Vec<EmbeddingAudit> {
    let e = |v: f64| Exponent::new(v).expect("positive");
    let b = |s, p, q| SpaceSpec::besov(s, e(p), e(q));
    let f = |s, p, q| SpaceSpec::triebel(s, e(p), e(q)).expect("finite p");
    vec![
        EmbeddingAudit::new(f(1.0, 2.0, 2.0), f(1.0, 2.0, 2.0)),
        EmbeddingAudit::new(b(1.0, 2.0, 2.0), b(0.5, 2.0, 2.0)),
        EmbeddingAudit::new(b(1.0, 1.0, 1.0), b(0.5, 2.0, 1.0)),
        EmbeddingAudit::new(f(1.0, 1.0, 2.0), f(0.5, 2.0, 2.0)),
        EmbeddingAudit::new(b(1.5, 1.0, 1.0), f(1.0, 2.0, 2.0)),
        EmbeddingAudit::new(f(1.0, 1.0, 2.0), b(0.5, 2.0, 1.0)),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorParams {
    pub s: f64,
    pub p: Exponent,
}

/// A multiplication-theorem parameter set and its random tuples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplicationAudit {
    pub mode: TheoremMode,
    pub factors: Vec<FactorParams>,
    pub q: Exponent,
    /// Target integrability; defaults to the midpoint of the admissible `1/p` range.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Exponent>,
    #[serde(default = "default_tuples")]
    pub tuples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap: Option<usize>,
    #[serde(default = "default_dim")]
    pub dim: usize,
}

fn default_tuples() -> usize {
    10
}

fn default_dim() -> usize {
    1
}

impl MultiplicationAudit {
    pub fn new(mode: TheoremMode, factors: &[(f64, f64)], q: Exponent) -> MultiplicationAudit {
        MultiplicationAudit {
            mode,
            factors: factors
                .iter()
                .map(|&(s, p)| FactorParams {
                    s,
                    p: Exponent::new(p).expect("positive exponent"),
                })
                .collect(),
            q,
            p: None,
            tuples: default_tuples(),
            seed: 0,
            gap: None,
            dim: default_dim(),
        }
    }

    fn params(&self) -> Vec<(f64, Exponent)> {
        self.factors.iter().map(|f| (f.s, f.p)).collect()
    }

    /// Validates the hypotheses and resolves the target exponent.
    pub fn resolve_p(&self) -> Result<Exponent> {
        let report = check_theorem_hypotheses(&self.params(), self.q, self.dim, self.mode, self.p)?;
        report.require()?;
        match self.p {
            Some(p) => Ok(p),
            None => report
                .suggested_p()
                .ok_or_else(|| Error::Hypothesis("empty admissible range for p".into())),
        }
    }

    /// Generator specs of tuple `t`, band-limited to `2^{J_max}/m` on the
    /// `coarse` grid.
    pub fn tuple_specs(&self, t: usize, coarse: usize) -> Result<Vec<GeneratorSpec>> {
        let m = self.factors.len();
        let grid = Grid::new(self.dim, coarse, 2.0 * PI)?;
        let limit = 2f64.powi(grid.jmax() as i32) / m as f64;
        let kmax = (limit / grid.frequency_step()).floor() as i64;
        let mut rng = SplitMix64::seed_from_u64(self.seed ^ (t as u64 + 1).wrapping_mul(0xD1B5_4A32_D192_ED03));
        let mut out = Vec::with_capacity(m);
        for f in &self.factors {
            let kind = match rng.random_range(0..5u8) {
                0 => GeneratorKind::RandomBand {
                    s: f.s,
                    p: f.p,
                    seed: rng.random(),
                },
                1 => {
                    let first_band = rng.random_range(0..2usize);
                    let mut amplitudes = Vec::new();
                    let mut j = first_band;
                    while j <= grid.jmax() && plateau_wavenumber(&grid, j)? as f64 <= limit {
                        amplitudes.push(rng.random_range(-1.0..1.0));
                        j += 1;
                    }
                    GeneratorKind::Lacunary {
                        first_band,
                        amplitudes,
                    }
                }
                2 => GeneratorKind::GaussianBump {
                    center: (0..self.dim).map(|_| rng.random_range(0.0..2.0 * PI)).collect(),
                    width: rng.random_range(0.2..0.8),
                },
                3 => GeneratorKind::SmoothedStep {
                    edge_width: rng.random_range(0.2..0.8),
                },
                _ => {
                    let mut wavevector = vec![0i64; self.dim];
                    wavevector[0] = rng.random_range(-kmax..=kmax);
                    GeneratorKind::PureWave {
                        wavevector,
                        amplitude: 1.0,
                    }
                }
            };
            let mut spec = GeneratorSpec::new(kind, self.dim, coarse).with_band_limit(limit);
            spec.m_max = m.max(1);
            out.push(spec);
        }
        Ok(out)
    }
}

/// Measured ratios of one tuple: product, `Σ_k Π_{1,k}`, `Π_2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TupleRatios {
    pub rhs_core: f64,
    pub total: f64,
    pub pi1: f64,
    pub pi2: f64,
}

/// Fails when the factors' spectral radii sum past `2^{J_max}`, where the
/// product would leave the region covered by the bands.
pub fn check_aliasing(fields: &[Field], sys: &DyadicSystem) -> Result<()> {
    let total: f64 = fields.iter().filter_map(|f| f.spectral_radius(0.0)).sum();
    let limit = 2f64.powi(sys.jmax() as i32);
    if total > limit * (1.0 + 1e-12) {
        return Err(Error::Parameter(format!(
            "aliasing precondition violated: spectral radii sum to {total} > {limit}"
        )));
    }
    Ok(())
}

/// Left sides `∥Π | F^{s1}_{p,q}∥` and the right side
/// `∥f1 | F^{s1}_{p1,q}∥ ∏_{i≥2} ∥f_i | B^{s_i}_{p_i,∞}∥`.
pub fn tuple_ratios(
    cfg: &MultiplicationAudit,
    p: Exponent,
    fields: &[Field],
    sys: &DyadicSystem,
) -> Result<TupleRatios> {
    if fields.len() != cfg.factors.len() {
        return Err(Error::FactorCount(fields.len()));
    }
    check_aliasing(fields, sys)?;
    let gap = match cfg.gap {
        Some(g) => g,
        None => min_gap(fields.len())?,
    };
    let pd = decompose_product(fields, sys, gap)?;
    let target = SpaceSpec::triebel(cfg.factors[0].s, p, cfg.q)?;
    let first = SpaceSpec::triebel(cfg.factors[0].s, cfg.factors[0].p, cfg.q)?;
    let mut rhs = triebel_norm(&fields[0], &first, sys)?;
    for (f, par) in fields[1..].iter().zip(&cfg.factors[1..]) {
        rhs *= besov_norm(f, &SpaceSpec::besov(par.s, par.p, Exponent::INFINITY), sys)?;
    }
    let lhs = |f: &Field| triebel_norm(f, &target, sys);
    Ok(TupleRatios {
        rhs_core: rhs,
        total: lhs(&pd.product)?,
        pi1: lhs(&pd.pi1_total())?,
        pi2: lhs(&pd.pi2)?,
    })
}

fn relative_change(a: f64, b: f64) -> (f64, f64) {
    ((a - b).abs(), b.abs())
}

struct TupleOutcome {
    records: Vec<AuditRecord>,
}

fn run_tuple(
    cfg: &MultiplicationAudit,
    p: Exponent,
    t: usize,
    specs: &[GeneratorSpec],
    size: usize,
    sys: &DyadicSystem,
) -> Result<TupleOutcome> {
    let fields: Vec<Field> = specs
        .iter()
        .map(|s| s.at_size(size).generate(sys))
        .collect::<Result<_>>()?;
    let base = tuple_ratios(cfg, p, &fields, sys)?;
    let kinds = specs.iter().map(|s| kind_name(&s.kind)).collect::<Vec<_>>().join("+");
    let tag = |r: AuditRecord| {
        r.input("tuple", t)
            .input("resolution", size)
            .input("kinds", &kinds)
            .input("mode", format!("{:?}", cfg.mode).to_lowercase())
            .input("p", p)
    };
    let mut records = vec![
        tag(AuditRecord::new("mult.total", base.total, base.rhs_core)),
        tag(AuditRecord::new("mult.pi1", base.pi1, base.rhs_core)),
        tag(AuditRecord::new("mult.pi2", base.pi2, base.rhs_core)),
    ];
    // Each part is 1-homogeneous in every slot, as is the right side.
    let mut worst = (0.0, 1.0);
    for k in 0..fields.len() {
        let mut scaled = fields.clone();
        scaled[k] = scaled[k].scale(Complex64::new(HOMOGENEITY_SCALE, 0.0));
        let r = tuple_ratios(cfg, p, &scaled, sys)?;
        let pairs = [
            (r.total / r.rhs_core, base.total / base.rhs_core),
            (r.pi1 / r.rhs_core, base.pi1 / base.rhs_core),
            (r.pi2 / r.rhs_core, base.pi2 / base.rhs_core),
        ];
        for (a, b) in pairs {
            let (d, s) = relative_change(a, b);
            if s > 0.0 && d / s > worst.0 / worst.1 || !(d.is_finite() && s.is_finite()) {
                worst = (d, s);
            }
        }
    }
    records.push(tag(AuditRecord::new("mult.homogeneity", worst.0, worst.1)
        .input("scale", HOMOGENEITY_SCALE)
        .bounded(HOMOGENEITY_TOL, 0.0, Provenance::Gate, "slot scaling invariance")));
    Ok(TupleOutcome { records })
}

/// Runs one theorem parameter set at every resolution: per-tuple ratios,
/// the homogeneity gate, a finiteness gate and the stability gate.
pub fn audit_multiplication(cfg: &MultiplicationAudit, resolutions: &[usize]) -> Result<SweepResult> {
    let coarse = check_resolutions(resolutions)?;
    let p = cfg.resolve_p()?;
    let tuples: Vec<Vec<GeneratorSpec>> = (0..cfg.tuples)
        .map(|t| cfg.tuple_specs(t, coarse))
        .collect::<Result<_>>()?;
    let mut records = Vec::new();
    let mut worst: [Vec<(usize, f64)>; 3] = Default::default();
    for &size in resolutions {
        let sys = DyadicSystem::new(&Grid::new(cfg.dim, size, 2.0 * PI)?);
        let outcomes: Vec<TupleOutcome> = tuples
            .par_iter()
            .enumerate()
            .map(|(t, specs)| run_tuple(cfg, p, t, specs, size, &sys))
            .collect::<Result<_>>()?;
        let recs: Vec<AuditRecord> = outcomes.into_iter().flat_map(|o| o.records).collect();
        for (slot, name) in worst.iter_mut().zip(["mult.total", "mult.pi1", "mult.pi2"]) {
            slot.push((size, worst_ratio(recs.iter().filter(|r| r.name == name))));
        }
        records.extend(recs);
    }
    let measured: Vec<&AuditRecord> = records
        .iter()
        .filter(|r| matches!(r.name.as_str(), "mult.total" | "mult.pi1" | "mult.pi2"))
        .collect();
    let bad = measured
        .iter()
        .filter(|r| !r.ratio.is_some_and(f64::is_finite))
        .count();
    records.push(
        AuditRecord::new("mult.finite", bad as f64, measured.len() as f64)
            .bounded(0.0, 0.0, Provenance::Gate, "every ratio finite"),
    );
    if resolutions.len() > 1 {
        for (slot, part) in worst.iter().zip(["total", "pi1", "pi2"]) {
            records.push(stability_record(&format!("mult.stability.{part}"), slot));
        }
    }
    let mut config = serde_json::to_value(cfg)?;
    config["resolved_p"] = serde_json::to_value(p)?;
    Ok(SweepResult::new(config, resolutions.to_vec(), records))
}

/// Three parameter sets per theorem, all satisfying the hypotheses in one dimension.
pub fn theorem_catalog() -> Vec<MultiplicationAudit> {
    let e = |v: f64| Exponent::new(v).expect("positive");
    let sets = [
        (TheoremMode::Positive, vec![(0.4, 2.0), (1.0, 2.0)], e(2.0), 11),
        (TheoremMode::Positive, vec![(0.25, 2.0), (1.5, 4.0)], Exponent::INFINITY, 12),
        (TheoremMode::Positive, vec![(0.3, 2.0), (1.0, 4.0), (2.0, 4.0)], e(1.0), 13),
        (TheoremMode::Negative, vec![(-0.3, 2.0), (1.0, 2.0)], e(2.0), 21),
        (TheoremMode::Negative, vec![(0.0, 2.0), (0.5, 4.0)], Exponent::INFINITY, 22),
        (TheoremMode::Negative, vec![(-0.5, 2.0), (1.0, 4.0), (1.5, 4.0)], e(1.0), 23),
    ];
    sets.into_iter()
        .map(|(mode, factors, q, seed)| {
            let mut a = MultiplicationAudit::new(mode, &factors, q);
            a.seed = seed;
            a
        })
        .collect()
}

/// A manifest for `audit`: embeddings and multiplication parameter sets.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AuditManifest {
    #[serde(default)]
    pub embeddings: Vec<EmbeddingAudit>,
    #[serde(default)]
    pub multiplications: Vec<MultiplicationAudit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolutions: Option<Vec<usize>>,
}

impl AuditManifest {
    pub fn catalog() -> AuditManifest {
        AuditManifest {
            embeddings: embedding_catalog(),
            multiplications: theorem_catalog(),
            resolutions: None,
        }
    }

    /// Checks every hypothesis up front and reports all failures at once.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        for (i, e) in self.embeddings.iter().enumerate() {
            let dim = e
                .bank
                .as_ref()
                .and_then(|b| b.first())
                .map_or(1, |s| s.grid.dim);
            let r = check_embedding_hypotheses(&e.source, &e.target, dim, e.mode());
            if !r.satisfied {
                problems.push(format!("embedding {i} ({} -> {}): {}", e.source, e.target, r.failure_summary()));
            }
        }
        for (i, m) in self.multiplications.iter().enumerate() {
            match m.resolve_p() {
                Ok(_) => {}
                Err(Error::Hypothesis(msg)) => problems.push(format!("multiplication {i}: {msg}")),
                Err(err) => problems.push(format!("multiplication {i}: {err}")),
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Hypothesis(problems.join("; ")))
        }
    }

    /// Runs everything; `resolutions` overrides the manifest's own list.
    pub fn run(&self, resolutions: Option<&[usize]>) -> Result<SweepResult> {
        self.validate()?;
        let res: Vec<usize> = resolutions
            .map(<[usize]>::to_vec)
            .or_else(|| self.resolutions.clone())
            .unwrap_or_else(|| DEFAULT_RESOLUTIONS.to_vec());
        let mut out = SweepResult::new(serde_json::Value::Null, res.clone(), Vec::new());
        for e in &self.embeddings {
            out.merge(audit_embedding(e, &res)?);
        }
        for m in &self.multiplications {
            out.merge(audit_multiplication(m, &res)?);
        }
        out.config = serde_json::to_value(self)?;
        Ok(out)
    }
}

/// Ratio for the all-ones tuple: every norm of the constant 1 is 1.
pub fn unit_tuple_ratio(cfg: &MultiplicationAudit, size: usize) -> Result<TupleRatios> {
    let p = cfg.resolve_p()?;
    let sys = DyadicSystem::new(&Grid::new(cfg.dim, size, 2.0 * PI)?);
    let one = Field::constant(sys.grid(), Complex64::new(1.0, 0.0));
    let fields = vec![one; cfg.factors.len()];
    tuple_ratios(cfg, p, &fields, &sys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_hypotheses_hold() {
        AuditManifest::catalog().validate().unwrap();
    }

    #[test]
    fn identical_specs_give_unit_ratios() {
        let g = Grid::periodic(1, 128).unwrap();
        let sys = DyadicSystem::new(&g);
        let spec = SpaceSpec::besov(0.5, Exponent::new(2.0).unwrap(), Exponent::INFINITY);
        let bank: Vec<Field> = default_bank(128)
            .iter()
            .map(|s| s.generate(&sys).unwrap())
            .collect();
        for r in audit_embedding_fields(&spec, &spec, &bank, &sys).unwrap() {
            assert!((r.ratio.unwrap() - 1.0).abs() < 1e-14);
        }
        let zero = audit_embedding_fields(&spec, &spec, &[Field::zeros(&g)], &sys).unwrap();
        assert_eq!(zero[0].ratio, None);
    }

    #[test]
    fn unit_tuple_has_unit_ratio() {
        for cfg in theorem_catalog() {
            let r = unit_tuple_ratio(&cfg, 128).unwrap();
            assert!((r.total / r.rhs_core - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn failing_hypotheses_are_refused() {
        let cfg = MultiplicationAudit::new(
            TheoremMode::Negative,
            &[(-0.5, 2.0), (0.3, 2.0)],
            Exponent::new(2.0).unwrap(),
        );
        let err = audit_multiplication(&cfg, &[128]).unwrap_err();
        assert!(err.to_string().contains("s1 + s2 > 0"), "{err}");
    }

    #[test]
    fn tuples_are_reproducible_and_band_limited() {
        let cfg = &theorem_catalog()[2];
        let a = cfg.tuple_specs(3, 128).unwrap();
        assert_eq!(a, cfg.tuple_specs(3, 128).unwrap());
        let sys = DyadicSystem::new(&Grid::periodic(1, 256).unwrap());
        let fields: Vec<Field> = a.iter().map(|s| s.at_size(256).generate(&sys).unwrap()).collect();
        check_aliasing(&fields, &sys).unwrap();
    }
}
