//! Arithmetic validators for embedding and multiplication hypotheses.
//!
//! Validators never fail on bad parameters: every condition is listed with
//! its numbers and a verdict, and `satisfied` is their conjunction.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::norms::{Family, SpaceSpec};
use crate::paraproduct::min_gap;

/// Tolerance for equalities between real parameters.
pub const PARAM_EPS: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub detail: String,
    pub passed: bool,
}

/// `(lower, upper]`, or `(lower, upper)` when `upper_inclusive` is false.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
    pub upper_inclusive: bool,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        x > self.lower && (x < self.upper || (self.upper_inclusive && x <= self.upper))
    }

    pub fn is_empty(&self) -> bool {
        self.lower.partial_cmp(&self.upper) != Some(std::cmp::Ordering::Less)
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub satisfied: bool,
    pub conditions: Vec<Condition>,
    pub derived: BTreeMap<String, f64>,
    /// Admissible values of `1/p` for the product target space.
    pub admissible_inv_p: Option<Interval>,
}

impl HypothesisReport {
    fn check(&mut self, name: &str, passed: bool, detail: String) {
        self.conditions.push(Condition {
            name: name.to_string(),
            detail,
            passed,
        });
    }

    fn finish(mut self) -> Self {
        self.satisfied = self.conditions.iter().all(|c| c.passed);
        self
    }

    pub fn failed(&self) -> impl Iterator<Item = &Condition> {
        self.conditions.iter().filter(|c| !c.passed)
    }

    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }

    /// Names of failed conditions, comma separated.
    pub fn failure_summary(&self) -> String {
        self.failed()
            .map(|c| format!("{} ({})", c.name, c.detail))
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// Turns an unsatisfied report into [`Error::Hypothesis`].
    pub fn require(&self) -> Result<()> {
        if self.satisfied {
            Ok(())
        } else {
            Err(Error::Hypothesis(self.failure_summary()))
        }
    }

    /// Midpoint of the admissible `1/p` interval, as an exponent.
    pub fn suggested_p(&self) -> Option<Exponent> {
        let iv = self.admissible_inv_p?;
        if iv.is_empty() {
            return None;
        }
        Exponent::finite(1.0 / iv.midpoint()).ok()
    }
}

fn eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= PARAM_EPS * (1.0 + a.abs().max(b.abs()))
}

fn ge(a: f64, b: f64) -> bool {
    a > b || eq(a, b)
}

fn gt(a: f64, b: f64) -> bool {
    a > b && !eq(a, b)
}

fn exp_le(a: Exponent, b: Exponent) -> bool {
    b.is_infinite() || (!a.is_infinite() && ge(b.value(), a.value()))
}

fn exp_eq(a: Exponent, b: Exponent) -> bool {
    a.is_infinite() == b.is_infinite() && (a.is_infinite() || eq(a.value(), b.value()))
}

fn min_exp(a: Exponent, b: Exponent) -> Exponent {
    if exp_le(a, b) {
        a
    } else {
        b
    }
}

fn max_exp(a: Exponent, b: Exponent) -> Exponent {
    if exp_le(a, b) {
        b
    } else {
        a
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmbeddingMode {
    /// `A^{s0}_{p0,q0} ↪ A^{s1}_{p1,q1}` within one family.
    SameFamily,
    /// `B ↪ F` or `F ↪ B` along a fixed differential dimension.
    FrankeJawerth,
}

/// Conditions for `source ↪ target` in dimension `n`.
pub fn check_embedding_hypotheses(
    source: &SpaceSpec,
    target: &SpaceSpec,
    n: usize,
    mode: EmbeddingMode,
) -> HypothesisReport {
    let mut r = HypothesisReport::default();
    let dd0 = source.differential_dimension(n);
    let dd1 = target.differential_dimension(n);
    r.derived.insert("source_differential_dimension".into(), dd0);
    r.derived.insert("target_differential_dimension".into(), dd1);
    let same_dd = eq(dd0, dd1);
    let dd_text = format!("s0 - n/p0 = {dd0}, s1 - n/p1 = {dd1}");

    match mode {
        EmbeddingMode::SameFamily => {
            r.check(
                "same family",
                source.family == target.family,
                format!("{} -> {}", source.family.symbol(), target.family.symbol()),
            );
            let lifting = gt(source.s, target.s) && exp_eq(source.p, target.p);
            let sobolev = ge(source.s, target.s) && same_dd;
            r.check(
                "smoothness regime",
                lifting || sobolev,
                format!(
                    "s0 > s1 and p0 = p1: {lifting} (s0 = {}, s1 = {}, p0 = {}, p1 = {}); \
                     s0 >= s1 and equal differential dimension: {sobolev} ({dd_text})",
                    source.s, target.s, source.p, target.p
                ),
            );
            if source.family == Family::Besov && sobolev && !lifting {
                r.check(
                    "q0 <= q1 (Besov)",
                    exp_le(source.q, target.q),
                    format!("q0 = {}, q1 = {}", source.q, target.q),
                );
            }
            if eq(source.s, target.s) {
                r.check(
                    "q0 <= q1 at equal smoothness",
                    exp_le(source.q, target.q),
                    format!("q0 = {}, q1 = {}", source.q, target.q),
                );
            }
        }
        EmbeddingMode::FrankeJawerth => {
            let pattern = (source.family, target.family);
            let fj_pattern = matches!(
                pattern,
                (Family::Besov, Family::TriebelLizorkin) | (Family::TriebelLizorkin, Family::Besov)
            );
            r.check(
                "family pattern B->F or F->B",
                fj_pattern,
                format!("{} -> {}", source.family.symbol(), target.family.symbol()),
            );
            r.check(
                "finite integrability",
                !source.p.is_infinite() && !target.p.is_infinite(),
                format!("p0 = {}, p1 = {}", source.p, target.p),
            );
            r.check("equal differential dimension", same_dd, dd_text);
            if pattern == (Family::Besov, Family::TriebelLizorkin) {
                // B^{s0}_{p0,q0} ↪ F^{s}_{p,q}
                let (f, b) = (target, source);
                let strict = gt(b.s, f.s) && exp_le(b.q, f.p);
                let equal = eq(b.s, f.s) && exp_le(b.q, min_exp(f.p, f.q));
                r.check(
                    "smoothness regime",
                    strict || equal,
                    format!(
                        "s0 > s and q0 <= p: {strict}; s0 = s and q0 <= min(p,q): {equal} \
                         (s0 = {}, s = {}, q0 = {}, p = {}, q = {})",
                        b.s, f.s, b.q, f.p, f.q
                    ),
                );
            } else if pattern == (Family::TriebelLizorkin, Family::Besov) {
                // F^{s}_{p,q} ↪ B^{s1}_{p1,q1}
                let (f, b) = (source, target);
                let strict = gt(f.s, b.s) && exp_le(f.p, b.q);
                let equal = eq(f.s, b.s) && exp_le(max_exp(f.p, f.q), b.q);
                r.check(
                    "smoothness regime",
                    strict || equal,
                    format!(
                        "s > s1 and p <= q1: {strict}; s = s1 and q1 >= max(p,q): {equal} \
                         (s = {}, s1 = {}, p = {}, q = {}, q1 = {})",
                        f.s, b.s, f.p, f.q, b.q
                    ),
                );
            }
        }
    }
    r.finish()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremMode {
    /// `0 < s1 < s2 ≤ ... ≤ sm` and `s1 < n/p1`.
    Positive,
    /// `s1 ≤ 0 < s2 ≤ ... ≤ sm` and `s1 + s2 > 0`.
    Negative,
}

/// Conditions for `F^{s1}_{p1,q} · B^{s2}_{p2,∞} ⋯ B^{sm}_{pm,∞} ↪ F^{s1}_{p,q}`.
///
/// `params[i] = (s_i, p_i)`. When `target_p` is given it must fall inside
/// the admissible range of `p`.
pub fn check_theorem_hypotheses(
    params: &[(f64, Exponent)],
    q: Exponent,
    n: usize,
    mode: TheoremMode,
    target_p: Option<Exponent>,
) -> Result<HypothesisReport> {
    let m = params.len();
    if m < 2 {
        return Err(Error::FactorCount(m));
    }
    let nf = n as f64;
    let mut r = HypothesisReport::default();
    let (s1, p1) = params[0];
    r.derived.insert("m".into(), m as f64);
    r.derived.insert("gap".into(), min_gap(m)? as f64);
    r.derived.insert("q".into(), q.value());

    r.check(
        "1 <= p1 < inf",
        !p1.is_infinite() && ge(p1.value(), 1.0),
        format!("p1 = {p1}"),
    );

    let s: Vec<f64> = params.iter().map(|(s, _)| *s).collect();
    let tail_sorted = s[1..].windows(2).all(|w| ge(w[1], w[0]));
    let chain = s
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    match mode {
        TheoremMode::Positive => {
            r.check(
                "cond1: 0 < s1 < s2 <= ... <= sm",
                gt(s[0], 0.0) && gt(s[1], s[0]) && tail_sorted,
                format!("s = ({chain})"),
            );
            let limit = nf * p1.reciprocal();
            r.check(
                "s1 < n/p1",
                gt(limit, s1),
                format!("s1 = {s1}, n/p1 = {limit}"),
            );
        }
        TheoremMode::Negative => {
            r.check(
                "Cond5.1: s1 <= 0 < s2 <= ... <= sm",
                ge(0.0, s[0]) && gt(s[1], 0.0) && tail_sorted,
                format!("s = ({chain})"),
            );
            r.check(
                "s1 + s2 > 0",
                gt(s[0] + s[1], 0.0),
                format!("s1 + s2 = {}", s[0] + s[1]),
            );
        }
    }

    let mut lower = p1.reciprocal();
    let mut upper = p1.reciprocal();
    for (i, &(si, pi)) in params.iter().enumerate().skip(1) {
        let h_lo = (pi.reciprocal() - si / nf).max(0.0);
        let h_hi = pi.reciprocal();
        r.derived.insert(format!("inv_h{}_lower", i + 1), h_lo);
        r.derived.insert(format!("inv_h{}_upper", i + 1), h_hi);
        r.check(
            &format!("cond2.2[{}]: (1/p{i1} - s{i1}/n)_+ < 1/h{i1} <= 1/p{i1} admits h{i1}", i + 1, i1 = i + 1),
            gt(h_hi, h_lo),
            format!("{h_lo} < 1/h <= {h_hi}"),
        );
        lower += h_lo;
        upper += h_hi;
    }
    let interval = Interval {
        lower,
        upper: upper.min(1.0),
        upper_inclusive: upper < 1.0,
    };
    r.derived.insert("inv_p_lower".into(), interval.lower);
    r.derived.insert("inv_p_upper".into(), interval.upper);
    r.check(
        "cond2.1: 1/p = 1/p1 + sum 1/h_i < 1 is attainable",
        !interval.is_empty() && gt(1.0, lower),
        format!(
            "1/p in ({lower}, {}{}",
            interval.upper,
            if interval.upper_inclusive { "]" } else { ")" }
        ),
    );
    r.admissible_inv_p = Some(interval);

    if let Some(p) = target_p {
        let inv = p.reciprocal();
        r.check(
            "target p inside admissible range",
            !p.is_infinite() && interval.contains(inv),
            format!("1/p = {inv}"),
        );
    }
    Ok(r.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: f64) -> Exponent {
        Exponent::new(v).unwrap()
    }

    #[test]
    fn besov_sobolev_embedding_in_plane() {
        let src = SpaceSpec::besov(2.0, e(1.0), e(1.0));
        let dst = SpaceSpec::besov(1.0, e(2.0), e(2.0));
        let r = check_embedding_hypotheses(&src, &dst, 2, EmbeddingMode::SameFamily);
        assert!(r.satisfied, "{r:?}");
        assert_eq!(r.derived["source_differential_dimension"], 0.0);
    }

    #[test]
    fn reflexive_and_reversed() {
        let f = SpaceSpec::triebel(0.5, e(2.0), e(3.0)).unwrap();
        assert!(check_embedding_hypotheses(&f, &f, 1, EmbeddingMode::SameFamily).satisfied);
        let a = SpaceSpec::besov(1.0, e(1.0), Exponent::INFINITY);
        let b = SpaceSpec::besov(2.0, e(1.0), e(1.0));
        let r = check_embedding_hypotheses(&a, &b, 1, EmbeddingMode::SameFamily);
        assert!(!r.satisfied);
        assert!(!r.condition("smoothness regime").unwrap().passed);
    }

    #[test]
    fn positive_theorem_needs_strict_s1_below_n_over_p1() {
        let r = check_theorem_hypotheses(
            &[(0.5, e(2.0)), (1.0, e(2.0))],
            e(2.0),
            1,
            TheoremMode::Positive,
            None,
        )
        .unwrap();
        let iv = r.admissible_inv_p.unwrap();
        assert_eq!((iv.lower, iv.upper, iv.upper_inclusive), (0.5, 1.0, false));
        assert!(!r.condition("s1 < n/p1").unwrap().passed);
        assert!(!r.satisfied);

        let r = check_theorem_hypotheses(
            &[(0.4, e(2.0)), (1.0, e(2.0))],
            e(2.0),
            1,
            TheoremMode::Positive,
            None,
        )
        .unwrap();
        assert!(r.satisfied, "{}", r.failure_summary());
        assert!((r.suggested_p().unwrap().value() - 1.0 / 0.75).abs() < 1e-12);
    }

    #[test]
    fn negative_theorem_sign_gate() {
        let r = check_theorem_hypotheses(
            &[(-0.5, e(2.0)), (0.3, e(2.0))],
            e(2.0),
            1,
            TheoremMode::Negative,
            None,
        )
        .unwrap();
        assert!(!r.satisfied);
        assert!(!r.condition("s1 + s2 > 0").unwrap().passed);
    }

    #[test]
    fn ordering_violation_is_flagged() {
        let r = check_theorem_hypotheses(
            &[(0.2, e(2.0)), (2.0, e(2.0)), (1.0, e(2.0))],
            e(2.0),
            1,
            TheoremMode::Positive,
            None,
        )
        .unwrap();
        assert!(!r.satisfied);
        assert!(!r.condition("cond1: 0 < s1 < s2 <= ... <= sm").unwrap().passed);
    }

    #[test]
    fn single_factor_is_an_error() {
        assert!(matches!(
            check_theorem_hypotheses(&[(1.0, e(2.0))], e(2.0), 1, TheoremMode::Positive, None),
            Err(Error::FactorCount(1))
        ));
    }
}
