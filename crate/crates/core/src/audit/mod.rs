//! Numerical audits of inequalities that hold with unspecified constants.
//!
//! Each check produces an [`AuditRecord`] holding both sides of the
//! inequality and their ratio, the empirical constant. Records carry a
//! reference bound only when one is known (proved, calibrated on the frozen
//! bank, or a fixed gate); only those can fail.

pub mod lemmas;
pub mod record;
pub mod suite;
pub mod sweeps;

pub use lemmas::{
    check_delta_lt, check_hardy, check_maximal_qsup, check_nikolskii, check_qj_lp, check_qj_lt,
    hardy_bound, nikolskii_scaling, NikolskiiProfile,
};
pub use record::{AuditRecord, Provenance, ReferenceBound, SweepResult, Verdict};
pub use suite::{run_lemmas, Lemma, LemmaConfig};
pub use sweeps::{
    audit_embedding, audit_multiplication, AuditManifest, EmbeddingAudit, MultiplicationAudit,
};
