//! Discrete Littlewood-Paley analysis on periodic grids.
//!
//! Fields live on the torus `[0, L)^n` sampled on a power-of-two grid. The
//! crate provides the dyadic resolution of unity, Besov and
//! Triebel-Lizorkin quasi-norms, the paraproduct splitting of
//! multi-factor products, deterministic test fields, and numerical audits
//! of the classical inequalities that hold between them.

pub mod audit;
pub mod dyadic;
pub mod error;
pub mod exponent;
pub mod field;
pub mod grid;
pub mod hypotheses;
pub mod io;
pub mod norms;
pub mod paraproduct;
pub mod testbank;

pub use dyadic::{BandDecomposition, DyadicSystem};
pub use error::{Error, Result};
pub use exponent::Exponent;
pub use field::{Domain, Field};
pub use grid::Grid;
pub use hypotheses::{EmbeddingMode, HypothesisReport, TheoremMode};
pub use norms::{besov_norm, lp_norm, space_norm, triebel_norm, Family, SpaceSpec};
pub use paraproduct::{decompose_product, dealiased_product, min_gap, ProductDecomposition};
pub use testbank::{GeneratorKind, GeneratorSpec};
