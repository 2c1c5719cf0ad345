use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported dimension {0}, expected 1, 2 or 3")]
    Dimension(usize),
    #[error("grid size {0} is not a power of two >= 16")]
    GridSize(usize),
    #[error("grid period must be positive and finite, got {0}")]
    Period(f64),
    #[error("grid too coarse: largest dyadic band is {jmax}, need at least 2")]
    GridTooSmall { jmax: i64 },
    #[error("expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("band index {j} outside 0..={jmax}")]
    BandOutOfRange { j: usize, jmax: usize },
    #[error("invalid exponent {0}: must be positive or infinite")]
    Exponent(f64),
    #[error("cannot parse exponent {0:?}")]
    ExponentParse(String),
    #[error("Triebel-Lizorkin quasi-norm requires p < inf")]
    TriebelInfiniteP,
    #[error("expected a {expected} space, got {got}")]
    FamilyMismatch { expected: &'static str, got: &'static str },
    #[error("need at least two factors, got {0}")]
    FactorCount(usize),
    #[error("gap {gap} is below the minimum {min} for {m} factors")]
    GapTooSmall { gap: usize, min: usize, m: usize },
    #[error("instance too large for direct enumeration: {0}")]
    InstanceTooLarge(String),
    #[error("band {j}: wavenumber {k} is not on the plateau of phi_j or outside the lattice")]
    OffPlateau { j: usize, k: i64 },
    #[error("spectral support radius {radius} exceeds the band limit {limit}")]
    BandLimit { radius: f64, limit: f64 },
    #[error("degenerate width {0}")]
    DegenerateWidth(f64),
    #[error("hypotheses not satisfied: {0}")]
    Hypothesis(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("zero field: ratio undefined")]
    ZeroField,
    #[error("malformed field file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
