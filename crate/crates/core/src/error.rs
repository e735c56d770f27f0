use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("element is not hyperbolic (|trace| = {0})")]
    NotHyperbolic(f64),
    #[error("numerically ambiguous configuration: {0}")]
    NumericallyAmbiguous(String),
    #[error("the two curves share a geodesic")]
    SharedGeodesic,
    #[error("translate search exceeded its budget of {0} elements")]
    BallTooSmall(usize),
    #[error("invalid pants graph: {0}")]
    InvalidGraph(String),
    #[error("holonomy validation failed: {0}")]
    ValidationFailed(String),
    #[error("enumeration budget exceeded ({0} nodes)")]
    BudgetExceeded(usize),
    #[error("basis pairing is not unimodular (det = {0})")]
    DegenerateBasis(i64),
    #[error("curve table is empty")]
    EmptyTable,
    #[error("no dual curve found below the cutoff for {0}")]
    NoDualFound(String),
    #[error("regime violation on curve {0}")]
    RegimeViolation(String),
    #[error("curve misses edge {0}")]
    CurveDisjoint(usize),
    #[error("no witness found after {0} candidate subsets")]
    NotFound(usize),
    #[error("homology classes of the table have rank {0} < {1}")]
    RankDeficient(usize, usize),
    #[error("curve crosses the separating multicurve: {0}")]
    AmbiguousSide(String),
    #[error("invalid word: {0}")]
    InvalidWord(String),
}

pub type Result<T> = std::result::Result<T, Error>;
