//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),

    #[error("map shape mismatch: expected {expected_rows}x{expected_cols}, got {rows}x{cols}")]
    MapShape { expected_rows: usize, expected_cols: usize, rows: usize, cols: usize },

    #[error("matrix is not Hermitian")]
    NotHermitian,

    #[error("matrix is not real symmetric")]
    NotSymmetric,

    #[error("subspace is not contained in the expected space")]
    NotContained,

    #[error("filtration is not monotone at index {0}")]
    FiltrationNotMonotone(i64),

    #[error("filtration steps must have rational bases (weight filtration over Q)")]
    FiltrationNotRational,

    #[error("map is not compatible with the filtrations at index {0}")]
    NotFiltered(i64),

    #[error("opposedness fails: Gr^{p}_F Gr^{q}_G has dimension {dim} off the weight diagonal")]
    NotOpposite { p: i64, q: i64, dim: usize },

    #[error("Hodge structure invalid at (p,q)=({p},{q}): {reason}")]
    InvalidHodgeStructure { p: i64, q: i64, reason: String },

    #[error("mixed Hodge structure invalid at weight {weight}: {source}")]
    InvalidMixedHodgeStructure { weight: i64, #[source] source: Box<Error> },

    #[error("polarization parity mismatch for weight {weight}")]
    PolarizationParity { weight: i64 },

    #[error("polarization form is degenerate")]
    DegeneratePolarization,

    #[error("differential does not square to zero at degree {0}")]
    NotAComplex(i64),

    #[error("filtration step is not a subcomplex: d(F^{level} K^{degree}) escapes")]
    NotASubcomplex { level: i64, degree: i64 },

    #[error("chain map does not commute with differentials at degree {0}")]
    NotAChainMap(i64),

    #[error("comparison map is not a quasi-isomorphism (cone has cohomology in degree {0})")]
    NotQuasiIso(i64),

    #[error("comparison map is not a filtered quasi-isomorphism (E_1 term ({p},{q}) not matched)")]
    NotFilteredQuasiIso { p: i64, q: i64 },

    #[error("homotopy certificate fails its defining identity at degree {0}")]
    BadHomotopy(i64),

    #[error("Hodge complex axiom HC1 fails: d^{degree} is not strict for F")]
    Hc1Fails { degree: i64 },

    #[error("Hodge complex axiom HC2 fails at degree {degree}: {source}")]
    Hc2Fails { degree: i64, #[source] source: Box<Error> },

    #[error("mixed Hodge complex axiom fails at weight {weight}: {source}")]
    MhcFails { weight: i64, #[source] source: Box<Error> },

    #[error("internal consistency violation (theorem guarantee broken): {0}")]
    Inconsistent(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
