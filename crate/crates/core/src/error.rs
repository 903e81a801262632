use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degree {degree} is below the minimum {minimum}")]
    DegreeTooSmall { degree: usize, minimum: usize },

    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("disc is not isolated: isolation ratio {0} must exceed 1")]
    NotIsolated(f64),

    #[error("contour node {node} lies too close to a root (lg|p| = {log2_value:.1}); re-certify the isolation")]
    ContourProximity { node: usize, log2_value: f64 },

    #[error("Newton iteration stopped contracting after {iterations} iterations; the start is not certified")]
    NewtonDivergence { iterations: usize },

    #[error("discs {0} and {1} overlap")]
    OverlappingDiscs(usize, usize),

    #[error("root count mismatch: declared {declared}, estimated {estimated}")]
    RootCountMismatch { declared: usize, estimated: i64 },

    #[error("root count is ambiguous: k=0 error radius {0} is not below 1/2")]
    AmbiguousRootCount(f64),

    #[error("oracle root finder did not converge within {sweeps} sweeps")]
    OracleNonConvergence { sweeps: usize },

    #[error("oracle detected a multiple or near-multiple root near index {0}")]
    OracleMultipleRoot(usize),

    #[error("roots {0} and {1} are too clustered for the requested isolation")]
    TooClustered(usize, usize),

    #[error("parse error: {0}")]
    Parse(String),
}
