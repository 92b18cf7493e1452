use crate::lattice::EdgeType;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the exact pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("periods must be positive (k = {k}, ell = {ell})")]
    NonPositivePeriod { k: i64, ell: i64 },
    #[error("malformed rational {value:?} for key {key}")]
    MalformedRational { key: String, value: String },
    #[error("missing log-weight for cell ({i},{j}) edge {ty:?}")]
    MissingEdgeWeight { i: usize, j: usize, ty: EdgeType },
    #[error("unexpected log-weight key {0:?}")]
    UnexpectedEdgeKey(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("edge set is not a perfect matching: {0}")]
    NotAPerfectMatching(String),
    #[error("size guard exceeded: {what} = {value} > {limit}")]
    SizeGuardExceeded { what: &'static str, value: usize, limit: usize },
    #[error("slope ({0},{1}) is not attained by any cover")]
    UnreachedSlope(i64, i64),
    #[error("slope ({0},{1}) is outside the Newton rectangle")]
    SlopeOutsideRectangle(i64, i64),
    #[error("slope sum ({0},{1}) is not divisible by {2}")]
    SlopeSumMismatch(i64, i64, usize),
    #[error("height function inconsistency: {0}")]
    HeightInconsistency(String),
    #[error("subdivision is not a unit triangulation")]
    NotSmooth,
    #[error("singular linear system: {0}")]
    SingularSystem(String),
    #[error("1-form fails at vertex {vertex}: {detail}")]
    InconsistentThirdEdge { vertex: usize, detail: String },
    #[error("point ({u}, {v}) lies outside the scaled Aztec domain")]
    OutsideDomain { u: String, v: String },
    #[error("vertex image of {vertex} lies outside the closed Aztec domain")]
    ImageOutsideDomain { vertex: usize },
    #[error("determinant of the maximizer Kasteleyn matrix is not a monomial")]
    NotMonomial,
    #[error("edge is not in the maximizer graph: {0}")]
    EdgeNotInMaximizerGraph(String),
    #[error("lifted component is unbounded")]
    UnboundedComponent,
}
