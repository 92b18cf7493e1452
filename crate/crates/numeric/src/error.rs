use thiserror::Error;

pub type Result<T> = std::result::Result<T, NumericError>;

#[derive(Debug, Error)]
pub enum NumericError {
    #[error(transparent)]
    Core(#[from] tropaz_core::Error),
    #[error("quadrature needs a power-of-two node count of at least 16, got {0}")]
    InvalidQuadrature(usize),
    #[error("characteristic polynomial is not dominated by a single term at ({x}, {y})")]
    NearZeroOnTorus { x: String, y: String },
    #[error("no interior point found for the complement component of slope ({0},{1})")]
    EmptyComponentInterior(i64, i64),
    #[error("Kasteleyn matrix is singular on the integration contour")]
    SingularKasteleynOnContour,
    #[error("Aztec Kasteleyn matrix is singular")]
    SingularKasteleyn,
    #[error("size guard exceeded: {what} = {value} > {limit}")]
    SizeGuardExceeded { what: &'static str, value: usize, limit: usize },
    #[error("beta * max|log w| = {0} exceeds the guard {1}")]
    BetaGuard(f64, f64),
    #[error("Aztec size multiplier must be positive")]
    InvalidSize,
    #[error("height function inconsistency: {0}")]
    InconsistentHeight(String),
    #[error("not a dimer cover of the Aztec graph: {0}")]
    NotACover(String),
}

impl NumericError {
    /// Guard violations as opposed to invalid input.
    pub fn is_guard(&self) -> bool {
        matches!(
            self,
            NumericError::SizeGuardExceeded { .. }
                | NumericError::BetaGuard(..)
                | NumericError::NearZeroOnTorus { .. }
                | NumericError::Core(tropaz_core::Error::SizeGuardExceeded { .. })
        )
    }
}
