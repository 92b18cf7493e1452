//! Finite-temperature numerics in arbitrary precision.
//!
//! [`finite_beta`] evaluates the characteristic polynomial, the Ronkin
//! function, the surface tension and Gibbs edge marginals by quadrature on
//! the torus. [`aztec`] works on finite Aztec diamonds: Kasteleyn marginals,
//! expected heights, exact sampling and cover heights.

pub mod aztec;
pub mod error;
pub mod finite_beta;
pub mod scalar;

pub use error::{NumericError, Result};
pub use scalar::DEFAULT_PRECISION;

/// Largest accepted value of `beta * max |log w|`.
pub const BETA_GUARD: f64 = 1e4;
