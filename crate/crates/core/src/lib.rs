//! Exact zero-temperature analysis of doubly periodic dimer models on the
//! square lattice and of the Aztec diamond built from them.
//!
//! The pipeline runs on exact rationals end to end:
//!
//! 1. [`lattice`] turns a periodic table of log-weights into the weighted torus graph.
//! 2. [`covers`] enumerates torus dimer covers and tabulates the tropical surface tension.
//! 3. [`newton`] lifts the tension over the Newton rectangle and extracts the regular subdivision.
//! 4. [`tropical_curve`] builds the dual tropical curve.
//! 5. [`kirchhoff`] solves the dual Kirchhoff problem and recovers the exact 1-form on the curve.
//! 6. [`action`] classifies phases, maps curve vertices to the arctic curve and evaluates the limit shape.
//! 7. [`gibbs0`] computes zero-temperature Gibbs edge probabilities from Laurent Kasteleyn matrices.
//!
//! [`model::TropicalModel`] chains every stage for a single domain.

pub mod action;
pub mod covers;
pub mod error;
pub mod gibbs0;
pub mod kirchhoff;
pub mod lattice;
pub mod laurent;
pub mod linalg;
pub mod matching;
pub mod model;
pub mod newton;
pub mod rational;
pub mod tropical_curve;

pub use error::{Error, Result};
pub use rational::Rational;
