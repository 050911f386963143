//! Lattice points of the modular group on hyperbolic circles.
//!
//! The orbit points `γ(i)` with `a²+b²+c²+d² = n` have the same angles, seen
//! from `i` in the disk model, as the integer points `(x, y)` with even `x`
//! on the Euclidean circle `x² + y² = n² − 4`. This crate enumerates both
//! sides exactly, builds the resulting angular measures, evaluates their
//! Fourier coefficients and discrepancy, and scans ranges of `n` for
//! equidistribution statistics.

pub mod angular;
pub mod density;
pub mod error;
pub mod hunt;
pub mod hyperbolic;
pub mod zint;
pub mod cli;

pub use error::{Error, Result};
