//! K-stability data for Fano pairs `(X, D)`.
//!
//! * [`exact`]: rational arithmetic, interpolation and Beta integrals.
//! * [`futaki`]: pair Futaki invariants from expansion coefficients.
//! * [`normal_cone`]: the deformation to the normal cone as exact sequences.
//! * [`projective`]: Fubini–Study quadrature, centers of mass, Chow weights.
//! * [`models`]: concrete cycles (rational normal curves, chains of lines,
//!   the approximately balanced degenerations of the line with two points).
//! * [`balancing`]: the balancing fixed-point map and Chow-weight
//!   monotonicity scans.
//! * [`asymptotics`]: Chow weights of the normal-cone central fiber at
//!   `n = 1` against the exact Futaki value.

pub mod asymptotics;
pub mod balancing;
mod error;
pub mod exact;
pub mod futaki;
pub mod models;
pub mod normal_cone;
pub mod projective;
pub mod sampling;

pub use error::{Error, Result};
pub use exact::Rational;
