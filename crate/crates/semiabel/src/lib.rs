//! Numerical machinery for semi-abelian varieties over elliptic curves.
//!
//! The crate evaluates Weierstrass functions on period lattices, builds the
//! exponential and logarithm maps of an extension of an elliptic curve by the
//! multiplicative group, computes the analytic Weil pairing, and detects the
//! dimension invariants of 1-motives with an integer-relation engine.

pub mod classifier;
pub mod elliptic;
pub mod error;
pub mod lattice;
pub mod pairing;
pub mod periods;
pub mod quadrature;
pub mod relation;
pub mod report;
pub mod semiabelian;

pub use num_complex::Complex64;

pub use error::{Error, Result};
pub use lattice::{duality_product, DualLattice, Lattice, RealCoordinates};
