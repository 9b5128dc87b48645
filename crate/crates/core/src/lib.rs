//! Exact analysis of eigenvalue phases of germs fixing the origin.
//!
//! The crate is layered bottom-up:
//!
//! * [`exact`] holds rationals, symbolic phases over an opaque symbol basis,
//!   Gaussian rationals and arbitrary-precision complex floats.
//! * [`lattice`] holds integer linear algebra: Hermite forms, kernels,
//!   Diophantine solving, Hilbert bases of affine monoids and the
//!   minimal/cominimal element machinery.
//! * [`toric`] computes toric degree, reduced tuples, torsion, resonance
//!   descriptors, the torsion classification and the normalization verdict.
//! * [`germ`] works on truncated jets: composition, torus-commutation checks,
//!   Poincaré–Dulac normalization to finite order and vector-field flows.
//!
//! Coordinates are 0-based throughout the library.

pub mod exact;
pub mod germ;
pub mod lattice;
pub mod toric;
