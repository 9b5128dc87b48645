//! Toric degree, torsion, resonance descriptors and the torsion classification.
//!
//! Every resonance set is described by an affine monoid: additive equations
//! `⟨Q,ρ⟩ = ρ_j`, optionally one congruence `⟨Q,η⟩ ≡ η_j (mod m)`, solved
//! exhaustively over `ℕⁿ`. Decisions taken on generators and minimal
//! solutions are complete because all conditions involved are additive.

mod classify;
mod resonance;
mod tuple;

use num_bigint::BigInt;
use thiserror::Error;

use crate::exact::{ExactError, MultiIndex};
use crate::lattice::LatticeError;

pub use classify::{
    classify, classify_with, impure_coordinates, normalization_verdict, simplify_search,
    validate_simple_tuple, verdict_from_classification, Classification, ClassificationKind,
    Criterion, NormalizationVerdict, NotFoundReason, SearchOptions, Simplification,
    SimplifyOutcome, DEFAULT_VERIFY_DEGREE,
};
pub use resonance::{
    compatible, enumerate_resonances, resonance_descriptor, theta_resonant, ResonanceDescriptor,
};
pub(crate) use tuple::rational_rank;
pub use tuple::{
    eliminate_rational_coefficient, reduce_tuple, toric_analysis, torsion, ToricAnalysis,
    ToricTuple, TorsionReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToricError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("the phase class is torsion-free")]
    TorsionFree,
    #[error("the rational coefficient cannot be eliminated: torsion is {tau}")]
    NotEliminable { tau: BigInt },
    #[error("not in the pure torsion case")]
    NotPure,
    #[error("invalid toric tuple: {0}")]
    InvalidTuple(String),
    #[error("the tuple does not represent the phase class")]
    Mismatch,
    #[error("coordinate {index} out of range for dimension {dim}")]
    CoordinateOutOfRange { index: usize, dim: usize },
    #[error("descriptor and exact oracle disagree on {index:?} at coordinate {coordinate}")]
    OracleMismatch { index: MultiIndex, coordinate: usize },
}
