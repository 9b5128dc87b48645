//! Truncated jets of germs and vector fields.
//!
//! Every identity here holds modulo degree `D+1`, where `D` is the
//! truncation degree carried by each jet. Coefficients are either exact
//! Gaussian rationals or [`ComplexBig`](crate::exact::ComplexBig) floats,
//! abstracted by [`Scalar`].

mod commute;
mod flow;
mod jet;
mod normalize;
mod poly;
mod scalar;
mod spectrum;

use thiserror::Error;

use crate::exact::{ExactError, MultiIndex};
use crate::toric::ToricError;

pub use commute::{commutation_check, commutation_spot_check, commutes_with_field, field_defect, CommutationReport};
pub use flow::{
    exact_diagonal, flow_exact, flow_normal_form_check, flow_numeric, flow_series, normal_form_witness,
    vf_toric_degree, FlowCheck, VfToricDegree,
};
pub use jet::{compose, lie_bracket, JetMap, JetVectorField};
pub use normalize::{pd_normalize, Normalization, PdNormalization, RESIDUAL_SLACK_BITS};
pub use poly::{monomials_of_degree, Monomial, Poly};
pub use scalar::{Scalar, NUMERIC_GUARD_BITS};
pub use spectrum::{recognize_symbol_values, Germ, Spectrum, SymbolValue};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GermError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("truncation degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("invalid jet: {0}")]
    InvalidJet(String),
    #[error("linear part is not in Jordan form: {0}")]
    NotJordan(String),
    #[error("the jet does not vanish at the origin")]
    NotSingular,
    #[error("zero divisor at non-resonant monomial {index:?} in coordinate {coordinate}")]
    ZeroDivisor { index: MultiIndex, coordinate: usize },
    #[error("divisor at {index:?} in coordinate {coordinate} is below 2^-(P/2) for P = {bits}")]
    Precision { index: MultiIndex, coordinate: usize, bits: u32 },
    #[error("no numeric value known for symbol {0}")]
    UnknownSymbolValue(String),
    #[error("an exact flow needs a nilpotent linear part")]
    NonNilpotentLinear,
    #[error("the flow series did not converge")]
    NoConvergence,
}
