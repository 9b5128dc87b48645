//! Reads phase files and germ files and reports on them as JSON.
//!
//! Two line-oriented formats are accepted. A phase file declares symbols
//! and gives each coordinate of a phase vector:
//!
//! ```text
//! symbols sqrt2 i
//! phi 1 = 3 * sqrt2 + 4 * i
//! phi 2 = 1/2 - 1 * sqrt2
//! ```
//!
//! A germ file gives a jet with linear part in Jordan form:
//!
//! ```text
//! dim 2
//! maxdeg 4
//! lambda 1 = exact 1/2 + 0 I
//! lambda 2 = exact 1/4 + 0 I
//! term 2 (2,0) 1 + -3 I
//! ```
//!
//! Eigenvalues may instead be linked to phases, `lambda j = phase k`,
//! meaning `e^{2πiφ_k}` for the `phi` lines of the same file.

mod error;
mod parse;
mod print;
mod report;

pub use error::{CliError, ErrorKind, ParseError};
pub use parse::{parse_germ_file, parse_phase_file};
pub use print::{gaussian_text, phase_terms, print_germ_file, print_phase_file};
pub use report::{parse_weights, run, Command, Flags, DEFAULT_MAX_DEGREE, DEFAULT_PRECISION};
