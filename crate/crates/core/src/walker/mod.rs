//! Canonical-form metrics carrying a null parallel plane field.
//!
//! In suitable coordinates `x1..xn`, every metric admitting an `r`-dimensional
//! null parallel distribution takes the block shape
//!
//! ```text
//!       ⎡ 0   0   I ⎤   rows 1..r
//! (g) = ⎢ 0   A   H ⎥   rows r+1..n−r
//!       ⎣ I   Hᵀ  B ⎦   rows n−r+1..n
//! ```
//!
//! where `A` is symmetric nonsingular, `B` is symmetric, and `A`, `H` do not
//! involve the first `r` coordinates; the distribution is spanned by the
//! first `r` coordinate fields. This module builds such metrics from their
//! blocks ([`WalkerData`]), checks a given metric against the block pattern
//! ([`walker_form_check`]), generates random admissible instances
//! ([`generate_walker_data`]), reads and writes a plain-text block format,
//! and realizes the pointwise extension problems whose solutions parameterize
//! the construction: completing a partially prescribed bilinear pairing
//! ([`extend_partial_pairing`]) and completing a partially prescribed
//! symmetric form to a full metric ([`extend_partial_metric`]).

mod data;
mod extend;
mod form_check;
mod format;
mod gen;

pub use data::{assemble, canonical_distribution, mid_dimensional_assemble};
pub use data::{Block, CoordinateSplit, WalkerData};
pub use extend::{adapted_basis, extend_partial_metric, extend_partial_pairing};
pub use extend::{ExtendedMetric, PartialFibreMetricAtPoint, PartialPairingAtPoint};
pub use form_check::{walker_form_check, FormCheckReport, SubCheck};
pub use form_check::{BLOCK_PATTERN_TOL, INDEPENDENCE_TOL};
pub(crate) use form_check::block_pattern_residual;
pub use format::{parse_walker_text, write_walker_text, WalkerFormatError};
pub use gen::generate_walker_data;

use thiserror::Error;

/// Violations of the block-form invariants or of the extension-problem
/// preconditions. Block row/column indices display 1-based, matching the
/// coordinate names `x1..xn`.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkerError {
    #[error("r = {r} is out of range for n = {n}: need 2r ≤ n (and r ≥ 1 where a plane is required)")]
    RankRange { n: usize, r: usize },
    #[error(
        "block {block} has shape {found_rows}×{found_cols}, expected {expected_rows}×{expected_cols}"
    )]
    BlockShape {
        block: &'static str,
        expected_rows: usize,
        expected_cols: usize,
        found_rows: usize,
        found_cols: usize,
    },
    #[error(
        "block {block} is not symmetric: entry ({}, {}) does not match entry ({}, {})",
        row + 1, col + 1, col + 1, row + 1
    )]
    AsymmetricBlock {
        block: &'static str,
        row: usize,
        col: usize,
    },
    #[error(
        "entry {block}[{}][{}] depends on x{}; the A and H blocks must not involve the first r coordinates",
        row + 1, col + 1, coordinate + 1
    )]
    ForbiddenCoordinate {
        block: &'static str,
        row: usize,
        col: usize,
        coordinate: usize,
    },
    #[error("{name} has rank {found}, expected {expected}")]
    RankDeficient {
        name: &'static str,
        found: usize,
        expected: usize,
    },
    #[error("the smaller subspace is not contained in the larger one (inclusion residual {sine:.3e})")]
    NotNested { sine: f64 },
    #[error("the two prescribed pieces disagree on the common subspace (max difference {mismatch:.3e})")]
    InconsistentPrescription { mismatch: f64 },
    #[error("partial fibre metric violates its defining constraints: {message}")]
    InvalidPartialMetric { message: String },
}
