//! The claim-checking suite: every identity a null parallel plane forces on
//! its metric, evaluated at deterministically sampled points and collected
//! into a structured, reproducible report.
//!
//! Checks come in three groups:
//!
//! - geometric claims about the plane — nullity ([`check_null`]),
//!   parallelism ([`check_parallel`]), parallelism of the orthogonal
//!   complement ([`check_orthocomplement_parallel`]), and the dimension and
//!   signature bounds ([`check_inclusions_and_bounds`]);
//! - curvature consequences — the vanishing slots of the lowered tensor
//!   ([`check_curvature_relations`]);
//! - self-tests of the differential pipeline — metric compatibility of the
//!   connection ([`check_metric_compatibility`]) and the first Bianchi
//!   identity plus pair symmetry ([`check_curvature_identities`]).
//!
//! [`run_full_report`] runs all of them (plus the canonical block-form
//! facets when a null-plane rank is declared) and produces a
//! [`VerificationReport`] that renders to JSON or plain text byte-identically
//! across runs for a fixed input and seed.

mod checks;
mod report;

pub use checks::{
    check_curvature_identities, check_curvature_relations, check_inclusions_and_bounds,
    check_metric_compatibility, check_null, check_orthocomplement_parallel, check_parallel,
    run_full_report, ReportConfig,
};
pub use checks::{ANGLE_TOL, DEFAULT_IDENTITY_TOL, EXACT_ZERO_TOL, FD_ORACLE_TOL};
pub use report::{metric_fingerprint, CheckResult, Conventions, VerificationReport, Verdict, CONVENTIONS};
