//! Construction and pointwise verification of pseudo-Riemannian metrics that
//! carry a null parallel distribution.
//!
//! The crate builds metrics in the canonical block form
//! `[[0, 0, I], [0, A, H], [I, Hᵀ, B]]` (Walker coordinates), in which the
//! first `r` coordinate fields span a null distribution preserved by the
//! Levi-Civita connection, and then checks the geometric consequences —
//! nullity, parallelism, orthogonal complements, signature bounds, curvature
//! identities, and the dimension counts of the bilinear-extension problems —
//! numerically at deterministically sampled points.
//!
//! Differentiation is exact: metric entries are closed-form expressions
//! ([`expr::ScalarField`]) evaluated with order-2 forward-mode jets
//! ([`expr::Jet2`]), so Christoffel symbols and curvature components carry no
//! truncation error, only rounding.
//!
//! Module layout:
//!
//! - [`expr`] — expression trees, text parsing/printing, jet evaluation;
//! - [`geometry`] — metrics, connections, curvature, signatures, complements;
//! - [`walker`] — canonical-form assembly, form checking, extension problems,
//!   seeded instance generation, and the on-disk text format;
//! - [`verify`] — the claim-checking suite and its structured report;
//! - [`sample`] — deterministic point sampling.

pub mod expr;
pub mod geometry;
pub mod sample;
pub mod verify;
pub mod walker;
