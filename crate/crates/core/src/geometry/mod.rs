//! Metric tensors, the Levi-Civita connection, curvature, signatures,
//! distributions, and orthogonal complements — all evaluated pointwise.

pub mod algebra;
mod connection;
mod curvature;
mod distribution;
mod metric;

pub use algebra::Signature;
pub use connection::{christoffel, covariant_derivative, ConnectionAtPoint};
pub(crate) use connection::{christoffel_from_jets, coordinate_covariant_derivatives, invert_metric_values};
pub use curvature::{curvature, CurvatureAtPoint};
pub use distribution::{Distribution, VectorField};
pub use metric::{MetricField, MetricJets};

use nalgebra::DMatrix;
use thiserror::Error;

use crate::expr::EvalError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error(
        "metric is degenerate at {point:?}: |det g| = {det:.3e} does not exceed \
         the threshold {threshold:.3e}"
    )]
    DegenerateMetric {
        point: Vec<f64>,
        det: f64,
        threshold: f64,
    },
    #[error("distribution is rank-deficient at {point:?}: rank {found}, expected {expected}")]
    RankDeficient {
        point: Vec<f64>,
        found: usize,
        expected: usize,
    },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Eigenvalue sign counts of `g(x)`.
///
/// At a nondegenerate point `i_minus + i_plus = n`; a zero eigenvalue (up to
/// a scale-aware tolerance) is reported as a degenerate-metric error.
pub fn signature(g: &MetricField, x: &[f64]) -> Result<Signature, GeometryError> {
    let values = g.eval_matrix(x)?;
    let zero_tol = 1e-12 * values.amax().max(1.0);
    let (i_minus, i_plus, zeros) = algebra::eigenvalue_sign_counts(&values, zero_tol);
    if zeros > 0 {
        return Err(GeometryError::DegenerateMetric {
            point: x.to_vec(),
            det: values.determinant(),
            threshold: MetricField::degeneracy_threshold(&values),
        });
    }
    Ok(Signature { i_minus, i_plus })
}

/// Basis of the `g(x)`-orthogonal complement of a subspace, given the matrix
/// of metric values and a full-column-rank basis of the subspace: the null
/// space of the pairing matrix `basisᵀ g(x)`.
pub(crate) fn orthogonal_complement_of_values(
    values: &DMatrix<f64>,
    basis: &DMatrix<f64>,
    x: &[f64],
) -> Result<DMatrix<f64>, GeometryError> {
    let n = values.nrows();
    let m = basis.ncols();
    let rank_tol = 1e-10 * basis.amax().max(1.0);
    let found = algebra::rank_with_tol(basis, rank_tol);
    if found < m {
        return Err(GeometryError::RankDeficient {
            point: x.to_vec(),
            found,
            expected: m,
        });
    }
    let pairing = basis.transpose() * values;
    let pairing_tol = 1e-12 * pairing.amax().max(1.0);
    let complement = algebra::nullspace(&pairing, pairing_tol);
    if complement.ncols() != n - m {
        // g nondegenerate and the basis full-rank force the pairing to have
        // rank m; a mismatch means the tolerances disagree about a pivot.
        return Err(GeometryError::RankDeficient {
            point: x.to_vec(),
            found: n - complement.ncols(),
            expected: m,
        });
    }
    Ok(complement)
}

/// Basis of the `g`-orthogonal complement of `D` at `x`: the null space of
/// the `m × n` pairing matrix `g(x)(v_a, ·)`, returned as the columns of an
/// `n × (n − m)` matrix.
pub fn orthogonal_complement(
    g: &MetricField,
    d: &Distribution,
    x: &[f64],
) -> Result<DMatrix<f64>, GeometryError> {
    let values = g.eval_matrix(x)?;
    let basis = d.basis_matrix_at(x)?;
    orthogonal_complement_of_values(&values, &basis, x)
}
