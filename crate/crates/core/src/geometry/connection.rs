//! Levi-Civita connection coefficients at a point.

use nalgebra::{DMatrix, DVector};

use super::distribution::VectorField;
use super::metric::{ut_index, MetricField, MetricJets};
use super::GeometryError;

/// Christoffel symbols `Γᵏᵢⱼ` at one point, symmetric in `(i, j)` exactly
/// (the lower index pair is stored packed).
#[derive(Debug, Clone)]
pub struct ConnectionAtPoint {
    n: usize,
    /// `gamma[k * n(n+1)/2 + packed(i, j)]`
    gamma: Vec<f64>,
}

impl ConnectionAtPoint {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `Γᵏᵢⱼ`; the two orders of `(i, j)` return the same value.
    pub fn gamma(&self, k: usize, i: usize, j: usize) -> f64 {
        let stride = self.n * (self.n + 1) / 2;
        self.gamma[k * stride + ut_index(self.n, i, j)]
    }

    /// Largest `|Γᵏᵢⱼ|`, used for scale normalization of residuals.
    pub fn max_abs(&self) -> f64 {
        self.gamma.iter().fold(0.0, |m, g| m.max(g.abs()))
    }
}

/// Inverts `g(x)`, checking the scale-aware degeneracy threshold first.
pub(crate) fn invert_metric_values(
    values: &DMatrix<f64>,
    x: &[f64],
) -> Result<DMatrix<f64>, GeometryError> {
    let threshold = MetricField::degeneracy_threshold(values);
    let det = values.determinant();
    if det.abs() <= threshold {
        return Err(GeometryError::DegenerateMetric {
            point: x.to_vec(),
            det,
            threshold,
        });
    }
    values
        .clone()
        .try_inverse()
        .ok_or(GeometryError::DegenerateMetric {
            point: x.to_vec(),
            det,
            threshold,
        })
}

/// Lowered Christoffel symbol `Γ_ij,k = (∂_i g_jk + ∂_j g_ik − ∂_k g_ij)/2`.
///
/// This is the coordinate-frame Koszul formula: the Lie-bracket terms of the
/// general formula vanish because coordinate fields commute.
#[inline]
pub(crate) fn gamma_lower(jets: &MetricJets, i: usize, j: usize, k: usize) -> f64 {
    0.5 * (jets.d(i, j, k) + jets.d(j, i, k) - jets.d(k, i, j))
}

pub(crate) fn christoffel_from_jets(
    jets: &MetricJets,
    ginv: &DMatrix<f64>,
) -> ConnectionAtPoint {
    let n = jets.n();
    let stride = n * (n + 1) / 2;
    let mut gamma = vec![0.0; n * stride];
    for i in 0..n {
        for j in i..n {
            let packed = ut_index(n, i, j);
            for m in 0..n {
                let lower = gamma_lower(jets, i, j, m);
                if lower == 0.0 {
                    continue;
                }
                for k in 0..n {
                    gamma[k * stride + packed] += ginv[(k, m)] * lower;
                }
            }
        }
    }
    ConnectionAtPoint { n, gamma }
}

/// Christoffel symbols of `g` at `x`: `Γᵏᵢⱼ = gᵏᵐ Γ_ij,m` with
/// `Γ_ij,m = (∂_i g_jm + ∂_j g_im − ∂_m g_ij)/2`.
pub fn christoffel(g: &MetricField, x: &[f64]) -> Result<ConnectionAtPoint, GeometryError> {
    let jets = g.eval_jets(x)?;
    let ginv = invert_metric_values(&jets.value_matrix(), x)?;
    Ok(christoffel_from_jets(&jets, &ginv))
}

/// Derivatives `(∇_{∂_i} v)ᵏ = ∂_i vᵏ + Γᵏᵢⱼ vʲ` for all `i`, as the columns
/// of an `n × n` matrix (column `i` is `∇_{∂_i} v`).
pub(crate) fn coordinate_covariant_derivatives(
    conn: &ConnectionAtPoint,
    v_values: &DVector<f64>,
    v_jacobian: &DMatrix<f64>,
) -> DMatrix<f64> {
    let n = conn.n();
    DMatrix::from_fn(n, n, |k, i| {
        let mut acc = v_jacobian[(i, k)];
        for j in 0..n {
            acc += conn.gamma(k, i, j) * v_values[j];
        }
        acc
    })
}

/// Covariant derivative `(∇_w v)(x)`, with components
/// `(∇_w v)ᵏ = w ⱼ ∂_j vᵏ + Γᵏᵢⱼ wⁱ vʲ`.
pub fn covariant_derivative(
    g: &MetricField,
    w: &VectorField,
    v: &VectorField,
    x: &[f64],
) -> Result<DVector<f64>, GeometryError> {
    let conn = christoffel(g, x)?;
    let (v_values, v_jac) = v.eval_with_jacobian(x)?;
    let w_values = w.eval(x)?;
    let per_direction = coordinate_covariant_derivatives(&conn, &v_values, &v_jac);
    Ok(per_direction * w_values)
}
