//! Curvature tensor components at a point.
//!
//! Sign convention, pinned here and asserted by the flat-space and
//! constant-curvature tests: the curvature operator is
//!
//! ```text
//! R(u, v)ψ = ∇_v ∇_u ψ − ∇_u ∇_v ψ + ∇_{[u,v]} ψ
//! ```
//!
//! and the fully lowered components are `R_ijkl = g(R(∂_i, ∂_j)∂_k, ∂_l)`.
//! In coordinate frames the bracket term vanishes and
//!
//! ```text
//! Rˡ_ijk = ∂_j Γˡ_ik − ∂_i Γˡ_jk + Γᵐ_ik Γˡ_jm − Γᵐ_jk Γˡ_im,
//! R_ijkl = g_lm Rᵐ_ijk.
//! ```
//!
//! With this choice the round sphere `diag(1, sin²x1)` has
//! `R_1212 = +sin²x1`, and the plane-wave block metric of the tests has
//! `R_2424 = −1`. Note the operator is the negative of another common
//! textbook convention; all downstream checks use the same fixed choice.

use nalgebra::DMatrix;

use super::connection::{christoffel_from_jets, gamma_lower, invert_metric_values};
use super::metric::{MetricField, MetricJets};
use super::GeometryError;

/// Fully lowered curvature components `R_ijkl` at one point, stored as the
/// complete `n⁴` array exactly as computed — the index symmetries are a
/// verified property, not an assumption of the storage.
#[derive(Debug, Clone)]
pub struct CurvatureAtPoint {
    n: usize,
    r: Vec<f64>,
}

impl CurvatureAtPoint {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `R_ijkl` (zero-based indices).
    pub fn component(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.n;
        self.r[((i * n + j) * n + k) * n + l]
    }

    /// Largest `|R_ijkl|`.
    pub fn max_abs(&self) -> f64 {
        self.r.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Lowered curvature tensor of `g` at `x`, by exact second-order jets.
pub fn curvature(g: &MetricField, x: &[f64]) -> Result<CurvatureAtPoint, GeometryError> {
    let jets = g.eval_jets(x)?;
    let gmat = jets.value_matrix();
    let ginv = invert_metric_values(&gmat, x)?;
    Ok(curvature_from_jets(&jets, &gmat, &ginv))
}

/// `∂_p g⁻¹ = −g⁻¹ (∂_p g) g⁻¹`.
fn inverse_derivative(jets: &MetricJets, ginv: &DMatrix<f64>, p: usize) -> DMatrix<f64> {
    let n = jets.n();
    let dg = DMatrix::from_fn(n, n, |i, j| jets.d(p, i, j));
    -(ginv * dg * ginv)
}

/// `∂_p Γ_ij,m = (∂_p∂_i g_jm + ∂_p∂_j g_im − ∂_p∂_m g_ij)/2`.
#[inline]
fn gamma_lower_derivative(jets: &MetricJets, p: usize, i: usize, j: usize, m: usize) -> f64 {
    0.5 * (jets.dd(p, i, j, m) + jets.dd(p, j, i, m) - jets.dd(p, m, i, j))
}

fn curvature_from_jets(
    jets: &MetricJets,
    gmat: &DMatrix<f64>,
    ginv: &DMatrix<f64>,
) -> CurvatureAtPoint {
    let n = jets.n();
    let conn = christoffel_from_jets(jets, ginv);

    // dginv[p] = ∂_p g⁻¹, needed because Γᵏ = gᵏᵐ Γ_·,m mixes both factors.
    let dginv: Vec<DMatrix<f64>> = (0..n).map(|p| inverse_derivative(jets, ginv, p)).collect();

    // dgamma[((p, k), (i, j))] = ∂_p Γᵏᵢⱼ
    //                          = (∂_p gᵏᵐ) Γ_ij,m + gᵏᵐ ∂_p Γ_ij,m.
    let mut dgamma = vec![0.0; n * n * n * n];
    let idx = |p: usize, k: usize, i: usize, j: usize| ((p * n + k) * n + i) * n + j;
    for p in 0..n {
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    let mut acc = 0.0;
                    for m in 0..n {
                        acc += dginv[p][(k, m)] * gamma_lower(jets, i, j, m)
                            + ginv[(k, m)] * gamma_lower_derivative(jets, p, i, j, m);
                    }
                    dgamma[idx(p, k, i, j)] = acc;
                    dgamma[idx(p, k, j, i)] = acc;
                }
            }
        }
    }

    // Rˡ_ijk, then lower the last index with g.
    let mut lowered = vec![0.0; n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut up = dgamma[idx(j, l, i, k)] - dgamma[idx(i, l, j, k)];
                    for m in 0..n {
                        up += conn.gamma(m, i, k) * conn.gamma(l, j, m)
                            - conn.gamma(m, j, k) * conn.gamma(l, i, m);
                    }
                    // `up` is Rˡ_ijk for this (i, j, k, l); accumulate g_lm Rᵐ
                    // by scattering into every lowered slot that uses it.
                    for low in 0..n {
                        lowered[((i * n + j) * n + k) * n + low] += gmat[(low, l)] * up;
                    }
                }
            }
        }
    }
    CurvatureAtPoint { n, r: lowered }
}
