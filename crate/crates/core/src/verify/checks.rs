//! The individual checks and the full-report driver.
//!
//! Every check is total: preconditions that fail at runtime (degenerate
//! metric, no usable sample points, missing canonical block form) produce a
//! `Skipped` result carrying an explanatory note instead of an error. Each
//! residual is the worst violation over the supplied points, divided by the
//! point's scale `max(1, ‖g(x)‖∞, ‖Γ(x)‖∞)` so one tolerance serves metrics
//! of different magnitudes.

use nalgebra::DMatrix;

use crate::geometry::{
    self, algebra, christoffel, christoffel_from_jets, coordinate_covariant_derivatives,
    curvature, invert_metric_values, signature, ConnectionAtPoint, Distribution, GeometryError,
    MetricField, VectorField,
};
use crate::sample::{sample_nondegenerate, PointSampler};
use crate::walker::{block_pattern_residual, walker_form_check, BLOCK_PATTERN_TOL};

use super::report::{metric_fingerprint, CheckResult, VerificationReport, Verdict, CONVENTIONS};

/// Default tolerance for identities evaluated with exact jets, where the
/// only error source is floating-point rounding.
pub const DEFAULT_IDENTITY_TOL: f64 = 1e-9;

/// Tolerance for quantities that vanish exactly by block layout (no
/// differentiation, no cancellation): essentially zero plus safety margin.
pub const EXACT_ZERO_TOL: f64 = 1e-12;

/// Tolerance on principal-angle sines for subspace inclusions, and on the
/// integer bound deficits reported by the same check.
pub const ANGLE_TOL: f64 = 1e-10;

/// Tolerance for comparisons against central finite differences (used by the
/// oracle test suites, pinned here next to its siblings).
pub const FD_ORACLE_TOL: f64 = 1e-5;

const NULL_CLAIM: &str = "the spanned plane is null: g(v_a, v_b) = 0 for every spanning pair";
const PARALLEL_CLAIM: &str =
    "the plane is parallel: \u{2207}_w of each spanning field pairs to zero with a complement basis";
const ORTHO_CLAIM: &str = "the g-orthogonal complement (spanned by the first n\u{2212}r coordinate \
     fields in canonical block form) is itself parallel";
const BOUNDS_CLAIM: &str = "r \u{2264} min(i\u{2212}, i+), the plane lies inside its g-orthogonal \
     complement, and 2r \u{2264} n";
const RELATIONS_CLAIM: &str = "lowered curvature vanishes on the distinguished slots: \
     R(P, P\u{22a5}, \u{00b7}, \u{00b7}), R(P, P, \u{00b7}, \u{00b7}), and R(P\u{22a5}, P\u{22a5}, P, \u{00b7})";
const COMPATIBILITY_CLAIM: &str =
    "the connection is metric: \u{2202}_p g_ij = g_mj \u{0393}^m_pi + g_im \u{0393}^m_pj";
const IDENTITIES_CLAIM: &str =
    "R_ijkl + R_jkil + R_kijl = 0 (first Bianchi) and R_ijkl = R_klij (pair symmetry)";

/// Inputs of [`run_full_report`].
#[derive(Debug, Clone)]
pub struct ReportConfig {
    pub seed: u64,
    /// Number of sample points to draw (nondegenerate ones, where possible).
    pub samples: usize,
    /// Tolerance for the jet-exact identity checks.
    pub tolerance: f64,
    /// Declared null-plane rank when the metric claims canonical block form;
    /// enables the block-form facet checks.
    pub walker_r: Option<usize>,
}

impl Default for ReportConfig {
    fn default() -> ReportConfig {
        ReportConfig {
            seed: 1,
            samples: 25,
            tolerance: DEFAULT_IDENTITY_TOL,
            walker_r: None,
        }
    }
}

/// Outcome of folding a per-point residual over the sample points.
struct Fold {
    raw: f64,
    used: usize,
    failures: usize,
    first_error: Option<String>,
}

/// Runs `residual_at` on every point, taking the max and skipping (but
/// counting) points where it reports a geometry error.
fn fold_points<F>(points: &[Vec<f64>], mut residual_at: F) -> Fold
where
    F: FnMut(&[f64]) -> Result<f64, GeometryError>,
{
    let mut fold = Fold {
        raw: 0.0,
        used: 0,
        failures: 0,
        first_error: None,
    };
    for x in points {
        match residual_at(x) {
            Ok(v) => {
                fold.raw = fold.raw.max(v);
                fold.used += 1;
            }
            Err(e) => {
                fold.failures += 1;
                fold.first_error.get_or_insert_with(|| e.to_string());
            }
        }
    }
    fold
}

/// Builds the `CheckResult` for a fold: skipped when nothing ran, pass/fail
/// on the max residual otherwise, noting any unusable points.
fn finish(name: &str, claim: &str, tolerance: f64, points: &[Vec<f64>], fold: Fold) -> CheckResult {
    if points.is_empty() {
        return CheckResult::skipped(name, claim, tolerance, "no sample points were supplied");
    }
    if fold.used == 0 {
        let why = fold
            .first_error
            .unwrap_or_else(|| "no point could be evaluated".to_string());
        return CheckResult::skipped(name, claim, tolerance, why);
    }
    let result = CheckResult::from_residual(name, claim, fold.raw, tolerance, fold.used);
    if fold.failures > 0 {
        let why = fold.first_error.unwrap_or_default();
        result.with_note(format!(
            "{} of {} points were unusable (first: {why})",
            fold.failures,
            points.len()
        ))
    } else {
        result
    }
}

/// Scale for residual normalization at one point.
fn point_scale(values: &DMatrix<f64>, conn: &ConnectionAtPoint) -> f64 {
    values.amax().max(conn.max_abs()).max(1.0)
}

/// Max over the fields of `|⟨∇_{∂_i} v, q_c⟩|` with `q_c` the columns of
/// `pairing`, not normalized. Shared by the two parallelism checks so that
/// identical inputs give bitwise-identical residuals.
fn parallelism_residual_at(
    values: &DMatrix<f64>,
    conn: &ConnectionAtPoint,
    fields: &[VectorField],
    pairing: &DMatrix<f64>,
    x: &[f64],
) -> Result<f64, GeometryError> {
    let mut raw = 0.0f64;
    for v in fields {
        let (vv, vj) = v.eval_with_jacobian(x)?;
        let dv = coordinate_covariant_derivatives(conn, &vv, &vj);
        let pairings = dv.transpose() * values * pairing;
        if !pairings.is_empty() {
            raw = raw.max(pairings.amax());
        }
    }
    Ok(raw)
}

/// Checks that `d` is null for `g`: the residual is the largest
/// `|g(x)(v_a, v_b)|` over points and spanning pairs, divided by
/// `max(1, ‖g(x)‖∞)` (no derivatives enter this check).
pub fn check_null(g: &MetricField, d: &Distribution, points: &[Vec<f64>], tol: f64) -> CheckResult {
    let fold = fold_points(points, |x| {
        let values = g.eval_matrix(x)?;
        let basis = d.basis_matrix_at(x)?;
        let pairing = basis.transpose() * &values * &basis;
        let raw = if pairing.is_empty() { 0.0 } else { pairing.amax() };
        Ok(raw / values.amax().max(1.0))
    });
    let result = finish("null", NULL_CLAIM, tol, points, fold);
    if d.rank() == 0 && result.verdict == Verdict::Pass {
        result.with_note("the plane has no spanning fields; the claim is vacuous")
    } else {
        result
    }
}

/// Checks that `d` is parallel: sections of `d` stay in `d` under covariant
/// differentiation, tested by pairing `∇_{∂_i} v_a` against a pointwise basis
/// of the `g`-orthogonal complement (valid because `(D⊥)⊥ = D` for a
/// nondegenerate metric).
pub fn check_parallel(
    g: &MetricField,
    d: &Distribution,
    points: &[Vec<f64>],
    tol: f64,
) -> CheckResult {
    let fold = fold_points(points, |x| {
        let jets = g.eval_jets(x)?;
        let values = jets.value_matrix();
        let ginv = invert_metric_values(&values, x)?;
        let conn = christoffel_from_jets(&jets, &ginv);
        let basis = d.basis_matrix_at(x)?;
        let mut complement = geometry::orthogonal_complement_of_values(&values, &basis, x)?;
        for c in 0..complement.ncols() {
            let norm = complement.column(c).norm();
            complement.column_mut(c).scale_mut(1.0 / norm);
        }
        let raw = parallelism_residual_at(&values, &conn, d.fields(), &complement, x)?;
        Ok(raw / point_scale(&values, &conn))
    });
    let result = finish("parallel", PARALLEL_CLAIM, tol, points, fold);
    if d.rank() == 0 && result.verdict == Verdict::Pass {
        result.with_note("the plane has no spanning fields; the claim is vacuous")
    } else {
        result
    }
}

/// Checks that the `g`-orthogonal complement of `d` is parallel. The
/// complement's spanning fields are taken structurally — the first `n − r`
/// coordinate fields — which is valid only in canonical block form, so the
/// check first confirms the block pattern at every point and reports
/// `Skipped` otherwise (a pointwise complement has no canonical smooth
/// extension to differentiate).
pub fn check_orthocomplement_parallel(
    g: &MetricField,
    d: &Distribution,
    points: &[Vec<f64>],
    tol: f64,
) -> CheckResult {
    let n = g.n();
    let r = d.rank();
    if let Some(result) = require_block_pattern("orthocomplement-parallel", ORTHO_CLAIM, g, r, points, tol) {
        return result;
    }
    let complement_fields: Vec<VectorField> =
        (0..n - r).map(|a| VectorField::coordinate(n, a)).collect();
    let fold = fold_points(points, |x| {
        let jets = g.eval_jets(x)?;
        let values = jets.value_matrix();
        let ginv = invert_metric_values(&values, x)?;
        let conn = christoffel_from_jets(&jets, &ginv);
        let pairing = d.basis_matrix_at(x)?;
        let raw = parallelism_residual_at(&values, &conn, &complement_fields, &pairing, x)?;
        Ok(raw / point_scale(&values, &conn))
    });
    finish("orthocomplement-parallel", ORTHO_CLAIM, tol, points, fold)
}

/// Checks the three dimension statements at one point: the plane's rank is
/// at most `min(i₋, i₊)` of the signature, the plane is contained in its
/// `g`-orthogonal complement (principal-angle sine), and `2r ≤ n`. The
/// residual is the largest violation; integer bound deficits count whole
/// units. Tolerance pinned to [`ANGLE_TOL`].
pub fn check_inclusions_and_bounds(g: &MetricField, d: &Distribution, x: &[f64]) -> CheckResult {
    check_inclusions_many(g, d, std::slice::from_ref(&x.to_vec()))
}

fn check_inclusions_many(g: &MetricField, d: &Distribution, points: &[Vec<f64>]) -> CheckResult {
    let n = g.n();
    let r = d.rank();
    let fold = fold_points(points, |x| {
        let sig = signature(g, x)?;
        let values = g.eval_matrix(x)?;
        let basis = d.basis_matrix_at(x)?;
        let complement = geometry::orthogonal_complement_of_values(&values, &basis, x)?;
        let sine = algebra::inclusion_sine(&basis, &complement);
        let signature_deficit = r.saturating_sub(sig.i_minus.min(sig.i_plus)) as f64;
        let rank_deficit = (2 * r).saturating_sub(n) as f64;
        Ok(sine.max(signature_deficit).max(rank_deficit))
    });
    finish("inclusions-and-bounds", BOUNDS_CLAIM, ANGLE_TOL, points, fold)
}

/// Checks the curvature relations forced by a null parallel plane, with the
/// complement indices taken structurally as in
/// [`check_orthocomplement_parallel`]: for lowered components, `R_ijkl = 0`
/// whenever (a) `i` is a plane index and `j` a complement index, (b) `i, j`
/// are both plane indices, or (c) `i, j` are complement indices and `k` a
/// plane index.
pub fn check_curvature_relations(
    g: &MetricField,
    d: &Distribution,
    points: &[Vec<f64>],
    tol: f64,
) -> CheckResult {
    let n = g.n();
    let r = d.rank();
    if let Some(result) = require_block_pattern("curvature-relations", RELATIONS_CLAIM, g, r, points, tol) {
        return result;
    }
    let fold = fold_points(points, |x| {
        let values = g.eval_matrix(x)?;
        let conn = christoffel(g, x)?;
        let curv = curvature(g, x)?;
        let mut raw = 0.0f64;
        // (a) plane × complement × anything; contains (b) plane × plane
        // since the plane indices are the first r of the first n−r.
        for i in 0..r {
            for j in 0..n - r {
                for k in 0..n {
                    for l in 0..n {
                        raw = raw.max(curv.component(i, j, k, l).abs());
                    }
                }
            }
        }
        // (c) complement × complement × plane × anything.
        for i in 0..n - r {
            for j in 0..n - r {
                for k in 0..r {
                    for l in 0..n {
                        raw = raw.max(curv.component(i, j, k, l).abs());
                    }
                }
            }
        }
        Ok(raw / point_scale(&values, &conn))
    });
    finish("curvature-relations", RELATIONS_CLAIM, tol, points, fold)
}

/// Checks metric compatibility of the computed connection:
/// `∂_p g_ij − (g_mj Γ^m_pi + g_im Γ^m_pj) = 0`. Unlike the Koszul formula
/// itself this exercises the inverse-metric round trip.
pub fn check_metric_compatibility(g: &MetricField, points: &[Vec<f64>], tol: f64) -> CheckResult {
    let n = g.n();
    let fold = fold_points(points, |x| {
        let jets = g.eval_jets(x)?;
        let values = jets.value_matrix();
        let ginv = invert_metric_values(&values, x)?;
        let conn = christoffel_from_jets(&jets, &ginv);
        let mut raw = 0.0f64;
        for p in 0..n {
            for i in 0..n {
                for j in i..n {
                    let mut rhs = 0.0;
                    for m in 0..n {
                        rhs += values[(m, j)] * conn.gamma(m, p, i)
                            + values[(i, m)] * conn.gamma(m, p, j);
                    }
                    raw = raw.max((jets.d(p, i, j) - rhs).abs());
                }
            }
        }
        Ok(raw / point_scale(&values, &conn))
    });
    finish("metric-compatibility", COMPATIBILITY_CLAIM, tol, points, fold)
}

/// Checks the first Bianchi identity and pair symmetry of the lowered
/// curvature tensor, which the curvature-relation arguments lean on.
pub fn check_curvature_identities(g: &MetricField, points: &[Vec<f64>], tol: f64) -> CheckResult {
    let n = g.n();
    let fold = fold_points(points, |x| {
        let values = g.eval_matrix(x)?;
        let conn = christoffel(g, x)?;
        let curv = curvature(g, x)?;
        let mut raw = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let bianchi = curv.component(i, j, k, l)
                            + curv.component(j, k, i, l)
                            + curv.component(k, i, j, l);
                        let pair = curv.component(i, j, k, l) - curv.component(k, l, i, j);
                        raw = raw.max(bianchi.abs()).max(pair.abs());
                    }
                }
            }
        }
        Ok(raw / point_scale(&values, &conn))
    });
    finish("bianchi-and-pair-symmetry", IDENTITIES_CLAIM, tol, points, fold)
}

/// Returns a `Skipped` result when the metric fails the canonical block
/// pattern for rank `r` at any evaluable point; `None` when the pattern
/// holds and the caller may rely on the structural complement.
fn require_block_pattern(
    name: &str,
    claim: &str,
    g: &MetricField,
    r: usize,
    points: &[Vec<f64>],
    tol: f64,
) -> Option<CheckResult> {
    for x in points {
        if let Ok(values) = g.eval_matrix(x) {
            let pattern = block_pattern_residual(&values, r);
            if pattern > BLOCK_PATTERN_TOL {
                return Some(CheckResult::skipped(
                    name,
                    claim,
                    tol,
                    format!(
                        "unsupported input: the metric is not in canonical block form at a \
                         sample point (pattern residual {pattern:.3e}), so the structural \
                         complement is unavailable"
                    ),
                ));
            }
        }
    }
    None
}

/// Runs the whole suite on `g` with the plane `d` and collects a report:
/// the five geometric checks, the two connection/curvature invariants, and —
/// when `config.walker_r` is set — the canonical block-form facets evaluated
/// on the raw (unfiltered) sample stream. Checks are sorted by name;
/// everything is deterministic given `(g, d, config)`.
pub fn run_full_report(g: &MetricField, d: &Distribution, config: &ReportConfig) -> VerificationReport {
    let n = g.n();
    let tol = config.tolerance;
    let (good, _skipped) = sample_nondegenerate(g, config.seed, config.samples);

    let mut checks = vec![
        check_null(g, d, &good, tol),
        check_parallel(g, d, &good, tol),
        check_orthocomplement_parallel(g, d, &good, tol),
        check_inclusions_many(g, d, &good),
        check_curvature_relations(g, d, &good, tol),
        check_metric_compatibility(g, &good, tol),
        check_curvature_identities(g, &good, tol),
    ];

    if let Some(r) = config.walker_r {
        let mut sampler = PointSampler::new(config.seed, n);
        let raw: Vec<Vec<f64>> = (0..config.samples).map(|_| sampler.next_point()).collect();
        let form = walker_form_check(g, r, &raw);
        for sub in form.sub_checks {
            let verdict = match (sub.max_residual, sub.passed) {
                (None, _) => Verdict::Skipped,
                (Some(_), true) => Verdict::Pass,
                (Some(_), false) => Verdict::Fail,
            };
            checks.push(CheckResult {
                name: format!("walker-form/{}", sub.name),
                verdict,
                max_residual: sub.max_residual,
                tolerance: sub.tolerance,
                points_checked: if sub.name == "evaluable" {
                    form.points_attempted
                } else {
                    form.points_evaluated
                },
                provenance: sub.claim.to_string(),
                note: sub.note,
            });
        }
    }

    checks.sort_by(|a, b| a.name.cmp(&b.name));

    VerificationReport {
        fingerprint: metric_fingerprint(g),
        seed: config.seed,
        n,
        walker_r: config.walker_r,
        points_requested: config.samples,
        points_used: good.len(),
        conventions: CONVENTIONS,
        checks,
    }
}
