//! Checking a metric against the canonical block pattern.

use nalgebra::DMatrix;

use crate::geometry::{algebra, MetricField};

/// Absolute tolerance for the zero/identity block pattern; entries of a
/// metric genuinely in canonical form are literal constants, so this only
/// needs to absorb degenerate expression encodings of constants.
pub const BLOCK_PATTERN_TOL: f64 = 1e-12;

/// Tolerance on the sampled gradients `∂g_ij/∂x_p`, `p ≤ r`, of the `A` and
/// `H` entries, which the canonical form requires to vanish.
pub const INDEPENDENCE_TOL: f64 = 1e-12;

/// One facet of the block-form requirements.
#[derive(Debug, Clone, PartialEq)]
pub struct SubCheck {
    pub name: &'static str,
    /// What would have to hold for the metric to be in canonical form.
    pub claim: &'static str,
    /// Largest violation observed; `None` when nothing could be evaluated.
    pub max_residual: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
    pub note: Option<String>,
}

/// Outcome of [`walker_form_check`] at a set of sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct FormCheckReport {
    pub n: usize,
    pub r: usize,
    pub points_attempted: usize,
    pub points_evaluated: usize,
    pub sub_checks: Vec<SubCheck>,
}

impl FormCheckReport {
    pub fn all_passed(&self) -> bool {
        self.sub_checks.iter().all(|c| c.passed)
    }

    pub fn sub_check(&self, name: &str) -> Option<&SubCheck> {
        self.sub_checks.iter().find(|c| c.name == name)
    }
}

/// Largest deviation of `g(x)` from the required zero/identity pattern in
/// the first `r` rows (and, by symmetry, columns).
pub(crate) fn block_pattern_residual(values: &DMatrix<f64>, r: usize) -> f64 {
    let n = values.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..r {
        for j in 0..n {
            let expected = if j == n - r + i { 1.0 } else { 0.0 };
            worst = worst.max((values[(i, j)] - expected).abs());
        }
    }
    worst
}

/// Checks the block pattern, the nonsingularity of the `A` block, and the
/// independence of the `A` and `H` entries from `x1..xr` at the given
/// points, reporting each facet separately. Points where the metric fails to
/// evaluate are counted and skipped.
///
/// # Panics
/// Panics if `2r > n`.
pub fn walker_form_check(g: &MetricField, r: usize, points: &[Vec<f64>]) -> FormCheckReport {
    let n = g.n();
    assert!(2 * r <= n, "r = {r} out of range for n = {n}");
    let s = n - 2 * r;

    let mut eval_failures = 0usize;
    let mut first_error: Option<String> = None;
    let mut evaluated = 0usize;
    let mut pattern: f64 = 0.0;
    let mut rank_deficit = 0usize;
    let mut independence: f64 = 0.0;
    let mut worst_gradient: Option<(usize, usize, usize, f64)> = None;

    for x in points {
        let jets = match g.eval_jets(x) {
            Ok(jets) => jets,
            Err(e) => {
                eval_failures += 1;
                if first_error.is_none() {
                    first_error = Some(e.to_string());
                }
                continue;
            }
        };
        evaluated += 1;
        let values = jets.value_matrix();
        pattern = pattern.max(block_pattern_residual(&values, r));
        if s > 0 {
            let a = values.view((r, r), (s, s)).into_owned();
            let rank = algebra::rank_with_tol(&a, 1e-10 * a.amax().max(1.0));
            rank_deficit = rank_deficit.max(s - rank);
        }
        for p in 0..r {
            for i in r..n - r {
                for j in i..n {
                    let d = jets.d(p, i, j);
                    if d.abs() > independence {
                        independence = d.abs();
                        worst_gradient = Some((p, i, j, d));
                    }
                }
            }
        }
    }

    let sampled = |value: f64| (evaluated > 0).then_some(value);
    let no_points = || (evaluated == 0).then(|| "no sample points could be evaluated".to_string());
    let sub_checks = vec![
        SubCheck {
            name: "evaluable",
            claim: "every metric entry evaluates at every sample point",
            max_residual: Some(eval_failures as f64),
            tolerance: 0.0,
            passed: eval_failures == 0,
            note: first_error,
        },
        SubCheck {
            name: "block-pattern",
            claim: "the first r rows of g are zero except for a trailing identity block",
            max_residual: sampled(pattern),
            tolerance: BLOCK_PATTERN_TOL,
            passed: evaluated > 0 && pattern <= BLOCK_PATTERN_TOL,
            note: no_points(),
        },
        SubCheck {
            name: "a-b-symmetry",
            claim: "the A and B blocks are symmetric",
            max_residual: Some(0.0),
            tolerance: 0.0,
            passed: true,
            note: Some("holds by the symmetric storage of the metric container".to_string()),
        },
        SubCheck {
            name: "a-nonsingularity",
            claim: "the A block has full rank at every sample point",
            max_residual: sampled(rank_deficit as f64),
            tolerance: 0.0,
            passed: evaluated > 0 && rank_deficit == 0,
            note: no_points().or_else(|| (s == 0).then(|| "the A block is empty".to_string())),
        },
        SubCheck {
            name: "coefficient-independence",
            claim: "the A and H entries do not vary along the first r coordinates",
            max_residual: sampled(independence),
            tolerance: INDEPENDENCE_TOL,
            passed: evaluated > 0 && independence <= INDEPENDENCE_TOL,
            note: no_points().or_else(|| {
                worst_gradient.and_then(|(p, i, j, d)| {
                    (d.abs() > INDEPENDENCE_TOL).then(|| {
                        format!("∂g[{}][{}]/∂x{} = {d:.6e}", i + 1, j + 1, p + 1)
                    })
                })
            }),
        },
    ];

    FormCheckReport {
        n,
        r,
        points_attempted: points.len(),
        points_evaluated: evaluated,
        sub_checks,
    }
}
