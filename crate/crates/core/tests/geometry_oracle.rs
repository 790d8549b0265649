//! Oracle tests for the geometric pipeline: Christoffel symbols and
//! curvature against hand-derived closed forms and against the
//! finite-difference oracle, plus signature and null-space properties.

mod common;

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{corpus, fd_christoffel, fd_curvature, points, pp_wave, CURVATURE_STEP, GAMMA_STEP};
use walker_core::expr::parse;
use walker_core::geometry::{
    algebra, christoffel, curvature, orthogonal_complement, signature, Distribution, MetricField,
    Signature,
};
use walker_core::walker::canonical_distribution;

fn metric(n: usize, rows: &[&[&str]]) -> MetricField {
    MetricField::from_rows(
        rows.iter()
            .map(|row| row.iter().map(|t| parse(t, n).unwrap()).collect())
            .collect(),
    )
}

/// The round two-sphere `diag(1, sin²x1)`: closed-form connection and the
/// frozen curvature component `R_1212 = sin²x1` under this crate's sign
/// convention.
#[test]
fn sphere_connection_and_curvature_match_closed_forms() {
    let g = metric(2, &[&["1", "0"], &["0", "sin(x1)^2"]]);
    for x in [[0.7f64, 0.3], [1.1, -0.4], [0.5, 0.9]] {
        let (s, c) = x[0].sin_cos();
        let conn = christoffel(&g, &x).unwrap();
        assert!((conn.gamma(0, 1, 1) - (-s * c)).abs() <= 1e-13);
        assert!((conn.gamma(1, 0, 1) - c / s).abs() <= 1e-13);
        assert!(conn.gamma(0, 0, 0).abs() <= 1e-15);
        assert!(conn.gamma(1, 0, 0).abs() <= 1e-15);

        let curv = curvature(&g, &x).unwrap();
        assert!((curv.component(0, 1, 0, 1) - s * s).abs() <= 1e-12);
        // Constant curvature 1: R_ijkl = g_ik g_jl − g_il g_jk.
        assert!((curv.component(0, 1, 1, 0) + s * s).abs() <= 1e-12);
        assert!(curv.component(0, 1, 0, 0).abs() <= 1e-12);
    }
}

/// The plane-wave instance: frozen nonzero Christoffel symbols and the two
/// frozen curvature components, with everything else the null plane
/// constrains vanishing identically.
#[test]
fn pp_wave_frozen_values() {
    let g = pp_wave().assemble().unwrap();
    for x in points(41, 4, 5) {
        let conn = christoffel(&g, &x).unwrap();
        // Γ¹₂₄ = x2, Γ¹₃₄ = −x3, Γ²₄₄ = −x2, Γ³₄₄ = x3 (1-based labels).
        assert!((conn.gamma(0, 1, 3) - x[1]).abs() <= 1e-13);
        assert!((conn.gamma(0, 2, 3) + x[2]).abs() <= 1e-13);
        assert!((conn.gamma(1, 3, 3) + x[1]).abs() <= 1e-13);
        assert!((conn.gamma(2, 3, 3) - x[2]).abs() <= 1e-13);

        let curv = curvature(&g, &x).unwrap();
        // R_2424 = −1 and R_3434 = +1; the cross term R_2434 vanishes.
        assert!((curv.component(1, 3, 1, 3) + 1.0).abs() <= 1e-12);
        assert!((curv.component(2, 3, 2, 3) - 1.0).abs() <= 1e-12);
        assert!(curv.component(1, 3, 2, 3).abs() <= 1e-12);
        assert!(curv.max_abs() > 1e-3, "the instance must be non-flat");
    }
}

/// The two-dimensional pair `[[0, 1], [1, x2]]`: a single nonzero raised
/// Christoffel symbol and identically vanishing curvature.
#[test]
fn flat_pair_has_one_christoffel_symbol_and_no_curvature() {
    let g = metric(2, &[&["0", "1"], &["1", "x2"]]);
    for x in points(43, 2, 5) {
        let conn = christoffel(&g, &x).unwrap();
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    let expected = if (k, i, j) == (0, 1, 1) { 0.5 } else { 0.0 };
                    assert_eq!(conn.gamma(k, i, j), expected, "Γ^{k}_{i}{j}");
                }
            }
        }
        assert!(curvature(&g, &x).unwrap().max_abs() <= 1e-15);
    }
}

/// Jet-exact Christoffel symbols and curvature agree with the
/// finite-difference oracle across a slice of the corpus.
#[test]
fn corpus_connection_and_curvature_agree_with_finite_differences() {
    for data in corpus(9) {
        let g = data.assemble().unwrap();
        let n = g.n();
        let x = points(47, n, 1).pop().unwrap();

        let conn = christoffel(&g, &x).unwrap();
        let fd_conn = fd_christoffel(&g, &x, GAMMA_STEP);
        let gamma_scale = conn.max_abs().max(1.0);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let diff = (conn.gamma(k, i, j) - fd_conn.gamma(k, i, j)).abs();
                    assert!(
                        diff <= 1e-6 * gamma_scale,
                        "Γ^{k}_{i}{j} jet/fd mismatch {diff:.3e} for n={n}"
                    );
                }
            }
        }

        let curv = curvature(&g, &x).unwrap();
        let fd_curv = fd_curvature(&g, &x, GAMMA_STEP, CURVATURE_STEP);
        let r_scale = curv.max_abs().max(1.0);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let diff = (curv.component(i, j, k, l) - fd_curv.component(i, j, k, l)).abs();
                        assert!(
                            diff <= 1e-5 * r_scale,
                            "R_{i}{j}{k}{l} jet/fd mismatch {diff:.3e} for n={n}"
                        );
                    }
                }
            }
        }
    }
}

/// Signature examples with known inertia, including the neutral
/// mid-dimensional pattern.
#[test]
fn signatures_of_reference_metrics() {
    let minkowski = metric(
        4,
        &[
            &["-1", "0", "0", "0"],
            &["0", "1", "0", "0"],
            &["0", "0", "1", "0"],
            &["0", "0", "0", "1"],
        ],
    );
    assert_eq!(
        signature(&minkowski, &[0.1, 0.2, 0.3, 0.4]).unwrap(),
        Signature { i_minus: 1, i_plus: 3 }
    );

    for (n, r) in [(2, 1), (4, 2), (6, 3)] {
        let data = walker_core::walker::generate_walker_data(n, r, 61).unwrap();
        let g = data.assemble().unwrap();
        for x in points(53, n, 5) {
            assert_eq!(
                signature(&g, &x).unwrap(),
                Signature { i_minus: r, i_plus: r },
                "mid-dimensional instances are neutral"
            );
        }
    }
}

/// Sylvester's law: eigenvalue sign counts are invariant under congruence
/// by an invertible matrix.
#[test]
fn sign_counts_are_congruence_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(59);
    for data in corpus(9) {
        let g = data.assemble().unwrap();
        let n = g.n();
        let x = points(59, n, 1).pop().unwrap();
        let values = g.eval_matrix(&x).unwrap();
        let zero_tol = 1e-10 * values.amax().max(1.0);
        let before = algebra::eigenvalue_sign_counts(&values, zero_tol);
        assert_eq!(before.2, 0, "corpus metrics are nondegenerate");

        // Diagonally dominant T is invertible; congruence preserves inertia.
        let t = DMatrix::from_fn(n, n, |i, j| {
            let noise: f64 = rng.gen_range(-0.25..0.25);
            if i == j {
                2.0 + noise
            } else {
                noise
            }
        });
        let transformed = t.transpose() * &values * &t;
        let sym = (&transformed + transformed.transpose()) * 0.5;
        let after =
            algebra::eigenvalue_sign_counts(&sym, 1e-10 * sym.amax().max(1.0));
        assert_eq!(before, after);
    }
}

/// The elimination null space agrees with an SVD rank oracle and actually
/// annihilates the matrix.
#[test]
fn nullspace_matches_svd_rank_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(67);
    for trial in 0..40 {
        let rows = rng.gen_range(1..=6);
        let cols = rng.gen_range(1..=6);
        let inner = rng.gen_range(0..=rows.min(cols));
        // rank(M) ≤ inner by construction.
        let u = DMatrix::from_fn(rows, inner, |_, _| rng.gen_range(-2.0..2.0f64));
        let v = DMatrix::from_fn(inner, cols, |_, _| rng.gen_range(-2.0..2.0f64));
        let m = if inner == 0 {
            DMatrix::zeros(rows, cols)
        } else {
            u * v
        };

        let svd_rank = m.clone().svd(false, false).rank(1e-10);
        let ns = algebra::nullspace(&m, 1e-10 * m.amax().max(1.0));
        assert_eq!(
            ns.ncols(),
            cols - svd_rank,
            "trial {trial}: nullity disagrees with the SVD oracle for {m}"
        );
        if !ns.is_empty() {
            let image = &m * &ns;
            assert!(image.amax() <= 1e-9 * m.amax().max(1.0));
            assert_eq!(algebra::rank_with_tol(&ns, 1e-10), ns.ncols());
        }
    }
}

/// In canonical block form the pointwise orthogonal complement of the null
/// plane is exactly the span of the first `n − r` standard vectors — no
/// rounding, because the pairing rows are exact `0`/`1` patterns.
#[test]
fn walker_complement_is_exactly_the_leading_coordinate_block() {
    for data in corpus(9) {
        let (n, r) = (data.n(), data.r());
        let g = data.assemble().unwrap();
        let d = canonical_distribution(n, r).unwrap();
        for x in points(71, n, 3) {
            let complement = orthogonal_complement(&g, &d, &x).unwrap();
            assert_eq!(complement.ncols(), n - r);
            let expected = DMatrix::from_fn(n, n - r, |i, j| if i == j { 1.0 } else { 0.0 });
            assert_eq!(complement, expected);
        }
    }
}

/// Orthogonal complement dimensions and the double-complement identity on a
/// non-canonical (but nondegenerate) metric.
#[test]
fn double_complement_returns_the_original_span() {
    let g = metric(
        3,
        &[
            &["0", "1", "0"],
            &["1", "x2", "0.25"],
            &["0", "0.25", "2"],
        ],
    );
    let d = Distribution::span_of_coordinates(3, 0..1);
    for x in points(73, 3, 4) {
        let comp = orthogonal_complement(&g, &d, &x).unwrap();
        assert_eq!(comp.ncols(), 2);
        let values = g.eval_matrix(&x).unwrap();
        let pairing = comp.transpose() * &values;
        let double = algebra::nullspace(&pairing, 1e-12 * pairing.amax().max(1.0));
        assert_eq!(double.ncols(), 1);
        let basis = d.basis_matrix_at(&x).unwrap();
        assert!(algebra::subspace_gap(&double, &basis) <= 1e-12);
    }
}
