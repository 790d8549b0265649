//! Pointwise extension problems: completing a bilinear pairing prescribed on
//! part of `C × D`, and completing a partially prescribed symmetric form to
//! a full nondegenerate metric with a prescribed null subspace.
//!
//! Both problems have affine solution sets. For the pairing the free part is
//! a `k×l` block per output coordinate (`k`, `l` the codimensions of the
//! prescribed subspaces), `k·l·m` real parameters in total; for the metric it
//! is the symmetric `r×r` bottom block in a basis adapted to `P ⊂ P′`,
//! `r(r+1)/2` parameters. The parameter-to-solution maps are affine — for
//! the pairing, and for the adapted Gram matrix of the metric, exactly so
//! (entries are placed, not transformed).

use nalgebra::{DMatrix, DVector};

use crate::geometry::algebra::{self, BasisBuilder};

use super::WalkerError;

/// Tolerance for subspace-inclusion sines.
const NEST_TOL: f64 = 1e-10;

/// Scale factor for the tolerances on the prescribed-form constraints
/// (symmetry on `P′×P′`, vanishing on `P′×P`), relative to the data's
/// magnitude.
const CONSTRAINT_TOL: f64 = 1e-10;

/// A bilinear map `C × D → E` prescribed on `C × D′` and `C′ × D` only.
///
/// The bases of `C` and `D` are chosen adapted to the distinguished
/// subspaces: `C′` is the span of the first `dim_c − codim_cprime` basis
/// vectors of `C`, and `D′` the span of the first `dim_d − codim_dprime`
/// basis vectors of `D`. The two prescriptions must agree exactly on
/// `C′ × D′`, where they overlap.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialPairingAtPoint {
    pub dim_c: usize,
    pub dim_d: usize,
    pub dim_e: usize,
    pub codim_cprime: usize,
    pub codim_dprime: usize,
    /// Values on `C × D′`: one `dim_c × (dim_d − codim_dprime)` matrix per
    /// output coordinate.
    pub on_dprime: Vec<DMatrix<f64>>,
    /// Values on `C′ × D`: one `(dim_c − codim_cprime) × dim_d` matrix per
    /// output coordinate.
    pub on_cprime: Vec<DMatrix<f64>>,
}

impl PartialPairingAtPoint {
    /// Number of free real parameters of the extension problem:
    /// `codim_cprime · codim_dprime · dim_e`.
    pub fn extension_dimension(&self) -> usize {
        self.codim_cprime * self.codim_dprime * self.dim_e
    }
}

/// Completes the prescribed pieces to a full pairing `C × D → E`, one
/// `dim_c × dim_d` matrix per output coordinate, by placing `free[e]` (a
/// `codim_cprime × codim_dprime` matrix) in the unconstrained corner. The
/// output restricts to the prescriptions bitwise, and the map
/// `free ↦ pairing` is affine with exact equality.
///
/// # Panics
/// Panics on dimension mismatches between the declared sizes and the
/// supplied matrices.
pub fn extend_partial_pairing(
    p: &PartialPairingAtPoint,
    free: &[DMatrix<f64>],
) -> Result<Vec<DMatrix<f64>>, WalkerError> {
    let (c, d, m) = (p.dim_c, p.dim_d, p.dim_e);
    let (k, l) = (p.codim_cprime, p.codim_dprime);
    assert!(k <= c, "codim {k} exceeds dim C = {c}");
    assert!(l <= d, "codim {l} exceeds dim D = {d}");
    assert_eq!(p.on_dprime.len(), m, "one C×D′ matrix per output coordinate");
    assert_eq!(p.on_cprime.len(), m, "one C′×D matrix per output coordinate");
    assert_eq!(free.len(), m, "one free block per output coordinate");
    for ((on_dprime, on_cprime), free_block) in
        p.on_dprime.iter().zip(&p.on_cprime).zip(free)
    {
        assert_eq!(on_dprime.shape(), (c, d - l), "C×D′ values shape");
        assert_eq!(on_cprime.shape(), (c - k, d), "C′×D values shape");
        assert_eq!(free_block.shape(), (k, l), "free block shape");
    }

    let mut mismatch: f64 = 0.0;
    for e in 0..m {
        for i in 0..c - k {
            for j in 0..d - l {
                let (x, y) = (p.on_dprime[e][(i, j)], p.on_cprime[e][(i, j)]);
                if x != y {
                    mismatch = mismatch.max((x - y).abs());
                }
            }
        }
    }
    if mismatch > 0.0 {
        return Err(WalkerError::InconsistentPrescription { mismatch });
    }

    Ok((0..m)
        .map(|e| {
            DMatrix::from_fn(c, d, |i, j| {
                if j < d - l {
                    p.on_dprime[e][(i, j)]
                } else if i < c - k {
                    p.on_cprime[e][(i, j)]
                } else {
                    free[e][(i - (c - k), j - (d - l))]
                }
            })
        })
        .collect())
}

/// A symmetric form prescribed on `P′ × T` only, at a single point of an
/// `n`-dimensional space `T`, with a nested pair of subspaces
/// `P ⊂ P′ ⊂ T` of dimensions `r` and `n − r`.
///
/// `p` and `pprime` hold basis columns of the subspaces in the standard
/// basis of `T`; `alpha` holds the prescribed values `α(p′_a, t_i)` against
/// the standard basis `t_i`. The prescription must have rank `n − r`, be
/// symmetric on `P′ × P′`, and vanish on `P′ × P`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialFibreMetricAtPoint {
    pub n: usize,
    pub r: usize,
    /// `n × r` basis of `P`.
    pub p: DMatrix<f64>,
    /// `n × (n − r)` basis of `P′`.
    pub pprime: DMatrix<f64>,
    /// `(n − r) × n` prescribed values.
    pub alpha: DMatrix<f64>,
}

impl PartialFibreMetricAtPoint {
    /// Number of free real parameters of the extension problem:
    /// `r(r+1)/2`, the dimension of the space of symmetric `r×r` blocks.
    pub fn extension_dimension(&self) -> usize {
        self.r * (self.r + 1) / 2
    }
}

/// A completed metric extension.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedMetric {
    /// The extension as a symmetric `n×n` form on the standard basis.
    pub ambient: DMatrix<f64>,
    /// The same form in the adapted basis: zero on `P×P′` pairs by
    /// construction, with `bfree` placed bitwise in the bottom-right `r×r`
    /// block. Rows `0..n−r` carry the prescription; the free block is
    /// independent of it.
    pub adapted_gram: DMatrix<f64>,
    /// Columns: the adapted basis `e_1..e_n` with `e_1..e_r` spanning `P`
    /// and `e_1..e_{n−r}` spanning `P′`.
    pub basis: DMatrix<f64>,
}

/// Deterministically completes bases of `P ⊂ P′ ⊂ T` to a basis of `T`
/// whose first `r` columns are the given `P` basis and whose first `n − r`
/// columns span `P′`: the given columns are taken in order (`P`, then `P′`),
/// each accepted if independent of those already kept, judged by pivoted
/// elimination; the remaining slots are filled with standard basis vectors,
/// at each step the one farthest from the current span, which keeps the
/// completed basis as well conditioned as the given columns allow.
pub fn adapted_basis(
    p: &DMatrix<f64>,
    pprime: &DMatrix<f64>,
    n: usize,
) -> Result<DMatrix<f64>, WalkerError> {
    assert_eq!(p.nrows(), n, "P basis must have n rows");
    assert_eq!(pprime.nrows(), n, "P′ basis must have n rows");
    let r = p.ncols();
    let m = pprime.ncols();
    assert!(r <= m && m <= n, "need dim P ≤ dim P′ ≤ n");

    let sine = algebra::inclusion_sine(p, pprime);
    if sine > NEST_TOL {
        return Err(WalkerError::NotNested { sine });
    }

    let mut builder = BasisBuilder::new(n);
    for a in 0..r {
        if !builder.try_push(&p.column(a).into_owned()) {
            return Err(WalkerError::RankDeficient {
                name: "the P basis",
                found: builder.len(),
                expected: r,
            });
        }
    }
    for a in 0..m {
        builder.try_push(&pprime.column(a).into_owned());
    }
    if builder.len() != m {
        return Err(WalkerError::RankDeficient {
            name: "the P′ basis",
            found: builder.len(),
            expected: m,
        });
    }
    while builder.len() < n {
        let standard =
            |a: usize| DVector::from_fn(n, |i, _| if i == a { 1.0 } else { 0.0 });
        let farthest = (0..n)
            .max_by(|&a, &b| {
                let ra = builder.residual_norm(&standard(a));
                let rb = builder.residual_norm(&standard(b));
                ra.total_cmp(&rb)
            })
            .expect("n > 0");
        let pushed = builder.try_push(&standard(farthest));
        assert!(pushed, "a proper span admits a standard completion vector");
    }
    Ok(builder.into_matrix())
}

/// Completes the prescription to a full symmetric form with `bfree` (a
/// symmetric `r×r` matrix) as the remaining freedom. In the adapted basis
/// the result is exactly the canonical block matrix of a metric with null
/// plane `P` and orthogonal complement `P′`; transformed back to the
/// standard basis it satisfies `pprimeᵀ · G = alpha` up to roundoff.
///
/// # Panics
/// Panics on dimension mismatches between the declared `n`, `r` and the
/// supplied matrices.
pub fn extend_partial_metric(
    pm: &PartialFibreMetricAtPoint,
    bfree: &DMatrix<f64>,
) -> Result<ExtendedMetric, WalkerError> {
    let (n, r) = (pm.n, pm.r);
    assert_eq!(pm.p.shape(), (n, r), "P basis shape");
    assert_eq!(pm.pprime.shape(), (n, n - r), "P′ basis shape");
    assert_eq!(pm.alpha.shape(), (n - r, n), "prescription shape");
    assert_eq!(bfree.shape(), (r, r), "free block shape");

    for i in 0..r {
        for j in i + 1..r {
            if bfree[(i, j)] != bfree[(j, i)] {
                return Err(WalkerError::AsymmetricBlock {
                    block: "Bfree",
                    row: i,
                    col: j,
                });
            }
        }
    }

    let scale = pm.alpha.amax().max(1.0);
    let found = algebra::rank_with_tol(&pm.alpha, CONSTRAINT_TOL * scale);
    if found != n - r {
        return Err(WalkerError::RankDeficient {
            name: "the prescription α",
            found,
            expected: n - r,
        });
    }
    let on_pprime = &pm.alpha * &pm.pprime;
    let asymmetry = (&on_pprime - on_pprime.transpose()).amax();
    if asymmetry > CONSTRAINT_TOL * on_pprime.amax().max(1.0) {
        return Err(WalkerError::InvalidPartialMetric {
            message: format!("α is not symmetric on P′ × P′ (asymmetry {asymmetry:.3e})"),
        });
    }
    if r > 0 {
        let on_p = (&pm.alpha * &pm.p).amax();
        if on_p > CONSTRAINT_TOL * scale * pm.p.amax().max(1.0) {
            return Err(WalkerError::InvalidPartialMetric {
                message: format!("α does not vanish on P′ × P (max |α(P′, P)| = {on_p:.3e})"),
            });
        }
    }

    let basis = adapted_basis(&pm.p, &pm.pprime, n)?;
    // Coordinates of the P′ basis in the adapted basis; the bottom r rows
    // vanish because the adapted basis starts with a spanning set for P′.
    let basis_lu = basis.clone().lu();
    let s_full = basis_lu
        .solve(&pm.pprime)
        .expect("completed basis is invertible");
    let s_top = s_full.view((0, 0), (n - r, n - r)).into_owned();
    // In the adapted basis the prescription reads s_topᵀ · (top rows of the
    // Gram matrix) = alpha · basis; solve for those rows.
    let alpha_adapted = &pm.alpha * &basis;
    let top_rows = s_top.transpose().lu().solve(&alpha_adapted).ok_or_else(|| {
        WalkerError::InvalidPartialMetric {
            message: "the P′ basis does not reach full rank in the adapted coordinates".to_string(),
        }
    })?;

    let mut adapted_gram = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = if i < n - r {
                top_rows[(i, j)]
            } else {
                bfree[(i - (n - r), j - (n - r))]
            };
            adapted_gram[(i, j)] = v;
            adapted_gram[(j, i)] = v;
        }
    }

    // ambient = basis⁻ᵀ · gram · basis⁻¹, symmetrized against roundoff.
    let transpose_lu = basis.transpose().lu();
    let y = transpose_lu
        .solve(&adapted_gram)
        .expect("completed basis is invertible");
    let gt = transpose_lu
        .solve(&y.transpose())
        .expect("completed basis is invertible");
    let ambient = (&gt + gt.transpose()) * 0.5;

    Ok(ExtendedMetric {
        ambient,
        adapted_gram,
        basis,
    })
}
