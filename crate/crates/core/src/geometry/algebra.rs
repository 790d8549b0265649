//! Dense linear-algebra helpers: eigenvalue sign counts, null spaces,
//! subspace angles, and deterministic basis completion.
//!
//! Everything here is sized for the small dense matrices this crate works
//! with (`n ≤ 12`). The elimination-based routines use full pivoting with a
//! fixed scan order and strict comparisons, so results are deterministic and,
//! on inputs whose pivots are exact (block metrics made of 0/1 entries), the
//! computed null spaces are exact as well.

use nalgebra::DMatrix;

/// Counts of negative and positive eigenvalues of a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub i_minus: usize,
    pub i_plus: usize,
}

/// Eigenvalue sign counts of a symmetric matrix; eigenvalues whose magnitude
/// does not exceed `zero_tol` are counted separately.
///
/// Returns `(i_minus, i_plus, zeros)`.
pub fn eigenvalue_sign_counts(sym: &DMatrix<f64>, zero_tol: f64) -> (usize, usize, usize) {
    assert!(sym.is_square());
    let eig = sym.clone().symmetric_eigen();
    let mut counts = (0, 0, 0);
    for lambda in eig.eigenvalues.iter() {
        if *lambda > zero_tol {
            counts.1 += 1;
        } else if *lambda < -zero_tol {
            counts.0 += 1;
        } else {
            counts.2 += 1;
        }
    }
    counts
}

/// Rank of `m` by Gaussian elimination with full pivoting; entries whose
/// magnitude is `≤ tol` are treated as zero.
pub fn rank_with_tol(m: &DMatrix<f64>, tol: f64) -> usize {
    reduce(m.clone(), tol).pivots.len()
}

/// Basis of the null space `{ v : m v = 0 }`, returned as the columns of an
/// `ncols × (ncols − rank)` matrix, in increasing order of free column.
///
/// Elimination uses full pivoting with tolerance `tol`; on matrices whose
/// pivots are exact (e.g. 0/1 block patterns) the result is exact.
pub fn nullspace(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let ncols = m.ncols();
    let red = reduce(m.clone(), tol);
    let pivot_cols: Vec<usize> = red.pivots.iter().map(|&(_, c)| c).collect();
    let free_cols: Vec<usize> = (0..ncols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = DMatrix::zeros(ncols, free_cols.len());
    for (k, &fc) in free_cols.iter().enumerate() {
        basis[(fc, k)] = 1.0;
        for &(pr, pc) in &red.pivots {
            // After reduction, row pr reads: w[pr][pc]·v_pc + w[pr][fc]·v_fc = 0
            // for the free columns fc (all other pivot columns were eliminated).
            basis[(pc, k)] = -red.work[(pr, fc)] / red.work[(pr, pc)];
        }
    }
    basis
}

struct Reduced {
    work: DMatrix<f64>,
    /// `(row, col)` of each accepted pivot, in elimination order.
    pivots: Vec<(usize, usize)>,
}

/// Full-pivot Gauss-Jordan reduction: each accepted pivot eliminates its
/// column from every other row. Scan order is row-major and comparisons are
/// strict, so ties break to the lowest index and the result is deterministic.
fn reduce(mut work: DMatrix<f64>, tol: f64) -> Reduced {
    let (nrows, ncols) = work.shape();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row_used = vec![false; nrows];
    let mut col_used = vec![false; ncols];
    loop {
        let mut best = tol;
        let mut best_pos: Option<(usize, usize)> = None;
        for r in 0..nrows {
            if row_used[r] {
                continue;
            }
            for c in 0..ncols {
                if col_used[c] {
                    continue;
                }
                let a = work[(r, c)].abs();
                if a > best {
                    best = a;
                    best_pos = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = best_pos else { break };
        row_used[pr] = true;
        col_used[pc] = true;
        let pivot = work[(pr, pc)];
        for r in 0..nrows {
            if r == pr {
                continue;
            }
            let factor = work[(r, pc)] / pivot;
            if factor == 0.0 {
                continue;
            }
            for c in 0..ncols {
                let delta = factor * work[(pr, c)];
                work[(r, c)] -= delta;
            }
            work[(r, pc)] = 0.0;
        }
        pivots.push((pr, pc));
    }
    Reduced { work, pivots }
}

/// Orthonormalizes the columns of a full-column-rank matrix (thin QR).
pub fn orthonormal_columns(m: &DMatrix<f64>) -> DMatrix<f64> {
    if m.ncols() == 0 {
        return m.clone();
    }
    m.clone().qr().q()
}

/// Sine of the largest principal angle from `span(sub)` into `span(ambient)`;
/// zero iff `span(sub) ⊆ span(ambient)` (up to rounding). Both inputs must
/// have full column rank.
///
/// Computed from singular values of `Q_sub − Q_amb (Q_ambᵀ Q_sub)` rather
/// than from arccosines of inner products, which would lose half the digits
/// for small angles.
pub fn inclusion_sine(sub: &DMatrix<f64>, ambient: &DMatrix<f64>) -> f64 {
    if sub.ncols() == 0 {
        return 0.0;
    }
    if ambient.ncols() == 0 {
        return 1.0;
    }
    let qs = orthonormal_columns(sub);
    let qa = orthonormal_columns(ambient);
    let residual = &qs - &qa * (qa.transpose() * &qs);
    let sv = residual.singular_values();
    sv.iter().cloned().fold(0.0, f64::max).min(1.0)
}

/// Sine-based distance between two subspaces as the larger of the two
/// inclusion defects; zero iff the spans coincide (up to rounding).
pub fn subspace_gap(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    inclusion_sine(a, b).max(inclusion_sine(b, a))
}

/// Incremental basis completion by Gaussian elimination with max-entry
/// pivoting. Candidates are accepted iff they are independent of everything
/// accepted so far; acceptance is deterministic (strict comparisons, fixed
/// scan order).
pub struct BasisBuilder {
    n: usize,
    /// Accepted columns, as given.
    cols: Vec<nalgebra::DVector<f64>>,
    /// Reduced representatives with their pivot rows.
    pivots: Vec<(usize, nalgebra::DVector<f64>)>,
}

impl BasisBuilder {
    pub fn new(n: usize) -> BasisBuilder {
        BasisBuilder {
            n,
            cols: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    fn reduce(&self, v: &nalgebra::DVector<f64>) -> (usize, f64, nalgebra::DVector<f64>) {
        let mut reduced = v.clone();
        for (row, pivot_vec) in &self.pivots {
            let factor = reduced[*row] / pivot_vec[*row];
            if factor != 0.0 {
                reduced -= pivot_vec * factor;
            }
        }
        let mut best_row = 0;
        let mut best = 0.0;
        for r in 0..self.n {
            let a = reduced[r].abs();
            if a > best {
                best = a;
                best_row = r;
            }
        }
        (best_row, best, reduced)
    }

    /// Largest entry left after eliminating the current pivots from `v`:
    /// how far `v` is from the current span, without accepting it.
    pub fn residual_norm(&self, v: &nalgebra::DVector<f64>) -> f64 {
        assert_eq!(v.len(), self.n);
        self.reduce(v).1
    }

    /// Tries to add `v` to the basis; returns whether it was independent of
    /// the current span. Independence means: after eliminating the stored
    /// pivots, some entry exceeds `1e-10 · max(1, ‖v‖∞)`.
    pub fn try_push(&mut self, v: &nalgebra::DVector<f64>) -> bool {
        assert_eq!(v.len(), self.n);
        let (best_row, best, reduced) = self.reduce(v);
        let tol = 1e-10 * v.amax().max(1.0);
        if best <= tol {
            return false;
        }
        self.cols.push(v.clone());
        self.pivots.push((best_row, reduced));
        true
    }

    /// The accepted columns as a matrix.
    pub fn into_matrix(self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.cols.len());
        for (k, c) in self.cols.iter().enumerate() {
            m.set_column(k, c);
        }
        m
    }
}
