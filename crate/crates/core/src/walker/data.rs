//! Block data for canonical-form metrics and their assembly.

use crate::expr::{Expr, ScalarField};
use crate::geometry::{Distribution, MetricField};

use super::WalkerError;

/// One block of entries, stored row-major; empty when the block has no slots.
pub type Block = Vec<Vec<ScalarField>>;

/// The three variable blocks of an `n`-dimensional canonical-form metric with
/// an `r`-dimensional null parallel plane: `A` is `(n−2r)×(n−2r)` symmetric,
/// `H` is `(n−2r)×r`, `B` is `r×r` symmetric. `A` and `H` may not involve the
/// coordinates `x1..xr`; `B` is unconstrained. Blocks with zero rows or zero
/// columns are stored as empty vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkerData {
    n: usize,
    r: usize,
    a: Vec<Vec<ScalarField>>,
    h: Vec<Vec<ScalarField>>,
    b: Vec<Vec<ScalarField>>,
}

fn block_shape(
    block: &'static str,
    rows: &[Vec<ScalarField>],
    expected_rows: usize,
    expected_cols: usize,
    n: usize,
) -> Result<(), WalkerError> {
    // A block that would have no entries must be entirely absent.
    let expected_rows = if expected_cols == 0 { 0 } else { expected_rows };
    let shape_error = |found_rows, found_cols| WalkerError::BlockShape {
        block,
        expected_rows,
        expected_cols,
        found_rows,
        found_cols,
    };
    if rows.len() != expected_rows {
        let found_cols = rows.first().map_or(0, Vec::len);
        return Err(shape_error(rows.len(), found_cols));
    }
    for row in rows {
        if row.len() != expected_cols {
            return Err(shape_error(rows.len(), row.len()));
        }
        for entry in row {
            assert_eq!(
                entry.nvars(),
                n,
                "block {block} entry lives in dimension {}, expected {n}",
                entry.nvars()
            );
        }
    }
    Ok(())
}

fn require_symmetric(block: &'static str, rows: &[Vec<ScalarField>]) -> Result<(), WalkerError> {
    for (i, row) in rows.iter().enumerate() {
        for j in 0..i {
            if row[j] != rows[j][i] {
                return Err(WalkerError::AsymmetricBlock { block, row: i, col: j });
            }
        }
    }
    Ok(())
}

impl WalkerData {
    /// Builds and fully validates the block data: index range, block shapes,
    /// structural symmetry of `A` and `B` (mirrored entries equal as
    /// expression trees), and independence of `A` and `H` from `x1..xr`.
    pub fn new(
        n: usize,
        r: usize,
        a: Vec<Vec<ScalarField>>,
        h: Vec<Vec<ScalarField>>,
        b: Vec<Vec<ScalarField>>,
    ) -> Result<WalkerData, WalkerError> {
        let data = WalkerData::new_unchecked(n, r, a, h, b);
        data.validate()?;
        Ok(data)
    }

    /// Builds the block data checking only shapes, not the symmetry and
    /// coordinate-independence invariants. This is the entry point for
    /// deliberately invalid instances (negative controls) whose defects
    /// should surface as verification failures rather than input errors.
    ///
    /// # Panics
    /// Panics if `2r > n` or a block has the wrong shape.
    pub fn new_unchecked(
        n: usize,
        r: usize,
        a: Vec<Vec<ScalarField>>,
        h: Vec<Vec<ScalarField>>,
        b: Vec<Vec<ScalarField>>,
    ) -> WalkerData {
        assert!(2 * r <= n, "r = {r} out of range for n = {n}");
        let s = n - 2 * r;
        block_shape("A", &a, s, s, n).expect("A block shape");
        block_shape("H", &h, s, r, n).expect("H block shape");
        block_shape("B", &b, r, r, n).expect("B block shape");
        WalkerData { n, r, a, h, b }
    }

    /// Re-checks every construction invariant; [`WalkerData::new`] is
    /// `new_unchecked` followed by this.
    pub fn validate(&self) -> Result<(), WalkerError> {
        if 2 * self.r > self.n {
            return Err(WalkerError::RankRange { n: self.n, r: self.r });
        }
        let s = self.n - 2 * self.r;
        block_shape("A", &self.a, s, s, self.n)?;
        block_shape("H", &self.h, s, self.r, self.n)?;
        block_shape("B", &self.b, self.r, self.r, self.n)?;
        require_symmetric("A", &self.a)?;
        require_symmetric("B", &self.b)?;
        for (block, rows) in [("A", &self.a), ("H", &self.h)] {
            for (i, row) in rows.iter().enumerate() {
                for (j, entry) in row.iter().enumerate() {
                    if entry.references_slot_below(self.r) {
                        let coordinate = (0..self.r)
                            .find(|&p| entry.references_slot_below(p + 1))
                            .expect("some slot below r is referenced");
                        return Err(WalkerError::ForbiddenCoordinate {
                            block,
                            row: i,
                            col: j,
                            coordinate,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn a(&self) -> &[Vec<ScalarField>] {
        &self.a
    }

    pub fn h(&self) -> &[Vec<ScalarField>] {
        &self.h
    }

    pub fn b(&self) -> &[Vec<ScalarField>] {
        &self.b
    }

    /// Decomposes into `(n, r, a, h, b)` for programmatic block surgery.
    pub fn into_blocks(self) -> (usize, usize, Block, Block, Block) {
        (self.n, self.r, self.a, self.h, self.b)
    }

    /// The coordinate index ranges induced by `(n, r)`.
    pub fn split(&self) -> CoordinateSplit {
        CoordinateSplit { n: self.n, r: self.r }
    }

    /// Validates and assembles the blocks into the canonical-form metric.
    pub fn assemble(&self) -> Result<MetricField, WalkerError> {
        self.validate()?;
        Ok(self.assemble_unchecked())
    }

    /// Assembles without re-running validation; defects of unchecked data
    /// carry over into the resulting metric.
    pub fn assemble_unchecked(&self) -> MetricField {
        let (n, r) = (self.n, self.r);
        let s = n - 2 * r;
        MetricField::from_fn(n, |i, j| {
            // i ≤ j, so (i, j) never lands in a below-diagonal block.
            if i < r {
                let unit = j == n - r + i;
                ScalarField::constant(if unit { 1.0 } else { 0.0 }, n)
            } else if j < r + s {
                self.a[i - r][j - r].clone()
            } else if i < r + s {
                self.h[i - r][j - (n - r)].clone()
            } else {
                self.b[i - (n - r)][j - (n - r)].clone()
            }
        })
    }

    /// The negative control for the coordinate-independence requirement:
    /// adds `x1` to the first `H` entry, leaving every structural block
    /// (zeros, identities, symmetry) intact. Returns `None` when there is no
    /// `H` block to perturb (`r = 0` or `n = 2r`), since `B` may legally
    /// depend on `x1`.
    pub fn with_forbidden_dependence(&self) -> Option<WalkerData> {
        if self.r == 0 || self.n == 2 * self.r {
            return None;
        }
        let mut h = self.h.clone();
        let old = h[0][0].ast().clone();
        h[0][0] = ScalarField::new(old + Expr::coord(0), self.n);
        Some(WalkerData {
            n: self.n,
            r: self.r,
            a: self.a.clone(),
            h,
            b: self.b.clone(),
        })
    }
}

/// Validates and assembles block data into the canonical-form metric;
/// equivalent to [`WalkerData::assemble`].
pub fn assemble(data: &WalkerData) -> Result<MetricField, WalkerError> {
    data.assemble()
}

/// The coordinate index groups determined by the splitting `(n, r)`, as
/// zero-based ranges. The first `r` coordinates run along the null leaves;
/// the remaining groups describe the quotients the construction factors
/// through.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoordinateSplit {
    pub n: usize,
    pub r: usize,
}

impl CoordinateSplit {
    pub fn new(n: usize, r: usize) -> Result<CoordinateSplit, WalkerError> {
        if 2 * r > n {
            return Err(WalkerError::RankRange { n, r });
        }
        Ok(CoordinateSplit { n, r })
    }

    /// Slots of the coordinates spanning the null parallel plane (`r` many).
    pub fn null_indices(self) -> std::ops::Range<usize> {
        0..self.r
    }

    /// Slots of the coordinates that descend to the deepest quotient,
    /// transverse to the orthogonal-complement leaves (`r` many).
    pub fn sigma_indices(self) -> std::ops::Range<usize> {
        self.n - self.r..self.n
    }

    /// Slots of the coordinates transverse to the null leaves (`n − r` many).
    pub fn q_indices(self) -> std::ops::Range<usize> {
        self.r..self.n
    }

    /// Slots of the coordinates running along the orthogonal-complement
    /// leaves (`n − r` many).
    pub fn fibre_indices(self) -> std::ops::Range<usize> {
        0..self.n - self.r
    }

    /// Slots along the complement leaves but transverse to the null leaves
    /// (`n − 2r` many); these index the rows and columns of `A`.
    pub fn leaf_q_indices(self) -> std::ops::Range<usize> {
        self.r..self.n - self.r
    }
}

/// The span of the first `r` coordinate fields — the null parallel plane of
/// a canonical-form metric.
pub fn canonical_distribution(n: usize, r: usize) -> Result<Distribution, WalkerError> {
    if r == 0 || 2 * r > n {
        return Err(WalkerError::RankRange { n, r });
    }
    Ok(Distribution::span_of_coordinates(n, 0..r))
}

/// The extreme case `n = 2r`, where the plane coincides with its orthogonal
/// complement: `A` and `H` are empty and the metric is `[[0, I], [I, B]]`,
/// of neutral signature `(r, r)` at every point. Returns the metric together
/// with the plane it carries.
pub fn mid_dimensional_assemble(
    r: usize,
    b: Vec<Vec<ScalarField>>,
) -> Result<(MetricField, Distribution), WalkerError> {
    if r == 0 {
        return Err(WalkerError::RankRange { n: 0, r });
    }
    let data = WalkerData::new(2 * r, r, Vec::new(), Vec::new(), b)?;
    let d = canonical_distribution(2 * r, r)?;
    Ok((data.assemble_unchecked(), d))
}
