//! Symmetric metric tensors with expression-valued entries.

use nalgebra::DMatrix;

use crate::expr::{EvalError, Jet2, ScalarField};

/// Packed index of entry `(a, b)` in an upper-triangular row-major layout.
#[inline]
pub(crate) fn ut_index(n: usize, a: usize, b: usize) -> usize {
    let (i, j) = if a <= b { (a, b) } else { (b, a) };
    i * n - i * (i + 1) / 2 + j
}

/// An `n × n` symmetric matrix of scalar fields — the tensor `g`.
///
/// Only the upper triangle is stored, so `g_ij ≡ g_ji` holds by construction;
/// there is no way to build an asymmetric metric.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricField {
    n: usize,
    entries: Vec<ScalarField>,
}

impl MetricField {
    /// Builds the metric from a generator called once per upper-triangular
    /// entry `(i, j)` with `i ≤ j`.
    ///
    /// # Panics
    /// Panics if an entry's dimension differs from `n`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> ScalarField) -> MetricField {
        let mut entries = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                let e = f(i, j);
                assert_eq!(
                    e.nvars(),
                    n,
                    "metric entry ({i},{j}) lives in dimension {} but the metric is {n}-dimensional",
                    e.nvars()
                );
                entries.push(e);
            }
        }
        MetricField { n, entries }
    }

    /// Builds the metric from full rows, which must form a structurally
    /// symmetric square matrix (mirrored entries equal as expression trees).
    ///
    /// # Panics
    /// Panics on shape or symmetry violations; intended for programmatic
    /// construction, not for untrusted input.
    pub fn from_rows(rows: Vec<Vec<ScalarField>>) -> MetricField {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "metric row {i} has length {}", row.len());
            for j in 0..i {
                assert_eq!(
                    row[j], rows[j][i],
                    "metric entries ({i},{j}) and ({j},{i}) differ"
                );
            }
        }
        MetricField::from_fn(n, |i, j| rows[i][j].clone())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `g_ij`; the two index orders return the same field.
    pub fn entry(&self, i: usize, j: usize) -> &ScalarField {
        &self.entries[ut_index(self.n, i, j)]
    }

    /// Matrix of values `g(x)`.
    pub fn eval_matrix(&self, x: &[f64]) -> Result<DMatrix<f64>, EvalError> {
        let n = self.n;
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = self.entry(i, j).eval(x)?;
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Ok(m)
    }

    /// Order-2 jets of every entry at `x`.
    pub fn eval_jets(&self, x: &[f64]) -> Result<MetricJets, EvalError> {
        let jets = self
            .entries
            .iter()
            .map(|e| e.eval_jet2(x))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MetricJets { n: self.n, jets })
    }

    /// Scale-aware degeneracy threshold `1e-10 · (max |g_ij(x)|)ⁿ`: the
    /// determinant of `g(x)` must exceed this for the point to count as
    /// nondegenerate.
    pub fn degeneracy_threshold(values: &DMatrix<f64>) -> f64 {
        let max = values.amax();
        1e-10 * max.powi(values.nrows() as i32)
    }

    /// Whether `|det g(x)|` clears the scale-aware threshold.
    pub fn nondegenerate_at(&self, x: &[f64]) -> Result<bool, EvalError> {
        let m = self.eval_matrix(x)?;
        let threshold = MetricField::degeneracy_threshold(&m);
        Ok(m.determinant().abs() > threshold)
    }
}

/// The jets of every metric entry at one point: `g`, `∂g` and `∂∂g`.
#[derive(Debug, Clone)]
pub struct MetricJets {
    n: usize,
    jets: Vec<Jet2>,
}

impl MetricJets {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn jet(&self, i: usize, j: usize) -> &Jet2 {
        &self.jets[ut_index(self.n, i, j)]
    }

    /// `g(x)` as a matrix.
    pub fn value_matrix(&self) -> DMatrix<f64> {
        let n = self.n;
        DMatrix::from_fn(n, n, |i, j| self.jet(i, j).value())
    }

    /// `∂_p g_ij`.
    pub fn d(&self, p: usize, i: usize, j: usize) -> f64 {
        self.jet(i, j).grad_at(p)
    }

    /// `∂_p ∂_q g_ij`; exactly symmetric in `(p, q)` and in `(i, j)`.
    pub fn dd(&self, p: usize, q: usize, i: usize, j: usize) -> f64 {
        self.jet(i, j).hess_at(p, q)
    }
}
