//! Vector fields and distributions (spans of vector fields).

use nalgebra::{DMatrix, DVector};

use crate::expr::{EvalError, ScalarField};

/// A vector field on `Rⁿ` with expression-valued components.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    n: usize,
    components: Vec<ScalarField>,
}

impl VectorField {
    /// # Panics
    /// Panics if the component count or any component's dimension differs
    /// from `n`.
    pub fn new(n: usize, components: Vec<ScalarField>) -> VectorField {
        assert_eq!(components.len(), n, "vector field needs {n} components");
        for (k, c) in components.iter().enumerate() {
            assert_eq!(
                c.nvars(),
                n,
                "component {k} lives in dimension {}, expected {n}",
                c.nvars()
            );
        }
        VectorField { n, components }
    }

    /// The coordinate field `∂_{slot}` (zero-based slot).
    pub fn coordinate(n: usize, slot: usize) -> VectorField {
        assert!(slot < n);
        VectorField::new(
            n,
            (0..n)
                .map(|k| ScalarField::constant(if k == slot { 1.0 } else { 0.0 }, n))
                .collect(),
        )
    }

    /// A constant vector field with the given component values.
    pub fn constant(n: usize, values: &[f64]) -> VectorField {
        assert_eq!(values.len(), n);
        VectorField::new(
            n,
            values.iter().map(|v| ScalarField::constant(*v, n)).collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn component(&self, k: usize) -> &ScalarField {
        &self.components[k]
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.components
    }

    /// Component values at `x`.
    pub fn eval(&self, x: &[f64]) -> Result<DVector<f64>, EvalError> {
        let mut v = DVector::zeros(self.n);
        for (k, c) in self.components.iter().enumerate() {
            v[k] = c.eval(x)?;
        }
        Ok(v)
    }

    /// Values and Jacobian at `x`: returns `(v, J)` with `J[(i, k)] = ∂_i vᵏ`.
    pub fn eval_with_jacobian(&self, x: &[f64]) -> Result<(DVector<f64>, DMatrix<f64>), EvalError> {
        let n = self.n;
        let mut v = DVector::zeros(n);
        let mut jac = DMatrix::zeros(n, n);
        for (k, c) in self.components.iter().enumerate() {
            let jet = c.eval_jet2(x)?;
            v[k] = jet.value();
            for i in 0..n {
                jac[(i, k)] = jet.grad_at(i);
            }
        }
        Ok((v, jac))
    }
}

/// A rank-`m` distribution: the span of `m` vector fields.
///
/// Linear independence of the spanning fields is a pointwise property; the
/// operations that need it test the evaluated basis matrix for full rank and
/// report rank deficiency as an error.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    n: usize,
    fields: Vec<VectorField>,
}

impl Distribution {
    /// # Panics
    /// Panics if a field's dimension differs from `n`.
    pub fn new(n: usize, fields: Vec<VectorField>) -> Distribution {
        for f in &fields {
            assert_eq!(f.n(), n, "spanning field dimension mismatch");
        }
        Distribution { n, fields }
    }

    /// The rank-0 distribution.
    pub fn empty(n: usize) -> Distribution {
        Distribution::new(n, Vec::new())
    }

    /// Span of the coordinate fields for the given zero-based slot range.
    pub fn span_of_coordinates(n: usize, slots: std::ops::Range<usize>) -> Distribution {
        assert!(slots.end <= n);
        Distribution::new(n, slots.map(|s| VectorField::coordinate(n, s)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The number of spanning fields `m`.
    pub fn rank(&self) -> usize {
        self.fields.len()
    }

    pub fn fields(&self) -> &[VectorField] {
        &self.fields
    }

    pub fn field(&self, a: usize) -> &VectorField {
        &self.fields[a]
    }

    /// The `n × m` matrix whose columns are the spanning fields at `x`.
    pub fn basis_matrix_at(&self, x: &[f64]) -> Result<DMatrix<f64>, EvalError> {
        let mut m = DMatrix::zeros(self.n, self.fields.len());
        for (a, f) in self.fields.iter().enumerate() {
            m.set_column(a, &f.eval(x)?);
        }
        Ok(m)
    }
}
