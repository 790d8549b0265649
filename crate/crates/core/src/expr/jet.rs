//! Order-2 forward-mode jets: a value together with its gradient and Hessian,
//! propagated through arithmetic by the exact Leibniz and chain rules.
//!
//! A `Jet2` truncates a function's Taylor expansion after order two, which is
//! all the differential structure curvature computations need: Christoffel
//! symbols consume first derivatives of the metric, curvature consumes second
//! derivatives, nothing consumes third. Every rule below is the exact
//! derivative identity evaluated in floating point, so results carry rounding
//! error only — no truncation error.

/// Number of entries in the packed upper triangle of an `n × n` symmetric
/// matrix.
#[inline]
fn ut_len(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Packed index of entry `(a, b)` of a symmetric matrix stored as its upper
/// triangle in row-major order.
#[inline]
fn ut_index(n: usize, a: usize, b: usize) -> usize {
    let (i, j) = if a <= b { (a, b) } else { (b, a) };
    i * n - i * (i + 1) / 2 + j
}

/// Value, gradient and Hessian of a scalar function at a point of `Rⁿ`.
///
/// The Hessian is stored as its upper triangle, so it is exactly symmetric by
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet2 {
    n: usize,
    value: f64,
    grad: Vec<f64>,
    hess: Vec<f64>,
}

impl Jet2 {
    /// The jet of a constant.
    pub fn constant(value: f64, n: usize) -> Jet2 {
        Jet2 {
            n,
            value,
            grad: vec![0.0; n],
            hess: vec![0.0; ut_len(n)],
        }
    }

    /// The jet of the coordinate function for `slot`, seeded with the
    /// coordinate's value at the evaluation point.
    pub fn coordinate(value: f64, slot: usize, n: usize) -> Jet2 {
        assert!(slot < n, "coordinate slot {slot} out of range for R^{n}");
        let mut grad = vec![0.0; n];
        grad[slot] = 1.0;
        Jet2 {
            n,
            value,
            grad,
            hess: vec![0.0; ut_len(n)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// Gradient as a slice of length `n`.
    pub fn grad(&self) -> &[f64] {
        &self.grad
    }

    pub fn grad_at(&self, a: usize) -> f64 {
        self.grad[a]
    }

    /// Hessian entry `(a, b)`; the two orders agree exactly.
    pub fn hess_at(&self, a: usize, b: usize) -> f64 {
        self.hess[ut_index(self.n, a, b)]
    }

    /// Packed upper triangle of the Hessian, row-major.
    pub fn hess_upper(&self) -> &[f64] {
        &self.hess
    }

    fn assert_same_shape(&self, other: &Jet2) {
        assert_eq!(
            self.n, other.n,
            "jet arithmetic requires operands over the same R^n"
        );
    }

    /// Product by the Leibniz rule:
    /// `(fg)' = f'g + fg'`, `(fg)'' = f''g + f'g' + g'f' + fg''`.
    pub fn mul(&self, other: &Jet2) -> Jet2 {
        self.assert_same_shape(other);
        let n = self.n;
        let mut out = Jet2::constant(self.value * other.value, n);
        for a in 0..n {
            out.grad[a] = self.grad[a] * other.value + self.value * other.grad[a];
        }
        let mut idx = 0;
        for a in 0..n {
            for b in a..n {
                out.hess[idx] = self.hess[idx] * other.value
                    + self.grad[a] * other.grad[b]
                    + self.grad[b] * other.grad[a]
                    + self.value * other.hess[idx];
                idx += 1;
            }
        }
        debug_assert_eq!(idx, ut_len(n));
        out
    }

    /// Quotient, solving the Leibniz rule for the unknown jet. Returns `None`
    /// when the divisor's value vanishes.
    pub fn checked_div(&self, other: &Jet2) -> Option<Jet2> {
        self.assert_same_shape(other);
        if other.value == 0.0 {
            return None;
        }
        let n = self.n;
        let q = self.value / other.value;
        let mut out = Jet2::constant(q, n);
        for a in 0..n {
            out.grad[a] = (self.grad[a] - q * other.grad[a]) / other.value;
        }
        let mut idx = 0;
        for a in 0..n {
            for b in a..n {
                out.hess[idx] = (self.hess[idx]
                    - out.grad[a] * other.grad[b]
                    - out.grad[b] * other.grad[a]
                    - q * other.hess[idx])
                    / other.value;
                idx += 1;
            }
        }
        Some(out)
    }

    /// Chain rule for a scalar function applied to this jet, given the
    /// function's value and first two derivatives at `self.value`.
    fn chain(&self, value: f64, d1: f64, d2: f64) -> Jet2 {
        let n = self.n;
        let mut out = Jet2::constant(value, n);
        for a in 0..n {
            out.grad[a] = d1 * self.grad[a];
        }
        let mut idx = 0;
        for a in 0..n {
            for b in a..n {
                out.hess[idx] = d1 * self.hess[idx] + d2 * self.grad[a] * self.grad[b];
                idx += 1;
            }
        }
        out
    }

    pub fn sin(&self) -> Jet2 {
        let (s, c) = self.value.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(&self) -> Jet2 {
        let (s, c) = self.value.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn exp(&self) -> Jet2 {
        let e = self.value.exp();
        self.chain(e, e, e)
    }

    /// Integer power by the chain rule for `t ↦ tᵏ`. The derivative factors
    /// are assembled so that `0⁰ = 1` and no negative power of zero is ever
    /// formed.
    pub fn powi(&self, k: u32) -> Jet2 {
        match k {
            0 => Jet2::constant(1.0, self.n),
            1 => self.clone(),
            _ => {
                let v = self.value;
                let kf = k as f64;
                let value = v.powi(k as i32);
                let d1 = kf * v.powi(k as i32 - 1);
                let d2 = kf * (kf - 1.0) * v.powi(k as i32 - 2);
                self.chain(value, d1, d2)
            }
        }
    }
}

impl std::ops::Add for Jet2 {
    type Output = Jet2;
    fn add(mut self, other: Jet2) -> Jet2 {
        self.assert_same_shape(&other);
        self.value += other.value;
        for (a, b) in self.grad.iter_mut().zip(&other.grad) {
            *a += *b;
        }
        for (a, b) in self.hess.iter_mut().zip(&other.hess) {
            *a += *b;
        }
        self
    }
}

impl std::ops::Sub for Jet2 {
    type Output = Jet2;
    fn sub(mut self, other: Jet2) -> Jet2 {
        self.assert_same_shape(&other);
        self.value -= other.value;
        for (a, b) in self.grad.iter_mut().zip(&other.grad) {
            *a -= *b;
        }
        for (a, b) in self.hess.iter_mut().zip(&other.hess) {
            *a -= *b;
        }
        self
    }
}

impl std::ops::Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, other: Jet2) -> Jet2 {
        Jet2::mul(&self, &other)
    }
}

impl std::ops::Neg for Jet2 {
    type Output = Jet2;
    fn neg(mut self) -> Jet2 {
        self.value = -self.value;
        for a in &mut self.grad {
            *a = -*a;
        }
        for a in &mut self.hess {
            *a = -*a;
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packed_index_roundtrip() {
        let n = 5;
        let mut seen = vec![false; ut_len(n)];
        for a in 0..n {
            for b in a..n {
                let idx = ut_index(n, a, b);
                assert!(!seen[idx]);
                seen[idx] = true;
                assert_eq!(idx, ut_index(n, b, a));
            }
        }
        assert!(seen.into_iter().all(|s| s));
    }

    #[test]
    fn square_of_coordinate() {
        // f = x2^2 at (7, 3): value 9, grad (0, 6), hess [[0,0],[0,2]].
        let x2 = Jet2::coordinate(3.0, 1, 2);
        let f = x2.powi(2);
        assert_eq!(f.value(), 9.0);
        assert_eq!(f.grad(), &[0.0, 6.0]);
        assert_eq!(f.hess_at(0, 0), 0.0);
        assert_eq!(f.hess_at(0, 1), 0.0);
        assert_eq!(f.hess_at(1, 1), 2.0);
    }

    #[test]
    fn sine_at_zero() {
        let x = Jet2::coordinate(0.0, 0, 1);
        let f = x.sin();
        assert_eq!(f.value(), 0.0);
        assert_eq!(f.grad(), &[1.0]);
        assert_eq!(f.hess_at(0, 0), 0.0);
    }

    #[test]
    fn product_rule_cross_terms() {
        // f = x1 * x2 at (2, 5): hess has exactly one mixed 1.
        let x1 = Jet2::coordinate(2.0, 0, 2);
        let x2 = Jet2::coordinate(5.0, 1, 2);
        let f = x1 * x2;
        assert_eq!(f.value(), 10.0);
        assert_eq!(f.grad(), &[5.0, 2.0]);
        assert_eq!(f.hess_at(0, 0), 0.0);
        assert_eq!(f.hess_at(0, 1), 1.0);
        assert_eq!(f.hess_at(1, 1), 0.0);
    }

    #[test]
    fn division_inverts_multiplication() {
        let x1 = Jet2::coordinate(0.7, 0, 2);
        let x2 = Jet2::coordinate(-1.3, 1, 2);
        let product = Jet2::mul(&x1, &x2);
        let back = product.checked_div(&x2).unwrap();
        assert!((back.value() - x1.value()).abs() < 1e-15);
        for a in 0..2 {
            assert!((back.grad_at(a) - x1.grad_at(a)).abs() < 1e-15);
            for b in a..2 {
                assert!((back.hess_at(a, b) - x1.hess_at(a, b)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn division_by_zero_value_is_detected() {
        let one = Jet2::constant(1.0, 1);
        let zero = Jet2::coordinate(0.0, 0, 1);
        assert!(one.checked_div(&zero).is_none());
    }

    #[test]
    fn power_at_zero_base() {
        let x = Jet2::coordinate(0.0, 0, 1);
        let f = x.powi(2);
        assert_eq!(f.value(), 0.0);
        assert_eq!(f.grad(), &[0.0]);
        assert_eq!(f.hess_at(0, 0), 2.0);

        let g = x.powi(0);
        assert_eq!(g.value(), 1.0);
        assert_eq!(g.grad(), &[0.0]);

        let h = x.powi(3);
        assert_eq!(h.value(), 0.0);
        assert_eq!(h.grad(), &[0.0]);
        assert_eq!(h.hess_at(0, 0), 0.0);
    }

    #[test]
    fn power_matches_repeated_multiplication() {
        let x = Jet2::coordinate(1.37, 0, 2);
        let y = Jet2::coordinate(-0.42, 1, 2);
        let f = Jet2::mul(&x, &y) + Jet2::constant(0.5, 2);
        let direct = f.powi(4);
        let repeated = Jet2::mul(&Jet2::mul(&f, &f), &Jet2::mul(&f, &f));
        assert!((direct.value() - repeated.value()).abs() <= 1e-12 * repeated.value().abs());
        for a in 0..2 {
            for b in a..2 {
                let d = (direct.hess_at(a, b) - repeated.hess_at(a, b)).abs();
                assert!(d <= 1e-12 * repeated.hess_at(a, b).abs().max(1.0));
            }
        }
    }
}
