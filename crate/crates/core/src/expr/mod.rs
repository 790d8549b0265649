//! Scalar coordinate functions: parsing, canonical printing, and exact
//! order-2 jet evaluation.
//!
//! A [`ScalarField`] is an expression in the coordinates `x1..xn` drawn from
//! the grammar in [`parser`]: decimal constants, coordinates, `+ - * /`,
//! non-negative integer powers, unary minus, `sin`, `cos` and `exp`. Fields
//! are immutable and evaluation is pure, so they may be shared freely across
//! threads and evaluated concurrently at distinct points.

mod ast;
mod jet;
mod parser;

pub use ast::Expr;
pub use jet::Jet2;
pub use parser::{parse, ParseError};

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    /// A division whose divisor evaluates to zero at the requested point.
    #[error("division by zero in '{expr}' at point {point:?}")]
    DivisionByZero { expr: String, point: Vec<f64> },
}

/// An expression together with the dimension `n` of the space it lives on.
///
/// Every coordinate referenced by the expression satisfies `1 ≤ i ≤ n`;
/// [`ScalarField::new`] enforces this and [`parse`] rejects violations with a
/// located error.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    ast: Expr,
    nvars: usize,
}

impl ScalarField {
    /// Wraps an expression tree, checking coordinate ranges.
    ///
    /// # Panics
    /// Panics if the tree references a coordinate slot `≥ nvars`. Trees built
    /// from untrusted text should go through [`parse`], which reports the
    /// violation as an error instead.
    pub fn new(ast: Expr, nvars: usize) -> ScalarField {
        if let Some(max) = ast.max_coord_slot() {
            assert!(
                max < nvars,
                "expression references x{} but lives in dimension {nvars}",
                max + 1
            );
        }
        ScalarField { ast, nvars }
    }

    pub fn constant(value: f64, nvars: usize) -> ScalarField {
        ScalarField::new(Expr::number(value), nvars)
    }

    /// The coordinate function `x{slot+1}` (zero-based slot).
    pub fn coord(slot: usize, nvars: usize) -> ScalarField {
        ScalarField::new(Expr::coord(slot), nvars)
    }

    pub fn zero(nvars: usize) -> ScalarField {
        ScalarField::constant(0.0, nvars)
    }

    pub fn one(nvars: usize) -> ScalarField {
        ScalarField::constant(1.0, nvars)
    }

    pub fn ast(&self) -> &Expr {
        &self.ast
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Structural test: does the expression mention any of the coordinates
    /// `x1..x{bound}`?
    pub fn references_slot_below(&self, bound: usize) -> bool {
        self.ast.references_slot_below(bound)
    }

    /// Value of the field at `x`.
    ///
    /// # Panics
    /// Panics if `x.len() != nvars`.
    pub fn eval(&self, x: &[f64]) -> Result<f64, EvalError> {
        assert_eq!(x.len(), self.nvars, "point dimension mismatch");
        eval_value(&self.ast, x)
    }

    /// Value, gradient and Hessian of the field at `x`, exact to rounding.
    ///
    /// # Panics
    /// Panics if `x.len() != nvars`.
    pub fn eval_jet2(&self, x: &[f64]) -> Result<Jet2, EvalError> {
        assert_eq!(x.len(), self.nvars, "point dimension mismatch");
        eval_jet(&self.ast, x)
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.ast.fmt(f)
    }
}

/// Value, gradient and Hessian of `f` at `x`; see [`ScalarField::eval_jet2`].
pub fn eval_jet2(f: &ScalarField, x: &[f64]) -> Result<Jet2, EvalError> {
    f.eval_jet2(x)
}

fn division_by_zero(node: &Expr, x: &[f64]) -> EvalError {
    EvalError::DivisionByZero {
        expr: node.to_string(),
        point: x.to_vec(),
    }
}

fn eval_value(e: &Expr, x: &[f64]) -> Result<f64, EvalError> {
    Ok(match e {
        Expr::Const(c) => *c,
        Expr::Coord(s) => x[*s],
        Expr::Add(a, b) => eval_value(a, x)? + eval_value(b, x)?,
        Expr::Sub(a, b) => eval_value(a, x)? - eval_value(b, x)?,
        Expr::Mul(a, b) => eval_value(a, x)? * eval_value(b, x)?,
        Expr::Div(a, b) => {
            let num = eval_value(a, x)?;
            let den = eval_value(b, x)?;
            if den == 0.0 {
                return Err(division_by_zero(e, x));
            }
            num / den
        }
        Expr::Pow(a, k) => eval_value(a, x)?.powi(*k as i32),
        Expr::Neg(a) => -eval_value(a, x)?,
        Expr::Sin(a) => eval_value(a, x)?.sin(),
        Expr::Cos(a) => eval_value(a, x)?.cos(),
        Expr::Exp(a) => eval_value(a, x)?.exp(),
    })
}

fn eval_jet(e: &Expr, x: &[f64]) -> Result<Jet2, EvalError> {
    let n = x.len();
    Ok(match e {
        Expr::Const(c) => Jet2::constant(*c, n),
        Expr::Coord(s) => Jet2::coordinate(x[*s], *s, n),
        Expr::Add(a, b) => eval_jet(a, x)? + eval_jet(b, x)?,
        Expr::Sub(a, b) => eval_jet(a, x)? - eval_jet(b, x)?,
        Expr::Mul(a, b) => eval_jet(a, x)? * eval_jet(b, x)?,
        Expr::Div(a, b) => {
            let num = eval_jet(a, x)?;
            let den = eval_jet(b, x)?;
            num.checked_div(&den)
                .ok_or_else(|| division_by_zero(e, x))?
        }
        Expr::Pow(a, k) => eval_jet(a, x)?.powi(*k),
        Expr::Neg(a) => -eval_jet(a, x)?,
        Expr::Sin(a) => eval_jet(a, x)?.sin(),
        Expr::Cos(a) => eval_jet(a, x)?.cos(),
        Expr::Exp(a) => eval_jet(a, x)?.exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_and_jet_agree() {
        let f = parse("x1^2*sin(x2) - exp(x1)/(2 + cos(x2))", 2).unwrap();
        let x = [0.3, -1.2];
        let v = f.eval(&x).unwrap();
        let j = f.eval_jet2(&x).unwrap();
        assert_eq!(v, j.value());
    }

    #[test]
    fn spec_polynomial_jet() {
        let f = parse("x2^2", 2).unwrap();
        let j = f.eval_jet2(&[7.0, 3.0]).unwrap();
        assert_eq!(j.value(), 9.0);
        assert_eq!(j.grad(), &[0.0, 6.0]);
        assert_eq!(j.hess_at(0, 0), 0.0);
        assert_eq!(j.hess_at(0, 1), 0.0);
        assert_eq!(j.hess_at(1, 1), 2.0);
    }

    #[test]
    fn division_by_zero_names_the_subexpression() {
        let f = parse("1 + x1/x2", 2).unwrap();
        let err = f.eval_jet2(&[1.0, 0.0]).unwrap_err();
        match err {
            EvalError::DivisionByZero { expr, point } => {
                assert_eq!(expr, "x1/x2");
                assert_eq!(point, vec![1.0, 0.0]);
            }
        }
        assert!(f.eval(&[1.0, 2.0]).is_ok());
    }

    #[test]
    fn absent_coordinates_have_exactly_zero_derivatives() {
        // Slots that an expression never mentions stay exactly 0 through all
        // jet arithmetic; structural coefficient-independence checks rely on
        // this being exact rather than approximate.
        let f = parse("(2 + x3*x4)^2 - sin(x3)", 5).unwrap();
        let j = f.eval_jet2(&[0.3, -0.9, 0.5, 0.7, -0.2]).unwrap();
        for s in [0usize, 1, 4] {
            assert_eq!(j.grad_at(s), 0.0);
            for t in 0..5 {
                assert_eq!(j.hess_at(s, t), 0.0);
            }
        }
    }

    #[test]
    fn display_roundtrip_examples() {
        for text in [
            "0",
            "x2^2 + 3*x1",
            "-(x1*x2) + sin(x3)^2/(1 + exp(x1))",
            "1.8125 - 0.25*x2^2",
            "x1 - -x2",
        ] {
            let f = parse(text, 3).unwrap();
            let printed = f.to_string();
            let reparsed = parse(&printed, 3).unwrap();
            assert_eq!(f, reparsed, "roundtrip failed for '{text}' -> '{printed}'");
        }
    }
}
