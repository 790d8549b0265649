//! Expression trees for coordinate functions and their canonical text form.

use std::fmt;

/// Expression tree over the coordinates `x1..xn`.
///
/// Trees in *canonical form* — the only form the parser produces — keep every
/// [`Expr::Const`] finite and non-negative; negative values are represented as
/// [`Expr::Neg`] of a non-negative constant. Under that convention printing
/// and re-parsing reproduces the tree exactly. Use [`Expr::number`] instead of
/// building `Const` directly to preserve the convention.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    /// Finite non-negative constant (canonical form).
    Const(f64),
    /// Coordinate with *zero-based* slot `s`, rendered as `x{s+1}`.
    Coord(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Non-negative integer power of a sub-expression.
    Pow(Box<Expr>, u32),
    Neg(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
}

impl Expr {
    /// Constant in canonical form: `-0.0` becomes `0.0` and negative values
    /// become `Neg` of their absolute value.
    ///
    /// # Panics
    /// Panics if `v` is not finite.
    pub fn number(v: f64) -> Expr {
        assert!(v.is_finite(), "expression constants must be finite, got {v}");
        if v == 0.0 {
            Expr::Const(0.0)
        } else if v < 0.0 {
            Expr::Neg(Box::new(Expr::Const(-v)))
        } else {
            Expr::Const(v)
        }
    }

    /// Coordinate `x{slot+1}` (the argument is the zero-based slot).
    pub fn coord(slot: usize) -> Expr {
        Expr::Coord(slot)
    }

    pub fn pow(base: Expr, exponent: u32) -> Expr {
        Expr::Pow(Box::new(base), exponent)
    }

    pub fn sin(a: Expr) -> Expr {
        Expr::Sin(Box::new(a))
    }

    pub fn cos(a: Expr) -> Expr {
        Expr::Cos(Box::new(a))
    }

    pub fn exp(a: Expr) -> Expr {
        Expr::Exp(Box::new(a))
    }

    /// Largest zero-based coordinate slot referenced anywhere in the tree, or
    /// `None` for constant expressions.
    pub fn max_coord_slot(&self) -> Option<usize> {
        match self {
            Expr::Const(_) => None,
            Expr::Coord(s) => Some(*s),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                match (a.max_coord_slot(), b.max_coord_slot()) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, y) => x.or(y),
                }
            }
            Expr::Pow(a, _) | Expr::Neg(a) | Expr::Sin(a) | Expr::Cos(a) | Expr::Exp(a) => {
                a.max_coord_slot()
            }
        }
    }

    /// Whether the tree references any coordinate slot `< bound`.
    ///
    /// This is a structural test (the coordinate appears in the tree), not a
    /// semantic one; `x1 - x1` references slot 0 even though it is constant.
    pub fn references_slot_below(&self, bound: usize) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Coord(s) => *s < bound,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.references_slot_below(bound) || b.references_slot_below(bound)
            }
            Expr::Pow(a, _) | Expr::Neg(a) | Expr::Sin(a) | Expr::Cos(a) | Expr::Exp(a) => {
                a.references_slot_below(bound)
            }
        }
    }

    /// Binding strength used by the printer; higher binds tighter.
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            Expr::Const(_) | Expr::Coord(_) | Expr::Sin(_) | Expr::Cos(_) | Expr::Exp(_) => 5,
        }
    }
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::Div(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

/// Writes `e`, parenthesizing whenever its precedence falls below `min_prec`,
/// so that the grammar re-derives exactly the same tree.
fn write_prec(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
    if e.precedence() < min_prec {
        write!(f, "(")?;
        write_prec(f, e, 0)?;
        return write!(f, ")");
    }
    match e {
        Expr::Const(c) => write!(f, "{c}"),
        Expr::Coord(s) => write!(f, "x{}", s + 1),
        Expr::Add(a, b) => {
            write_prec(f, a, 1)?;
            write!(f, " + ")?;
            write_prec(f, b, 2)
        }
        Expr::Sub(a, b) => {
            write_prec(f, a, 1)?;
            write!(f, " - ")?;
            write_prec(f, b, 2)
        }
        Expr::Mul(a, b) => {
            write_prec(f, a, 2)?;
            write!(f, "*")?;
            write_prec(f, b, 3)
        }
        Expr::Div(a, b) => {
            write_prec(f, a, 2)?;
            write!(f, "/")?;
            write_prec(f, b, 3)
        }
        Expr::Neg(a) => {
            write!(f, "-")?;
            write_prec(f, a, 3)
        }
        Expr::Pow(a, k) => {
            // The grammar only allows atoms as power bases.
            write_prec(f, a, 5)?;
            write!(f, "^{k}")
        }
        Expr::Sin(a) => {
            write!(f, "sin(")?;
            write_prec(f, a, 0)?;
            write!(f, ")")
        }
        Expr::Cos(a) => {
            write!(f, "cos(")?;
            write_prec(f, a, 0)?;
            write!(f, ")")
        }
        Expr::Exp(a) => {
            write!(f, "exp(")?;
            write_prec(f, a, 0)?;
            write!(f, ")")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_prec(f, self, 0)
    }
}
