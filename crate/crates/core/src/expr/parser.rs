//! Recursive-descent parser for the expression grammar.
//!
//! Grammar (whitespace insignificant, coordinate indices 1-based):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ('^' integer)? | '-' factor
//! atom   := number | 'x' integer | '(' expr ')'
//!         | ('sin' | 'cos' | 'exp') '(' expr ')'
//! ```
//!
//! Numbers are decimal literals with optional fraction and exponent
//! (`2`, `0.5`, `1e-3`). All errors carry the byte offset of the offending
//! token within the input.

use thiserror::Error;

use super::ast::Expr;
use super::ScalarField;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error(
        "coordinate x{index} at byte {offset} is out of range: \
         the expression lives in dimension {nvars}"
    )]
    IndexOutOfRange {
        index: usize,
        offset: usize,
        nvars: usize,
    },
}

impl ParseError {
    /// Byte offset of the offending token.
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::IndexOutOfRange { offset, .. } => {
                *offset
            }
        }
    }
}

/// Parses `text` as an expression in the coordinates `x1..x{nvars}`.
pub fn parse(text: &str, nvars: usize) -> Result<ScalarField, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        nvars,
    };
    let ast = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(ScalarField::new(ast, nvars))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn syntax(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    /// Consumes `byte` if it is next (after whitespace); reports whether it did.
    fn eat(&mut self, byte: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc + self.term()?;
            } else if self.eat(b'-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = acc * self.factor()?;
            } else if self.eat(b'/') {
                acc = acc / self.factor()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            return Ok(-self.factor()?);
        }
        let atom = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            if self.peek() == Some(b'-') {
                return Err(self.syntax(
                    "negative exponents are not supported; write 1/(...)^k instead",
                ));
            }
            let exponent = self.unsigned_integer("integer exponent")?;
            return Ok(Expr::pow(atom, exponent));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.syntax(
                "unexpected end of input; expected a number, coordinate, '(' or function",
            )),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.name(),
            Some(c) => Err(self.syntax(format!(
                "unexpected character '{}'; expected a number, coordinate, '(' or function",
                c as char
            ))),
        }
    }

    /// Parses an alphabetic name: a coordinate `x<digits>` or one of the
    /// functions `sin`, `cos`, `exp` followed by a parenthesized argument.
    fn name(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self
            .peek()
            .map(|c| c.is_ascii_alphabetic())
            .unwrap_or(false)
        {
            self.pos += 1;
        }
        // `src` comes from a &str, and the consumed range is ASCII.
        let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match word {
            "x" => {
                // The index must follow immediately: `x 1` is an error.
                if !self.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
                    return Err(self.syntax("expected a coordinate index immediately after 'x'"));
                }
                let index = self.unsigned_integer_at::<usize>(start, "coordinate index")?;
                if index == 0 || index > self.nvars {
                    return Err(ParseError::IndexOutOfRange {
                        index,
                        offset: start,
                        nvars: self.nvars,
                    });
                }
                Ok(Expr::Coord(index - 1))
            }
            "sin" | "cos" | "exp" => {
                if !self.eat(b'(') {
                    return Err(self.syntax(format!("expected '(' after '{word}'")));
                }
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                Ok(match word {
                    "sin" => Expr::sin(inner),
                    "cos" => Expr::cos(inner),
                    _ => Expr::exp(inner),
                })
            }
            _ => Err(ParseError::Syntax {
                offset: start,
                message: format!(
                    "unknown name '{word}'; expected a coordinate 'x<k>' or one of sin, cos, exp"
                ),
            }),
        }
    }

    /// Parses a run of digits as `T`, reporting errors at the current offset.
    fn unsigned_integer<T: std::str::FromStr>(&mut self, what: &str) -> Result<T, ParseError> {
        let at = self.pos;
        self.unsigned_integer_at(at, what)
    }

    /// Parses a run of digits as `T`, reporting errors at `error_offset`.
    fn unsigned_integer_at<T: std::str::FromStr>(
        &mut self,
        error_offset: usize,
        what: &str,
    ) -> Result<T, ParseError> {
        let start = self.pos;
        while self.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ParseError::Syntax {
                offset: error_offset,
                message: format!("expected {what}"),
            });
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        digits.parse::<T>().map_err(|_| ParseError::Syntax {
            offset: error_offset,
            message: format!("{what} '{digits}' is out of range"),
        })
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
            self.pos += 1;
        }
        if self.peek() == Some(b'.') {
            self.pos += 1;
            let frac_start = self.pos;
            while self.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
                self.pos += 1;
            }
            if self.pos == frac_start {
                return Err(self.syntax("expected digits after the decimal point"));
            }
        }
        // Exponent part, only when it is really one: 'e'/'E', an optional
        // sign, then at least one digit. Otherwise the 'e' belongs to a
        // following name (which the grammar will reject with a clearer error).
        if matches!(self.peek(), Some(b'e') | Some(b'E')) {
            let mut probe = self.pos + 1;
            if matches!(self.src.get(probe), Some(b'+') | Some(b'-')) {
                probe += 1;
            }
            if self
                .src
                .get(probe)
                .map(|c| c.is_ascii_digit())
                .unwrap_or(false)
            {
                self.pos = probe;
                while self.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
                    self.pos += 1;
                }
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let value: f64 = text.parse().map_err(|_| ParseError::Syntax {
            offset: start,
            message: format!("invalid numeric literal '{text}'"),
        })?;
        if !value.is_finite() {
            return Err(ParseError::Syntax {
                offset: start,
                message: format!("numeric literal '{text}' overflows"),
            });
        }
        Ok(Expr::Const(value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ast(text: &str, n: usize) -> Expr {
        parse(text, n).unwrap().ast().clone()
    }

    #[test]
    fn literal_zero() {
        assert_eq!(ast("0", 2), Expr::Const(0.0));
    }

    #[test]
    fn sum_of_power_and_product() {
        let expected = Expr::pow(Expr::coord(1), 2) + Expr::Const(3.0) * Expr::coord(0);
        assert_eq!(ast("x2^2 + 3*x1", 2), expected);
        assert_eq!(ast("  x2 ^ 2+3 * x1 ", 2), expected);
    }

    #[test]
    fn out_of_range_coordinate() {
        assert_eq!(
            parse("x5", 4).unwrap_err(),
            ParseError::IndexOutOfRange {
                index: 5,
                offset: 0,
                nvars: 4
            }
        );
        assert_eq!(
            parse("1 + x0", 2).unwrap_err(),
            ParseError::IndexOutOfRange {
                index: 0,
                offset: 4,
                nvars: 2
            }
        );
    }

    #[test]
    fn precedence_and_associativity() {
        // 1 - 2 - 3 associates left.
        assert_eq!(
            ast("1 - 2 - 3", 1),
            Expr::Const(1.0) - Expr::Const(2.0) - Expr::Const(3.0)
        );
        // 2*x1^2 binds the power tighter than the product.
        assert_eq!(
            ast("2*x1^2", 1),
            Expr::Const(2.0) * Expr::pow(Expr::coord(0), 2)
        );
        // Unary minus under a product: -x1*x2 is (-x1)*x2 per the grammar.
        assert_eq!(ast("-x1*x2", 2), -Expr::coord(0) * Expr::coord(1));
        // ...but -x1^2 is -(x1^2).
        assert_eq!(ast("-x1^2", 1), -Expr::pow(Expr::coord(0), 2));
    }

    #[test]
    fn functions_and_nesting() {
        assert_eq!(
            ast("sin(cos(x1) + exp(0.5))", 1),
            Expr::sin(Expr::cos(Expr::coord(0)) + Expr::exp(Expr::Const(0.5)))
        );
    }

    #[test]
    fn numeric_literals() {
        assert_eq!(ast("0.25", 1), Expr::Const(0.25));
        assert_eq!(ast("1e-3", 1), Expr::Const(1e-3));
        assert_eq!(ast("2E2", 1), Expr::Const(200.0));
        assert!(matches!(
            parse("1e400", 1).unwrap_err(),
            ParseError::Syntax { offset: 0, .. }
        ));
    }

    #[test]
    fn error_offsets() {
        assert_eq!(parse("2 +", 1).unwrap_err().offset(), 3);
        assert_eq!(parse("(x1", 1).unwrap_err().offset(), 3);
        assert_eq!(parse("x1 x2", 2).unwrap_err().offset(), 3);
        assert_eq!(parse("x1 + $", 2).unwrap_err().offset(), 5);
        assert_eq!(parse("sin x1", 1).unwrap_err().offset(), 4);
        assert_eq!(parse("foo(x1)", 1).unwrap_err().offset(), 0);
        assert_eq!(parse("3.", 1).unwrap_err().offset(), 2);
    }

    #[test]
    fn negative_exponent_is_rejected() {
        let err = parse("x1^-2", 1).unwrap_err();
        assert!(matches!(err, ParseError::Syntax { offset: 3, .. }));
    }

    #[test]
    fn trailing_exponent_letter_is_not_a_number_part() {
        // '2e' with no digits: the 'e' is left for the name parser, which
        // rejects it as an unknown name at its own offset.
        let err = parse("2e", 1).unwrap_err();
        assert_eq!(err.offset(), 1);
    }
}
