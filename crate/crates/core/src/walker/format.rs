//! Plain-text format for block data.
//!
//! A file holds one instance: a header `walker n=<int> r=<int>`, then the
//! blocks that have entries, each introduced by its label on its own line
//! (`A:`, `H:`, `B:`, in that order) and followed by one line per row with
//! the row's entries separated by `;`. Blocks without entries are omitted —
//! `A` and `H` when `n = 2r`, `H` and `B` when `r = 0`. Blank lines are
//! ignored. Symmetric blocks must be written symmetrically: mirrored entries
//! must parse to identical expression trees.
//!
//! ```text
//! walker n=4 r=1
//! A:
//! 1.5; 0
//! 0; -1.5
//! H:
//! x2
//! 0
//! B:
//! x2^2 - x3^2
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use crate::expr::{parse, ParseError, ScalarField};

use super::data::WalkerData;

/// Errors in the text format, located by 1-based line (and byte column for
/// expression errors).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkerFormatError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}, column {column}: {source}")]
    Expression {
        line: usize,
        column: usize,
        source: ParseError,
    },
}

fn malformed(line: usize, message: impl Into<String>) -> WalkerFormatError {
    WalkerFormatError::Malformed {
        line,
        message: message.into(),
    }
}

/// Numbered non-blank lines.
struct Lines<'a> {
    rest: std::iter::Peekable<std::vec::IntoIter<(usize, &'a str)>>,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Lines<'a> {
        let numbered: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.trim().is_empty())
            .collect();
        Lines {
            last_line: text.lines().count(),
            rest: numbered.into_iter().peekable(),
        }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        self.rest.next()
    }

    fn peek(&mut self) -> Option<(usize, &'a str)> {
        self.rest.peek().copied()
    }

    /// Line number to blame when input ends too early.
    fn eof_line(&mut self) -> usize {
        self.peek().map(|(l, _)| l).unwrap_or(self.last_line + 1)
    }
}

fn parse_header(lines: &mut Lines) -> Result<(usize, usize), WalkerFormatError> {
    let (line, text) = lines
        .next()
        .ok_or_else(|| malformed(1, "empty input; expected header `walker n=<int> r=<int>`"))?;
    let tokens: Vec<&str> = text.split_whitespace().collect();
    let usage = "expected header `walker n=<int> r=<int>`";
    if tokens.len() != 3 || tokens[0] != "walker" {
        return Err(malformed(line, usage));
    }
    let field = |token: &str, key: &str| -> Result<usize, WalkerFormatError> {
        token
            .strip_prefix(key)
            .and_then(|v| v.strip_prefix('='))
            .and_then(|v| v.parse::<usize>().ok())
            .ok_or_else(|| malformed(line, usage))
    };
    let n = field(tokens[1], "n")?;
    let r = field(tokens[2], "r")?;
    if n == 0 {
        return Err(malformed(line, "n must be positive"));
    }
    if 2 * r > n {
        return Err(malformed(line, format!("r = {r} exceeds n/2 for n = {n}")));
    }
    Ok((n, r))
}

fn parse_block(
    lines: &mut Lines,
    label: &str,
    rows: usize,
    cols: usize,
    n: usize,
) -> Result<Vec<Vec<ScalarField>>, WalkerFormatError> {
    if rows == 0 || cols == 0 {
        return Ok(Vec::new());
    }
    let eof = lines.eof_line();
    let (line, text) = lines
        .next()
        .ok_or_else(|| malformed(eof, format!("missing block `{label}:`")))?;
    if text.trim() != format!("{label}:") {
        return Err(malformed(line, format!("expected block label `{label}:`")));
    }
    let mut block = Vec::with_capacity(rows);
    for i in 0..rows {
        let eof = lines.eof_line();
        let (line, text) = lines.next().ok_or_else(|| {
            malformed(eof, format!("block {label} row {} is missing", i + 1))
        })?;
        if matches!(text.trim(), "A:" | "H:" | "B:") {
            return Err(malformed(
                line,
                format!("block {label} row {} is missing", i + 1),
            ));
        }
        let mut row = Vec::with_capacity(cols);
        let mut start = 0usize;
        for piece in text.split(';') {
            if row.len() == cols {
                return Err(malformed(
                    line,
                    format!("block {label} row {} has more than {cols} entries", i + 1),
                ));
            }
            let entry = parse(piece, n).map_err(|source| WalkerFormatError::Expression {
                line,
                column: start + source.offset() + 1,
                source,
            })?;
            row.push(entry);
            start += piece.len() + 1;
        }
        if row.len() != cols {
            return Err(malformed(
                line,
                format!(
                    "block {label} row {} has {} entries, expected {cols}",
                    i + 1,
                    row.len()
                ),
            ));
        }
        block.push(row);
    }
    Ok(block)
}

fn require_symmetric_rows(
    label: &str,
    block: &[Vec<ScalarField>],
    first_row_line: usize,
) -> Result<(), WalkerFormatError> {
    for (i, row) in block.iter().enumerate() {
        for j in 0..i {
            if row[j] != block[j][i] {
                return Err(malformed(
                    first_row_line,
                    format!(
                        "block {label} is not symmetric: entry ({}, {}) does not match entry ({}, {})",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    ),
                ));
            }
        }
    }
    Ok(())
}

/// Parses the text format into block data. Shapes and the symmetry of `A`
/// and `B` are enforced here; the coordinate-independence requirement on `A`
/// and `H` is deliberately not — files violating it parse fine and fail
/// verification instead.
pub fn parse_walker_text(text: &str) -> Result<WalkerData, WalkerFormatError> {
    let mut lines = Lines::new(text);
    let (n, r) = parse_header(&mut lines)?;
    let s = n - 2 * r;

    let a_line = lines.peek().map(|(l, _)| l + 1).unwrap_or(usize::MAX);
    let a = parse_block(&mut lines, "A", s, s, n)?;
    require_symmetric_rows("A", &a, a_line)?;
    let h = parse_block(&mut lines, "H", s, r, n)?;
    let b_line = lines.peek().map(|(l, _)| l + 1).unwrap_or(usize::MAX);
    let b = parse_block(&mut lines, "B", r, r, n)?;
    require_symmetric_rows("B", &b, b_line)?;

    if let Some((line, text)) = lines.peek() {
        return Err(malformed(
            line,
            format!("unexpected content after the last block: `{}`", text.trim()),
        ));
    }
    Ok(WalkerData::new_unchecked(n, r, a, h, b))
}

fn write_block(out: &mut String, label: &str, block: &[Vec<ScalarField>]) {
    if block.is_empty() {
        return;
    }
    let _ = writeln!(out, "{label}:");
    for row in block {
        let entries: Vec<String> = row.iter().map(ScalarField::to_string).collect();
        let _ = writeln!(out, "{}", entries.join("; "));
    }
}

/// Renders block data in the text format; the output parses back to equal
/// block data and re-renders byte-identically.
pub fn write_walker_text(data: &WalkerData) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "walker n={} r={}", data.n(), data.r());
    write_block(&mut out, "A", data.a());
    write_block(&mut out, "H", data.h());
    write_block(&mut out, "B", data.b());
    out
}
