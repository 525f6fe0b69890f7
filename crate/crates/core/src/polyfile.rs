//! Polynomial-system files.
//!
//! ```text
//! # comments run to the end of the line
//! vars 3
//! x1 - x2
//! 3*x1^2*x3 + 2*x2 - 7
//! ```
//!
//! Grammar, with spaces and tabs allowed between tokens:
//!
//! ```text
//! file    := line*
//! line    := [directive | poly] ['#' any*] LF
//! directive := 'vars' integer
//! poly    := [sign] term (sign term)*
//! sign    := '+' | '-'
//! term    := factor ('*' factor)*
//! factor  := integer | 'x' integer ['^' integer]
//! ```
//!
//! Blank lines are skipped. Variables are numbered from 1. Without a `vars`
//! directive the variable count is the largest index used. The directive must
//! precede the first polynomial.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::poly::{IntPoly, PolySystem};

fn parse_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

type Term = (BigInt, Vec<(usize, u32)>);

struct Cursor<'a> {
    text: &'a [u8],
    pos: usize,
    base: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && matches!(self.text[self.pos], b' ' | b'\t') {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn offset(&self) -> usize {
        self.base + self.pos
    }

    fn digits(&mut self) -> Result<&str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(parse_err(self.offset(), "expected an integer"));
        }
        Ok(std::str::from_utf8(&self.text[start..self.pos]).expect("ASCII digits"))
    }

    fn small(&mut self, what: &str) -> Result<u32> {
        let at = self.offset();
        self.digits()?
            .parse()
            .map_err(|_| parse_err(at, format!("{what} is too large")))
    }

    fn factor(&mut self, term: &mut Term) -> Result<()> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let at = self.offset();
                let index = self.small("variable index")? as usize;
                if index == 0 {
                    return Err(parse_err(at, "variables are numbered from 1"));
                }
                let exp = if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.small("exponent")?
                } else {
                    1
                };
                term.1.push((index, exp));
                Ok(())
            }
            Some(c) if c.is_ascii_digit() => {
                let v: BigInt = self.digits()?.parse().expect("digits parse");
                term.0 *= v;
                Ok(())
            }
            _ => Err(parse_err(self.offset(), "expected a coefficient or variable")),
        }
    }

    fn term(&mut self, negative: bool) -> Result<Term> {
        let mut term: Term = (if negative { -BigInt::one() } else { BigInt::one() }, Vec::new());
        self.factor(&mut term)?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            self.factor(&mut term)?;
        }
        Ok(term)
    }

    fn poly(&mut self) -> Result<Vec<Term>> {
        let mut negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let mut terms = Vec::new();
        loop {
            terms.push(self.term(negative)?);
            match self.peek() {
                None => return Ok(terms),
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                Some(_) => return Err(parse_err(self.offset(), "expected `+`, `-` or end of line")),
            }
            self.pos += 1;
        }
    }
}

/// Parses a polynomial-system file.
pub fn parse_system(text: &str) -> Result<PolySystem> {
    if let Some(pos) = text.bytes().position(|b| !b.is_ascii()) {
        return Err(parse_err(pos, "non-ASCII byte"));
    }
    let mut declared: Option<(usize, usize)> = None;
    let mut parsed: Vec<(usize, Vec<Term>)> = Vec::new();
    let mut base = 0;
    for raw in text.split_inclusive('\n') {
        let line = raw.trim_end_matches(['\n', '\r']);
        let body = line.split('#').next().unwrap_or("");
        let trimmed = body.trim();
        let line_start = base;
        base += raw.len();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("vars") {
            if !parsed.is_empty() || declared.is_some() {
                return Err(parse_err(line_start, "`vars` must appear once, before any polynomial"));
            }
            let m = rest
                .trim()
                .parse::<usize>()
                .map_err(|_| parse_err(line_start, "expected `vars <count>`"))?;
            declared = Some((m, line_start));
            continue;
        }
        let mut cur = Cursor {
            text: body.as_bytes(),
            pos: 0,
            base: line_start,
        };
        parsed.push((line_start, cur.poly()?));
    }
    if parsed.is_empty() {
        return Err(parse_err(text.len(), "no polynomials in file"));
    }
    let used = parsed
        .iter()
        .flat_map(|(_, ts)| ts.iter().flat_map(|t| t.1.iter().map(|v| v.0)))
        .max()
        .unwrap_or(0);
    let m = match declared {
        Some((m, at)) if m < used => {
            return Err(parse_err(at, format!("declared {m} variables but x{used} is used")))
        }
        Some((m, _)) => m,
        None => used,
    };
    let polys = parsed
        .into_iter()
        .map(|(_, terms)| {
            IntPoly::from_terms(
                m,
                terms.into_iter().map(|(c, vars)| {
                    let mut e = vec![0u32; m];
                    for (i, k) in vars {
                        e[i - 1] += k;
                    }
                    (c, e)
                }),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    PolySystem::new(m, polys)
}

/// Writes a system in the file grammar, always with a `vars` line.
pub fn format_system(sys: &PolySystem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "vars {}", sys.num_vars());
    for p in sys.polys() {
        let _ = writeln!(out, "{p}");
    }
    out
}
