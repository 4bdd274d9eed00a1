//! Text grammar for polynomials.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' uint)?
//! atom   := uint | name | '(' expr ')'
//! ```
//!
//! Division is only allowed by a nonzero constant, so `1/2*a` is fine and
//! `a/b` is rejected.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::{Rational, Scalar, Vars};

const MAX_DEPTH: usize = 64;
const MAX_EXPONENT: u32 = 256;
const MAX_DEGREE: u32 = 256;
const MAX_TERMS: usize = 4096;
const MAX_COEFF_BITS: u64 = 8192;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct ParseError {
    /// 1-based character column; 0 when no position applies.
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(column: usize, message: impl Into<String>) -> Self {
        ParseError { column, message: message.into() }
    }
}

/// Parse `text` as a polynomial over `vars`. Identifiers not in `vars` are
/// rejected.
pub fn parse_scalar(text: &str, vars: &Vars) -> Result<Scalar, ParseError> {
    let mut p = Parser::new(text, Some(vars.clone()))?;
    p.run()
}

/// Parse `text`, declaring every identifier it mentions as a parameter (in
/// sorted order).
pub fn parse_scalar_auto(text: &str) -> Result<Scalar, ParseError> {
    let names = identifiers(text)?;
    parse_scalar(text, &Vars::new(names))
}

/// Identifiers mentioned in `text`, sorted and deduplicated.
pub fn identifiers(text: &str) -> Result<BTreeSet<String>, ParseError> {
    let toks = tokenize(text)?;
    Ok(toks
        .into_iter()
        .filter_map(|(t, _)| match t {
            Tok::Name(n) => Some(n),
            _ => None,
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            if digits.len() > 2048 {
                return Err(ParseError::new(col, "integer literal too long"));
            }
            out.push((Tok::Int(digits.parse().expect("ascii digits")), col));
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Name(chars[start..i].iter().collect()), col));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => return Err(ParseError::new(col, format!("unexpected character `{other}`"))),
        };
        out.push((tok, col));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
    vars: Vars,
    depth: usize,
}

impl Parser {
    fn new(text: &str, vars: Option<Vars>) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: tokenize(text)?,
            pos: 0,
            end_col: text.chars().count() + 1,
            vars: vars.unwrap_or_else(Vars::empty),
            depth: 0,
        })
    }

    fn run(&mut self) -> Result<Scalar, ParseError> {
        if self.toks.is_empty() {
            return Err(ParseError::new(1, "empty expression"));
        }
        let s = self.expr()?;
        if let Some((t, col)) = self.toks.get(self.pos) {
            return Err(ParseError::new(*col, format!("unexpected token {t:?}")));
        }
        Ok(s)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::new(self.col(), "expression nested too deeply"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Scalar, ParseError> {
        self.enter()?;
        let mut acc = self.term()?;
        while let Some(op) = self.peek().cloned() {
            let col = self.col();
            match op {
                Tok::Plus => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Tok::Minus => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => break,
            }
            self.check_size(&acc, col)?;
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<Scalar, ParseError> {
        let mut acc = self.unary()?;
        while let Some(op) = self.peek().cloned() {
            let col = self.col();
            match op {
                Tok::Star => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    if acc.num_terms().saturating_mul(rhs.num_terms()) > MAX_TERMS * 16 {
                        return Err(ParseError::new(col, "product too large"));
                    }
                    acc = acc * rhs;
                }
                Tok::Slash => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    let c = rhs.as_constant().ok_or_else(|| ParseError::new(col, "division by a non-constant"))?;
                    if c.is_zero() {
                        return Err(ParseError::new(col, "division by zero"));
                    }
                    acc = acc.scale(&c.recip());
                }
                _ => break,
            }
            self.check_size(&acc, col)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Scalar, ParseError> {
        self.enter()?;
        let out = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                -self.unary()?
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()?
            }
            _ => self.power()?,
        };
        self.depth -= 1;
        Ok(out)
    }

    fn power(&mut self) -> Result<Scalar, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        let col = self.col();
        self.pos += 1;
        let e = match self.toks.get(self.pos) {
            Some((Tok::Int(n), _)) => n.clone(),
            _ => return Err(ParseError::new(self.col(), "exponent must be a nonnegative integer")),
        };
        self.pos += 1;
        let e: u32 = u32::try_from(&e)
            .ok()
            .filter(|e| *e <= MAX_EXPONENT)
            .ok_or_else(|| ParseError::new(col, format!("exponent exceeds {MAX_EXPONENT}")))?;
        if base.degree().unwrap_or(0).saturating_mul(e) > MAX_DEGREE {
            return Err(ParseError::new(col, format!("degree exceeds {MAX_DEGREE}")));
        }
        // Bound the result size before expanding.
        let bits: u64 = base.terms().map(|(_, c)| c.numer().bits().max(c.denom().bits())).max().unwrap_or(0);
        if bits.saturating_mul(e as u64) > MAX_COEFF_BITS
            || term_bound(base.num_terms(), e, base.degree().unwrap_or(0) * e, self.vars.len()) > MAX_TERMS as u64
        {
            return Err(ParseError::new(col, "power too large"));
        }
        let out = base.pow(e);
        self.check_size(&out, col)?;
        Ok(out)
    }

    fn atom(&mut self) -> Result<Scalar, ParseError> {
        let col = self.col();
        let Some((tok, _)) = self.toks.get(self.pos).cloned() else {
            return Err(ParseError::new(col, "unexpected end of expression"));
        };
        self.pos += 1;
        match tok {
            Tok::Int(n) => Ok(Scalar::constant(&self.vars, Rational::from_integer(n))),
            Tok::Name(name) => {
                Scalar::var(&self.vars, &name).map_err(|_| ParseError::new(col, format!("unknown parameter `{name}`")))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(ParseError::new(self.col(), "expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            other => Err(ParseError::new(col, format!("unexpected token {other:?}"))),
        }
    }

    fn check_size(&self, s: &Scalar, col: usize) -> Result<(), ParseError> {
        if s.num_terms() > MAX_TERMS {
            return Err(ParseError::new(col, "polynomial has too many terms"));
        }
        if s.degree().unwrap_or(0) > MAX_DEGREE {
            return Err(ParseError::new(col, format!("degree exceeds {MAX_DEGREE}")));
        }
        if s.terms().any(|(_, c)| c.numer().bits().max(c.denom().bits()) > MAX_COEFF_BITS) {
            return Err(ParseError::new(col, "coefficient too large"));
        }
        Ok(())
    }
}

/// Upper bound on the number of terms of a `terms`-term polynomial raised
/// to `e` with result degree `degree` in `nvars` parameters.
fn term_bound(terms: usize, e: u32, degree: u32, nvars: usize) -> u64 {
    let by_power = (terms as u64).saturating_pow(e);
    // Monomials of degree <= D in n variables: C(D + n, n).
    let mut by_degree: u64 = 1;
    for k in 1..=nvars as u64 {
        by_degree = by_degree.saturating_mul(degree as u64 + k) / k;
    }
    by_power.min(by_degree)
}
