//! Parser for polynomial expressions over `+ - * ^`, integer literals,
//! variable names and parentheses.

use num_bigint::BigInt;
use thiserror::Error;

use crate::mpoly::{IntMPoly, GEN_SYMBOL};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    /// `col` is 1-based.
    #[error("column {col}: expected {expected}")]
    Expected { col: usize, expected: String },
    #[error("column {col}: unbound variable {name}")]
    UnboundVariable { col: usize, name: String },
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, expected: &str) -> ExprError {
        ExprError::Expected { col: self.pos + 1, expected: expected.to_string() }
    }

    fn expr(&mut self) -> Result<IntMPoly, ExprError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                b'-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<IntMPoly, ExprError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<IntMPoly, ExprError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<IntMPoly, ExprError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err("exponent"));
            }
            let e: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| ExprError::Expected { col: start + 1, expected: "small exponent".into() })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<IntMPoly, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().unwrap();
                Ok(IntMPoly::constant(self.vars, n))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.vars.iter().position(|v| v == name) {
                    Some(i) => Ok(IntMPoly::var(self.vars, i)),
                    None => Err(ExprError::UnboundVariable { col: start + 1, name: name.to_string() }),
                }
            }
            _ => Err(self.err("number, variable or '('")),
        }
    }
}

/// Parses `text` as a polynomial over `coords` plus the generator symbol
/// `g`; the result has variables `coords ++ [g]`.
pub fn parse_poly(text: &str, coords: &[&str]) -> Result<IntMPoly, ExprError> {
    let mut vars: Vec<String> = coords.iter().map(|s| s.to_string()).collect();
    vars.push(GEN_SYMBOL.to_string());
    parse_poly_in(text, &vars)
}

/// Parses over an explicit variable list.
pub fn parse_poly_in(text: &str, vars: &[String]) -> Result<IntMPoly, ExprError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, vars };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("operator or end of expression"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints() {
        let f = parse_poly("y^2*z - x^3 - x*z^2 - z^3", &["x", "y", "z"]).unwrap();
        assert!(f.is_homogeneous());
        assert_eq!(f.total_degree(), Some(3));
        let h = parse_poly("-(x + 2)*(x - 2)", &["x"]).unwrap();
        assert_eq!(h, parse_poly("4 - x^2", &["x"]).unwrap());
        let g = parse_poly("g*x + g^2", &["x"]).unwrap();
        assert_eq!(g.gen_index(), Some(1));
    }

    #[test]
    fn errors_are_located() {
        assert_eq!(
            parse_poly("x + w", &["x", "y"]).unwrap_err(),
            ExprError::UnboundVariable { col: 5, name: "w".into() }
        );
        assert!(matches!(parse_poly("x + ", &["x"]), Err(ExprError::Expected { col: 5, .. })));
        assert!(matches!(parse_poly("(x", &["x"]), Err(ExprError::Expected { col: 3, .. })));
        assert!(matches!(parse_poly("x y", &["x", "y"]), Err(ExprError::Expected { col: 3, .. })));
        assert!(matches!(parse_poly("x^", &["x"]), Err(ExprError::Expected { col: 3, .. })));
    }
}
