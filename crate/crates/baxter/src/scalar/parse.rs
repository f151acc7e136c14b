//! Expression parser.
//!
//! Grammar (whitespace insensitive):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' exponent)?
//! atom   := integer | identifier | '(' expr ')'
//! ```
//!
//! Exponents are integers, negative allowed, with or without parentheses
//! (`q^-1` and `q^(-1)` both read). Identifiers of the shape `s_i_j` and
//! `phi_i_j` resolve through the root-pair sugar: any orientation of the
//! indices is accepted and normalized (`s_2_1` reads as `1/s_1_2`, `phi_2_1`
//! as `s_1_2^-2`, equal lower index gives `1`). [`ScalarExpr`]'s `Display`
//! output always reads back to an equal expression.

use num::bigint::BigInt;
use num::rational::BigRational;

use super::{split_indexed, ScalarExpr, Symbol};
use crate::error::{Error, Result};

/// Parses an expression; see the module grammar.
pub fn parse_expr(input: &str) -> Result<ScalarExpr> {
    let mut p = Parser { input: input.as_bytes(), pos: 0 };
    p.skip_ws();
    let expr = p.expr()?;
    p.skip_ws();
    if p.pos != p.input.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(expr)
}

impl std::str::FromStr for ScalarExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<ScalarExpr> {
        parse_expr(s)
    }
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            self.skip_ws();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<ScalarExpr> {
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

    fn term(&mut self) -> Result<ScalarExpr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc * self.unary()?;
            } else if self.eat(b'/') {
                let pos = self.pos;
                let rhs = self.unary()?;
                acc = acc.checked_div(&rhs).map_err(|_| Error::Parse {
                    pos,
                    msg: "division by zero".to_string(),
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<ScalarExpr> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<ScalarExpr> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let pos = self.pos;
        let e = self.exponent()?;
        if e < 0 && base.is_zero_expand() {
            return Err(Error::Parse { pos, msg: "negative power of zero".to_string() });
        }
        Ok(base.pow(e))
    }

    fn exponent(&mut self) -> Result<i64> {
        let parenthesized = self.eat(b'(');
        let negative = self.eat(b'-');
        let digits = self.digits()?;
        let mag: i64 = digits
            .parse()
            .map_err(|_| self.err("exponent out of range"))?;
        self.skip_ws();
        if parenthesized && !self.eat(b')') {
            return Err(self.err("expected `)` after exponent"));
        }
        Ok(if negative { -mag } else { mag })
    }

    fn atom(&mut self) -> Result<ScalarExpr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                self.skip_ws();
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits()?;
                self.skip_ws();
                let n: BigInt = digits.parse().expect("digit run parses as integer");
                Ok(ScalarExpr::rat(BigRational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let ident = self.identifier();
                self.skip_ws();
                Ok(resolve_identifier(&ident))
            }
            _ => Err(self.err("expected an integer, identifier, or `(`")),
        }
    }

    fn digits(&mut self) -> Result<String> {
        let start = self.pos;
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected digits"));
        }
        Ok(std::str::from_utf8(&self.input[start..self.pos])
            .expect("ascii digits")
            .to_string())
    }

    fn identifier(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.input.len()
            && (self.input[self.pos].is_ascii_alphanumeric() || self.input[self.pos] == b'_')
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.input[start..self.pos])
            .expect("ascii identifier")
            .to_string()
    }
}

fn resolve_identifier(ident: &str) -> ScalarExpr {
    if let Some((i, j)) = split_indexed(ident, "s") {
        return ScalarExpr::root(i, j);
    }
    if let Some((i, j)) = split_indexed(ident, "phi") {
        return ScalarExpr::phi(i, j);
    }
    ScalarExpr::sym(Symbol::new(ident))
}
