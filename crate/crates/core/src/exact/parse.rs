//! Reader for the canonical polynomial grammar, e.g. `3/2*x1^2*x3 - t1*x2`.

use num_bigint::BigInt;
use num_traits::One;

use super::poly::{Monomial, Poly, Rational, VarId};
use super::ratfunc::RatFunc;
use super::ExactError;

/// Parses a polynomial. Identifiers are looked up in `labels` first (giving
/// coordinate variables); otherwise `t<k>` names parameter `k`.
pub fn parse_poly(src: &str, labels: &[String]) -> Result<Poly, ExactError> {
    Parser {
        src,
        pos: 0,
        labels,
    }
    .expr()
}

/// Parses a coefficient-field constant: a polynomial in parameters only.
pub fn parse_parameter_poly(src: &str) -> Result<Poly, ExactError> {
    parse_poly(src, &[])
}

/// Parses either a polynomial or a quotient written `(num)/(den)`.
pub fn parse_ratfunc(src: &str, labels: &[String]) -> Result<RatFunc, ExactError> {
    let t = src.trim();
    if let Some(inner) = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        if let Some((num, den)) = inner.split_once(")/(") {
            return RatFunc::new(parse_poly(num, labels)?, parse_poly(den, labels)?);
        }
        return parse_ratfunc(inner, labels);
    }
    parse_poly(t, labels).map(RatFunc::from_poly)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    labels: &'a [String],
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> ExactError {
        ExactError::Parse {
            input: self.src.to_string(),
            position: self.pos,
            message: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly, ExactError> {
        self.skip_ws();
        if self.pos == self.src.len() {
            return Err(self.err("empty polynomial"));
        }
        let mut total = Poly::zero();
        let mut sign = if self.eat('-') {
            -1
        } else {
            self.eat('+');
            1
        };
        loop {
            let t = self.term()?;
            total = if sign < 0 { &total - &t } else { &total + &t };
            self.skip_ws();
            if self.pos == self.src.len() {
                return Ok(total);
            }
            sign = if self.eat('+') {
                1
            } else if self.eat('-') {
                -1
            } else {
                return Err(self.err("expected '+' or '-'"));
            };
        }
    }

    fn term(&mut self) -> Result<Poly, ExactError> {
        let mut coeff = Rational::one();
        let mut vars = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_digit() => coeff *= self.number()?,
                Some(c) if c.is_alphabetic() || c == '_' => vars.push(self.variable()?),
                _ => return Err(self.err("expected a coefficient or variable")),
            }
            if !self.eat('*') {
                break;
            }
        }
        Ok(Poly::monomial(Monomial::from_pairs(vars), coeff))
    }

    fn integer(&mut self) -> Result<BigInt, ExactError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| self.err("expected an integer"))
    }

    fn number(&mut self) -> Result<Rational, ExactError> {
        let n = self.integer()?;
        if self.eat('/') {
            let d = self.integer()?;
            if d == BigInt::from(0) {
                return Err(self.err("zero denominator"));
            }
            Ok(Rational::new(n, d))
        } else {
            Ok(Rational::from_integer(n))
        }
    }

    fn variable(&mut self) -> Result<(VarId, u32), ExactError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_alphanumeric() || c == '_') {
            self.pos += self.peek().unwrap().len_utf8();
        }
        let name = &self.src[start..self.pos];
        let v = if let Some(i) = self.labels.iter().position(|l| l == name) {
            VarId::coord(i)
        } else if let Some(k) = name
            .strip_prefix('t')
            .and_then(|rest| rest.parse::<u32>().ok())
        {
            VarId::param(k)
        } else {
            self.pos = start;
            return Err(self.err(format!("unknown variable `{name}`")));
        };
        let e = if self.eat('^') {
            let e = self.integer()?;
            u32::try_from(e).map_err(|_| self.err("exponent out of range"))?
        } else {
            1
        };
        Ok((v, e))
    }
}
