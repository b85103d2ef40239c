//! Parser for the canonical text form produced by `Display`.
//!
//! ```text
//! value   := "cyc" "{" term (";" term)* "}" | term
//! term    := element | ratexpr
//! element := [sort ":"] ("#" int | "@" int | "<" element ("," element)* ">" | rational)
//! ratexpr := sum over `n` with + - * / ^ and parentheses
//! ```
//! The bracketed `cyc[a, b]` spelling is accepted as well.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{BranchTerm, Payload, Sort, UniverseElement, VirtualValue};
use crate::error::{Error, Result};
use crate::{Poly, RatFunc, Rational};

pub fn parse_value(text: &str) -> Result<VirtualValue> {
    let mut p = Cursor::new(text);
    let value = p.value()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("trailing input"));
    }
    Ok(value)
}

pub fn parse_term(text: &str) -> Result<BranchTerm> {
    let mut p = Cursor::new(text);
    let term = p.term()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("trailing input"));
    }
    Ok(term)
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
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

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn error(&self, msg: &str) -> Error {
        Error::Malformed(format!("{msg} at offset {} in {:?}", self.pos, self.src))
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest
            .char_indices()
            .take_while(|(i, c)| c.is_ascii_alphabetic() || *c == '_' || (*i > 0 && c.is_ascii_digit()))
            .count();
        (len > 0).then(|| {
            self.pos += len;
            &rest[..len]
        })
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest.chars().take_while(char::is_ascii_digit).count();
        if len == 0 {
            return Err(self.error("expected digits"));
        }
        self.pos += len;
        Ok(rest[..len].parse().expect("ascii digits"))
    }

    fn value(&mut self) -> Result<VirtualValue> {
        self.skip_ws();
        if self.rest().starts_with("cyc") {
            let save = self.pos;
            self.pos += 3;
            let (close, sep) = if self.eat('{') {
                ('}', ';')
            } else if self.eat('[') {
                (']', ',')
            } else {
                self.pos = save;
                return VirtualValue::cyclic(vec![self.term()?]);
            };
            let mut terms = vec![self.term()?];
            while self.eat(sep) {
                terms.push(self.term()?);
            }
            self.expect(close)?;
            return VirtualValue::cyclic(terms);
        }
        VirtualValue::cyclic(vec![self.term()?])
    }

    fn term(&mut self) -> Result<BranchTerm> {
        self.skip_ws();
        match self.peek() {
            Some('#' | '@' | '<') => return Ok(BranchTerm::Const(self.element()?)),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let save = self.pos;
                let name = self.ident().unwrap();
                if name != "n" && self.eat(':') {
                    self.pos = save;
                    return Ok(BranchTerm::Const(self.element()?));
                }
                self.pos = save;
            }
            _ => {}
        }
        Ok(BranchTerm::rat(self.sum()?))
    }

    fn element(&mut self) -> Result<UniverseElement> {
        self.skip_ws();
        let save = self.pos;
        let sort = match self.ident() {
            Some(name) if self.eat(':') => Some(Sort::new(name).ok_or_else(|| self.error("bad sort"))?),
            _ => {
                self.pos = save;
                None
            }
        };
        self.skip_ws();
        let elem = match self.peek() {
            Some('#') => {
                self.pos += 1;
                let neg = self.eat('-');
                let k = self.digits()?;
                UniverseElement::new(Sort::INTEGER, Payload::Integer(if neg { -k } else { k }))
            }
            Some('@') => {
                self.pos += 1;
                let k = self.digits()?;
                let k = u32::try_from(k).map_err(|_| self.error("atom index out of range"))?;
                UniverseElement::atom(k)
            }
            Some('<') => {
                self.pos += 1;
                let mut parts = vec![self.element()?];
                while self.eat(',') {
                    parts.push(self.element()?);
                }
                self.expect('>')?;
                UniverseElement::tuple(parts)
            }
            _ => UniverseElement::real(self.rational_literal()?),
        };
        Ok(match sort {
            Some(s) => elem.with_sort(s),
            None => elem,
        })
    }

    fn rational_literal(&mut self) -> Result<Rational> {
        let neg = self.eat('-');
        let num = self.digits()?;
        let den = if self.eat('/') { self.digits()? } else { BigInt::from(1) };
        if den.is_zero() {
            return Err(self.error("zero denominator"));
        }
        let q = Rational::new(num, den);
        Ok(if neg { -q } else { q })
    }

    fn sum(&mut self) -> Result<RatFunc> {
        let mut acc = self.product()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.product()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.product()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let rhs = self.unary()?;
                acc = acc.div(&rhs).map_err(|_| self.error("division by zero"))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc> {
        let mut base = self.atom()?;
        while self.eat('^') {
            let k = self.digits()?;
            let k = u32::try_from(k).map_err(|_| self.error("exponent too large"))?;
            base = base.pow(k);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFunc> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.sum()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                Ok(RatFunc::constant(Rational::from_integer(self.digits()?)))
            }
            _ => match self.ident() {
                Some("n") => Ok(RatFunc::from_poly(Poly::index())),
                _ => Err(self.error("expected a number, `n` or '('")),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_canonical_forms() {
        assert_eq!(parse_value("7").unwrap().to_string(), "7");
        assert_eq!(parse_value("(n^2+1)/(2*n)").unwrap().to_string(), "(n^2+1)/(2*n)");
        assert_eq!(parse_value("cyc{-1; 1}").unwrap().to_string(), "cyc{-1; 1}");
        assert_eq!(parse_value("cyc[5, 5]").unwrap().to_string(), "5");
        assert_eq!(parse_value("cyc{1/n; n/1}").unwrap().to_string(), "cyc{1/n; n/1}");
        assert_eq!(parse_value("cyc{#3; V:@1; <0, @2>}").unwrap().to_string(), "cyc{#3; V:@1; <0, @2>}");
        assert_eq!(parse_value("-3/4").unwrap().to_string(), "-3/4");
        assert_eq!(parse_value("Q:-3/4").unwrap().to_string(), "Q:-3/4");
        assert_eq!(parse_value("1/2*n^3-n").unwrap().to_string(), "(n^3-2*n)/2");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_value("cyc{1; }").is_err());
        assert!(parse_value("1/0").is_err());
        assert!(parse_value("n n").is_err());
        assert!(parse_value("x").is_err());
        assert!(parse_term("@").is_err());
    }
}
