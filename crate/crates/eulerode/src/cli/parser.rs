//! Recursive-descent parsers: the operator DSL and the exact coefficient
//! strings that appear in emitted documents.

use num::bigint::BigInt;

use crate::algebra::{CoeffField, ParamPoly, ParamRatFunc, Rational};
use crate::error::{Error, Result};

use super::ast::OpExpr;

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src: src.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8, what: &str) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(what))
        }
    }

    fn error(&mut self, expected: &str) -> Error {
        self.skip_ws();
        Error::Parse { offset: self.pos, expected: expected.to_string() }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn digits(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Some(text.parse().unwrap())
    }

    /// Unsigned integer or integer/integer. The slash binds to the literal;
    /// the grammar has no general division operator.
    fn rational(&mut self) -> Result<Option<Rational>> {
        let Some(numer) = self.digits() else {
            return Ok(None);
        };
        let save = self.pos;
        if self.eat(b'/') {
            match self.digits() {
                Some(denom) => {
                    if denom == BigInt::from(0) {
                        return Err(self.error("nonzero denominator"));
                    }
                    return Ok(Some(Rational::from_big(numer, denom)));
                }
                None => self.pos = save,
            }
        }
        Ok(Some(Rational::from_bigint(numer)))
    }

    fn identifier(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        if self.pos >= self.src.len() {
            return None;
        }
        let c = self.src[self.pos];
        if !(c.is_ascii_alphabetic() || c == b'_') {
            return None;
        }
        self.pos += 1;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        Some(std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string())
    }

    /// Optional `^uint`; a minus sign after the caret is rejected.
    fn power(&mut self) -> Result<u32> {
        if !self.eat(b'^') {
            return Ok(1);
        }
        if self.peek() == Some(b'-') {
            return Err(Error::NegativePower { offset: self.pos });
        }
        match self.digits() {
            Some(d) => u32::try_from(d).map_err(|_| self.error("exponent in range")),
            None => Err(self.error("nonnegative integer exponent")),
        }
    }
}

/// Parses the operator DSL:
/// expr := ['-'] term (('+'|'-') term)*;
/// term := factor ('*' factor)*;
/// factor := rational | identifier | x[^u] | d[^u] | D[^u] | '(' expr ')'.
pub fn parse_operator(src: &str) -> Result<OpExpr> {
    let mut cur = Cursor::new(src);
    let expr = parse_expr(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.error("`+`, `-`, `*` or end of input"));
    }
    Ok(expr)
}

fn parse_expr(cur: &mut Cursor) -> Result<OpExpr> {
    let mut terms = Vec::new();
    let first = if cur.eat(b'-') {
        OpExpr::Negate(Box::new(parse_term(cur)?))
    } else {
        parse_term(cur)?
    };
    terms.push(first);
    loop {
        if cur.eat(b'+') {
            terms.push(parse_term(cur)?);
        } else if cur.eat(b'-') {
            terms.push(OpExpr::Negate(Box::new(parse_term(cur)?)));
        } else {
            break;
        }
    }
    Ok(if terms.len() == 1 { terms.pop().unwrap() } else { OpExpr::Sum(terms) })
}

fn parse_term(cur: &mut Cursor) -> Result<OpExpr> {
    let mut factors = vec![parse_factor(cur)?];
    while cur.eat(b'*') {
        factors.push(parse_factor(cur)?);
    }
    Ok(if factors.len() == 1 { factors.pop().unwrap() } else { OpExpr::Product(factors) })
}

fn parse_factor(cur: &mut Cursor) -> Result<OpExpr> {
    if cur.eat(b'(') {
        let inner = parse_expr(cur)?;
        cur.expect(b')', "`)`")?;
        return Ok(inner);
    }
    if let Some(r) = cur.rational()? {
        return Ok(OpExpr::RationalLit(r));
    }
    if let Some(name) = cur.identifier() {
        return Ok(match name.as_str() {
            "x" => OpExpr::X(cur.power()?),
            "d" => OpExpr::Dsmall(cur.power()?),
            "D" => OpExpr::Dbig(cur.power()?),
            // Parameter powers desugar to repeated products so emitted
            // coefficient strings like E^2 parse back.
            _ => match cur.power()? {
                0 => OpExpr::RationalLit(Rational::one()),
                1 => OpExpr::Param(name),
                k => OpExpr::Product(vec![OpExpr::Param(name); k as usize]),
            },
        });
    }
    Err(cur.error("rational, identifier, `x`, `d`, `D` or `(`"))
}

/// Parses the exact coefficient strings this crate emits: a rational, a
/// polynomial in one parameter, or `(poly)/(poly)`.
pub fn parse_coeff(src: &str) -> Result<CoeffField> {
    let mut cur = Cursor::new(src);
    // A leading parenthesis is either the numerator of a rational function or
    // redundant grouping around a polynomial.
    if cur.peek() == Some(b'(') {
        cur.eat(b'(');
        let num = parse_poly(&mut cur)?;
        cur.expect(b')', "`)`")?;
        if cur.eat(b'/') {
            cur.expect(b'(', "`(`")?;
            let den = parse_poly(&mut cur)?;
            cur.expect(b')', "`)`")?;
            if !cur.at_end() {
                return Err(cur.error("end of coefficient"));
            }
            let name = num.name().to_string();
            let den = align_name(den, &name)?;
            let num = align_name(num, den.name())?;
            return Ok(CoeffField::from_ratfunc(ParamRatFunc::new(num, den)?));
        }
        if !cur.at_end() {
            return Err(cur.error("`/` or end of coefficient"));
        }
        return Ok(CoeffField::from_poly(num));
    }
    let poly = parse_poly(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.error("end of coefficient"));
    }
    Ok(CoeffField::from_poly(poly))
}

/// Renames a constant polynomial to match `name`; errors on a true mismatch.
fn align_name(p: ParamPoly, name: &str) -> Result<ParamPoly> {
    if p.name() == name || name.is_empty() {
        return Ok(p);
    }
    if p.is_constant() {
        return Ok(ParamPoly::from_coeffs(name, p.coeffs().to_vec()));
    }
    Err(Error::ParameterMismatch { left: p.name().to_string(), right: name.to_string() })
}

fn parse_poly(cur: &mut Cursor) -> Result<ParamPoly> {
    let mut name: Option<String> = None;
    let mut acc: Vec<(u32, Rational)> = Vec::new();
    let mut negate = cur.eat(b'-');
    loop {
        let (coeff, power) = parse_poly_term(cur, &mut name)?;
        let coeff = if negate { -&coeff } else { coeff };
        acc.push((power, coeff));
        if cur.eat(b'+') {
            negate = false;
        } else if cur.eat(b'-') {
            negate = true;
        } else {
            break;
        }
    }
    let name = name.unwrap_or_default();
    let top = acc.iter().map(|(p, _)| *p).max().unwrap_or(0);
    let mut coeffs = vec![Rational::zero(); top as usize + 1];
    for (p, c) in acc {
        coeffs[p as usize] = &coeffs[p as usize] + &c;
    }
    Ok(ParamPoly::from_coeffs(&name, coeffs))
}

fn parse_poly_term(cur: &mut Cursor, name: &mut Option<String>) -> Result<(Rational, u32)> {
    if let Some(r) = cur.rational()? {
        if cur.eat(b'*') {
            let id = cur.identifier().ok_or_else(|| cur.error("parameter name"))?;
            check_name(cur, name, &id)?;
            return Ok((r, cur.power()?));
        }
        return Ok((r, 0));
    }
    if let Some(id) = cur.identifier() {
        check_name(cur, name, &id)?;
        return Ok((Rational::one(), cur.power()?));
    }
    Err(cur.error("rational or parameter name"))
}

fn check_name(cur: &mut Cursor, name: &mut Option<String>, id: &str) -> Result<()> {
    match name {
        None => {
            *name = Some(id.to_string());
            Ok(())
        }
        Some(existing) if existing == id => Ok(()),
        Some(_) => Err(cur.error("single parameter name")),
    }
}
