//! Reduced rational functions in one named parameter.
//!
//! Canonical form: gcd(numerator, denominator) = 1 and the denominator is
//! monic. Two constructions of the same function therefore compare equal.

use std::fmt;

use super::poly::ParamPoly;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ParamRatFunc {
    num: ParamPoly,
    den: ParamPoly,
}

impl ParamRatFunc {
    /// Builds num/den in canonical form. Errors on a zero denominator.
    pub fn new(num: ParamPoly, den: ParamPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(ParamRatFunc {
                den: ParamPoly::constant(num.name(), crate::algebra::Rational::one()),
                num,
            });
        }
        let g = num.gcd(&den);
        let num = num.exact_div(&g).unwrap();
        let den = den.exact_div(&g).unwrap();
        let lead = den.leading().unwrap().clone();
        let inv = lead.recip().unwrap();
        Ok(ParamRatFunc {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn num(&self) -> &ParamPoly {
        &self.num
    }

    pub fn den(&self) -> &ParamPoly {
        &self.den
    }

    pub fn name(&self) -> &str {
        self.num.name()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the denominator is the constant 1.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn add(&self, other: &ParamRatFunc) -> ParamRatFunc {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        ParamRatFunc::new(num, den).unwrap()
    }

    pub fn sub(&self, other: &ParamRatFunc) -> ParamRatFunc {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ParamRatFunc {
        ParamRatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &ParamRatFunc) -> ParamRatFunc {
        ParamRatFunc::new(self.num.mul(&other.num), self.den.mul(&other.den)).unwrap()
    }

    pub fn div(&self, other: &ParamRatFunc) -> Result<ParamRatFunc> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        ParamRatFunc::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }
}

impl fmt::Display for ParamRatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for ParamRatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;

    fn b() -> ParamPoly {
        ParamPoly::var("b")
    }

    fn one_plus_b() -> ParamPoly {
        ParamPoly::from_coeffs("b", vec![Rational::one(), Rational::one()])
    }

    #[test]
    fn reduction_is_canonical() {
        // (2b + 2b^2)/(2 + 2b) reduces to b/1
        let num = b().scale(&Rational::from_int(2)).add(&b().mul(&b()).scale(&Rational::from_int(2)));
        let den = one_plus_b().scale(&Rational::from_int(2));
        let r = ParamRatFunc::new(num, den).unwrap();
        assert!(r.is_polynomial());
        assert_eq!(r.num(), &b());

        // two constructions of 2b/(1+b) compare equal
        let r1 = ParamRatFunc::new(b().scale(&Rational::from_int(2)), one_plus_b()).unwrap();
        let r2 = ParamRatFunc::new(
            b().scale(&Rational::from_int(6)),
            one_plus_b().scale(&Rational::from_int(3)),
        )
        .unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(
            ParamRatFunc::new(b(), ParamPoly::zero("b")),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn display_parenthesizes() {
        let r = ParamRatFunc::new(b().scale(&Rational::from_int(2)), one_plus_b()).unwrap();
        assert_eq!(r.to_string(), "(2*b)/(b + 1)");
    }
}
