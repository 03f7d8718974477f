//! The coefficient field: exact scalars closed under +, -, *, / within a
//! single parameter name.
//!
//! Values normalize down the tower after every operation: a rational function
//! with constant denominator becomes a polynomial, a constant polynomial
//! becomes a plain rational. That keeps equality structural.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::poly::ParamPoly;
use super::ratfunc::ParamRatFunc;
use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum CoeffField {
    Rat(Rational),
    Poly(ParamPoly),
    Ratio(ParamRatFunc),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl CoeffField {
    pub fn zero() -> Self {
        CoeffField::Rat(Rational::zero())
    }

    pub fn one() -> Self {
        CoeffField::Rat(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        CoeffField::Rat(Rational::from_int(n))
    }

    pub fn from_rational(r: Rational) -> Self {
        CoeffField::Rat(r)
    }

    /// The free parameter itself.
    pub fn parameter(name: &str) -> Self {
        CoeffField::Poly(ParamPoly::var(name))
    }

    pub fn from_poly(p: ParamPoly) -> Self {
        if p.is_constant() {
            CoeffField::Rat(p.coeff(0))
        } else {
            CoeffField::Poly(p)
        }
    }

    pub fn from_ratfunc(r: ParamRatFunc) -> Self {
        if r.is_polynomial() {
            let inv = r.den().coeff(0).recip().unwrap();
            CoeffField::from_poly(r.num().scale(&inv))
        } else {
            CoeffField::Ratio(r)
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            CoeffField::Rat(r) => r.is_zero(),
            CoeffField::Poly(p) => p.is_zero(),
            CoeffField::Ratio(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, CoeffField::Rat(r) if r.is_one())
    }

    pub fn param_name(&self) -> Option<&str> {
        match self {
            CoeffField::Rat(_) => None,
            CoeffField::Poly(p) => Some(p.name()),
            CoeffField::Ratio(r) => Some(r.name()),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            CoeffField::Rat(r) => Some(r),
            _ => None,
        }
    }

    /// Degree-1-or-higher polynomial content, if this value is polynomial.
    pub fn as_poly(&self, name: &str) -> ParamPoly {
        match self {
            CoeffField::Rat(r) => ParamPoly::constant(name, r.clone()),
            CoeffField::Poly(p) => p.clone(),
            CoeffField::Ratio(_) => panic!("rational function where polynomial expected"),
        }
    }

    fn names_compatible(&self, other: &CoeffField) -> Result<()> {
        match (self.param_name(), other.param_name()) {
            (Some(a), Some(b)) if a != b => Err(Error::ParameterMismatch {
                left: a.to_string(),
                right: b.to_string(),
            }),
            _ => Ok(()),
        }
    }

    fn to_ratfunc(&self, name: &str) -> ParamRatFunc {
        let one = ParamPoly::constant(name, Rational::one());
        match self {
            CoeffField::Rat(r) => {
                ParamRatFunc::new(ParamPoly::constant(name, r.clone()), one).unwrap()
            }
            CoeffField::Poly(p) => ParamRatFunc::new(p.clone(), one).unwrap(),
            CoeffField::Ratio(r) => r.clone(),
        }
    }

    fn binary(&self, other: &CoeffField, op: FieldOp) -> CoeffField {
        use CoeffField::*;
        match (self, other) {
            (Rat(a), Rat(b)) => Rat(match op {
                FieldOp::Add => a + b,
                FieldOp::Sub => a - b,
                FieldOp::Mul => a * b,
                FieldOp::Div => a / b,
            }),
            (Ratio(_), _) | (_, Ratio(_)) => {
                let name = self.param_name().or(other.param_name()).unwrap().to_string();
                let a = self.to_ratfunc(&name);
                let b = other.to_ratfunc(&name);
                let r = match op {
                    FieldOp::Add => a.add(&b),
                    FieldOp::Sub => a.sub(&b),
                    FieldOp::Mul => a.mul(&b),
                    FieldOp::Div => a.div(&b).expect("division by zero"),
                };
                CoeffField::from_ratfunc(r)
            }
            _ => {
                let name = self.param_name().or(other.param_name()).unwrap().to_string();
                let a = self.as_poly(&name);
                let b = other.as_poly(&name);
                match op {
                    FieldOp::Add => CoeffField::from_poly(a.add(&b)),
                    FieldOp::Sub => CoeffField::from_poly(a.sub(&b)),
                    FieldOp::Mul => CoeffField::from_poly(a.mul(&b)),
                    FieldOp::Div => match a.exact_div(&b) {
                        Some(q) => CoeffField::from_poly(q),
                        None => CoeffField::from_ratfunc(ParamRatFunc::new(a, b).unwrap()),
                    },
                }
            }
        }
    }

    pub fn try_div(&self, other: &CoeffField) -> Result<CoeffField> {
        self.names_compatible(other)?;
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.binary(other, FieldOp::Div))
    }

    pub fn div_rational(&self, r: &Rational) -> Result<CoeffField> {
        if r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.mul_rational(&r.recip().unwrap()))
    }

    pub fn mul_rational(&self, r: &Rational) -> CoeffField {
        self.binary(&CoeffField::Rat(r.clone()), FieldOp::Mul)
    }

    pub fn recip(&self) -> Result<CoeffField> {
        CoeffField::one().try_div(self)
    }

    pub fn pow(&self, exp: u32) -> CoeffField {
        let mut out = CoeffField::one();
        for _ in 0..exp {
            out = &out * self;
        }
        out
    }
}

/// Checked field arithmetic: rejects mixed parameter names and division by
/// zero instead of panicking.
pub fn field_arith(a: &CoeffField, b: &CoeffField, op: FieldOp) -> Result<CoeffField> {
    a.names_compatible(b)?;
    if op == FieldOp::Div && b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(a.binary(b, op))
}

/// Exact substitution of the free parameter. Errors at poles of a rational
/// function value.
pub fn eval_param(c: &CoeffField, value: &Rational) -> Result<Rational> {
    match c {
        CoeffField::Rat(r) => Ok(r.clone()),
        CoeffField::Poly(p) => Ok(p.eval(value)),
        CoeffField::Ratio(r) => {
            let den = r.den().eval(value);
            if den.is_zero() {
                return Err(Error::PoleAtValue { value: value.clone() });
            }
            Ok(&r.num().eval(value) / &den)
        }
    }
}

macro_rules! coeff_binop {
    ($trait:ident, $method:ident, $op:expr) => {
        impl $trait for &CoeffField {
            type Output = CoeffField;
            fn $method(self, rhs: &CoeffField) -> CoeffField {
                self.names_compatible(rhs)
                    .expect("parameter mismatch in coefficient arithmetic");
                self.binary(rhs, $op)
            }
        }
    };
}

coeff_binop!(Add, add, FieldOp::Add);
coeff_binop!(Sub, sub, FieldOp::Sub);
coeff_binop!(Mul, mul, FieldOp::Mul);

impl Neg for &CoeffField {
    type Output = CoeffField;
    fn neg(self) -> CoeffField {
        match self {
            CoeffField::Rat(r) => CoeffField::Rat(-r),
            CoeffField::Poly(p) => CoeffField::Poly(p.neg()),
            CoeffField::Ratio(r) => CoeffField::Ratio(r.neg()),
        }
    }
}

impl fmt::Display for CoeffField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffField::Rat(r) => write!(f, "{r}"),
            CoeffField::Poly(p) => write!(f, "{p}"),
            CoeffField::Ratio(r) => write!(f, "{r}"),
        }
    }
}

impl fmt::Debug for CoeffField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn beta() -> CoeffField {
        CoeffField::parameter("b")
    }

    fn rat(n: i64, d: i64) -> CoeffField {
        CoeffField::Rat(Rational::new(n, d))
    }

    #[test]
    fn rational_arithmetic() {
        let r = field_arith(&rat(1, 3), &rat(1, 6), FieldOp::Add).unwrap();
        assert_eq!(r, rat(1, 2));
    }

    #[test]
    fn division_builds_reduced_ratfunc() {
        // b / (1 + b)
        let one_plus = &CoeffField::one() + &beta();
        let r = beta().try_div(&one_plus).unwrap();
        assert_eq!(r.to_string(), "(b)/(b + 1)");
    }

    #[test]
    fn exact_poly_division_demotes() {
        // (2b + 2b^2) / (1 + b) = 2b
        let num = &beta().mul_rational(&Rational::from_int(2))
            + &(&beta() * &beta()).mul_rational(&Rational::from_int(2));
        let den = &CoeffField::one() + &beta();
        let q = num.try_div(&den).unwrap();
        assert_eq!(q, beta().mul_rational(&Rational::from_int(2)));
        assert!(matches!(q, CoeffField::Poly(_)));
    }

    #[test]
    fn ratfunc_arithmetic_cancels_back_to_rational() {
        // (b/(1+b)) * ((1+b)/b) = 1
        let one_plus = &CoeffField::one() + &beta();
        let a = beta().try_div(&one_plus).unwrap();
        let b = one_plus.try_div(&beta()).unwrap();
        assert_eq!(&a * &b, CoeffField::one());
    }

    #[test]
    fn eval_param_cases() {
        // 2b/(1+b) at b = 1 -> 1; at b = -1 -> pole
        let one_plus = &CoeffField::one() + &beta();
        let c = beta().mul_rational(&Rational::from_int(2)).try_div(&one_plus).unwrap();
        assert_eq!(eval_param(&c, &Rational::one()).unwrap(), Rational::one());
        assert_eq!(
            eval_param(&c, &Rational::from_int(-1)),
            Err(Error::PoleAtValue { value: Rational::from_int(-1) })
        );
        // E^2 - 16 at 8 -> 48
        let e = CoeffField::parameter("E");
        let p = &(&e * &e) - &rat(16, 1);
        assert_eq!(eval_param(&p, &Rational::from_int(8)).unwrap(), Rational::from_int(48));
    }

    #[test]
    fn mixed_parameters_rejected() {
        let a = CoeffField::parameter("E");
        let b = beta();
        assert!(matches!(
            field_arith(&a, &b, FieldOp::Add),
            Err(Error::ParameterMismatch { .. })
        ));
    }

    #[test]
    fn division_by_zero_rejected() {
        assert_eq!(
            field_arith(&rat(1, 1), &CoeffField::zero(), FieldOp::Div),
            Err(Error::DivisionByZero)
        );
    }
}
