//! Dense univariate polynomials in one named parameter, over `Rational`.
//!
//! Coefficients are stored in ascending power order; the vector is empty for
//! the zero polynomial and otherwise ends in a nonzero coefficient.

use std::fmt;

use num::bigint::BigInt;
use num::{Integer, One, Zero};

use super::rational::{divisors, Rational};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ParamPoly {
    name: String,
    coeffs: Vec<Rational>,
}

/// Rational roots of a polynomial together with its degree, so callers can
/// tell how many roots (counted without multiplicity) may lie outside Q.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalRoots {
    pub roots: Vec<Rational>,
    pub degree: usize,
}

impl ParamPoly {
    pub fn zero(name: &str) -> Self {
        ParamPoly { name: name.to_string(), coeffs: Vec::new() }
    }

    pub fn constant(name: &str, c: Rational) -> Self {
        let mut p = ParamPoly { name: name.to_string(), coeffs: vec![c] };
        p.trim();
        p
    }

    /// The parameter itself, as a degree-one polynomial.
    pub fn var(name: &str) -> Self {
        ParamPoly {
            name: name.to_string(),
            coeffs: vec![Rational::zero(), Rational::one()],
        }
    }

    pub fn from_coeffs(name: &str, coeffs: Vec<Rational>) -> Self {
        let mut p = ParamPoly { name: name.to_string(), coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().map_or(false, Rational::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, power: usize) -> Rational {
        self.coeffs.get(power).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    fn assert_same_name(&self, other: &ParamPoly) {
        assert_eq!(
            self.name, other.name,
            "parameter mismatch in polynomial arithmetic"
        );
    }

    pub fn add(&self, other: &ParamPoly) -> ParamPoly {
        self.assert_same_name(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(&self.coeff(i) + &other.coeff(i));
        }
        ParamPoly::from_coeffs(&self.name, coeffs)
    }

    pub fn sub(&self, other: &ParamPoly) -> ParamPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ParamPoly {
        ParamPoly {
            name: self.name.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> ParamPoly {
        if c.is_zero() {
            return ParamPoly::zero(&self.name);
        }
        ParamPoly {
            name: self.name.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &ParamPoly) -> ParamPoly {
        self.assert_same_name(other);
        if self.is_zero() || other.is_zero() {
            return ParamPoly::zero(&self.name);
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += &(a * b);
            }
        }
        ParamPoly::from_coeffs(&self.name, coeffs)
    }

    pub fn pow(&self, exp: u32) -> ParamPoly {
        let mut out = ParamPoly::constant(&self.name, Rational::one());
        for _ in 0..exp {
            out = out.mul(self);
        }
        out
    }

    /// Euclidean division: self = q * divisor + r with deg r < deg divisor.
    /// Panics on a zero divisor.
    pub fn divrem(&self, divisor: &ParamPoly) -> (ParamPoly, ParamPoly) {
        self.assert_same_name(divisor);
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dd = divisor.degree().unwrap();
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.clone();
        let mut q = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let factor = rem.leading().unwrap() / &lead;
            q[rd - dd] = factor.clone();
            // rem -= factor * x^(rd-dd) * divisor
            for (j, b) in divisor.coeffs.iter().enumerate() {
                let idx = rd - dd + j;
                let delta = &factor * b;
                rem.coeffs[idx] -= &delta;
            }
            rem.trim();
        }
        (ParamPoly::from_coeffs(&self.name, q), rem)
    }

    /// Exact quotient, if the division leaves no remainder.
    pub fn exact_div(&self, divisor: &ParamPoly) -> Option<ParamPoly> {
        let (q, r) = self.divrem(divisor);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Monic greatest common divisor over Q[x]; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &ParamPoly) -> ParamPoly {
        self.assert_same_name(other);
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.into_monic()
    }

    /// Scales so the leading coefficient is one (zero stays zero).
    pub fn into_monic(self) -> ParamPoly {
        match self.leading() {
            None => self,
            Some(l) if l.is_one() => self,
            Some(l) => {
                let inv = l.recip().unwrap();
                self.scale(&inv)
            }
        }
    }

    pub fn eval(&self, value: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    /// All distinct rational roots, sorted ascending, found by the rational
    /// root theorem on the primitive integer form.
    pub fn rational_roots(&self) -> RationalRoots {
        let degree = self.degree().expect("roots of the zero polynomial");
        let mut roots = Vec::new();
        let mut p = self.clone();

        // Factor out x^k first.
        let mut low = 0;
        while low < p.coeffs.len() && p.coeffs[low].is_zero() {
            low += 1;
        }
        if low > 0 {
            roots.push(Rational::zero());
            p = ParamPoly::from_coeffs(&self.name, p.coeffs[low..].to_vec());
        }
        if p.is_constant() {
            roots.sort();
            return RationalRoots { roots, degree };
        }

        // Clear denominators to get integer coefficients.
        let mut lcm = BigInt::one();
        for c in &p.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = p
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let a0 = ints.first().unwrap();
        let an = ints.last().unwrap();
        debug_assert!(!a0.is_zero() && !an.is_zero());

        for pnum in divisors(a0) {
            for qden in divisors(an) {
                if !pnum.gcd(&qden).is_one() {
                    continue;
                }
                for sign in [1i64, -1] {
                    let cand = Rational::from_big(&pnum * BigInt::from(sign), qden.clone());
                    if p.eval(&cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        RationalRoots { roots, degree }
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (power, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if power == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write!(f, "{}", self.name)?;
                if power > 1 {
                    write!(f, "^{power}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(coeffs: &[(i64, i64)]) -> ParamPoly {
        ParamPoly::from_coeffs(
            "E",
            coeffs.iter().map(|&(n, d)| Rational::new(n, d)).collect(),
        )
    }

    #[test]
    fn long_division_exact_case() {
        // (2E + 2E^2) / (1 + E) = 2E
        let num = poly(&[(0, 1), (2, 1), (2, 1)]);
        let den = poly(&[(1, 1), (1, 1)]);
        let q = num.exact_div(&den).unwrap();
        assert_eq!(q, poly(&[(0, 1), (2, 1)]));
    }

    #[test]
    fn divrem_with_remainder() {
        // E^2 + 1 = (E)(E) + 1
        let num = poly(&[(1, 1), (0, 1), (1, 1)]);
        let den = ParamPoly::var("E");
        let (q, r) = num.divrem(&den);
        assert_eq!(q, ParamPoly::var("E"));
        assert_eq!(r, poly(&[(1, 1)]));
    }

    #[test]
    fn gcd_is_monic() {
        // gcd(2E^2 + 2E, 4E) = E
        let a = poly(&[(0, 1), (2, 1), (2, 1)]);
        let b = poly(&[(0, 1), (4, 1)]);
        assert_eq!(a.gcd(&b), ParamPoly::var("E"));
    }

    #[test]
    fn eval_horner() {
        // E^2 - 16 at E = 8 -> 48
        let p = poly(&[(-16, 1), (0, 1), (1, 1)]);
        assert_eq!(p.eval(&Rational::from_int(8)), Rational::from_int(48));
    }

    #[test]
    fn rational_roots_of_cubic() {
        // E(64 - E^2): roots 0, +-8
        let p = poly(&[(0, 1), (64, 1), (0, 1), (-1, 1)]);
        let found = p.rational_roots();
        assert_eq!(
            found.roots,
            vec![Rational::from_int(-8), Rational::zero(), Rational::from_int(8)]
        );
        assert_eq!(found.degree, 3);
    }

    #[test]
    fn rational_roots_with_fractional_root() {
        // (2E - 1)(E + 3) = 2E^2 + 5E - 3
        let p = poly(&[(-3, 1), (5, 1), (2, 1)]);
        let found = p.rational_roots();
        assert_eq!(found.roots, vec![Rational::from_int(-3), Rational::new(1, 2)]);
    }

    #[test]
    fn irrational_roots_not_reported() {
        // E^2 - 8 has no rational roots
        let p = poly(&[(-8, 1), (0, 1), (1, 1)]);
        let found = p.rational_roots();
        assert!(found.roots.is_empty());
        assert_eq!(found.degree, 2);
    }

    #[test]
    fn display_format() {
        let p = poly(&[(-3, 2), (0, 1), (1, 1)]);
        assert_eq!(p.to_string(), "E^2 - 3/2");
        assert_eq!(poly(&[(0, 1), (2, 1)]).to_string(), "2*E");
        assert_eq!(ParamPoly::zero("E").to_string(), "0");
    }
}
