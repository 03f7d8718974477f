//! Linear differential operators in normal order, their action on
//! generalized series, and the split into an Euler part F(D) plus a
//! definite-degree remainder.
//!
//! Every operator is a sum of monomials c * x^a * d^b stored with d to the
//! right. Products are normal-ordered on construction through the rewrite
//! d * x = x * d + 1, so equal operators have equal representations.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::One;

use crate::algebra::{CoeffField, GeneralizedSeries, ParamPoly, Rational, RationalRoots, Truncation};
use crate::error::{Error, Result};

/// A single normal-ordered monomial operator c * x^a * (d/dx)^b.
#[derive(Debug, Clone, PartialEq)]
pub struct MonoOp {
    pub coeff: CoeffField,
    pub xpow: u32,
    pub dorder: u32,
}

impl MonoOp {
    pub fn new(coeff: CoeffField, xpow: u32, dorder: u32) -> Self {
        MonoOp { coeff, xpow, dorder }
    }

    /// Degree in the Euler grading: [D, T] = degree * T.
    pub fn degree(&self) -> i64 {
        self.xpow as i64 - self.dorder as i64
    }
}

/// A linear differential operator: merged monomials keyed by (xpow, dorder).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinDiffOp {
    terms: BTreeMap<(u32, u32), CoeffField>,
}

impl LinDiffOp {
    pub fn zero() -> Self {
        LinDiffOp::default()
    }

    pub fn from_terms<I: IntoIterator<Item = MonoOp>>(terms: I) -> Self {
        let mut op = LinDiffOp::zero();
        for t in terms {
            op.insert(t.xpow, t.dorder, t.coeff);
        }
        op
    }

    pub fn constant(c: CoeffField) -> Self {
        LinDiffOp::from_terms([MonoOp::new(c, 0, 0)])
    }

    pub fn x_pow(a: u32) -> Self {
        LinDiffOp::from_terms([MonoOp::new(CoeffField::one(), a, 0)])
    }

    pub fn d_pow(b: u32) -> Self {
        LinDiffOp::from_terms([MonoOp::new(CoeffField::one(), 0, b)])
    }

    /// The Euler operator D = x * d.
    pub fn euler() -> Self {
        LinDiffOp::from_terms([MonoOp::new(CoeffField::one(), 1, 1)])
    }

    fn insert(&mut self, xpow: u32, dorder: u32, coeff: CoeffField) {
        if coeff.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry((xpow, dorder))
            .or_insert_with(CoeffField::zero);
        *entry = &*entry + &coeff;
        if entry.is_zero() {
            self.terms.remove(&(xpow, dorder));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = MonoOp> + '_ {
        self.terms
            .iter()
            .map(|(&(a, b), c)| MonoOp::new(c.clone(), a, b))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, xpow: u32, dorder: u32) -> CoeffField {
        self.terms
            .get(&(xpow, dorder))
            .cloned()
            .unwrap_or_else(CoeffField::zero)
    }

    /// Smallest term degree, or None for the zero operator.
    pub fn min_degree(&self) -> Option<i64> {
        self.terms
            .keys()
            .map(|&(a, b)| a as i64 - b as i64)
            .min()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms
            .keys()
            .map(|&(a, b)| a as i64 - b as i64)
            .max()
    }

    pub fn add(&self, other: &LinDiffOp) -> LinDiffOp {
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.insert(*a, *b, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LinDiffOp) -> LinDiffOp {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LinDiffOp {
        LinDiffOp {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn scale(&self, c: &CoeffField) -> LinDiffOp {
        if c.is_zero() {
            return LinDiffOp::zero();
        }
        LinDiffOp {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Operator composition self after other, normal-ordered via
    /// d^b x^a = sum_j C(b,j) a!/(a-j)! x^(a-j) d^(b-j).
    pub fn mul(&self, other: &LinDiffOp) -> LinDiffOp {
        let mut out = LinDiffOp::zero();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                let jmax = (*b1).min(*a2);
                for j in 0..=jmax {
                    let reorder = binomial(*b1, j) * falling_factorial_int(*a2, j);
                    let coeff = (c1 * c2).mul_rational(&Rational::from_bigint(reorder));
                    out.insert(a1 + a2 - j, b1 + b2 - j, coeff);
                }
            }
        }
        out
    }

    /// AB - BA.
    pub fn commutator(&self, other: &LinDiffOp) -> LinDiffOp {
        self.mul(other).sub(&other.mul(self))
    }

    /// x^k composed before self.
    pub fn premultiply(&self, k: u32) -> LinDiffOp {
        LinDiffOp {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), c)| ((a + k, b), c.clone()))
                .collect(),
        }
    }

    /// (d/dx)^times composed before self, Leibniz-expanded.
    pub fn differentiate(&self, times: u32) -> LinDiffOp {
        if times == 0 {
            return self.clone();
        }
        LinDiffOp::d_pow(times).mul(self)
    }

    /// Exact image of a generalized series. Each monomial x^mu maps to
    /// mu(mu-1)...(mu-b+1) x^(mu-b+a). The output trust window narrows by the
    /// operator's minimum (ascending) or maximum (descending) term degree, so
    /// coefficients contaminated by a discarded tail are never reported.
    pub fn apply(&self, s: &GeneralizedSeries) -> GeneralizedSeries {
        let out_trunc = match s.truncation() {
            Truncation::Exact => Truncation::Exact,
            Truncation::Above(k) => match self.min_degree() {
                Some(dmin) => Truncation::Above(k + dmin),
                None => Truncation::Exact,
            },
            Truncation::Below(k) => match self.max_degree() {
                Some(dmax) => Truncation::Below(k + dmax),
                None => Truncation::Exact,
            },
        };
        let mut out = GeneralizedSeries::from_terms(s.base().clone(), [], out_trunc);
        for ((a, b), c) in &self.terms {
            let shift = *a as i64 - *b as i64;
            for (k, t) in s.terms() {
                let mu = s.base() + &Rational::from_int(k);
                let factor = mu.falling_factorial(*b);
                if factor.is_zero() {
                    continue;
                }
                out.add_term(k + shift, (t * c).mul_rational(&factor));
            }
        }
        out
    }

    /// Splits self into F(D) + P where F collects every degree-zero term
    /// (a = b, rewritten as falling factorials of D) and P has no degree-zero
    /// term. Degree-zero terms must carry rational coefficients; bind the
    /// free parameter first if they do not.
    pub fn degree_split(&self) -> Result<(EulerPoly, LinDiffOp)> {
        let mut f = ParamPoly::zero(EULER_NAME);
        let mut p = LinDiffOp::zero();
        for ((a, b), c) in &self.terms {
            if a == b {
                let r = match c.as_rational() {
                    Some(r) => r.clone(),
                    None => return Err(Error::SymbolicIndicial),
                };
                f = f.add(&euler_falling_factorial(*a).scale(&r));
            } else {
                p.insert(*a, *b, c.clone());
            }
        }
        Ok((EulerPoly(f), p))
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut out = BigInt::one();
    for i in 0..k {
        out = out * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    out
}

fn falling_factorial_int(a: u32, j: u32) -> BigInt {
    let mut out = BigInt::one();
    for i in 0..j {
        out *= BigInt::from(a - i);
    }
    out
}

const EULER_NAME: &str = "D";

/// x^k d^k as a polynomial in the Euler operator: D(D-1)...(D-k+1).
fn euler_falling_factorial(k: u32) -> ParamPoly {
    let mut out = ParamPoly::constant(EULER_NAME, Rational::one());
    for l in 0..k {
        let linear = ParamPoly::from_coeffs(
            EULER_NAME,
            vec![Rational::from_int(-(l as i64)), Rational::one()],
        );
        out = out.mul(&linear);
    }
    out
}

/// The indicial polynomial F(D): a polynomial in the Euler operator with
/// rational coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerPoly(ParamPoly);

impl EulerPoly {
    pub fn zero() -> Self {
        EulerPoly(ParamPoly::zero(EULER_NAME))
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        EulerPoly(ParamPoly::from_coeffs(EULER_NAME, coeffs))
    }

    /// Product of (D - r) over the given roots.
    pub fn from_roots(roots: &[Rational]) -> Self {
        let mut p = ParamPoly::constant(EULER_NAME, Rational::one());
        for r in roots {
            p = p.mul(&ParamPoly::from_coeffs(EULER_NAME, vec![-r, Rational::one()]));
        }
        EulerPoly(p)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.degree()
    }

    pub fn coeffs(&self) -> &[Rational] {
        self.0.coeffs()
    }

    pub fn eval(&self, lambda: &Rational) -> Rational {
        self.0.eval(lambda)
    }

    /// All rational roots of F(lambda) = 0 sorted ascending, plus deg F so
    /// callers can tell how many roots lie outside Q.
    pub fn indicial_roots(&self) -> Result<RationalRoots> {
        if self.0.is_zero() {
            return Err(Error::ZeroEulerPart);
        }
        Ok(self.0.rational_roots())
    }

    /// Re-expands the polynomial in D as a normal-ordered operator.
    pub fn as_operator(&self) -> LinDiffOp {
        let mut out = LinDiffOp::zero();
        let euler = LinDiffOp::euler();
        for c in self.0.coeffs().iter().rev() {
            out = out.mul(&euler);
            out = out.add(&LinDiffOp::constant(CoeffField::from_rational(c.clone())));
        }
        out
    }
}

impl fmt::Display for EulerPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for LinDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((a, b), c) in &self.terms {
            let (negative, body) = match c {
                CoeffField::Rat(r) => (r.is_negative(), r.abs().to_string()),
                other => (false, format!("({other})")),
            };
            if first {
                if negative {
                    write!(f, "-")?;
                }
                first = false;
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if body != "1" || (*a == 0 && *b == 0) {
                factors.push(body);
            }
            if *a > 0 {
                factors.push(if *a == 1 { "x".into() } else { format!("x^{a}") });
            }
            if *b > 0 {
                factors.push(if *b == 1 { "d".into() } else { format!("d^{b}") });
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> CoeffField {
        CoeffField::from_rational(Rational::new(n, d))
    }

    fn x_monomial(k: i64) -> GeneralizedSeries {
        GeneralizedSeries::monomial(Rational::from_int(k))
    }

    /// D - n - (1/2) d^2.
    fn hermite_op(n: i64) -> LinDiffOp {
        LinDiffOp::from_terms([
            MonoOp::new(CoeffField::one(), 1, 1),
            MonoOp::new(rat(-n, 1), 0, 0),
            MonoOp::new(rat(-1, 2), 0, 2),
        ])
    }

    #[test]
    fn apply_falling_factorials() {
        // d^2 on x^5 -> 20 x^3
        let out = LinDiffOp::d_pow(2).apply(&x_monomial(5));
        assert_eq!(out.coeff_at_exponent(&Rational::from_int(3)), rat(20, 1));
        assert_eq!(out.num_terms(), 1);

        // D on x^(7/2) -> (7/2) x^(7/2)
        let out = LinDiffOp::euler().apply(&GeneralizedSeries::monomial(Rational::new(7, 2)));
        assert_eq!(out.coeff_at_exponent(&Rational::new(7, 2)), rat(7, 2));

        // x^3 d on x^2 -> 2 x^4
        let op = LinDiffOp::from_terms([MonoOp::new(CoeffField::one(), 3, 1)]);
        let out = op.apply(&x_monomial(2));
        assert_eq!(out.coeff_at_exponent(&Rational::from_int(4)), rat(2, 1));
        assert_eq!(out.num_terms(), 1);
    }

    #[test]
    fn normal_ordering_rewrites_d_x() {
        // d o x = x d + 1
        let prod = LinDiffOp::d_pow(1).mul(&LinDiffOp::x_pow(1));
        assert_eq!(prod.coeff(1, 1), CoeffField::one());
        assert_eq!(prod.coeff(0, 0), CoeffField::one());
        assert_eq!(prod.num_terms(), 2);
    }

    #[test]
    fn degree_split_hermite() {
        let (f, p) = hermite_op(3).degree_split().unwrap();
        assert_eq!(
            f,
            EulerPoly::from_coeffs(vec![Rational::from_int(-3), Rational::one()])
        );
        assert_eq!(p.coeff(0, 2), rat(-1, 2));
        assert_eq!(p.num_terms(), 1);
    }

    #[test]
    fn degree_split_premultiplied_oscillator() {
        // x^2 d^2 + 2E x^2 - x^4 -> F = D(D-1), P = 2E x^2 - x^4
        let e2 = CoeffField::parameter("E").mul_rational(&Rational::from_int(2));
        let op = LinDiffOp::from_terms([
            MonoOp::new(CoeffField::one(), 2, 2),
            MonoOp::new(e2.clone(), 2, 0),
            MonoOp::new(rat(-1, 1), 4, 0),
        ]);
        let (f, p) = op.degree_split().unwrap();
        assert_eq!(
            f,
            EulerPoly::from_coeffs(vec![
                Rational::zero(),
                Rational::from_int(-1),
                Rational::one()
            ])
        );
        assert_eq!(p.coeff(2, 0), e2);
        assert_eq!(p.coeff(4, 0), rat(-1, 1));
        assert!(p.terms().all(|t| t.degree() != 0));
    }

    #[test]
    fn degree_split_with_no_euler_part() {
        let (f, p) = LinDiffOp::x_pow(2).degree_split().unwrap();
        assert!(f.is_zero());
        assert_eq!(p.coeff(2, 0), CoeffField::one());
    }

    #[test]
    fn indicial_roots_examples() {
        // (D-1)D -> {0, 1}
        let f = EulerPoly::from_roots(&[Rational::zero(), Rational::one()]);
        let roots = f.indicial_roots().unwrap();
        assert_eq!(roots.roots, vec![Rational::zero(), Rational::one()]);
        assert_eq!(roots.degree, 2);

        // D - 3 -> {3}
        let f = EulerPoly::from_roots(&[Rational::from_int(3)]);
        assert_eq!(f.indicial_roots().unwrap().roots, vec![Rational::from_int(3)]);

        // (D+2)(D-2) -> {-2, 2}
        let f = EulerPoly::from_roots(&[Rational::from_int(-2), Rational::from_int(2)]);
        assert_eq!(
            f.indicial_roots().unwrap().roots,
            vec![Rational::from_int(-2), Rational::from_int(2)]
        );

        assert_eq!(EulerPoly::zero().indicial_roots(), Err(Error::ZeroEulerPart));
    }

    #[test]
    fn premultiply_shifts_x_powers() {
        let op = LinDiffOp::constant(CoeffField::one()).premultiply(3);
        assert_eq!(op.coeff(3, 0), CoeffField::one());

        // Gauss hypergeometric times x: F has roots {0, 1-gamma}.
        let (alpha, beta, gamma) = (Rational::one(), Rational::from_int(2), Rational::from_int(3));
        let op = LinDiffOp::from_terms([
            MonoOp::new(CoeffField::one(), 2, 2),
            MonoOp::new(
                CoeffField::from_rational(&(&alpha + &beta) + &Rational::one()),
                1,
                1,
            ),
            MonoOp::new(CoeffField::from_rational(&alpha * &beta), 0, 0),
            MonoOp::new(rat(-1, 1), 1, 2),
            MonoOp::new(CoeffField::from_rational(-&gamma), 0, 1),
        ]);
        let (f, _) = op.premultiply(1).degree_split().unwrap();
        let roots = f.indicial_roots().unwrap();
        assert_eq!(
            roots.roots,
            vec![&Rational::one() - &gamma, Rational::zero()]
        );
    }

    #[test]
    fn differentiate_leibniz() {
        // d o x = x d + 1
        let op = LinDiffOp::x_pow(1).differentiate(1);
        assert_eq!(op.coeff(1, 1), CoeffField::one());
        assert_eq!(op.coeff(0, 0), CoeffField::one());

        // times = 0 is the identity transform
        let herm = hermite_op(4);
        assert_eq!(herm.differentiate(0), herm);
    }

    #[test]
    fn differentiated_oscillator_euler_part() {
        // d^2 + 2E - x^2 with E bound to 9/2, differentiated twice and
        // premultiplied by x^4: the degree-zero part is x^4 d^4.
        let op = LinDiffOp::from_terms([
            MonoOp::new(CoeffField::one(), 0, 2),
            MonoOp::new(rat(9, 1), 0, 0),
            MonoOp::new(rat(-1, 1), 2, 0),
        ]);
        let (f, _) = op.differentiate(2).premultiply(4).degree_split().unwrap();
        let expect = EulerPoly::from_roots(&[
            Rational::zero(),
            Rational::one(),
            Rational::from_int(2),
            Rational::from_int(3),
        ]);
        assert_eq!(f, expect);
    }

    #[test]
    fn commutator_examples() {
        let euler = LinDiffOp::euler();
        // [D, d^2] = -2 d^2
        let c = euler.commutator(&LinDiffOp::d_pow(2));
        assert_eq!(c, LinDiffOp::d_pow(2).scale(&rat(-2, 1)));
        // [D, x^2] = 2 x^2
        let c = euler.commutator(&LinDiffOp::x_pow(2));
        assert_eq!(c, LinDiffOp::x_pow(2).scale(&rat(2, 1)));
        // [x, x^2] = 0
        assert!(LinDiffOp::x_pow(1).commutator(&LinDiffOp::x_pow(2)).is_zero());
    }

    #[test]
    fn euler_measures_degree_of_every_monomial() {
        // [D, T] x^k = deg(T) * (T x^k) for a spread of monomials T.
        let euler = LinDiffOp::euler();
        for (a, b) in [(0u32, 0u32), (2, 0), (0, 2), (3, 1), (1, 3), (2, 2), (5, 2)] {
            let t = LinDiffOp::from_terms([MonoOp::new(rat(3, 7), a, b)]);
            let deg = a as i64 - b as i64;
            let comm = euler.commutator(&t);
            for k in 0..=12 {
                let xs = x_monomial(k);
                let lhs = comm.apply(&xs);
                let rhs = t.apply(&xs).scale(&rat(deg, 1));
                assert!(lhs.eq_terms(&rhs), "degree law failed for x^{a} d^{b}");
            }
        }
    }

    #[test]
    fn degree_split_is_exact_on_monomials() {
        let ops = [
            hermite_op(3),
            LinDiffOp::from_terms([
                MonoOp::new(CoeffField::one(), 2, 2),
                MonoOp::new(rat(3, 1), 2, 0),
                MonoOp::new(rat(-1, 1), 4, 0),
            ]),
            LinDiffOp::from_terms([
                MonoOp::new(rat(2, 1), 3, 3),
                MonoOp::new(rat(-5, 2), 1, 1),
                MonoOp::new(CoeffField::one(), 0, 1),
                MonoOp::new(rat(7, 3), 1, 0),
            ]),
        ];
        for op in &ops {
            let (f, p) = op.degree_split().unwrap();
            let rebuilt = f.as_operator().add(&p);
            for k in 0..=12 {
                let xs = x_monomial(k);
                assert!(op.apply(&xs).eq_terms(&rebuilt.apply(&xs)));
            }
        }
    }

    #[test]
    fn apply_is_linear() {
        let op = hermite_op(2);
        let s1 = GeneralizedSeries::polynomial(&[Rational::one(), Rational::from_int(3)]);
        let s2 = GeneralizedSeries::polynomial(&[Rational::zero(), Rational::one(), Rational::new(1, 2)]);
        let scale = rat(5, 3);
        let combined = crate::algebra::series_combine(&s1, &s2, &scale).unwrap();
        let lhs = op.apply(&combined);
        let rhs = crate::algebra::series_combine(&op.apply(&s1), &op.apply(&s2), &scale).unwrap();
        assert!(lhs.eq_terms(&rhs));
    }

    #[test]
    fn display_round_trippable_shape() {
        assert_eq!(hermite_op(3).to_string(), "-3 - 1/2*d^2 + x*d");
        assert_eq!(LinDiffOp::zero().to_string(), "0");
        let sym = LinDiffOp::from_terms([MonoOp::new(
            CoeffField::parameter("E").mul_rational(&Rational::from_int(2)),
            2,
            0,
        )]);
        assert_eq!(sym.to_string(), "(2*E)*x^2");
    }
}
