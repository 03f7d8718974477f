//! Generalized series: x^lambda times a finite sparse sum of integer-offset
//! terms with `CoeffField` coefficients.
//!
//! A series is either exact (a finite sum representing an exact solution) or
//! truncated. Truncation is directional: `Above(K)` trusts offsets k < K and
//! has dropped an ascending tail, `Below(K)` trusts offsets k > K and has
//! dropped a descending tail. Operators shift these windows by their minimum
//! (resp. maximum) term degree, which is what makes residual checks honest.

use std::collections::BTreeMap;
use std::fmt;

use super::coeff::{eval_param, CoeffField};
use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    Exact,
    /// Offsets k < K are trusted; the tail k >= K was discarded.
    Above(i64),
    /// Offsets k > K are trusted; the tail k <= K was discarded.
    Below(i64),
}

impl Truncation {
    pub fn contains(&self, offset: i64) -> bool {
        match *self {
            Truncation::Exact => true,
            Truncation::Above(k) => offset < k,
            Truncation::Below(k) => offset > k,
        }
    }

    fn shifted(&self, by: i64) -> Truncation {
        match *self {
            Truncation::Exact => Truncation::Exact,
            Truncation::Above(k) => Truncation::Above(k + by),
            Truncation::Below(k) => Truncation::Below(k + by),
        }
    }

    pub fn merge(self, other: Truncation) -> Result<Truncation> {
        use Truncation::*;
        Ok(match (self, other) {
            (Exact, t) | (t, Exact) => t,
            (Above(a), Above(b)) => Above(a.min(b)),
            (Below(a), Below(b)) => Below(a.max(b)),
            (Above(_), Below(_)) | (Below(_), Above(_)) => return Err(Error::WindowMismatch),
        })
    }
}

#[derive(Clone)]
pub struct GeneralizedSeries {
    base: Rational,
    terms: BTreeMap<i64, CoeffField>,
    trunc: Truncation,
}

impl GeneralizedSeries {
    pub fn zero() -> Self {
        GeneralizedSeries {
            base: Rational::zero(),
            terms: BTreeMap::new(),
            trunc: Truncation::Exact,
        }
    }

    /// The monomial x^base with coefficient 1.
    pub fn monomial(base: Rational) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(0, CoeffField::one());
        GeneralizedSeries { base, terms, trunc: Truncation::Exact }
    }

    pub fn from_terms<I>(base: Rational, terms: I, trunc: Truncation) -> Self
    where
        I: IntoIterator<Item = (i64, CoeffField)>,
    {
        let mut s = GeneralizedSeries { base, terms: BTreeMap::new(), trunc };
        for (k, c) in terms {
            s.add_term(k, c);
        }
        s
    }

    /// A plain polynomial with rational coefficients c[i] on x^i.
    pub fn polynomial(coeffs: &[Rational]) -> Self {
        GeneralizedSeries::from_terms(
            Rational::zero(),
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (i as i64, CoeffField::from_rational(c.clone()))),
            Truncation::Exact,
        )
    }

    pub fn base(&self) -> &Rational {
        &self.base
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    pub fn set_truncation(&mut self, trunc: Truncation) {
        self.trunc = trunc;
        self.retain_window(trunc);
    }

    /// Drops stored terms outside `window` without changing the truncation
    /// marker. Used mid-iteration when out-of-window terms can only ever feed
    /// offsets further outside the window.
    pub fn retain_window(&mut self, window: Truncation) {
        let drop: Vec<i64> = self
            .terms
            .keys()
            .copied()
            .filter(|k| !window.contains(*k))
            .collect();
        for k in drop {
            self.terms.remove(&k);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &CoeffField)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, offset: i64) -> CoeffField {
        self.terms.get(&offset).cloned().unwrap_or_else(CoeffField::zero)
    }

    /// Coefficient at an absolute exponent; zero when the exponent is not
    /// base + integer.
    pub fn coeff_at_exponent(&self, exponent: &Rational) -> CoeffField {
        match (exponent - &self.base).to_integer() {
            Some(k) => self.coeff(k),
            None => CoeffField::zero(),
        }
    }

    /// Adds into the coefficient at `offset`, keeping the no-zero-terms
    /// invariant and discarding anything outside the trust window.
    pub fn add_term(&mut self, offset: i64, c: CoeffField) {
        if c.is_zero() || !self.trunc.contains(offset) {
            return;
        }
        let entry = self.terms.entry(offset).or_insert_with(CoeffField::zero);
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&offset);
        }
    }

    /// True when no terms are stored. For an exact series this means the zero
    /// function; for a truncated one it means zero on the trusted window.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_offset(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_offset(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Largest exponent with a nonzero coefficient (exact series only makes
    /// this meaningful).
    pub fn max_exponent(&self) -> Option<Rational> {
        self.max_offset().map(|k| &self.base + &Rational::from_int(k))
    }

    pub fn scale(&self, c: &CoeffField) -> GeneralizedSeries {
        if c.is_zero() {
            return GeneralizedSeries { base: self.base.clone(), terms: BTreeMap::new(), trunc: self.trunc };
        }
        GeneralizedSeries {
            base: self.base.clone(),
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
            trunc: self.trunc,
        }
    }

    pub fn neg(&self) -> GeneralizedSeries {
        GeneralizedSeries {
            base: self.base.clone(),
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
            trunc: self.trunc,
        }
    }

    /// Multiplies by x^k (shifts every exponent and the trust window).
    pub fn mul_xpow(&self, k: i64) -> GeneralizedSeries {
        GeneralizedSeries {
            base: self.base.clone(),
            terms: self.terms.iter().map(|(o, v)| (o + k, v.clone())).collect(),
            trunc: self.trunc.shifted(k),
        }
    }

    /// Rebases to a smaller-or-equal anchor exponent differing by an integer.
    fn rebased(&self, new_base: &Rational) -> Result<GeneralizedSeries> {
        let gap = (&self.base - new_base)
            .to_integer()
            .ok_or_else(|| Error::IncompatibleBase { gap: &self.base - new_base })?;
        Ok(GeneralizedSeries {
            base: new_base.clone(),
            terms: self.terms.iter().map(|(k, v)| (k + gap, v.clone())).collect(),
            trunc: self.trunc.shifted(gap),
        })
    }

    /// Substitutes the free parameter in every coefficient.
    pub fn eval_param(&self, value: &Rational) -> Result<GeneralizedSeries> {
        let mut out = GeneralizedSeries {
            base: self.base.clone(),
            terms: BTreeMap::new(),
            trunc: self.trunc,
        };
        for (k, c) in &self.terms {
            out.add_term(*k, CoeffField::from_rational(eval_param(c, value)?));
        }
        Ok(out)
    }

    /// Normal form: zero series anchors at 0; otherwise the anchor moves to
    /// the lowest stored exponent.
    pub fn canonical(&self) -> GeneralizedSeries {
        match self.min_offset() {
            None => GeneralizedSeries { base: Rational::zero(), terms: BTreeMap::new(), trunc: self.trunc },
            Some(min) => GeneralizedSeries {
                base: &self.base + &Rational::from_int(min),
                terms: self.terms.iter().map(|(k, v)| (k - min, v.clone())).collect(),
                trunc: self.trunc.shifted(-min),
            },
        }
    }

    /// Term-by-term equality at matching exponents, ignoring truncation
    /// bookkeeping. Useful for comparing an exact oracle with a certified
    /// truncated solution on the overlap.
    pub fn eq_terms(&self, other: &GeneralizedSeries) -> bool {
        let a = self.canonical();
        let b = other.canonical();
        if a.is_empty() && b.is_empty() {
            return true;
        }
        a.base == b.base && a.terms == b.terms
    }
}

/// s1 + scale * s2, re-anchored to the smaller base exponent. The result's
/// window is the intersection of the operands' windows.
pub fn series_combine(
    s1: &GeneralizedSeries,
    s2: &GeneralizedSeries,
    scale: &CoeffField,
) -> Result<GeneralizedSeries> {
    // A zero operand imposes no base constraint.
    if s2.is_empty() && matches!(s2.trunc, Truncation::Exact) {
        return Ok(s1.clone());
    }
    if s1.is_empty() && matches!(s1.trunc, Truncation::Exact) {
        return Ok(s2.scale(scale));
    }
    let base = if s1.base <= s2.base { s1.base.clone() } else { s2.base.clone() };
    let a = s1.rebased(&base)?;
    let b = s2.rebased(&base)?;
    let trunc = a.trunc.merge(b.trunc)?;
    let mut out = GeneralizedSeries { base, terms: BTreeMap::new(), trunc };
    for (k, c) in &a.terms {
        out.add_term(*k, c.clone());
    }
    for (k, c) in &b.terms {
        out.add_term(*k, c * scale);
    }
    Ok(out)
}

impl PartialEq for GeneralizedSeries {
    fn eq(&self, other: &Self) -> bool {
        let a = self.canonical();
        let b = other.canonical();
        a.trunc == b.trunc && (a.is_empty() && b.is_empty() || a.base == b.base && a.terms == b.terms)
    }
}

impl fmt::Display for GeneralizedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        } else {
            let mut first = true;
            for (k, c) in &self.terms {
                let exponent = &self.base + &Rational::from_int(*k);
                let (sign_prefix, body) = match c {
                    CoeffField::Rat(r) => {
                        let mag = r.abs();
                        (r.is_negative(), mag.to_string())
                    }
                    other => (false, format!("({other})")),
                };
                if first {
                    if sign_prefix {
                        write!(f, "-")?;
                    }
                    first = false;
                } else if sign_prefix {
                    write!(f, " - ")?;
                } else {
                    write!(f, " + ")?;
                }
                let show_coeff = body != "1" || exponent.is_zero();
                if show_coeff {
                    write!(f, "{body}")?;
                }
                if !exponent.is_zero() {
                    if show_coeff {
                        write!(f, "*")?;
                    }
                    if exponent.is_integer() && !exponent.is_negative() {
                        if exponent.is_one() {
                            write!(f, "x")?;
                        } else {
                            write!(f, "x^{exponent}")?;
                        }
                    } else {
                        write!(f, "x^({exponent})")?;
                    }
                }
            }
        }
        match self.trunc {
            Truncation::Exact => Ok(()),
            Truncation::Above(k) => write!(f, " + O(x^({}))", &self.base + &Rational::from_int(k)),
            Truncation::Below(k) => write!(f, " + O(x^({}))", &self.base + &Rational::from_int(k)),
        }
    }
}

impl fmt::Debug for GeneralizedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> CoeffField {
        CoeffField::one()
    }

    #[test]
    fn combine_cancels_to_zero() {
        let s = GeneralizedSeries::monomial(Rational::from_int(2));
        let sum = series_combine(&s, &s.neg(), &one()).unwrap();
        assert!(sum.is_empty());
    }

    #[test]
    fn combine_reanchors_to_smaller_base() {
        let a = GeneralizedSeries::monomial(Rational::zero());
        let b = GeneralizedSeries::monomial(Rational::one());
        let sum = series_combine(&a, &b, &one()).unwrap();
        assert_eq!(sum.base(), &Rational::zero());
        assert_eq!(sum.coeff(0), one());
        assert_eq!(sum.coeff(1), one());
    }

    #[test]
    fn combine_rejects_non_integer_gap() {
        let a = GeneralizedSeries::monomial(Rational::new(1, 2));
        let b = GeneralizedSeries::monomial(Rational::zero());
        assert!(matches!(
            series_combine(&a, &b, &one()),
            Err(Error::IncompatibleBase { .. })
        ));
    }

    #[test]
    fn window_intersection() {
        let mut a = GeneralizedSeries::polynomial(&[Rational::one(), Rational::one()]);
        a.set_truncation(Truncation::Above(4));
        let mut b = GeneralizedSeries::from_terms(
            Rational::zero(),
            (0..6).map(|k| (k, one())),
            Truncation::Above(6),
        );
        b.set_truncation(Truncation::Above(6));
        let sum = series_combine(&a, &b, &one()).unwrap();
        assert_eq!(sum.truncation(), Truncation::Above(4));
        assert_eq!(sum.max_offset(), Some(3));
    }

    #[test]
    fn opposite_windows_rejected() {
        let mut a = GeneralizedSeries::monomial(Rational::zero());
        a.set_truncation(Truncation::Above(5));
        let mut b = GeneralizedSeries::monomial(Rational::zero());
        b.set_truncation(Truncation::Below(-5));
        assert_eq!(series_combine(&a, &b, &one()), Err(Error::WindowMismatch));
    }

    #[test]
    fn display_forms() {
        let s = GeneralizedSeries::polynomial(&[
            Rational::one(),
            Rational::zero(),
            Rational::new(-1, 2),
        ]);
        assert_eq!(s.to_string(), "1 - 1/2*x^2");
        let m = GeneralizedSeries::monomial(Rational::new(7, 2));
        assert_eq!(m.to_string(), "x^(7/2)");
    }
}
