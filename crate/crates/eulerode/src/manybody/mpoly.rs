//! Multivariate polynomials over the coefficient field, with the exact
//! pair-division primitive that keeps every Sutherland/CSM intermediate
//! polynomial: the singular fraction 1/(x_i - x_j) is never formed. Instead
//! an antisymmetric polynomial is built first and divided exactly.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{CoeffField, Rational};
use crate::error::{Error, Result};

use super::partition::Partition;

#[derive(Clone, PartialEq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, CoeffField>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: CoeffField) -> Self {
        let mut p = MPoly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        MPoly::constant(nvars, CoeffField::one())
    }

    pub fn monomial(expts: Vec<u32>, coeff: CoeffField) -> Self {
        let mut p = MPoly::zero(expts.len());
        p.add_term(expts, coeff);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &CoeffField)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coeff(&self, expts: &[u32]) -> CoeffField {
        self.terms.get(expts).cloned().unwrap_or_else(CoeffField::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add_term(&mut self, expts: Vec<u32>, c: CoeffField) {
        debug_assert_eq!(expts.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&expts) {
            Some(entry) => {
                *entry = &*entry + &c;
                if entry.is_zero() {
                    self.terms.remove(&expts);
                }
            }
            None => {
                self.terms.insert(expts, c);
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &CoeffField) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = MPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// Partial derivative with respect to variable i.
    pub fn partial(&self, i: usize) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c.mul_rational(&Rational::from_int(e[i] as i64)));
        }
        out
    }

    /// x_i d/dx_i: scales each term by its exponent in variable i.
    pub fn euler(&self, i: usize) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.mul_rational(&Rational::from_int(e[i] as i64)));
        }
        out
    }

    /// Multiplication by x_i.
    pub fn mul_var(&self, i: usize) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2[i] += 1;
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    pub fn swap_vars(&self, i: usize, j: usize) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2.swap(i, j);
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// Invariance under every transposition of adjacent variables.
    pub fn is_symmetric(&self) -> bool {
        (1..self.nvars).all(|i| self.swap_vars(i - 1, i) == *self)
    }

    /// Exact quotient p / (x_i - x_j) for p antisymmetric under i <-> j,
    /// by synthetic division in x_i over the remaining variables.
    pub fn pair_divide(&self, i: usize, j: usize) -> Result<MPoly> {
        debug_assert!(i != j);
        if self.is_zero() {
            return Ok(MPoly::zero(self.nvars));
        }
        // Collect coefficients of x_i^k (polynomials in the other variables).
        let mut by_power: BTreeMap<u32, MPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e[i];
            let mut e2 = e.clone();
            e2[i] = 0;
            by_power
                .entry(k)
                .or_insert_with(|| MPoly::zero(self.nvars))
                .add_term(e2, c.clone());
        }
        let top = *by_power.keys().next_back().unwrap();
        let coeff_at = |k: u32| -> MPoly {
            by_power.get(&k).cloned().unwrap_or_else(|| MPoly::zero(self.nvars))
        };

        // b_{d-1} = a_d; b_{k-1} = a_k + x_j b_k; remainder a_0 + x_j b_0.
        let mut quotient = MPoly::zero(self.nvars);
        let mut carry = MPoly::zero(self.nvars);
        for k in (1..=top).rev() {
            let b = coeff_at(k).add(&carry.mul_var(j));
            for (e, c) in &b.terms {
                let mut e2 = e.clone();
                e2[i] = k - 1;
                quotient.add_term(e2, c.clone());
            }
            carry = b;
        }
        let remainder = coeff_at(0).add(&carry.mul_var(j));
        if !remainder.is_zero() {
            return Err(Error::NotDivisible);
        }
        Ok(quotient)
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &p)| p > 0)
                    .map(|(i, &p)| {
                        if p == 1 {
                            format!("x{}", i + 1)
                        } else {
                            format!("x{}^{}", i + 1, p)
                        }
                    })
                    .collect();
                if vars.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// The monomial symmetric polynomial m_lambda in `nvars` variables: the sum
/// of all distinct permutations of the exponent vector, coefficient 1 each.
pub fn msym(lambda: &Partition, nvars: usize) -> Result<MPoly> {
    if lambda.num_parts() > nvars {
        return Err(Error::TooManyParts { parts: lambda.num_parts(), nvars });
    }
    let mut expts = lambda.padded(nvars);
    expts.sort_unstable(); // ascending start for the permutation walk
    let mut out = MPoly::zero(nvars);
    loop {
        out.add_term(expts.clone(), CoeffField::one());
        if !next_permutation(&mut expts) {
            break;
        }
    }
    Ok(out)
}

/// Expands a symmetric polynomial in the monomial-symmetric basis. The
/// result maps each partition to the coefficient of its sorted monomial;
/// the expansion is verified by reconstruction, so a non-symmetric input is
/// rejected.
pub fn m_expansion(p: &MPoly) -> Result<BTreeMap<Partition, CoeffField>> {
    let mut out: BTreeMap<Partition, CoeffField> = BTreeMap::new();
    for (e, c) in p.terms() {
        let sorted = {
            let mut v = e.to_vec();
            v.sort_unstable_by(|a, b| b.cmp(a));
            v
        };
        if sorted == e {
            out.insert(Partition::new(sorted), c.clone());
        }
    }
    // Reconstruct to confirm the input really was symmetric.
    let mut rebuilt = MPoly::zero(p.nvars());
    for (lambda, c) in &out {
        rebuilt = rebuilt.add(&msym(lambda, p.nvars())?.scale(c));
    }
    if &rebuilt != p {
        return Err(Error::Invalid("polynomial is not symmetric".into()));
    }
    Ok(out)
}
