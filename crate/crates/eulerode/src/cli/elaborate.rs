//! Lowers the surface syntax to a normal-ordered operator, binding
//! parameters and enforcing the single-free-parameter rule.

use std::collections::BTreeMap;

use crate::algebra::{CoeffField, Rational};
use crate::error::{Error, Result};
use crate::operator::LinDiffOp;

use super::ast::OpExpr;

pub struct Bindings {
    pub values: BTreeMap<String, Rational>,
    /// Explicitly designated free parameter. When None, the first unbound
    /// identifier is adopted; a second distinct one is an error.
    pub free: Option<String>,
}

impl Bindings {
    pub fn new(values: BTreeMap<String, Rational>, free: Option<String>) -> Self {
        Bindings { values, free }
    }

    pub fn empty() -> Self {
        Bindings { values: BTreeMap::new(), free: None }
    }

    fn resolve(&mut self, name: &str, explicit_free: bool) -> Result<CoeffField> {
        if let Some(v) = self.values.get(name) {
            return Ok(CoeffField::from_rational(v.clone()));
        }
        match &self.free {
            Some(free) if free == name => Ok(CoeffField::parameter(name)),
            Some(free) => {
                if explicit_free {
                    Err(Error::UnboundParameter { name: name.to_string() })
                } else {
                    Err(Error::TwoFreeParameters { first: free.clone(), second: name.to_string() })
                }
            }
            None => {
                self.free = Some(name.to_string());
                Ok(CoeffField::parameter(name))
            }
        }
    }
}

/// Elaborates the expression; products compose right-factor-first and are
/// normal-ordered on construction.
pub fn elaborate(expr: &OpExpr, bindings: &mut Bindings) -> Result<LinDiffOp> {
    let explicit_free = bindings.free.is_some();
    lower(expr, bindings, explicit_free)
}

fn lower(expr: &OpExpr, bindings: &mut Bindings, explicit_free: bool) -> Result<LinDiffOp> {
    Ok(match expr {
        OpExpr::RationalLit(r) => LinDiffOp::constant(CoeffField::from_rational(r.clone())),
        OpExpr::Param(name) => LinDiffOp::constant(bindings.resolve(name, explicit_free)?),
        OpExpr::X(p) => LinDiffOp::x_pow(*p),
        OpExpr::Dsmall(p) => LinDiffOp::d_pow(*p),
        OpExpr::Dbig(p) => {
            let euler = LinDiffOp::euler();
            let mut out = LinDiffOp::constant(CoeffField::one());
            for _ in 0..*p {
                out = out.mul(&euler);
            }
            out
        }
        OpExpr::Negate(inner) => lower(inner, bindings, explicit_free)?.neg(),
        OpExpr::Sum(terms) => {
            let mut out = LinDiffOp::zero();
            for t in terms {
                out = out.add(&lower(t, bindings, explicit_free)?);
            }
            out
        }
        OpExpr::Product(factors) => {
            let mut out = LinDiffOp::constant(CoeffField::one());
            for f in factors {
                out = out.mul(&lower(f, bindings, explicit_free)?);
            }
            out
        }
    })
}
