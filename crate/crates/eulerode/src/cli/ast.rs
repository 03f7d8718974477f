//! Surface syntax tree for the operator DSL and its printer.
//!
//! The printer is a fixed point of the parser: parsing what it prints yields
//! the same tree. Parsed literals are always nonnegative (minus is an
//! operator), which is what makes the sign placement unambiguous.

use std::fmt;

use crate::algebra::Rational;

#[derive(Debug, Clone, PartialEq)]
pub enum OpExpr {
    RationalLit(Rational),
    Param(String),
    /// x^power; power 1 prints as plain `x`.
    X(u32),
    /// (d/dx)^power.
    Dsmall(u32),
    /// Euler operator (x d/dx)^power.
    Dbig(u32),
    Sum(Vec<OpExpr>),
    /// Non-commutative product, leftmost factor outermost (rightmost acts
    /// first on anything the operator is applied to).
    Product(Vec<OpExpr>),
    Negate(Box<OpExpr>),
}

impl OpExpr {
    fn is_sum(&self) -> bool {
        matches!(self, OpExpr::Sum(_))
    }

    fn needs_parens_in_product(&self) -> bool {
        matches!(self, OpExpr::Sum(_) | OpExpr::Negate(_))
    }
}

fn write_power(f: &mut fmt::Formatter<'_>, sym: char, power: u32) -> fmt::Result {
    if power == 1 {
        write!(f, "{sym}")
    } else {
        write!(f, "{sym}^{power}")
    }
}

impl fmt::Display for OpExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpExpr::RationalLit(r) => {
                debug_assert!(!r.is_negative(), "parsed literals are nonnegative");
                write!(f, "{r}")
            }
            OpExpr::Param(name) => write!(f, "{name}"),
            OpExpr::X(p) => write_power(f, 'x', *p),
            OpExpr::Dsmall(p) => write_power(f, 'd', *p),
            OpExpr::Dbig(p) => write_power(f, 'D', *p),
            OpExpr::Negate(inner) => {
                if inner.is_sum() {
                    write!(f, "-({inner})")
                } else {
                    write!(f, "-{inner}")
                }
            }
            OpExpr::Product(factors) => {
                for (i, factor) in factors.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    if factor.needs_parens_in_product() {
                        write!(f, "({factor})")?;
                    } else {
                        write!(f, "{factor}")?;
                    }
                }
                Ok(())
            }
            OpExpr::Sum(terms) => {
                for (i, term) in terms.iter().enumerate() {
                    match (i, term) {
                        (0, _) => write!(f, "{term}")?,
                        (_, OpExpr::Negate(inner)) if !inner.is_sum() => {
                            write!(f, " - {inner}")?
                        }
                        _ => write!(f, " + {term}")?,
                    }
                }
                Ok(())
            }
        }
    }
}
