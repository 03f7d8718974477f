//! Exact scalar and series arithmetic underlying the whole engine.

mod coeff;
mod poly;
mod ratfunc;
mod rational;
mod series;

pub use coeff::{eval_param, field_arith, CoeffField, FieldOp};
pub use poly::{ParamPoly, RationalRoots};
pub use ratfunc::ParamRatFunc;
pub use rational::Rational;
pub use series::{series_combine, GeneralizedSeries, Truncation};
