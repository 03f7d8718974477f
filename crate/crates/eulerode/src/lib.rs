//! Exact symbolic engine for linear differential equations built on the
//! Euler operator D = x d/dx: operators split into an indicial part F(D)
//! plus a definite-degree remainder, series solutions grow from monomial
//! anchors x^lambda, polynomial solutions resum into exponential closed
//! forms, and the same machinery drives quasi-exactly-solvable spectra and
//! many-body eigenstates. All arithmetic is exact; every solution carries a
//! residual certificate.

pub mod algebra;
pub mod classical;
pub mod cli;
pub mod error;
pub mod manybody;
pub mod operator;
pub mod solver;
pub mod spectral;

pub use algebra::{CoeffField, GeneralizedSeries, ParamPoly, ParamRatFunc, Rational, Truncation};
pub use error::{Error, Result};
pub use operator::{EulerPoly, LinDiffOp, MonoOp};
pub use solver::{exp_apply, invert_f, master_solve, residual, ExpForm, SolveReport, SolveStatus};
