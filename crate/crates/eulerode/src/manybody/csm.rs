//! Calogero-Sutherland eigenstates in the gauge-reduced polynomial sector.
//!
//! The lowering operator A(beta) = (1/2) sum_i d^2/dx_i^2 + beta sum_{i<j}
//! 1/(x_i - x_j)(d_i - d_j) drops total degree by two, so exp(-A/2)
//! terminates on any polynomial. Each state is certified by the residual of
//! [sum_i x_i d_i - n - A] P = 0.

use crate::algebra::{CoeffField, Rational};
use crate::error::{Error, Result};

use super::mpoly::{msym, MPoly};
use super::partition::Partition;

/// Exact image of the lowering operator; defined on symmetric polynomials
/// (pairwise antisymmetry is what makes the division exact).
pub fn csm_a_apply(beta: &CoeffField, p: &MPoly) -> Result<MPoly> {
    let n = p.nvars();
    let mut out = MPoly::zero(n);
    for i in 0..n {
        out = out.add(&p.partial(i).partial(i).scale(&CoeffField::from_rational(Rational::new(1, 2))));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let anti = p.partial(i).sub(&p.partial(j));
            out = out.add(&anti.pair_divide(i, j)?.scale(beta));
        }
    }
    Ok(out)
}

/// Gauge-reduced ground energy (1/2) N + (1/2) beta N (N - 1).
pub fn csm_ground_energy(nvars: usize, beta: &CoeffField) -> CoeffField {
    let n = nvars as i64;
    let half_n = CoeffField::from_rational(Rational::new(n, 2));
    &half_n + &beta.mul_rational(&Rational::new(n * (n - 1), 2))
}

#[derive(Debug, Clone)]
pub struct CsmState {
    pub partition: Partition,
    pub nvars: usize,
    /// The polynomial factor exp(-A/2) m_lambda, of degree |lambda|.
    pub polynomial: MPoly,
    pub ground_energy: CoeffField,
    /// E = E_0 + |lambda|.
    pub energy: CoeffField,
}

/// Builds the eigenstate for one partition by the terminating exponential
/// map and certifies it.
pub fn csm_state(lambda: &Partition, nvars: usize, beta: &CoeffField) -> Result<CsmState> {
    let anchor = msym(lambda, nvars)?;
    let weight = lambda.weight() as i64;

    // exp(-A/2) by repeated application; degree drops by 2 each round.
    let mut polynomial = anchor.clone();
    let mut term = anchor;
    let mut m = 1i64;
    while !term.is_zero() {
        term = csm_a_apply(beta, &term)?.scale(&CoeffField::from_rational(Rational::new(-1, 2 * m)));
        polynomial = polynomial.add(&term);
        m += 1;
    }

    // Residual of [sum_i x_i d_i - n - A] applied to the state.
    let mut euler_total = MPoly::zero(nvars);
    for i in 0..nvars {
        euler_total = euler_total.add(&polynomial.euler(i));
    }
    let res = euler_total
        .sub(&polynomial.scale(&CoeffField::from_rational(Rational::from_int(weight))))
        .sub(&csm_a_apply(beta, &polynomial)?);
    if !res.is_zero() {
        return Err(Error::ResidualNonzero);
    }
    if polynomial.total_degree() != Some(lambda.weight()) {
        return Err(Error::ResidualNonzero);
    }

    let ground_energy = csm_ground_energy(nvars, beta);
    let energy = &ground_energy + &CoeffField::from_rational(Rational::from_int(weight));
    Ok(CsmState {
        partition: lambda.clone(),
        nvars,
        polynomial,
        ground_energy,
        energy,
    })
}
