//! Series solutions anchored on monomials.
//!
//! `master_solve` iterates t_{m+1} = -F(D)^{-1} P t_m from t_0 = x^lambda,
//! which terminates on polynomial solutions and otherwise truncates at a
//! caller-chosen order with every reported coefficient exact. `residual`
//! turns the underlying substitution proof into an executable oracle: a
//! correct solution leaves nothing on its trustworthy window. `exp_apply`
//! evaluates the closed exponential forms (including resolvent factors
//! 1/(D+c)) by repeated application, never by symbolic expansion.

use crate::algebra::{series_combine, CoeffField, GeneralizedSeries, Rational, Truncation};
use crate::error::{Error, Result};
use crate::operator::{EulerPoly, LinDiffOp};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveStatus {
    /// Some iterate vanished identically; the stored series is exact.
    Terminated,
    /// The iteration escaped the requested window; coefficients inside the
    /// window are exact, the tail was discarded.
    Truncated(i64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub solution: GeneralizedSeries,
    pub status: SolveStatus,
    pub iterations_used: usize,
    /// Offsets k != 0 where F(lambda + k) = 0 lay inside the explored range
    /// but the source coefficient was identically zero (benign resonances,
    /// e.g. parity-protected second roots).
    pub resonances_hit: Vec<i64>,
}

impl SolveReport {
    pub fn terminated(&self) -> bool {
        self.status == SolveStatus::Terminated
    }
}

/// Applies 1/F(D) to a finite series: divides the coefficient at offset k by
/// F(base + k). Errors with `Resonance(k)` if F vanishes there while the
/// coefficient does not.
pub fn invert_f(f: &EulerPoly, s: &GeneralizedSeries) -> Result<GeneralizedSeries> {
    let mut out = GeneralizedSeries::from_terms(s.base().clone(), [], s.truncation());
    for (k, c) in s.terms() {
        let denom = f.eval(&(s.base() + &Rational::from_int(k)));
        if denom.is_zero() {
            return Err(Error::Resonance { offset: k });
        }
        out.add_term(k, c.div_rational(&denom)?);
    }
    Ok(out)
}

/// The residual of a candidate solution: `op` applied to `s`, reported only
/// on the window unaffected by any discarded tail. A certified solution has
/// an empty residual.
pub fn residual(op: &LinDiffOp, s: &GeneralizedSeries) -> GeneralizedSeries {
    op.apply(s)
}

enum Direction {
    Ascending,
    Descending,
    Mixed,
}

/// Solves [F(D) + P] y = 0 from the anchor x^lambda, normalized so the
/// coefficient of x^lambda is 1.
pub fn master_solve(op: &LinDiffOp, lambda: &Rational, max_order: i64) -> Result<SolveReport> {
    assert!(max_order >= 1, "max_order must be at least 1");
    let (f, p) = op.degree_split()?;
    if f.is_zero() {
        return Err(Error::ZeroEulerPart);
    }
    if !f.eval(lambda).is_zero() {
        return Err(Error::IndicialMismatch { lambda: lambda.clone() });
    }

    let mut y = GeneralizedSeries::monomial(lambda.clone());
    if p.is_zero() {
        return Ok(SolveReport {
            solution: y,
            status: SolveStatus::Terminated,
            iterations_used: 0,
            resonances_hit: Vec::new(),
        });
    }

    let dmin = p.min_degree().unwrap();
    let dmax = p.max_degree().unwrap();
    let direction = if dmin >= 1 {
        Direction::Ascending
    } else if dmax <= -1 {
        Direction::Descending
    } else {
        Direction::Mixed
    };
    let window = match direction {
        Direction::Ascending => Some(Truncation::Above(max_order)),
        Direction::Descending => Some(Truncation::Below(-max_order)),
        Direction::Mixed => None,
    };
    // Mixed-degree remainders never stabilize a coefficient window, so only a
    // lucky exact termination can succeed; cap the attempts.
    let iteration_cap = match direction {
        Direction::Mixed => (max_order as usize).max(64),
        _ => usize::MAX,
    };

    let mut term = y.clone();
    let mut iterations = 0usize;
    let status = loop {
        let image = p.apply(&term);
        let mut next = invert_f(&f, &image)?.neg();
        if next.is_empty() {
            break SolveStatus::Terminated;
        }
        if let Some(window) = window {
            // Terms outside the window only feed offsets further outside it.
            next.retain_window(window);
            if next.is_empty() {
                break SolveStatus::Truncated(max_order);
            }
        }
        y = series_combine(&y, &next, &CoeffField::one())?;
        term = next;
        iterations += 1;
        if iterations >= iteration_cap {
            return Err(Error::MixedDegreeRemainder);
        }
    };

    if let (SolveStatus::Truncated(_), Some(window)) = (&status, window) {
        y.set_truncation(window);
    }

    // Record integer-offset roots of F that the iteration swept past without
    // a nonzero source coefficient.
    let explored = match (&status, y.min_offset(), y.max_offset()) {
        (SolveStatus::Truncated(_), _, _) => match window.unwrap() {
            Truncation::Above(k) => (1, k - 1),
            Truncation::Below(k) => (k + 1, -1),
            Truncation::Exact => (0, 0),
        },
        (SolveStatus::Terminated, Some(lo), Some(hi)) => (lo.min(0), hi.max(0)),
        _ => (0, 0),
    };
    let mut resonances_hit = Vec::new();
    for root in f.indicial_roots()?.roots {
        if let Some(k) = (&root - lambda).to_integer() {
            if k != 0 && k >= explored.0 && k <= explored.1 {
                resonances_hit.push(k);
            }
        }
    }
    resonances_hit.sort_unstable();

    Ok(SolveReport {
        solution: y,
        status,
        iterations_used: iterations,
        resonances_hit,
    })
}

/// One stage of an exponential-form pipeline.
#[derive(Debug, Clone)]
pub enum ExpFactor {
    Op(LinDiffOp),
    /// The resolvent 1/(D + shift), acting diagonally on monomials.
    Resolvent(Rational),
}

impl ExpFactor {
    /// Euler degree when homogeneous; None for a mixed-degree operator.
    fn degree(&self) -> Option<i64> {
        match self {
            ExpFactor::Op(op) => match (op.min_degree(), op.max_degree()) {
                (Some(lo), Some(hi)) if lo == hi => Some(lo),
                _ => None,
            },
            ExpFactor::Resolvent(_) => Some(0),
        }
    }
}

/// exp(scale * T) applied to an anchor, where T is the ordered composition of
/// `factors` (first entry acts first).
#[derive(Debug, Clone)]
pub struct ExpForm {
    pub factors: Vec<ExpFactor>,
    pub scale: CoeffField,
    pub anchor: GeneralizedSeries,
}

impl ExpForm {
    pub fn new(factors: Vec<ExpFactor>, scale: CoeffField, anchor: GeneralizedSeries) -> Self {
        ExpForm { factors, scale, anchor }
    }

    fn apply_generator(&self, s: &GeneralizedSeries) -> Result<GeneralizedSeries> {
        let mut cur = s.clone();
        for factor in &self.factors {
            match factor {
                ExpFactor::Op(op) => cur = op.apply(&cur),
                ExpFactor::Resolvent(shift) => {
                    let mut out =
                        GeneralizedSeries::from_terms(cur.base().clone(), [], cur.truncation());
                    for (k, c) in cur.terms() {
                        let denom = &(cur.base() + &Rational::from_int(k)) + shift;
                        if denom.is_zero() {
                            return Err(Error::ResolventPole {
                                exponent: cur.base() + &Rational::from_int(k),
                            });
                        }
                        out.add_term(k, c.div_rational(&denom)?);
                    }
                    cur = out;
                }
            }
        }
        Ok(cur.scale(&self.scale))
    }

    fn total_degree(&self) -> Option<i64> {
        self.factors.iter().map(ExpFactor::degree).sum()
    }
}

/// Evaluates sum_m T^m/m! applied to the anchor. Exact when the pipeline
/// strictly lowers degree onto a polynomial anchor; otherwise truncated at
/// `order_cap` offsets from the anchor in the direction of travel.
pub fn exp_apply(form: &ExpForm, order_cap: i64) -> Result<GeneralizedSeries> {
    assert!(order_cap >= 1, "order_cap must be at least 1");
    let window = match form.total_degree() {
        Some(g) if g >= 1 => Some(Truncation::Above(order_cap)),
        Some(g) if g <= -1 => Some(Truncation::Below(-order_cap)),
        _ => None,
    };
    let mut total = form.anchor.clone();
    let mut term = form.anchor.clone();
    let mut truncated = false;
    let mut m: i64 = 1;
    let iteration_cap = (order_cap as usize).max(64) * 2 + form.anchor.num_terms() + 4;
    loop {
        let mut next = form
            .apply_generator(&term)?
            .scale(&CoeffField::from_rational(Rational::new(1, m)));
        if next.is_empty() {
            break;
        }
        if let Some(window) = window {
            next.retain_window(window);
            if next.is_empty() {
                truncated = true;
                break;
            }
        }
        total = series_combine(&total, &next, &CoeffField::one())?;
        term = next;
        m += 1;
        if m as usize > iteration_cap {
            return Err(Error::MixedDegreeRemainder);
        }
    }
    if truncated {
        total.set_truncation(window.unwrap());
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ParamPoly;
    use crate::operator::MonoOp;

    fn rat(n: i64, d: i64) -> CoeffField {
        CoeffField::from_rational(Rational::new(n, d))
    }

    fn hermite_op(n: i64) -> LinDiffOp {
        LinDiffOp::from_terms([
            MonoOp::new(CoeffField::one(), 1, 1),
            MonoOp::new(rat(-n, 1), 0, 0),
            MonoOp::new(rat(-1, 2), 0, 2),
        ])
    }

    /// x^2-premultiplied oscillator with symbolic energy:
    /// D(D-1) + 2E x^2 - x^4.
    fn oscillator_op() -> LinDiffOp {
        LinDiffOp::from_terms([
            MonoOp::new(CoeffField::one(), 2, 2),
            MonoOp::new(
                CoeffField::parameter("E").mul_rational(&Rational::from_int(2)),
                2,
                0,
            ),
            MonoOp::new(rat(-1, 1), 4, 0),
        ])
    }

    fn epoly(coeffs: &[(i64, i64)]) -> CoeffField {
        CoeffField::from_poly(ParamPoly::from_coeffs(
            "E",
            coeffs.iter().map(|&(n, d)| Rational::new(n, d)).collect(),
        ))
    }

    #[test]
    fn invert_f_divides_by_indicial_values() {
        let f = EulerPoly::from_coeffs(vec![Rational::from_int(-4), Rational::one()]);
        let s = GeneralizedSeries::from_terms(Rational::zero(), [(2, CoeffField::one())], Truncation::Exact);
        let out = invert_f(&f, &s).unwrap();
        assert_eq!(out.coeff(2), rat(-1, 2));

        let s4 = GeneralizedSeries::from_terms(Rational::zero(), [(4, CoeffField::one())], Truncation::Exact);
        assert_eq!(invert_f(&f, &s4), Err(Error::Resonance { offset: 4 }));

        let f = EulerPoly::from_roots(&[Rational::zero(), Rational::one()]);
        let s = GeneralizedSeries::from_terms(Rational::zero(), [(2, rat(6, 1))], Truncation::Exact);
        assert_eq!(invert_f(&f, &s).unwrap().coeff(2), rat(3, 1));
    }

    #[test]
    fn master_solve_oscillator_symbolic_coefficients() {
        let report = master_solve(&oscillator_op(), &Rational::zero(), 10).unwrap();
        assert_eq!(report.status, SolveStatus::Truncated(10));
        let s = &report.solution;
        assert_eq!(s.coeff(0), CoeffField::one());
        assert_eq!(s.coeff(2), epoly(&[(0, 1), (-1, 1)]));
        assert_eq!(s.coeff(4), epoly(&[(1, 12), (0, 1), (1, 6)]));
        assert_eq!(s.coeff(6), epoly(&[(0, 1), (-7, 180), (0, 1), (-1, 90)]));
        // Odd offsets stay empty; the benign second root at offset 1 is recorded.
        assert!(s.coeff(1).is_zero() && s.coeff(3).is_zero());
        assert_eq!(report.resonances_hit, vec![1]);
    }

    #[test]
    fn master_solve_hermite_terminates() {
        let report = master_solve(&hermite_op(3), &Rational::from_int(3), 64).unwrap();
        assert!(report.terminated());
        let expect = GeneralizedSeries::from_terms(
            Rational::from_int(3),
            [(0, CoeffField::one()), (-2, rat(-3, 2))],
            Truncation::Exact,
        );
        assert_eq!(report.solution, expect);
        assert!(residual(&hermite_op(3), &report.solution).is_empty());
    }

    #[test]
    fn master_solve_rejects_bad_anchor() {
        assert_eq!(
            master_solve(&hermite_op(3), &Rational::from_int(2), 64),
            Err(Error::IndicialMismatch { lambda: Rational::from_int(2) })
        );
    }

    #[test]
    fn truncated_oscillator_residual_vanishes_on_window() {
        let report = master_solve(&oscillator_op(), &Rational::zero(), 20).unwrap();
        let at_half = report.solution.eval_param(&Rational::new(1, 2)).unwrap();
        let op_at_half = LinDiffOp::from_terms([
            MonoOp::new(CoeffField::one(), 2, 2),
            MonoOp::new(CoeffField::one(), 2, 0),
            MonoOp::new(rat(-1, 1), 4, 0),
        ]);
        // The operator's minimum term degree is 0 (the Euler part), so the
        // trustworthy window of the residual is unchanged.
        let res = residual(&op_at_half, &at_half);
        assert_eq!(res.truncation(), Truncation::Above(20));
        assert!(res.is_empty());
    }

    #[test]
    fn residual_detects_a_wrong_polynomial() {
        // (D - 2 - d^2/2) on x^2 - 1 leaves the constant 1.
        let wrong = GeneralizedSeries::polynomial(&[Rational::from_int(-1), Rational::zero(), Rational::one()]);
        let res = residual(&hermite_op(2), &wrong);
        assert_eq!(res.coeff_at_exponent(&Rational::zero()), CoeffField::one());
        assert_eq!(res.num_terms(), 1);
    }

    #[test]
    fn gauge_reduced_oscillator_terminates_iff_integer_alpha() {
        for alpha in 0..=8 {
            let op = hermite_op(alpha);
            let report = master_solve(&op, &Rational::from_int(alpha), 40).unwrap();
            assert!(report.terminated(), "alpha = {alpha} should terminate");
        }
        for alpha in [Rational::new(1, 2), Rational::new(5, 2), Rational::new(7, 3)] {
            let op = LinDiffOp::from_terms([
                MonoOp::new(CoeffField::one(), 1, 1),
                MonoOp::new(CoeffField::from_rational(-&alpha), 0, 0),
                MonoOp::new(rat(-1, 2), 0, 2),
            ]);
            let report = master_solve(&op, &alpha, 40).unwrap();
            assert_eq!(report.status, SolveStatus::Truncated(40));
        }
    }

    #[test]
    fn exp_apply_hermite_form() {
        // exp(-d^2/4) x^2 = x^2 - 1/2
        let form = ExpForm::new(
            vec![ExpFactor::Op(LinDiffOp::d_pow(2))],
            rat(-1, 4),
            GeneralizedSeries::monomial(Rational::from_int(2)),
        );
        let out = exp_apply(&form, 64).unwrap();
        let expect = GeneralizedSeries::polynomial(&[Rational::new(-1, 2), Rational::zero(), Rational::one()]);
        assert_eq!(out, expect);
    }

    #[test]
    fn exp_apply_annihilates_constants() {
        let form = ExpForm::new(
            vec![ExpFactor::Op(LinDiffOp::d_pow(2))],
            rat(-1, 4),
            GeneralizedSeries::monomial(Rational::zero()),
        );
        let out = exp_apply(&form, 64).unwrap();
        assert_eq!(out, GeneralizedSeries::monomial(Rational::zero()));
    }

    #[test]
    fn exp_apply_legendre_resolvent_form() {
        // exp(-(1/(2(D+n+1))) d^2) x^2 for n = 2 -> x^2 - 1/3
        let form = ExpForm::new(
            vec![
                ExpFactor::Op(LinDiffOp::d_pow(2)),
                ExpFactor::Resolvent(Rational::from_int(3)),
            ],
            rat(-1, 2),
            GeneralizedSeries::monomial(Rational::from_int(2)),
        );
        let out = exp_apply(&form, 64).unwrap();
        let expect = GeneralizedSeries::polynomial(&[Rational::new(-1, 3), Rational::zero(), Rational::one()]);
        assert_eq!(out, expect);
    }

    #[test]
    fn exp_apply_reports_resolvent_poles() {
        // 1/(D - 2) meets d^2 x^4 -> x^2 exactly at the pole.
        let form = ExpForm::new(
            vec![
                ExpFactor::Op(LinDiffOp::d_pow(2)),
                ExpFactor::Resolvent(Rational::from_int(-2)),
            ],
            rat(-1, 2),
            GeneralizedSeries::monomial(Rational::from_int(4)),
        );
        assert_eq!(
            exp_apply(&form, 64),
            Err(Error::ResolventPole { exponent: Rational::from_int(2) })
        );
    }

    #[test]
    fn bch_conjugation_reduces_to_euler_part() {
        // exp(d^2/4) [D - n - d^2/2] exp(-d^2/4) x^k = (D - n) x^k
        let n = 3;
        for k in 0..=12 {
            let anchor = GeneralizedSeries::monomial(Rational::from_int(k));
            let inner = exp_apply(
                &ExpForm::new(vec![ExpFactor::Op(LinDiffOp::d_pow(2))], rat(-1, 4), anchor.clone()),
                64,
            )
            .unwrap();
            let mid = hermite_op(n).apply(&inner);
            let outer = exp_apply(
                &ExpForm::new(vec![ExpFactor::Op(LinDiffOp::d_pow(2))], rat(1, 4), mid),
                64,
            )
            .unwrap();
            let direct = LinDiffOp::euler()
                .sub(&LinDiffOp::constant(rat(n, 1)))
                .apply(&anchor);
            assert!(outer.eq_terms(&direct), "BCH identity failed at k = {k}");
        }
    }

    #[test]
    fn hermite_exponential_form_matches_master_solve() {
        for n in 0..=15i64 {
            let form = ExpForm::new(
                vec![ExpFactor::Op(LinDiffOp::d_pow(2))],
                rat(-1, 4),
                GeneralizedSeries::monomial(Rational::from_int(n)),
            );
            let closed = exp_apply(&form, 64).unwrap();
            let report = master_solve(&hermite_op(n), &Rational::from_int(n), 64).unwrap();
            assert!(report.terminated());
            assert!(closed.eq_terms(&report.solution), "mismatch at n = {n}");
        }
    }

    #[test]
    fn descending_exp_form_truncates() {
        // Kummer anchor x^(-1/2) with gamma = 1/3: exp[-(x d^2 + gamma d)]
        // descends forever (the generator never kills x^mu for mu < 0).
        let gen = LinDiffOp::from_terms([
            MonoOp::new(CoeffField::one(), 1, 2),
            MonoOp::new(rat(1, 3), 0, 1),
        ]);
        let form = ExpForm::new(
            vec![ExpFactor::Op(gen)],
            rat(-1, 1),
            GeneralizedSeries::monomial(Rational::new(-1, 2)),
        );
        let out = exp_apply(&form, 12).unwrap();
        assert_eq!(out.truncation(), Truncation::Below(-12));
        assert!(out.num_terms() > 5);
    }
}
