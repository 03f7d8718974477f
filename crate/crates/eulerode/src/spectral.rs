//! Eigenvalue applications: harmonic-oscillator quantization, the
//! quasi-exactly-solvable sextic oscillator, and the anharmonic
//! moment-matching approximation.
//!
//! Everything upstream of the anharmonic cubic is exact; floats appear only
//! in the cubic root and the derived trial-function parameters.

use crate::algebra::{eval_param, CoeffField, GeneralizedSeries, ParamPoly, Rational, Truncation};
use crate::error::{Error, Result};
use crate::operator::{LinDiffOp, MonoOp};
use crate::solver::{master_solve, residual, SolveReport};

const ENERGY: &str = "E";

fn energy() -> CoeffField {
    CoeffField::parameter(ENERGY)
}

fn rat(r: Rational) -> CoeffField {
    CoeffField::from_rational(r)
}

/// Substitutes the free parameter in every operator coefficient.
fn bind_operator(op: &LinDiffOp, value: &Rational) -> Result<LinDiffOp> {
    let mut terms = Vec::new();
    for t in op.terms() {
        terms.push(MonoOp::new(
            rat(eval_param(&t.coeff, value)?),
            t.xpow,
            t.dorder,
        ));
    }
    Ok(LinDiffOp::from_terms(terms))
}

/// The x^2-premultiplied oscillator equation with symbolic energy:
/// D(D-1) + 2E x^2 - x^4.
pub fn oscillator_operator() -> LinDiffOp {
    LinDiffOp::from_terms([
        MonoOp::new(CoeffField::one(), 2, 2),
        MonoOp::new(energy().mul_rational(&Rational::from_int(2)), 2, 0),
        MonoOp::new(rat(Rational::from_int(-1)), 4, 0),
    ])
}

/// Symbolic-energy ground (sector = 0) or first-excited (sector = 1) series
/// of the oscillator, exact through `max_order` offsets.
pub fn oscillator_series(sector: u32, max_order: i64) -> Result<SolveReport> {
    assert!(sector <= 1, "sector selects the indicial root 0 or 1");
    assert!(max_order >= 2);
    master_solve(
        &oscillator_operator(),
        &Rational::from_int(sector as i64),
        max_order,
    )
}

/// E_n = n + 1/2, certified by termination of the gauge-reduced operator
/// D - n - (1/2) d^2 from the anchor x^n.
pub fn oscillator_quantize(n: u32) -> Result<Rational> {
    let op = LinDiffOp::from_terms([
        MonoOp::new(CoeffField::one(), 1, 1),
        MonoOp::new(rat(Rational::from_int(-(n as i64))), 0, 0),
        MonoOp::new(rat(Rational::new(-1, 2)), 0, 2),
    ]);
    let report = master_solve(&op, &Rational::from_int(n as i64), 4 * n as i64 + 8)?;
    if !report.terminated() {
        return Err(Error::ResidualNonzero);
    }
    Ok(&Rational::from_int(n as i64) + &Rational::new(1, 2))
}

/// Quasi-exactly-solvable sextic oscillator results for one (n, g) pair.
#[derive(Debug, Clone)]
pub struct QesResult {
    pub n: u32,
    /// g = sqrt(gamma); the coupling condition fixes alpha = -(2n+3) g.
    pub g: Rational,
    /// Gauge factor exp(-g x^4 / 4), i.e. exp(-b x^4) with b = g/4.
    pub gauge_b: Rational,
    /// Coefficient of x^(n+2) in the symbolic series; its zeros are the
    /// solvable part of the spectrum.
    pub termination_poly: ParamPoly,
    /// Degree of the termination polynomial: the number of roots counted
    /// over the algebraic closure.
    pub root_count: usize,
    /// The rational roots found (all of them when `all_roots_rational`).
    pub spectrum: Vec<Rational>,
    pub all_roots_rational: bool,
    /// (E, gauge-reduced eigenfunction) pairs, one per rational root; each
    /// polynomial has degree exactly n and zero residual.
    pub eigenfunctions: Vec<(Rational, GeneralizedSeries)>,
}

/// The gauge-reduced, x^2-premultiplied sextic operator with symbolic E:
/// D(D-1) + E x^2 + 2ng x^4 - 2g x^5 d.
pub fn sextic_operator(n: u32, g: &Rational) -> LinDiffOp {
    LinDiffOp::from_terms([
        MonoOp::new(CoeffField::one(), 2, 2),
        MonoOp::new(energy(), 2, 0),
        MonoOp::new(
            rat(&Rational::from_int(2 * n as i64) * g),
            4,
            0,
        ),
        MonoOp::new(rat(&Rational::from_int(-2) * g), 5, 1),
    ])
}

/// Runs the symbolic-E solve for the sextic oscillator under the coupling
/// condition, extracts the termination polynomial c_{n+2}(E), finds its
/// rational roots, and certifies every assembled eigenfunction by an exact
/// residual check.
pub fn sextic_qes(n: u32, g: &Rational, max_order: i64) -> Result<QesResult> {
    if !(g > &Rational::zero()) {
        return Err(Error::Invalid("coupling g must be positive".into()));
    }
    let lambda = (n % 2) as i64;
    let needed = n as i64 + 4 - lambda;
    let max_order = max_order.max(needed);
    let op = sextic_operator(n, g);
    let report = master_solve(&op, &Rational::from_int(lambda), max_order)?;
    let series = &report.solution;

    // Coefficient of x^(n+2) relative to the sector anchor.
    let termination_offset = n as i64 + 2 - lambda;
    let termination_poly = match series.coeff(termination_offset) {
        CoeffField::Poly(p) => p,
        CoeffField::Rat(r) => ParamPoly::constant(ENERGY, r),
        CoeffField::Ratio(_) => return Err(Error::ResidualNonzero),
    };
    if termination_poly.is_zero() {
        return Err(Error::ResidualNonzero);
    }
    let roots = termination_poly.rational_roots();
    let all_roots_rational = roots.roots.len() == roots.degree;

    let mut eigenfunctions = Vec::new();
    for e in &roots.roots {
        let bound = series.eval_param(e)?;
        // Every coefficient past the termination offset must vanish at the
        // root; the recurrence guarantees it, the window confirms it.
        for (k, c) in bound.terms() {
            if k >= termination_offset && !c.is_zero() {
                return Err(Error::ResidualNonzero);
            }
        }
        let mut psi = GeneralizedSeries::from_terms(
            bound.base().clone(),
            bound.terms().map(|(k, c)| (k, c.clone())),
            Truncation::Exact,
        );
        psi.retain_window(Truncation::Above(termination_offset));
        if psi.max_exponent() != Some(Rational::from_int(n as i64)) {
            return Err(Error::ResidualNonzero);
        }
        // Exact certificate: the assembled polynomial solves the bound equation.
        if !residual(&bind_operator(&op, e)?, &psi).is_empty() {
            return Err(Error::ResidualNonzero);
        }
        eigenfunctions.push((e.clone(), psi));
    }

    Ok(QesResult {
        n,
        g: g.clone(),
        gauge_b: g / &Rational::from_int(4),
        root_count: roots.degree,
        spectrum: roots.roots,
        all_roots_rational,
        termination_poly,
        eigenfunctions,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootMethod {
    ClosedForm,
    Bisection,
}

/// Anharmonic ground-state approximation by matching the exact series
/// against exp(-mu x^2 - nu x^4).
#[derive(Debug, Clone)]
pub struct AnharmonicResult {
    pub alpha: Rational,
    pub beta: Rational,
    /// Symbolic-E series of the x^2-premultiplied equation.
    pub series: GeneralizedSeries,
    /// Monic cubic in E derived from the three-term matching; equals
    /// E^3 - alpha E - (3/2) beta.
    pub cubic: ParamPoly,
    /// All real roots of the cubic, ascending.
    pub real_roots: Vec<f64>,
    /// The selected ground-state root (the unique real root, or the unique
    /// positive one when beta > 0). None when no selection rule applies.
    pub e0: Option<f64>,
    pub mu: Option<f64>,
    pub nu: Option<f64>,
    pub method: Option<RootMethod>,
    /// True when the closed-form radical is complex and bisection was used.
    pub complex_intermediate: bool,
    /// Closed-form root when the radical is real.
    pub closed_form_root: Option<f64>,
    /// Bracketed-bisection root on the positive axis (beta > 0).
    pub bisection_root: Option<f64>,
}

/// The x^2-premultiplied anharmonic equation with symbolic energy:
/// D(D-1) + E x^2 - alpha x^4 - beta x^6.
pub fn anharmonic_operator(alpha: &Rational, beta: &Rational) -> LinDiffOp {
    LinDiffOp::from_terms([
        MonoOp::new(CoeffField::one(), 2, 2),
        MonoOp::new(energy(), 2, 0),
        MonoOp::new(rat(-alpha), 4, 0),
        MonoOp::new(rat(-beta), 6, 0),
    ])
}

pub fn anharmonic_approx(alpha: &Rational, beta: &Rational, max_order: i64) -> Result<AnharmonicResult> {
    if beta < &Rational::zero() {
        return Err(Error::Invalid("beta must be nonnegative".into()));
    }
    let max_order = max_order.max(8);
    let report = master_solve(&anharmonic_operator(alpha, beta), &Rational::zero(), max_order)?;
    let series = report.solution;

    let coeff_poly = |k: i64| -> ParamPoly {
        match series.coeff(k) {
            CoeffField::Poly(p) => p,
            CoeffField::Rat(r) => ParamPoly::constant(ENERGY, r),
            CoeffField::Ratio(_) => unreachable!("series coefficients are polynomial in E"),
        }
    };
    let c2 = coeff_poly(2);
    let c4 = coeff_poly(4);
    let c6 = coeff_poly(6);

    // Trial function exp(-mu x^2 - nu x^4) expands to
    // 1 - mu x^2 + (mu^2/2 - nu) x^4 + (mu nu - mu^3/6) x^6 + ...
    let mu_poly = c2.neg();
    let nu_poly = mu_poly
        .mul(&mu_poly)
        .scale(&Rational::new(1, 2))
        .sub(&c4);
    let x6_match = mu_poly
        .mul(&nu_poly)
        .sub(&mu_poly.mul(&mu_poly).mul(&mu_poly).scale(&Rational::new(1, 6)));
    let cubic = x6_match.sub(&c6);
    let cubic = cubic.into_monic();

    // The monic cubic is E^3 - alpha E - (3/2) beta; solve it numerically.
    let a = alpha.to_f64();
    let b = Rational::new(3, 2).to_f64() * beta.to_f64();
    let f = |e: f64| e * e * e - a * e - b;

    let real_roots = real_roots_of_depressed_cubic(a, b);
    let radicand = 1640.25 * beta.to_f64().powi(2) - 108.0 * a.powi(3);
    let complex_intermediate = radicand < 0.0;
    let closed_form_root = if complex_intermediate {
        None
    } else {
        let big_a = (40.5 * beta.to_f64() + radicand.sqrt()).cbrt();
        if big_a == 0.0 {
            Some(0.0)
        } else {
            let two_cbrt = 2.0f64.cbrt();
            Some(two_cbrt * a / big_a + big_a / (3.0 * two_cbrt))
        }
    };
    let bisection_root = if beta > &Rational::zero() {
        // f(0) = -(3/2) beta < 0 and f grows; exactly one positive root.
        let hi = 1.0 + a.abs() + b.abs();
        Some(bisect(&f, 0.0, hi))
    } else {
        None
    };

    let e0 = if real_roots.len() == 1 {
        Some(real_roots[0])
    } else if beta > &Rational::zero() {
        bisection_root
    } else {
        None
    };
    let method = match (e0, complex_intermediate) {
        (None, _) => None,
        (Some(_), false) => Some(RootMethod::ClosedForm),
        (Some(_), true) => Some(RootMethod::Bisection),
    };
    let e0 = match method {
        Some(RootMethod::ClosedForm) => closed_form_root,
        Some(RootMethod::Bisection) => e0,
        None => None,
    };

    Ok(AnharmonicResult {
        alpha: alpha.clone(),
        beta: beta.clone(),
        series,
        cubic,
        mu: e0.map(|e| e / 2.0),
        nu: e0.map(|e| (e * e - a) / 12.0),
        e0,
        method,
        complex_intermediate,
        closed_form_root,
        bisection_root,
        real_roots,
    })
}

fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let (flo, fhi) = (f(lo), f(hi));
    debug_assert!(flo * fhi <= 0.0);
    let increasing = flo <= 0.0 && fhi >= 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Real roots of E^3 - a E - b = 0, ascending, by bracketed bisection
/// between the critical points.
fn real_roots_of_depressed_cubic(a: f64, b: f64) -> Vec<f64> {
    let f = |e: f64| e * e * e - a * e - b;
    let bound = 1.0 + a.abs() + b.abs();
    let mut brackets = Vec::new();
    if a > 0.0 {
        let c = (a / 3.0).sqrt();
        brackets.push((-bound, -c));
        brackets.push((-c, c));
        brackets.push((c, bound));
    } else {
        brackets.push((-bound, bound));
    }
    let mut roots = Vec::new();
    for (lo, hi) in brackets {
        let (flo, fhi) = (f(lo), f(hi));
        if flo == 0.0 {
            roots.push(lo);
        }
        if flo * fhi < 0.0 {
            roots.push(bisect(&f, lo, hi));
        }
        if fhi == 0.0 && hi == bound {
            roots.push(hi);
        }
    }
    roots.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Taylor series of exp(-x^2/2) through x^(2K): sum (-1/2)^m x^(2m) / m!.
    fn gaussian_taylor(max_order: i64) -> GeneralizedSeries {
        let mut terms = Vec::new();
        let mut c = Rational::one();
        let mut m = 0i64;
        while 2 * m < max_order {
            terms.push((2 * m, rat(c.clone())));
            c = &(&c * &Rational::new(-1, 2)) / &Rational::from_int(m + 1);
            m += 1;
        }
        GeneralizedSeries::from_terms(Rational::zero(), terms, Truncation::Above(max_order))
    }

    #[test]
    fn oscillator_series_ground_sector() {
        let report = oscillator_series(0, 20).unwrap();
        assert_eq!(
            report.solution.coeff(2),
            CoeffField::from_poly(ParamPoly::from_coeffs(
                "E",
                vec![Rational::zero(), Rational::from_int(-1)]
            ))
        );
        let at_half = report.solution.eval_param(&Rational::new(1, 2)).unwrap();
        assert!(at_half.eq_terms(&gaussian_taylor(20)));
    }

    #[test]
    fn oscillator_series_excited_sector() {
        let report = oscillator_series(1, 12).unwrap();
        let at_three_halves = report.solution.eval_param(&Rational::new(3, 2)).unwrap();
        // x exp(-x^2/2) = x (1 - x^2/2 + x^4/8 - ...); the sector-1 window
        // covers offsets < 12 from the anchor x^1, i.e. exponents through 11.
        let expect = gaussian_taylor(12).mul_xpow(1);
        assert!(at_three_halves.eq_terms(&expect));
    }

    #[test]
    fn oscillator_printed_coefficient_discrepancy() {
        // The exact x^6 coefficient is -(7E + 2E^3)/180; the once-published
        // (3 + E + 2E^3)/180 form differs symbolically, yet both equal -1/48
        // at the physical E = 1/2.
        let report = oscillator_series(0, 10).unwrap();
        let exact = report.solution.coeff(6);
        let published = CoeffField::from_poly(ParamPoly::from_coeffs(
            "E",
            vec![
                Rational::new(-3, 180),
                Rational::new(-1, 180),
                Rational::zero(),
                Rational::new(-2, 180),
            ],
        ));
        assert_ne!(exact, published);
        let half = Rational::new(1, 2);
        assert_eq!(eval_param(&exact, &half).unwrap(), Rational::new(-1, 48));
        assert_eq!(eval_param(&published, &half).unwrap(), Rational::new(-1, 48));
    }

    #[test]
    fn quantization_certificates() {
        assert_eq!(oscillator_quantize(0).unwrap(), Rational::new(1, 2));
        assert_eq!(oscillator_quantize(1).unwrap(), Rational::new(3, 2));
        assert_eq!(oscillator_quantize(4).unwrap(), Rational::new(9, 2));
    }

    #[test]
    fn sextic_n4_unit_coupling() {
        let q = sextic_qes(4, &Rational::one(), 24).unwrap();
        assert_eq!(
            q.spectrum,
            vec![Rational::from_int(-8), Rational::zero(), Rational::from_int(8)]
        );
        assert!(q.all_roots_rational);
        assert_eq!(q.root_count, 3);
        assert_eq!(q.gauge_b, Rational::new(1, 4));

        let expect = [
            GeneralizedSeries::polynomial(&[
                Rational::one(),
                Rational::zero(),
                Rational::from_int(4),
                Rational::zero(),
                Rational::from_int(2),
            ]),
            GeneralizedSeries::polynomial(&[
                Rational::one(),
                Rational::zero(),
                Rational::zero(),
                Rational::zero(),
                Rational::new(-2, 3),
            ]),
            GeneralizedSeries::polynomial(&[
                Rational::one(),
                Rational::zero(),
                Rational::from_int(-4),
                Rational::zero(),
                Rational::from_int(2),
            ]),
        ];
        for ((_, psi), want) in q.eigenfunctions.iter().zip(expect.iter()) {
            assert_eq!(psi, want);
        }
    }

    #[test]
    fn sextic_ground_only() {
        let q = sextic_qes(0, &Rational::from_int(3), 16).unwrap();
        assert_eq!(q.spectrum, vec![Rational::zero()]);
        assert_eq!(q.root_count, 1);
        assert_eq!(
            q.eigenfunctions[0].1,
            GeneralizedSeries::monomial(Rational::zero())
        );
        // Gauge relation: 16 b^2 = gamma = g^2.
        let sixteen_b2 = &Rational::from_int(16) * &(&q.gauge_b * &q.gauge_b);
        assert_eq!(sixteen_b2, &q.g * &q.g);
    }

    #[test]
    fn sextic_irrational_spectrum_reported_by_degree() {
        // n = 2, g = 1: c4 = (E^2 - 8)/24 has no rational roots.
        let q = sextic_qes(2, &Rational::one(), 16).unwrap();
        assert!(q.spectrum.is_empty());
        assert!(!q.all_roots_rational);
        assert_eq!(q.root_count, 2);

        // n = 2, g = 2: E^2 = 16 has rational roots -4, 4.
        let q = sextic_qes(2, &Rational::from_int(2), 16).unwrap();
        assert_eq!(q.spectrum, vec![Rational::from_int(-4), Rational::from_int(4)]);
        assert_eq!(q.eigenfunctions.len(), 2);
    }

    #[test]
    fn sextic_termination_polynomial_parity() {
        for n in [0u32, 2, 4, 6] {
            let q = sextic_qes(n, &Rational::one(), 24).unwrap();
            // Even sector: the polynomial is odd or even in E, so the
            // spectrum is symmetric under E -> -E.
            let coeffs = q.termination_poly.coeffs();
            let all_even = coeffs.iter().enumerate().all(|(i, c)| i % 2 == 0 || c.is_zero());
            let all_odd = coeffs.iter().enumerate().all(|(i, c)| i % 2 == 1 || c.is_zero());
            assert!(all_even || all_odd, "n = {n} polynomial mixes parity");
        }
    }

    #[test]
    fn anharmonic_exact_root() {
        let r = anharmonic_approx(&Rational::zero(), &Rational::new(2, 3), 8).unwrap();
        assert_eq!(
            r.cubic,
            ParamPoly::from_coeffs(
                "E",
                vec![Rational::from_int(-1), Rational::zero(), Rational::zero(), Rational::one()]
            )
        );
        let e0 = r.e0.unwrap();
        assert!((e0 - 1.0).abs() < 1e-12);
        assert_eq!(r.method, Some(RootMethod::ClosedForm));
    }

    #[test]
    fn anharmonic_both_routes_agree() {
        let r = anharmonic_approx(&Rational::one(), &Rational::one(), 8).unwrap();
        let e0 = r.e0.unwrap();
        assert!((e0.powi(3) - e0 - 1.5).abs() < 1e-10);
        assert!((e0 - 1.4313).abs() < 1e-3);
        let (c, b) = (r.closed_form_root.unwrap(), r.bisection_root.unwrap());
        assert!((c - b).abs() < 1e-10);
        assert!((r.mu.unwrap() - e0 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn anharmonic_complex_intermediate_falls_back() {
        let r = anharmonic_approx(&Rational::one(), &Rational::new(1, 10), 8).unwrap();
        assert!(r.complex_intermediate);
        assert_eq!(r.method, Some(RootMethod::Bisection));
        assert_eq!(r.real_roots.len(), 3);
        let e0 = r.e0.unwrap();
        assert!(e0 > 0.0);
        assert!((e0.powi(3) - e0 - 0.15).abs() < 1e-10);
    }

    #[test]
    fn anharmonic_beta_zero_reports_all_roots() {
        let r = anharmonic_approx(&Rational::one(), &Rational::zero(), 8).unwrap();
        assert!(r.complex_intermediate);
        assert_eq!(r.e0, None);
        assert_eq!(r.real_roots.len(), 3);
        assert!((r.real_roots[0] + 1.0).abs() < 1e-10);
        assert!(r.real_roots[1].abs() < 1e-10);
        assert!((r.real_roots[2] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn anharmonic_series_moments() {
        // x^4 coefficient is (2 alpha + E^2)/24 at alpha = 1.
        let r = anharmonic_approx(&Rational::one(), &Rational::new(1, 10), 8).unwrap();
        assert_eq!(
            r.series.coeff(4),
            CoeffField::from_poly(ParamPoly::from_coeffs(
                "E",
                vec![Rational::new(2, 24), Rational::zero(), Rational::new(1, 24)]
            ))
        );
        assert_eq!(
            r.series.coeff(2),
            CoeffField::from_poly(ParamPoly::from_coeffs(
                "E",
                vec![Rational::zero(), Rational::new(-1, 2)]
            ))
        );
    }
}
