//! The classical equation families: operator construction, exponential
//! closed-form solutions, and independent recurrence/term-ratio oracles.
//!
//! Solutions are produced projectively (leading coefficient 1 from the
//! monomial anchor); `match_constant` recovers the conventional scalar, which
//! for Hermite is 2^n.

use std::collections::BTreeMap;

use crate::algebra::{CoeffField, GeneralizedSeries, Rational, Truncation};
use crate::error::{Error, Result};
use crate::operator::{LinDiffOp, MonoOp};
use crate::solver::{exp_apply, ExpFactor, ExpForm};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Hermite,
    Laguerre,
    Legendre,
    Gegenbauer,
    ChebyshevT,
    ChebyshevU,
    Bessel,
    Kummer,
    Gauss,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::Hermite,
        Family::Laguerre,
        Family::Legendre,
        Family::Gegenbauer,
        Family::ChebyshevT,
        Family::ChebyshevU,
        Family::Bessel,
        Family::Kummer,
        Family::Gauss,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Hermite => "hermite",
            Family::Laguerre => "laguerre",
            Family::Legendre => "legendre",
            Family::Gegenbauer => "gegenbauer",
            Family::ChebyshevT => "chebyshev-t",
            Family::ChebyshevU => "chebyshev-u",
            Family::Bessel => "bessel",
            Family::Kummer => "kummer",
            Family::Gauss => "gauss",
        }
    }

    pub fn from_name(s: &str) -> Result<Family> {
        match s.to_ascii_lowercase().as_str() {
            "hermite" => Ok(Family::Hermite),
            "laguerre" => Ok(Family::Laguerre),
            "legendre" => Ok(Family::Legendre),
            "gegenbauer" => Ok(Family::Gegenbauer),
            "chebyshev-t" | "chebyshevt" => Ok(Family::ChebyshevT),
            "chebyshev-u" | "chebyshevu" => Ok(Family::ChebyshevU),
            "bessel" => Ok(Family::Bessel),
            "kummer" | "confluent" => Ok(Family::Kummer),
            "gauss" | "hypergeometric" => Ok(Family::Gauss),
            other => Err(Error::Invalid(format!("unknown family `{other}`"))),
        }
    }

    /// True for the families whose solutions are degree-n polynomials.
    pub fn is_polynomial(&self) -> bool {
        !matches!(self, Family::Bessel | Family::Kummer | Family::Gauss)
    }
}

#[derive(Debug, Clone)]
pub struct FamilySpec {
    pub family: Family,
    /// Polynomial degree for the polynomial families; unused otherwise.
    pub degree: u32,
    pub params: BTreeMap<String, Rational>,
}

impl FamilySpec {
    pub fn new(family: Family, degree: u32) -> Self {
        FamilySpec { family, degree, params: BTreeMap::new() }
    }

    pub fn with_param(mut self, name: &str, value: Rational) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    fn param(&self, name: &str) -> Result<Rational> {
        self.params.get(name).cloned().ok_or_else(|| Error::MissingParameter {
            family: self.family.name().to_string(),
            name: name.to_string(),
        })
    }

    fn n(&self) -> Rational {
        Rational::from_int(self.degree as i64)
    }
}

fn term(c: Rational, a: u32, b: u32) -> MonoOp {
    MonoOp::new(CoeffField::from_rational(c), a, b)
}

fn one() -> Rational {
    Rational::one()
}

/// The operator of the family's equation, parameters substituted.
pub fn build_equation(spec: &FamilySpec) -> Result<LinDiffOp> {
    let n = spec.n();
    let op = match spec.family {
        // x d - n - (1/2) d^2
        Family::Hermite => LinDiffOp::from_terms([
            term(one(), 1, 1),
            term(-&n, 0, 0),
            term(Rational::new(-1, 2), 0, 2),
        ]),
        // x d - n - (alpha + 1) d - x d^2
        Family::Laguerre => {
            let alpha = spec.param("alpha")?;
            LinDiffOp::from_terms([
                term(one(), 1, 1),
                term(-&n, 0, 0),
                term(-&(&alpha + &one()), 0, 1),
                term(-&one(), 1, 2),
            ])
        }
        // x^2 d^2 + 2 x d - n(n+1) - d^2
        Family::Legendre => LinDiffOp::from_terms([
            term(one(), 2, 2),
            term(Rational::from_int(2), 1, 1),
            term(-&(&n * &(&n + &one())), 0, 0),
            term(-&one(), 0, 2),
        ]),
        // x^2 d^2 + (2 lambda + 1) x d - n(n + 2 lambda) - d^2
        Family::Gegenbauer => {
            let lambda = spec.param("lambda")?;
            let two_lambda = &lambda + &lambda;
            LinDiffOp::from_terms([
                term(one(), 2, 2),
                term(&two_lambda + &one(), 1, 1),
                term(-&(&n * &(&n + &two_lambda)), 0, 0),
                term(-&one(), 0, 2),
            ])
        }
        // x^2 d^2 + x d - n^2 - d^2
        Family::ChebyshevT => LinDiffOp::from_terms([
            term(one(), 2, 2),
            term(one(), 1, 1),
            term(-&(&n * &n), 0, 0),
            term(-&one(), 0, 2),
        ]),
        // x^2 d^2 + 3 x d - n(n+2) - d^2
        Family::ChebyshevU => LinDiffOp::from_terms([
            term(one(), 2, 2),
            term(Rational::from_int(3), 1, 1),
            term(-&(&n * &(&n + &Rational::from_int(2))), 0, 0),
            term(-&one(), 0, 2),
        ]),
        // x^2 d^2 + x d - nu^2 + x^2
        Family::Bessel => {
            let nu = spec.param("nu")?;
            LinDiffOp::from_terms([
                term(one(), 2, 2),
                term(one(), 1, 1),
                term(-&(&nu * &nu), 0, 0),
                term(one(), 2, 0),
            ])
        }
        // x d + alpha - x d^2 - gamma d
        Family::Kummer => {
            let alpha = spec.param("alpha")?;
            let gamma = spec.param("gamma")?;
            LinDiffOp::from_terms([
                term(one(), 1, 1),
                term(alpha, 0, 0),
                term(-&one(), 1, 2),
                term(-&gamma, 0, 1),
            ])
        }
        // x^2 d^2 + (alpha + beta + 1) x d + alpha beta - x d^2 - gamma d
        Family::Gauss => {
            let alpha = spec.param("alpha")?;
            let beta = spec.param("beta")?;
            let gamma = spec.param("gamma")?;
            LinDiffOp::from_terms([
                term(one(), 2, 2),
                term(&(&alpha + &beta) + &one(), 1, 1),
                term(&alpha * &beta, 0, 0),
                term(-&one(), 1, 2),
                term(-&gamma, 0, 1),
            ])
        }
    };
    Ok(op)
}

/// The anchor exponent of the family's closed-form solution (the monomial the
/// exponential map acts on).
pub fn anchor_exponent(spec: &FamilySpec) -> Result<Rational> {
    Ok(match spec.family {
        Family::Bessel => spec.param("nu")?,
        Family::Kummer => -&spec.param("alpha")?,
        Family::Gauss => -&spec.param("beta")?,
        _ => spec.n(),
    })
}

/// The exponential-form pipeline of the family's solution.
pub fn exp_form(spec: &FamilySpec) -> Result<ExpForm> {
    let anchor = GeneralizedSeries::monomial(anchor_exponent(spec)?);
    let half = CoeffField::from_rational(Rational::new(-1, 2));
    let minus = CoeffField::from_rational(-&one());
    let n = spec.n();
    let form = match spec.family {
        Family::Hermite => ExpForm::new(
            vec![ExpFactor::Op(LinDiffOp::d_pow(2))],
            CoeffField::from_rational(Rational::new(-1, 4)),
            anchor,
        ),
        Family::Laguerre => {
            let alpha = spec.param("alpha")?;
            let gen = LinDiffOp::from_terms([term(one(), 1, 2), term(&alpha + &one(), 0, 1)]);
            ExpForm::new(vec![ExpFactor::Op(gen)], minus, anchor)
        }
        Family::Legendre => ExpForm::new(
            vec![
                ExpFactor::Op(LinDiffOp::d_pow(2)),
                ExpFactor::Resolvent(&n + &one()),
            ],
            half,
            anchor,
        ),
        Family::Gegenbauer => {
            let lambda = spec.param("lambda")?;
            ExpForm::new(
                vec![
                    ExpFactor::Op(LinDiffOp::d_pow(2)),
                    ExpFactor::Resolvent(&n + &(&lambda + &lambda)),
                ],
                half,
                anchor,
            )
        }
        Family::ChebyshevT => ExpForm::new(
            vec![ExpFactor::Op(LinDiffOp::d_pow(2)), ExpFactor::Resolvent(n)],
            half,
            anchor,
        ),
        Family::ChebyshevU => ExpForm::new(
            vec![
                ExpFactor::Op(LinDiffOp::d_pow(2)),
                ExpFactor::Resolvent(&n + &Rational::from_int(2)),
            ],
            half,
            anchor,
        ),
        // The residual-certified pairing puts the resolvent shift on the same
        // sign as the anchor exponent: J_{+nu} uses 1/(D + nu) on x^{+nu}.
        Family::Bessel => {
            let nu = spec.param("nu")?;
            ExpForm::new(
                vec![ExpFactor::Op(LinDiffOp::x_pow(2)), ExpFactor::Resolvent(nu)],
                half,
                anchor,
            )
        }
        Family::Kummer => {
            let gamma = spec.param("gamma")?;
            let gen = LinDiffOp::from_terms([term(one(), 1, 2), term(gamma, 0, 1)]);
            ExpForm::new(vec![ExpFactor::Op(gen)], minus, anchor)
        }
        Family::Gauss => {
            let alpha = spec.param("alpha")?;
            let gamma = spec.param("gamma")?;
            let gen = LinDiffOp::from_terms([term(one(), 1, 2), term(gamma, 0, 1)]);
            ExpForm::new(
                vec![ExpFactor::Op(gen), ExpFactor::Resolvent(alpha)],
                minus,
                anchor,
            )
        }
    };
    Ok(form)
}

/// Evaluates the family's exponential closed form with C = 1.
pub fn closed_form(spec: &FamilySpec, order_cap: i64) -> Result<GeneralizedSeries> {
    exp_apply(&exp_form(spec)?, order_cap)
}

fn scale_rat(s: &GeneralizedSeries, r: Rational) -> GeneralizedSeries {
    s.scale(&CoeffField::from_rational(r))
}

fn add(a: &GeneralizedSeries, b: &GeneralizedSeries) -> GeneralizedSeries {
    crate::algebra::series_combine(a, b, &CoeffField::one()).unwrap()
}

/// Independent ground truth: three-term recurrences for the polynomial
/// families, classical ascending term ratios for Bessel, Kummer and Gauss.
pub fn oracle(spec: &FamilySpec, order_cap: i64) -> Result<GeneralizedSeries> {
    let n = spec.degree as usize;
    let two = Rational::from_int(2);
    let poly_by_recurrence = |p0: GeneralizedSeries,
                              p1: GeneralizedSeries,
                              step: &dyn Fn(usize, &GeneralizedSeries, &GeneralizedSeries) -> GeneralizedSeries|
     -> GeneralizedSeries {
        if n == 0 {
            return p0;
        }
        let mut prev = p0;
        let mut cur = p1;
        for k in 1..n {
            let next = step(k, &cur, &prev);
            prev = cur;
            cur = next;
        }
        cur
    };
    let one_series = GeneralizedSeries::monomial(Rational::zero());
    let x_series = GeneralizedSeries::monomial(Rational::one());

    let out = match spec.family {
        // H_{k+1} = 2x H_k - 2k H_{k-1}
        Family::Hermite => poly_by_recurrence(
            one_series.clone(),
            scale_rat(&x_series, two.clone()),
            &|k, cur, prev| {
                add(
                    &scale_rat(&cur.mul_xpow(1), Rational::from_int(2)),
                    &scale_rat(prev, Rational::from_int(-2 * k as i64)),
                )
            },
        ),
        // (k+1) L_{k+1} = (2k + alpha + 1 - x) L_k - (k + alpha) L_{k-1}
        Family::Laguerre => {
            let alpha = spec.param("alpha")?;
            let l1 = add(
                &scale_rat(&one_series, &alpha + &one()),
                &scale_rat(&x_series, -&one()),
            );
            poly_by_recurrence(one_series.clone(), l1, &|k, cur, prev| {
                let k_r = Rational::from_int(k as i64);
                let lin = add(
                    &scale_rat(cur, &(&two * &k_r) + &(&alpha + &one())),
                    &scale_rat(&cur.mul_xpow(1), -&one()),
                );
                let res = add(&lin, &scale_rat(prev, -&(&k_r + &alpha)));
                scale_rat(&res, (&k_r + &one()).recip().unwrap())
            })
        }
        // (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
        Family::Legendre => poly_by_recurrence(one_series.clone(), x_series.clone(), &|k, cur, prev| {
            let k_r = Rational::from_int(k as i64);
            let res = add(
                &scale_rat(&cur.mul_xpow(1), &(&two * &k_r) + &one()),
                &scale_rat(prev, -&k_r),
            );
            scale_rat(&res, (&k_r + &one()).recip().unwrap())
        }),
        // (k+1) C_{k+1} = 2(k + lambda) x C_k - (k + 2 lambda - 1) C_{k-1}
        Family::Gegenbauer => {
            let lambda = spec.param("lambda")?;
            let c1 = scale_rat(&x_series, &two * &lambda);
            poly_by_recurrence(one_series.clone(), c1, &|k, cur, prev| {
                let k_r = Rational::from_int(k as i64);
                let res = add(
                    &scale_rat(&cur.mul_xpow(1), &two * &(&k_r + &lambda)),
                    &scale_rat(prev, -&(&(&k_r + &(&lambda + &lambda)) - &one())),
                );
                scale_rat(&res, (&k_r + &one()).recip().unwrap())
            })
        }
        // T_{k+1} = 2x T_k - T_{k-1}
        Family::ChebyshevT => poly_by_recurrence(one_series.clone(), x_series.clone(), &|_, cur, prev| {
            add(&scale_rat(&cur.mul_xpow(1), two.clone()), &prev.neg())
        }),
        // U_{k+1} = 2x U_k - U_{k-1}
        Family::ChebyshevU => poly_by_recurrence(
            one_series.clone(),
            scale_rat(&x_series, two.clone()),
            &|_, cur, prev| add(&scale_rat(&cur.mul_xpow(1), two.clone()), &prev.neg()),
        ),
        // c_{m+1} = -c_m / (4 (m+1)(nu+m+1)), terms at x^(nu + 2m)
        Family::Bessel => {
            let nu = spec.param("nu")?;
            let mut terms = Vec::new();
            let mut c = one();
            let mut m = 0i64;
            while 2 * m < order_cap {
                terms.push((2 * m, CoeffField::from_rational(c.clone())));
                let m_r = Rational::from_int(m);
                let denom = &Rational::from_int(-4)
                    * &(&(&m_r + &one()) * &(&(&nu + &m_r) + &one()));
                c = &c / &denom;
                m += 1;
            }
            GeneralizedSeries::from_terms(nu, terms, Truncation::Above(order_cap))
        }
        // 1F1 term ratio (alpha + k) / ((k+1)(gamma + k))
        Family::Kummer => {
            let alpha = spec.param("alpha")?;
            let gamma = spec.param("gamma")?;
            ascending_by_ratio(order_cap, |k| {
                let k_r = Rational::from_int(k);
                (
                    &alpha + &k_r,
                    &(&k_r + &one()) * &(&gamma + &k_r),
                )
            })
        }
        // 2F1 term ratio (alpha + k)(beta + k) / ((k+1)(gamma + k))
        Family::Gauss => {
            let alpha = spec.param("alpha")?;
            let beta = spec.param("beta")?;
            let gamma = spec.param("gamma")?;
            ascending_by_ratio(order_cap, |k| {
                let k_r = Rational::from_int(k);
                (
                    &(&alpha + &k_r) * &(&beta + &k_r),
                    &(&k_r + &one()) * &(&gamma + &k_r),
                )
            })
        }
    };
    Ok(out)
}

fn ascending_by_ratio<F: Fn(i64) -> (Rational, Rational)>(
    order_cap: i64,
    ratio: F,
) -> GeneralizedSeries {
    let mut terms = Vec::new();
    let mut c = Rational::one();
    let mut k = 0i64;
    loop {
        if k >= order_cap || c.is_zero() {
            break;
        }
        terms.push((k, CoeffField::from_rational(c.clone())));
        let (num, den) = ratio(k);
        c = &(&c * &num) / &den;
        k += 1;
    }
    GeneralizedSeries::from_terms(Rational::zero(), terms, Truncation::Above(order_cap))
}

/// The unique scalar c with c * computed = reference. Reports the first
/// offset at which proportionality fails.
pub fn match_constant(
    computed: &GeneralizedSeries,
    reference: &GeneralizedSeries,
) -> Result<CoeffField> {
    if computed.is_empty() || reference.is_empty() {
        return Err(Error::Invalid("match_constant requires nonzero series".into()));
    }
    let a = computed.canonical();
    let b = reference.canonical();
    let gap = (b.base() - a.base()).to_integer().ok_or_else(|| Error::IncompatibleBase {
        gap: b.base() - a.base(),
    })?;
    // Offsets of b re-expressed relative to a's anchor.
    let mut offsets: Vec<i64> = a.terms().map(|(k, _)| k).collect();
    offsets.extend(b.terms().map(|(k, _)| k + gap));
    offsets.sort_unstable();
    offsets.dedup();

    let mut scalar: Option<CoeffField> = None;
    for &k in &offsets {
        if !(a.truncation().contains(k) && b.truncation().contains(k - gap)) {
            continue;
        }
        let ca = a.coeff(k);
        let cb = b.coeff(k - gap);
        match &scalar {
            None => {
                if ca.is_zero() || cb.is_zero() {
                    return Err(Error::NotProportional { offset: k });
                }
                scalar = Some(cb.try_div(&ca)?);
            }
            Some(c) => {
                if &ca * c != cb {
                    return Err(Error::NotProportional { offset: k });
                }
            }
        }
    }
    scalar.ok_or_else(|| Error::Invalid("no overlapping trusted offsets".into()))
}
