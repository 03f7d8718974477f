//! Emitters: the machine-readable JSON schema, plain text, and the LaTeX
//! table layout (operator, F(D), solution).

use serde_json::{json, Value};

use crate::algebra::{GeneralizedSeries, Rational, Truncation};
use crate::error::{Error, Result};
use crate::operator::{EulerPoly, LinDiffOp, MonoOp};
use crate::solver::{ExpFactor, ExpForm};

use super::parser::parse_coeff;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Latex,
}

/// Approximate floats are serialized with 17 significant digits.
pub fn float_str(v: f64) -> String {
    format!("{v:.16e}")
}

/// The series document: exact coefficient strings, offsets ascending.
pub fn series_value(s: &GeneralizedSeries) -> Value {
    let terms: Vec<Value> = s
        .terms()
        .map(|(k, c)| json!({ "offset": k, "coeff": c.to_string() }))
        .collect();
    let (status, trunc) = match s.truncation() {
        Truncation::Exact => ("terminated", None),
        Truncation::Above(k) => ("truncated", Some(json!({ "direction": "above", "limit": k }))),
        Truncation::Below(k) => ("truncated", Some(json!({ "direction": "below", "limit": k }))),
    };
    let mut meta = serde_json::Map::new();
    if let Some(t) = trunc {
        meta.insert("truncation".into(), t);
    }
    json!({
        "base_exponent": s.base().to_string(),
        "terms": terms,
        "status": status,
        "meta": Value::Object(meta),
    })
}

fn field<'v>(v: &'v Value, name: &str) -> Result<&'v Value> {
    v.get(name)
        .ok_or_else(|| Error::Invalid(format!("solution document missing `{name}`")))
}

/// Rebuilds a series from its emitted document.
pub fn series_from_value(v: &Value) -> Result<GeneralizedSeries> {
    let base: Rational = field(v, "base_exponent")?
        .as_str()
        .ok_or_else(|| Error::Invalid("`base_exponent` must be a string".into()))?
        .parse()?;
    let status = field(v, "status")?
        .as_str()
        .ok_or_else(|| Error::Invalid("`status` must be a string".into()))?;
    let trunc = match status {
        "terminated" => Truncation::Exact,
        "truncated" => {
            let t = v
                .get("meta")
                .and_then(|m| m.get("truncation"))
                .ok_or_else(|| Error::Invalid("truncated solution lacks meta.truncation".into()))?;
            let limit = field(t, "limit")?
                .as_i64()
                .ok_or_else(|| Error::Invalid("truncation limit must be an integer".into()))?;
            match field(t, "direction")?.as_str() {
                Some("above") => Truncation::Above(limit),
                Some("below") => Truncation::Below(limit),
                _ => return Err(Error::Invalid("truncation direction must be above/below".into())),
            }
        }
        other => return Err(Error::Invalid(format!("unknown status `{other}`"))),
    };
    let terms = field(v, "terms")?
        .as_array()
        .ok_or_else(|| Error::Invalid("`terms` must be an array".into()))?;
    let mut out = GeneralizedSeries::from_terms(base, [], trunc);
    for t in terms {
        let offset = field(t, "offset")?
            .as_i64()
            .ok_or_else(|| Error::Invalid("term offset must be an integer".into()))?;
        let coeff = parse_coeff(
            field(t, "coeff")?
                .as_str()
                .ok_or_else(|| Error::Invalid("term coeff must be a string".into()))?,
        )?;
        out.add_term(offset, coeff);
    }
    Ok(out)
}

fn latex_rational(r: &Rational, with_sign: bool) -> String {
    let mag = r.abs();
    let body = if mag.is_integer() {
        format!("{mag}")
    } else {
        format!("\\frac{{{}}}{{{}}}", mag.numer(), mag.denom())
    };
    if with_sign && r.is_negative() {
        format!("-{body}")
    } else {
        body
    }
}

pub fn latex_operator(op: &LinDiffOp) -> String {
    if op.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, MonoOp { coeff, xpow, dorder }) in op.terms().enumerate() {
        let (neg, coeff_body) = match coeff.as_rational() {
            Some(r) => (r.is_negative(), {
                let mag = r.abs();
                if mag.is_one() && (xpow > 0 || dorder > 0) {
                    String::new()
                } else {
                    latex_rational(&mag, false)
                }
            }),
            None => (false, format!("\\left({coeff}\\right)")),
        };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&coeff_body);
        if xpow > 0 {
            out.push_str(&if xpow == 1 { "x".into() } else { format!("x^{{{xpow}}}") });
        }
        if dorder > 0 {
            out.push_str(&format!("\\frac{{d^{{{dorder}}}}}{{dx^{{{dorder}}}}}"));
        }
    }
    out
}

pub fn latex_euler_poly(f: &EulerPoly) -> String {
    format!("{f}").replace('*', " ")
}

pub fn latex_series(s: &GeneralizedSeries) -> String {
    if s.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    let mut first = true;
    for (k, c) in s.terms() {
        let exponent = s.base() + &Rational::from_int(k);
        let (neg, body) = match c.as_rational() {
            Some(r) => (
                r.is_negative(),
                if r.abs().is_one() && !exponent.is_zero() {
                    String::new()
                } else {
                    latex_rational(&r.abs(), false)
                },
            ),
            None => (false, format!("\\left({c}\\right)")),
        };
        if first {
            if neg {
                out.push('-');
            }
            first = false;
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
        if !exponent.is_zero() {
            if exponent.is_integer() && !exponent.is_negative() {
                out.push_str(&if exponent.is_one() {
                    "x".into()
                } else {
                    format!("x^{{{exponent}}}")
                });
            } else {
                out.push_str(&format!("x^{{{}}}", latex_rational(&exponent, true)));
            }
        }
    }
    match s.truncation() {
        Truncation::Exact => {}
        Truncation::Above(k) | Truncation::Below(k) => {
            out.push_str(&format!(
                " + O\\!\\left(x^{{{}}}\\right)",
                latex_rational(&(s.base() + &Rational::from_int(k)), true)
            ));
        }
    }
    out
}

/// Renders the exponential pipeline in composition order (last-applied
/// leftmost), e.g. `\exp[-1/(2(D+3)) d^2/dx^2] . x^2`.
pub fn latex_exp_form(form: &ExpForm) -> String {
    let mut inner = String::new();
    let scale = form
        .scale
        .as_rational()
        .cloned()
        .unwrap_or_else(Rational::one);
    if scale.is_negative() {
        inner.push('-');
    }
    if !scale.abs().is_one() {
        inner.push_str(&latex_rational(&scale.abs(), false));
    }
    for factor in form.factors.iter().rev() {
        match factor {
            ExpFactor::Resolvent(c) => {
                let shift = if c.is_zero() {
                    "D".to_string()
                } else if c.is_negative() {
                    format!("D - {}", latex_rational(&c.abs(), false))
                } else {
                    format!("D + {}", latex_rational(c, false))
                };
                inner.push_str(&format!("\\frac{{1}}{{{shift}}}"));
            }
            ExpFactor::Op(op) => {
                let body = latex_operator(op);
                if op.num_terms() > 1 {
                    inner.push_str(&format!("\\left({body}\\right)"));
                } else {
                    inner.push_str(&body);
                }
            }
        }
    }
    format!(
        "\\exp\\left[{inner}\\right]\\, {}",
        latex_series(&form.anchor)
    )
}

/// One Table-style LaTeX row: equation, Euler part, solution.
pub fn latex_table(rows: &[(String, String, String)]) -> String {
    let mut out = String::new();
    out.push_str("\\begin{tabular}{|c|c|c|}\n\\hline\n");
    out.push_str("\\textbf{Differential Equation} & $F(D)$ & \\textbf{Solution} \\\\\n\\hline\n");
    for (op, f, sol) in rows {
        out.push_str(&format!("${op}$ & ${f}$ & ${sol}$ \\\\\n"));
    }
    out.push_str("\\hline\n\\end{tabular}");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::CoeffField;

    #[test]
    fn series_document_round_trip() {
        let mut s = GeneralizedSeries::from_terms(
            Rational::new(1, 2),
            [
                (0, CoeffField::one()),
                (2, CoeffField::from_rational(Rational::new(-3, 4))),
                (4, CoeffField::parameter("E")),
            ],
            Truncation::Above(10),
        );
        s.set_truncation(Truncation::Above(10));
        let v = series_value(&s);
        let back = series_from_value(&v).unwrap();
        assert_eq!(back, s);

        let exact = GeneralizedSeries::polynomial(&[Rational::one(), Rational::new(1, 3)]);
        assert_eq!(series_from_value(&series_value(&exact)).unwrap(), exact);
    }

    #[test]
    fn malformed_documents_rejected() {
        assert!(series_from_value(&json!({"terms": []})).is_err());
        assert!(series_from_value(&json!({
            "base_exponent": "0", "terms": [], "status": "truncated", "meta": {}
        }))
        .is_err());
    }

    #[test]
    fn float_precision() {
        assert_eq!(float_str(1.0), "1.0000000000000000e0");
    }
}
