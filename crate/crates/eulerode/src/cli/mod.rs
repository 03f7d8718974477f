//! Command-line interface: operator DSL, subcommand dispatch, and emitters.

pub mod ast;
mod elaborate;
pub mod emit;
pub mod parser;

pub use elaborate::{elaborate, Bindings};
pub use emit::OutputFormat;

use std::collections::BTreeMap;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::algebra::{CoeffField, Rational};
use crate::classical::{self, Family, FamilySpec};
use crate::error::{Error, Result};
use crate::manybody::{csm_state, jack, Partition};
use crate::operator::{EulerPoly, LinDiffOp};
use crate::solver::{master_solve, residual, SolveReport, SolveStatus};
use crate::spectral::{anharmonic_approx, sextic_qes, RootMethod};

/// How a run was resolved: the process exit code and what to print.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

/// Exit codes: 0 success, 2 resonance, 3 parse/validation, 4 degenerate
/// eigenvalue, 5 residual failure.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::Resonance { .. } | Error::ResolventPole { .. } => 2,
        Error::DegenerateEigenvalue { .. } => 4,
        Error::ResidualNonzero | Error::NotTriangular | Error::CorruptSolution(_) => 5,
        _ => 3,
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "eulerode",
    version,
    about = "Exact solver for linear differential equations built on the Euler operator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve [F(D) + P] y = 0 from its monomial anchors.
    Solve {
        /// Operator expression, e.g. "D - 2 - 1/2*d^2".
        op: String,
        /// Anchor exponent p/q; defaults to every rational indicial root.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// Highest exact offset kept when a series does not terminate.
        #[arg(long, default_value_t = 64, env = "EULERODE_MAX_ORDER")]
        max_order: i64,
        /// Compose x^K on the left before solving.
        #[arg(long, default_value_t = 0)]
        premultiply: u32,
        /// Compose (d/dx)^M on the left (applied before any premultiply).
        #[arg(long, default_value_t = 0)]
        differentiate: u32,
        /// Name of the single free parameter.
        #[arg(long)]
        free: Option<String>,
        /// Bind a parameter, e.g. --bind gamma=3/2 (repeatable).
        #[arg(long = "bind", value_name = "NAME=VALUE")]
        bind: Vec<String>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        output: OutputFormat,
    },
    /// Build a classical family equation and compare solution routes.
    Classical {
        /// hermite, laguerre, legendre, gegenbauer, chebyshev-t,
        /// chebyshev-u, bessel, kummer or gauss.
        family: String,
        /// Polynomial degree (ignored by bessel/kummer/gauss).
        n: u32,
        /// Family parameter, e.g. --param alpha=1/2 (repeatable).
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
        #[arg(long, default_value_t = 24)]
        order_cap: i64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        output: OutputFormat,
    },
    /// Quasi-exactly-solvable spectra.
    Qes {
        /// Model name; `sextic` is the one provided.
        model: String,
        #[arg(long)]
        n: u32,
        /// Coupling g = sqrt(gamma) > 0.
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, default_value_t = 64, env = "EULERODE_MAX_ORDER")]
        max_order: i64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        output: OutputFormat,
    },
    /// Anharmonic ground-state approximation by moment matching.
    Anharmonic {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, default_value_t = 12)]
        order: i64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        output: OutputFormat,
    },
    /// Jack polynomial by exact triangular solve.
    Jack {
        /// Partition as comma-separated parts, e.g. 2,0.
        #[arg(long)]
        partition: String,
        #[arg(long)]
        nvars: usize,
        /// Rational coupling; defaults to the symbolic parameter b.
        #[arg(long, conflicts_with = "symbolic_beta", allow_hyphen_values = true)]
        beta: Option<String>,
        #[arg(long)]
        symbolic_beta: bool,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        output: OutputFormat,
    },
    /// Calogero-Sutherland polynomial eigenstate.
    Csm {
        #[arg(long)]
        partition: String,
        #[arg(long)]
        nvars: usize,
        #[arg(long, conflicts_with = "symbolic_beta", allow_hyphen_values = true)]
        beta: Option<String>,
        #[arg(long)]
        symbolic_beta: bool,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        output: OutputFormat,
    },
    /// Re-certify an emitted solution document against an operator.
    Verify {
        /// Path to a solution JSON document.
        solution: String,
        /// The operator the solution claims to annihilate.
        op: String,
        #[arg(long)]
        free: Option<String>,
        #[arg(long = "bind", value_name = "NAME=VALUE")]
        bind: Vec<String>,
    },
}

/// Entry point shared by the binary and the tests: argv in, exit code and
/// rendered document out.
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            return Outcome { code, output: e.to_string() };
        }
    };
    match dispatch(cli.command) {
        Ok(output) => Outcome { code: 0, output },
        Err(e) => Outcome { code: error_exit_code(&e), output: format!("error: {e}") },
    }
}

fn dispatch(cmd: Command) -> Result<String> {
    match cmd {
        Command::Solve { op, lambda, max_order, premultiply, differentiate, free, bind, output } => {
            cmd_solve(&op, lambda.as_deref(), max_order, premultiply, differentiate, free, &bind, output)
        }
        Command::Classical { family, n, params, order_cap, output } => {
            cmd_classical(&family, n, &params, order_cap, output)
        }
        Command::Qes { model, n, g, max_order, output } => cmd_qes(&model, n, &g, max_order, output),
        Command::Anharmonic { alpha, beta, order, output } => {
            cmd_anharmonic(&alpha, &beta, order, output)
        }
        Command::Jack { partition, nvars, beta, symbolic_beta, output } => {
            cmd_jack(&partition, nvars, beta.as_deref(), symbolic_beta, output)
        }
        Command::Csm { partition, nvars, beta, symbolic_beta, output } => {
            cmd_csm(&partition, nvars, beta.as_deref(), symbolic_beta, output)
        }
        Command::Verify { solution, op, free, bind } => cmd_verify(&solution, &op, free, &bind),
    }
}

fn parse_bindings(pairs: &[String]) -> Result<BTreeMap<String, Rational>> {
    let mut out = BTreeMap::new();
    for pair in pairs {
        let (name, value) = pair
            .split_once('=')
            .ok_or_else(|| Error::Invalid(format!("expected NAME=VALUE, got `{pair}`")))?;
        out.insert(name.trim().to_string(), value.parse()?);
    }
    Ok(out)
}

fn parse_partition(s: &str) -> Result<Partition> {
    let mut parts = Vec::new();
    for piece in s.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        parts.push(
            piece
                .parse::<u32>()
                .map_err(|_| Error::Invalid(format!("bad partition part `{piece}`")))?,
        );
    }
    Ok(Partition::new(parts))
}

fn beta_argument(beta: Option<&str>, _symbolic: bool) -> Result<CoeffField> {
    match beta {
        Some(s) => Ok(CoeffField::from_rational(s.parse()?)),
        None => Ok(CoeffField::parameter("b")),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable document")
}

fn solution_value(
    report: &SolveReport,
    op: &LinDiffOp,
    f: &EulerPoly,
    lambda: &Rational,
    max_order: i64,
) -> Value {
    let mut doc = emit::series_value(&report.solution);
    let meta = doc["meta"].as_object_mut().unwrap();
    meta.insert("operator".into(), json!(op.to_string()));
    meta.insert("f_of_d".into(), json!(f.to_string()));
    meta.insert("lambda".into(), json!(lambda.to_string()));
    meta.insert("iterations".into(), json!(report.iterations_used));
    meta.insert("max_order".into(), json!(max_order));
    meta.insert("resonances_hit".into(), json!(report.resonances_hit));
    doc
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    op_src: &str,
    lambda: Option<&str>,
    max_order: i64,
    premultiply: u32,
    differentiate: u32,
    free: Option<String>,
    bind: &[String],
    output: OutputFormat,
) -> Result<String> {
    if max_order < 1 {
        return Err(Error::Invalid("max-order must be at least 1".into()));
    }
    let expr = parser::parse_operator(op_src)?;
    let mut bindings = Bindings::new(parse_bindings(bind)?, free);
    let op = elaborate(&expr, &mut bindings)?
        .differentiate(differentiate)
        .premultiply(premultiply);
    let (f, _) = op.degree_split()?;

    let reports: Vec<(Rational, SolveReport)> = match lambda {
        Some(l) => {
            let lam: Rational = l.parse()?;
            vec![(lam.clone(), master_solve(&op, &lam, max_order)?)]
        }
        None => {
            let roots = f.indicial_roots()?;
            let mut ok = Vec::new();
            let mut first_err: Option<Error> = None;
            for root in roots.roots {
                match master_solve(&op, &root, max_order) {
                    Ok(r) => ok.push((root, r)),
                    Err(e) => first_err = first_err.or(Some(e)),
                }
            }
            if ok.is_empty() {
                return Err(first_err
                    .unwrap_or_else(|| Error::Invalid("no rational indicial roots".into())));
            }
            ok
        }
    };

    match output {
        OutputFormat::Json => {
            if reports.len() == 1 {
                let (lam, report) = &reports[0];
                Ok(pretty(&solution_value(report, &op, &f, lam, max_order)))
            } else {
                let solutions: Vec<Value> = reports
                    .iter()
                    .map(|(lam, r)| solution_value(r, &op, &f, lam, max_order))
                    .collect();
                Ok(pretty(&json!({
                    "solutions": solutions,
                    "meta": {
                        "operator": op.to_string(),
                        "f_of_d": f.to_string(),
                        "max_order": max_order,
                    }
                })))
            }
        }
        OutputFormat::Text => {
            let mut lines = vec![format!("operator: {op}"), format!("F(D) = {f}")];
            for (lam, r) in &reports {
                let status = match r.status {
                    SolveStatus::Terminated => "terminated".to_string(),
                    SolveStatus::Truncated(k) => format!("truncated at order {k}"),
                };
                lines.push(format!("lambda = {lam} ({status}): {}", r.solution));
            }
            Ok(lines.join("\n"))
        }
        OutputFormat::Latex => {
            let rows: Vec<(String, String, String)> = reports
                .iter()
                .map(|(_, r)| {
                    (
                        emit::latex_operator(&op),
                        emit::latex_euler_poly(&f),
                        emit::latex_series(&r.solution),
                    )
                })
                .collect();
            Ok(emit::latex_table(&rows))
        }
    }
}

fn cmd_classical(
    family: &str,
    n: u32,
    params: &[String],
    order_cap: i64,
    output: OutputFormat,
) -> Result<String> {
    let family = Family::from_name(family)?;
    let mut spec = FamilySpec::new(family, n);
    for (name, value) in parse_bindings(params)? {
        spec = spec.with_param(&name, value);
    }
    let op = classical::build_equation(&spec)?;
    let (f, _) = op.degree_split()?;
    let closed = classical::closed_form(&spec, order_cap)?;
    let anchor = classical::anchor_exponent(&spec)?;
    let master = master_solve(&op, &anchor, order_cap)?;
    let closed_vs_master = classical::match_constant(&closed, &master.solution)?;
    if !residual(&op, &closed).is_empty() {
        return Err(Error::ResidualNonzero);
    }

    let oracle_series = classical::oracle(&spec, order_cap)?;
    // The oracle for kummer/gauss is the ascending branch of the
    // x-premultiplied equation; for every other family it shares the
    // closed form's anchor.
    let (oracle_constant, ascending) = match family {
        Family::Kummer | Family::Gauss => {
            let asc_op = op.premultiply(1);
            let (asc_f, _) = asc_op.degree_split()?;
            let asc = master_solve(&asc_op, &Rational::zero(), order_cap)?;
            let c = classical::match_constant(&asc.solution, &oracle_series)?;
            (
                c,
                Some(json!({
                    "operator": asc_op.to_string(),
                    "f_of_d": asc_f.to_string(),
                    "solution": emit::series_value(&asc.solution),
                })),
            )
        }
        _ => (classical::match_constant(&closed, &oracle_series)?, None),
    };

    match output {
        OutputFormat::Json => {
            let mut doc = json!({
                "family": family.name(),
                "n": n,
                "operator": op.to_string(),
                "f_of_d": f.to_string(),
                "anchor": anchor.to_string(),
                "closed_form": emit::series_value(&closed),
                "master": emit::series_value(&master.solution),
                "closed_vs_master_constant": closed_vs_master.to_string(),
                "oracle": emit::series_value(&oracle_series),
                "oracle_constant": oracle_constant.to_string(),
            });
            if let Some(asc) = ascending {
                doc["ascending"] = asc;
            }
            Ok(pretty(&doc))
        }
        OutputFormat::Text => Ok([
            format!("family: {} (n = {n})", family.name()),
            format!("operator: {op}"),
            format!("F(D) = {f}"),
            format!("closed form: {closed}"),
            format!("oracle: {oracle_series}"),
            format!("oracle constant: {oracle_constant}"),
        ]
        .join("\n")),
        OutputFormat::Latex => {
            let form = classical::exp_form(&spec)?;
            Ok(emit::latex_table(&[(
                emit::latex_operator(&op),
                emit::latex_euler_poly(&f),
                format!("C\\,{}", emit::latex_exp_form(&form)),
            )]))
        }
    }
}

fn cmd_qes(model: &str, n: u32, g: &str, max_order: i64, output: OutputFormat) -> Result<String> {
    if model != "sextic" {
        return Err(Error::Invalid(format!("unknown QES model `{model}`")));
    }
    let g: Rational = g.parse()?;
    let q = sextic_qes(n, &g, max_order)?;
    match output {
        OutputFormat::Json => {
            let eigenfunctions: Vec<Value> = q
                .eigenfunctions
                .iter()
                .map(|(e, psi)| json!({ "energy": e.to_string(), "psi": emit::series_value(psi) }))
                .collect();
            Ok(pretty(&json!({
                "model": "sextic",
                "n": q.n,
                "g": q.g.to_string(),
                "gauge": { "factor": format!("exp(-{}*x^4)", q.gauge_b), "b": q.gauge_b.to_string() },
                "termination_poly": q.termination_poly.to_string(),
                "root_count": q.root_count,
                "spectrum": q.spectrum.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                "all_roots_rational": q.all_roots_rational,
                "eigenfunctions": eigenfunctions,
            })))
        }
        OutputFormat::Text | OutputFormat::Latex => {
            let mut lines = vec![
                format!("sextic QES: n = {}, g = {}, gauge exp(-{}*x^4)", q.n, q.g, q.gauge_b),
                format!("termination polynomial: {}", q.termination_poly),
                format!(
                    "spectrum ({} roots of {}): {}",
                    q.root_count,
                    if q.all_roots_rational { "all rational" } else { "not all rational" },
                    q.spectrum.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")
                ),
            ];
            for (e, psi) in &q.eigenfunctions {
                lines.push(format!("E = {e}: {psi}"));
            }
            Ok(lines.join("\n"))
        }
    }
}

fn cmd_anharmonic(alpha: &str, beta: &str, order: i64, output: OutputFormat) -> Result<String> {
    let alpha: Rational = alpha.parse()?;
    let beta: Rational = beta.parse()?;
    let r = anharmonic_approx(&alpha, &beta, order)?;
    let method = r.method.map(|m| match m {
        RootMethod::ClosedForm => "closed_form",
        RootMethod::Bisection => "bisection",
    });
    match output {
        OutputFormat::Json => Ok(pretty(&json!({
            "alpha": r.alpha.to_string(),
            "beta": r.beta.to_string(),
            "cubic": r.cubic.to_string(),
            "series": emit::series_value(&r.series),
            "method": method,
            "complex_intermediate": r.complex_intermediate,
            "approximate": {
                "e0": r.e0.map(emit::float_str),
                "mu": r.mu.map(emit::float_str),
                "nu": r.nu.map(emit::float_str),
                "real_roots": r.real_roots.iter().copied().map(emit::float_str).collect::<Vec<_>>(),
                "closed_form_root": r.closed_form_root.map(emit::float_str),
                "bisection_root": r.bisection_root.map(emit::float_str),
            },
        }))),
        OutputFormat::Text | OutputFormat::Latex => {
            let mut lines = vec![
                format!("anharmonic: alpha = {}, beta = {}", r.alpha, r.beta),
                format!("cubic: {} = 0", r.cubic),
            ];
            match r.e0 {
                Some(e0) => lines.push(format!(
                    "E0 ~ {} ({}, approximate)",
                    emit::float_str(e0),
                    method.unwrap_or("-")
                )),
                None => lines.push(format!(
                    "no root selected; real roots: {}",
                    r.real_roots.iter().copied().map(emit::float_str).collect::<Vec<_>>().join(", ")
                )),
            }
            lines.push(format!("series: {}", r.series));
            Ok(lines.join("\n"))
        }
    }
}

fn cmd_jack(
    partition: &str,
    nvars: usize,
    beta: Option<&str>,
    symbolic: bool,
    output: OutputFormat,
) -> Result<String> {
    let lambda = parse_partition(partition)?;
    let beta = beta_argument(beta, symbolic)?;
    let j = jack(&lambda, nvars, &beta)?;
    match output {
        OutputFormat::Json => {
            let coefficients: Vec<Value> = j
                .coefficients
                .iter()
                .map(|(p, c)| json!({ "partition": p.parts(), "coeff": c.to_string() }))
                .collect();
            Ok(pretty(&json!({
                "partition": j.partition.parts(),
                "nvars": j.nvars,
                "beta": beta.to_string(),
                "eigenvalue_shift": j.eigenvalue_shift.to_string(),
                "coefficients": coefficients,
            })))
        }
        OutputFormat::Text | OutputFormat::Latex => {
            let mut lines = vec![
                format!("Jack {} in {} variables, beta = {}", j.partition, j.nvars, beta),
                format!("eigenvalue shift: {}", j.eigenvalue_shift),
            ];
            for (p, c) in &j.coefficients {
                lines.push(format!("  m{p}: {c}"));
            }
            Ok(lines.join("\n"))
        }
    }
}

fn cmd_csm(
    partition: &str,
    nvars: usize,
    beta: Option<&str>,
    symbolic: bool,
    output: OutputFormat,
) -> Result<String> {
    let lambda = parse_partition(partition)?;
    let beta = beta_argument(beta, symbolic)?;
    let s = csm_state(&lambda, nvars, &beta)?;
    match output {
        OutputFormat::Json => {
            let terms: Vec<Value> = s
                .polynomial
                .terms()
                .map(|(e, c)| json!({ "exponents": e, "coeff": c.to_string() }))
                .collect();
            Ok(pretty(&json!({
                "partition": s.partition.parts(),
                "nvars": s.nvars,
                "beta": beta.to_string(),
                "ground_energy": s.ground_energy.to_string(),
                "energy": s.energy.to_string(),
                "polynomial": terms,
            })))
        }
        OutputFormat::Text | OutputFormat::Latex => Ok([
            format!("CSM state {} in {} variables, beta = {}", s.partition, s.nvars, beta),
            format!("E0 = {}", s.ground_energy),
            format!("E = {}", s.energy),
            format!("P = {:?}", s.polynomial),
        ]
        .join("\n")),
    }
}

fn cmd_verify(path: &str, op_src: &str, free: Option<String>, bind: &[String]) -> Result<String> {
    let expr = parser::parse_operator(op_src)?;
    let mut bindings = Bindings::new(parse_bindings(bind)?, free);
    let op = elaborate(&expr, &mut bindings)?;

    // Anything wrong with the solution document itself is a failed
    // certificate, not a usage error.
    let verify_inner = |path: &str| -> Result<usize> {
        let raw = std::fs::read_to_string(path)
            .map_err(|e| Error::Invalid(format!("cannot read `{path}`: {e}")))?;
        let doc: Value = serde_json::from_str(&raw)
            .map_err(|e| Error::Invalid(format!("bad JSON in `{path}`: {e}")))?;
        let solutions: Vec<Value> = match doc.get("solutions") {
            Some(Value::Array(items)) => items.clone(),
            _ => vec![doc],
        };
        let mut checked = 0;
        for sol in &solutions {
            let series = emit::series_from_value(sol)?;
            let res = residual(&op, &series);
            if !res.is_empty() {
                return Err(Error::ResidualNonzero);
            }
            checked += 1;
        }
        Ok(checked)
    };
    match verify_inner(path) {
        Ok(checked) => Ok(format!("verified: {checked} solution(s) leave zero residual")),
        // A failed certificate and an unreconstructable document both mean
        // the solution file does not certify: exit 5 either way.
        Err(Error::ResidualNonzero) => Err(Error::ResidualNonzero),
        Err(other) => Err(Error::CorruptSolution(other.to_string())),
    }
}
