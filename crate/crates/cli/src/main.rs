//! Command-line front end for the twin-basic calculus library.
//!
//! Every invocation prints exactly one response object to standard output
//! (JSON by default, a line-oriented text rendering with `--format text`)
//! and reserves standard error for human-readable usage detail.  Exit codes:
//! `0` for success, `1` for malformed invocations, `2` for evaluation
//! errors (non-convergence, poles, domain violations) and for failed suite
//! draws.
//!
//! Numeric payloads are serialized as decimal strings in shortest
//! round-trip form, so every printed value re-parses to the same
//! double-precision bits and responses are byte-identical across runs --
//! the suites are driven by a seeded, platform-independent generator for
//! the same reason.
//!
//! Scalar arguments accept `re`, `re,im`, or `re+imi` forms (`0.5`,
//! `0.5,-1`, `0.5-1i`).  Doublet (pair) arguments take two comma-separated
//! components, each in `re` or `re+imi` form (`2,1`, `1+0.5i,0.3`); lists
//! of doublets are separated by `;`.

mod suite;

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use pqcalc::{
    build_fock_with_mode, check_exp_identity, check_pq_binomial, eval_pq_hypergeometric,
    fibonacci_sequence, pq_factorial, pq_number, pq_shifted_factorial, product_permutation_check,
    verify_oscillator, Error, EvalConfig, FockMode, IdentityReport, PQBase, PQPair, SeriesResult,
    SeriesSpec, Termination,
};
use serde::Serialize;

const SCHEMA: &str = "pq/1";

#[derive(Parser)]
#[command(
    name = "pqcalc",
    version,
    about = "Evaluate twin-basic numbers, series and identities",
    disable_help_subcommand = true
)]
struct Cli {
    /// Output format for the response object.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the twin-basic number [x] over a base doublet.
    Number {
        /// The (complex) argument x.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// Base doublet P,Q.
        #[arg(long, allow_hyphen_values = true)]
        base: String,
    },
    /// Evaluate the twin-basic factorial [n]!.
    Factorial {
        /// Nonnegative integer n.
        #[arg(long)]
        n: usize,
        /// Base doublet P,Q.
        #[arg(long, allow_hyphen_values = true)]
        base: String,
    },
    /// Evaluate the twin-basic shifted factorial of one doublet.
    Pochhammer {
        /// Parameter doublet xp,xq.
        #[arg(long, allow_hyphen_values = true)]
        pair: String,
        /// Base doublet P,Q.
        #[arg(long, allow_hyphen_values = true)]
        base: String,
        /// Number of factors.
        #[arg(long)]
        n: usize,
    },
    /// Evaluate a twin-basic hypergeometric series.
    Series {
        /// Upper parameter doublets, e.g. "1,0.3;1,0.5" (may be empty).
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        num_pairs: String,
        /// Lower parameter doublets (may be empty).
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        den_pairs: String,
        /// Base doublet P,Q.
        #[arg(long, allow_hyphen_values = true)]
        base: String,
        /// Series argument z.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Check the twin-basic binomial theorem for one doublet.
    Binomial {
        /// Parameter doublet ap,aq.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        /// Base doublet P,Q.
        #[arg(long, allow_hyphen_values = true)]
        base: String,
        /// Series argument z.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// Relative residual tolerance for the pass verdict.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Check Euler's identity e_q(z) E_q(-z) = 1.
    ExpIdentity {
        /// Classical base q.
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        /// Argument z.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// Relative residual tolerance for the pass verdict.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Check permutation invariance of a product of binomial series.
    Permutation {
        /// Doublets, e.g. "1.3,0.4;0.8,1.1;0.5,0.2".
        #[arg(long, allow_hyphen_values = true)]
        pairs: String,
        /// Base doublet P,Q.
        #[arg(long, allow_hyphen_values = true)]
        base: String,
        /// Common series argument z.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// Permutation applied to the p-components, e.g. "1,2,0".
        #[arg(long, value_delimiter = ',')]
        perm_p: Vec<usize>,
        /// Permutation applied to the q-components.
        #[arg(long, value_delimiter = ',')]
        perm_q: Vec<usize>,
        /// Relative residual tolerance for the pass verdict.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Build a truncated Fock realization and verify the oscillator algebra.
    Oscillator {
        /// Deformation parameter p.
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        /// Deformation parameter q.
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        /// Truncation dimension.
        #[arg(long)]
        dim: usize,
        /// Square-root mode for the matrix elements.
        #[arg(long, value_enum, default_value_t = ModeArg::Complex)]
        mode: ModeArg,
    },
    /// Iterate the generalized Fibonacci recurrence of a base doublet.
    Fibonacci {
        /// Base doublet P,Q.
        #[arg(long, allow_hyphen_values = true)]
        base: String,
        /// Largest index to report.
        #[arg(long)]
        n_max: usize,
    },
    /// Run a seeded randomized property suite.
    Suite {
        /// Which suite to run.
        #[arg(long, value_enum)]
        name: suite::SuiteName,
        /// Seed for the deterministic generator.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random draws per suite.
        #[arg(long, default_value_t = 50)]
        draws: usize,
        #[command(flatten)]
        tuning: Tuning,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Complex,
    RealSymmetric,
}

/// Evaluation-policy overrides shared by the series-driven commands.
#[derive(clap::Args)]
struct Tuning {
    /// Relative term tolerance.
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Absolute term tolerance.
    #[arg(long)]
    abs_tol: Option<f64>,
    /// Term cap (overrides the PQ_MAX_TERMS environment variable).
    #[arg(long)]
    max_terms: Option<usize>,
    /// Consecutive growing terms tolerated before declaring divergence.
    #[arg(long)]
    growth_window: Option<usize>,
}

impl Tuning {
    fn apply(&self, mut cfg: EvalConfig) -> EvalConfig {
        if let Some(v) = self.rel_tol {
            cfg.rel_tol = v;
        }
        if let Some(v) = self.abs_tol {
            cfg.abs_tol = v;
        }
        if let Some(v) = self.max_terms {
            cfg.max_terms = v;
        }
        if let Some(v) = self.growth_window {
            cfg.growth_window = v;
        }
        cfg
    }
}

/// A complex number rendered as decimal strings that re-parse to the same
/// bits.
#[derive(Serialize)]
struct CVal {
    re: String,
    im: String,
}

impl From<Complex64> for CVal {
    fn from(z: Complex64) -> Self {
        CVal {
            re: fmt_f64(z.re),
            im: fmt_f64(z.im),
        }
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

#[derive(Serialize, Default)]
struct Diagnostics {
    #[serde(skip_serializing_if = "Option::is_none")]
    terms_used: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    termination: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error_estimate: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lhs: Option<CVal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rhs: Option<CVal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    abs_residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rel_residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    passed: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residuals: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    subspace_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    values: Option<Vec<CVal>>,
}

#[derive(Serialize)]
struct Response {
    schema: &'static str,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<CVal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostics: Option<Diagnostics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    suites: Option<Vec<suite::SuiteOutcome>>,
    #[serde(skip)]
    exit: u8,
}

impl Response {
    fn ok() -> Self {
        Response {
            schema: SCHEMA,
            status: "ok",
            message: None,
            value: None,
            diagnostics: None,
            suites: None,
            exit: 0,
        }
    }

    fn value(z: Complex64) -> Self {
        Response {
            value: Some(z.into()),
            ..Response::ok()
        }
    }

    fn usage(message: String) -> Self {
        Response {
            status: "usage_error",
            message: Some(message),
            exit: 1,
            ..Response::ok()
        }
    }

    fn eval_error(err: &Error) -> Self {
        let status = match err {
            Error::Convergence(_) => "convergence_error",
            Error::Divergence(_) => "divergence_error",
            Error::Pole(_) => "pole_error",
            Error::Domain(_) | Error::Arity(_) | Error::Shape(_) | Error::Numerical(_) => {
                "domain_error"
            }
        };
        Response {
            status,
            message: Some(err.to_string()),
            exit: 2,
            ..Response::ok()
        }
    }
}

enum CmdError {
    Usage(String),
    Eval(Error),
}

impl From<Error> for CmdError {
    fn from(err: Error) -> Self {
        CmdError::Eval(err)
    }
}

type CmdResult = Result<Response, CmdError>;

/// Parses `re`, `re,im`, or `re+imi` into a complex scalar.
fn parse_complex(s: &str) -> Result<Complex64, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty complex scalar".to_string());
    }
    if let Some((re, im)) = s.split_once(',') {
        let re: f64 = re
            .trim()
            .parse()
            .map_err(|_| format!("bad real part in {s:?}"))?;
        let im: f64 = im
            .trim()
            .parse()
            .map_err(|_| format!("bad imaginary part in {s:?}"))?;
        return Ok(Complex64::new(re, im));
    }
    parse_complex_nocomma(s)
}

/// Parses `re` or `re+imi` (no comma form) into a complex scalar.
fn parse_complex_nocomma(s: &str) -> Result<Complex64, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty complex scalar".to_string());
    }
    if let Some(body) = s.strip_suffix(['i', 'I']) {
        // Split at the sign that separates the real and imaginary parts:
        // the last '+'/'-' that is neither leading nor an exponent sign.
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            let b = bytes[idx];
            if (b == b'+' || b == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
                split = Some(idx);
                break;
            }
        }
        let (re_str, im_str) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("0", body),
        };
        let re: f64 = if re_str.is_empty() {
            0.0
        } else {
            re_str
                .parse()
                .map_err(|_| format!("bad real part in {s:?}"))?
        };
        let im: f64 = match im_str {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other
                .parse()
                .map_err(|_| format!("bad imaginary part in {s:?}"))?,
        };
        return Ok(Complex64::new(re, im));
    }
    let re: f64 = s
        .parse()
        .map_err(|_| format!("bad complex scalar {s:?} (expected re, re,im or re+imi)"))?;
    Ok(Complex64::new(re, 0.0))
}

/// Parses a doublet `c1,c2` with components in `re` or `re+imi` form.
fn parse_pair(s: &str) -> Result<(Complex64, Complex64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!(
            "bad doublet {s:?}: expected two comma-separated components (use re+imi \
             form for complex components)"
        ));
    }
    Ok((
        parse_complex_nocomma(parts[0])?,
        parse_complex_nocomma(parts[1])?,
    ))
}

fn parse_base(s: &str) -> Result<PQBase, String> {
    let (p, q) = parse_pair(s)?;
    Ok(PQBase::new(p, q))
}

fn parse_pq_pair(s: &str) -> Result<PQPair, String> {
    let (p, q) = parse_pair(s)?;
    Ok(PQPair::new(p, q))
}

/// Parses a `;`-separated list of doublets; empty input means no doublets.
fn parse_pair_list(s: &str) -> Result<Vec<PQPair>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(vec![]);
    }
    s.split(';').map(parse_pq_pair).collect()
}

fn termination_name(t: Termination) -> &'static str {
    match t {
        Termination::Natural => "natural",
        Termination::ToleranceReached => "tolerance_reached",
        Termination::MaxTermsReached => "max_terms_reached",
    }
}

fn series_response(result: SeriesResult) -> Response {
    Response {
        diagnostics: Some(Diagnostics {
            terms_used: Some(result.terms_used),
            termination: Some(termination_name(result.termination)),
            error_estimate: Some(fmt_f64(result.error_estimate)),
            ..Diagnostics::default()
        }),
        ..Response::value(result.value)
    }
}

fn identity_response(report: IdentityReport) -> Response {
    Response {
        diagnostics: Some(Diagnostics {
            lhs: Some(report.lhs.into()),
            rhs: Some(report.rhs.into()),
            abs_residual: Some(fmt_f64(report.abs_residual)),
            rel_residual: Some(fmt_f64(report.rel_residual)),
            passed: Some(report.passed),
            ..Diagnostics::default()
        }),
        ..Response::value(report.lhs)
    }
}

/// Baseline evaluation policy: defaults, with `PQ_MAX_TERMS` applied when
/// set (explicit `--max-terms` flags still win).
fn base_config() -> Result<EvalConfig, CmdError> {
    let mut cfg = EvalConfig::default();
    if let Ok(raw) = std::env::var("PQ_MAX_TERMS") {
        let parsed: usize = raw.trim().parse().map_err(|_| {
            CmdError::Usage(format!("PQ_MAX_TERMS must be a positive integer, got {raw:?}"))
        })?;
        cfg.max_terms = parsed;
    }
    Ok(cfg)
}

fn dispatch(command: &Command) -> CmdResult {
    let cfg = base_config()?;
    match command {
        Command::Number { x, base } => {
            let x = parse_complex(x).map_err(CmdError::Usage)?;
            let base = parse_base(base).map_err(CmdError::Usage)?;
            Ok(Response::value(pq_number(x, base)?))
        }
        Command::Factorial { n, base } => {
            let base = parse_base(base).map_err(CmdError::Usage)?;
            Ok(Response::value(pq_factorial(*n, base)))
        }
        Command::Pochhammer { pair, base, n } => {
            let pair = parse_pq_pair(pair).map_err(CmdError::Usage)?;
            let base = parse_base(base).map_err(CmdError::Usage)?;
            Ok(Response::value(pq_shifted_factorial(pair, base, *n)))
        }
        Command::Series {
            num_pairs,
            den_pairs,
            base,
            z,
            tuning,
        } => {
            let spec = SeriesSpec {
                numerator: parse_pair_list(num_pairs).map_err(CmdError::Usage)?,
                denominator: parse_pair_list(den_pairs).map_err(CmdError::Usage)?,
                base: parse_base(base).map_err(CmdError::Usage)?,
                z: parse_complex(z).map_err(CmdError::Usage)?,
            };
            let result = eval_pq_hypergeometric(&spec, &tuning.apply(cfg))?;
            Ok(series_response(result))
        }
        Command::Binomial {
            a,
            base,
            z,
            tol,
            tuning,
        } => {
            let a = parse_pq_pair(a).map_err(CmdError::Usage)?;
            let base = parse_base(base).map_err(CmdError::Usage)?;
            let z = parse_complex(z).map_err(CmdError::Usage)?;
            let report = check_pq_binomial(a, base, z, &tuning.apply(cfg), *tol)?;
            Ok(identity_response(report))
        }
        Command::ExpIdentity { q, z, tol, tuning } => {
            let q = parse_complex(q).map_err(CmdError::Usage)?;
            let z = parse_complex(z).map_err(CmdError::Usage)?;
            let report = check_exp_identity(q, z, &tuning.apply(cfg), *tol)?;
            Ok(identity_response(report))
        }
        Command::Permutation {
            pairs,
            base,
            z,
            perm_p,
            perm_q,
            tol,
            tuning,
        } => {
            let pairs = parse_pair_list(pairs).map_err(CmdError::Usage)?;
            let base = parse_base(base).map_err(CmdError::Usage)?;
            let z = parse_complex(z).map_err(CmdError::Usage)?;
            let report = product_permutation_check(
                &pairs,
                base,
                z,
                perm_p,
                perm_q,
                &tuning.apply(cfg),
                *tol,
            )?;
            Ok(identity_response(report))
        }
        Command::Oscillator { p, q, dim, mode } => {
            let p = parse_complex(p).map_err(CmdError::Usage)?;
            let q = parse_complex(q).map_err(CmdError::Usage)?;
            let mode = match mode {
                ModeArg::Complex => FockMode::Complex,
                ModeArg::RealSymmetric => FockMode::RealSymmetric,
            };
            let fock = build_fock_with_mode(p, q, *dim, mode)?;
            let res = verify_oscillator(&fock);
            Ok(Response {
                diagnostics: Some(Diagnostics {
                    residuals: Some(
                        res.residuals
                            .iter()
                            .map(|(k, v)| (k.clone(), fmt_f64(*v)))
                            .collect(),
                    ),
                    subspace_dim: Some(res.subspace_dim),
                    ..Diagnostics::default()
                }),
                ..Response::ok()
            })
        }
        Command::Fibonacci { base, n_max } => {
            let base = parse_base(base).map_err(CmdError::Usage)?;
            let seq = fibonacci_sequence(base, *n_max);
            let last = *seq.last().expect("sequence is never empty");
            Ok(Response {
                diagnostics: Some(Diagnostics {
                    values: Some(seq.into_iter().map(CVal::from).collect()),
                    ..Diagnostics::default()
                }),
                ..Response::value(last)
            })
        }
        Command::Suite {
            name,
            seed,
            draws,
            tuning,
        } => {
            if *draws == 0 {
                return Err(CmdError::Usage("--draws must be positive".to_string()));
            }
            let outcomes = suite::run(*name, *seed, *draws, &tuning.apply(cfg));
            let all_passed = outcomes.iter().all(|o| o.passes == o.draws);
            Ok(Response {
                suites: Some(outcomes),
                exit: if all_passed { 0 } else { 2 },
                ..Response::ok()
            })
        }
    }
}

fn render_text(resp: &Response) -> String {
    let mut out = String::new();
    let mut push = |line: String| {
        out.push_str(&line);
        out.push('\n');
    };
    push(format!("schema: {}", resp.schema));
    push(format!("status: {}", resp.status));
    if let Some(m) = &resp.message {
        push(format!("message: {m}"));
    }
    if let Some(v) = &resp.value {
        push(format!("value: {} + {}i", v.re, v.im));
    }
    if let Some(d) = &resp.diagnostics {
        if let Some(n) = d.terms_used {
            push(format!("terms_used: {n}"));
        }
        if let Some(t) = d.termination {
            push(format!("termination: {t}"));
        }
        if let Some(e) = &d.error_estimate {
            push(format!("error_estimate: {e}"));
        }
        if let (Some(lhs), Some(rhs)) = (&d.lhs, &d.rhs) {
            push(format!("lhs: {} + {}i", lhs.re, lhs.im));
            push(format!("rhs: {} + {}i", rhs.re, rhs.im));
        }
        if let Some(r) = &d.abs_residual {
            push(format!("abs_residual: {r}"));
        }
        if let Some(r) = &d.rel_residual {
            push(format!("rel_residual: {r}"));
        }
        if let Some(p) = d.passed {
            push(format!("passed: {p}"));
        }
        if let Some(res) = &d.residuals {
            for (k, v) in res {
                push(format!("residual {k}: {v}"));
            }
        }
        if let Some(s) = d.subspace_dim {
            push(format!("subspace_dim: {s}"));
        }
        if let Some(values) = &d.values {
            for (n, v) in values.iter().enumerate() {
                push(format!("f[{n}]: {} + {}i", v.re, v.im));
            }
        }
    }
    if let Some(suites) = &resp.suites {
        for s in suites {
            push(format!(
                "suite {}: {}/{} passed, max residual {}, median {}, tolerance {}",
                s.name, s.passes, s.draws, s.max_residual, s.median_residual, s.tolerance
            ));
            for f in &s.failures {
                let params: Vec<String> =
                    f.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
                push(format!(
                    "  failure draw {}: residual {} ({})",
                    f.draw,
                    f.residual,
                    params.join(", ")
                ));
            }
        }
    }
    out
}

fn emit(resp: &Response, format: Format) {
    match format {
        Format::Json => {
            println!(
                "{}",
                serde_json::to_string(resp).expect("response serialization cannot fail")
            );
        }
        Format::Text => print!("{}", render_text(resp)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{err}");
                return ExitCode::SUCCESS;
            }
            eprint!("{err}");
            let resp = Response::usage(err.kind().to_string());
            emit(&resp, Format::Json);
            return ExitCode::from(1);
        }
    };
    let resp = match dispatch(&cli.command) {
        Ok(resp) => resp,
        Err(CmdError::Usage(message)) => Response::usage(message),
        Err(CmdError::Eval(err)) => Response::eval_error(&err),
    };
    emit(&resp, cli.format);
    ExitCode::from(resp.exit)
}
