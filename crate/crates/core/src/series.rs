//! Adaptive evaluation of basic and twin-basic hypergeometric series.
//!
//! The central object is the twin-basic series with `r` upper and `s` lower
//! parameter doublets,
//!
//! ```text
//!                      inf   prod_i ((a_ip, a_iq); (P,Q))_n
//! rPhi_s(...; q~, z) = sum   ------------------------------- B(n) z^n ,
//!                      n=0   prod_j ((b_jp, b_jq); (P,Q))_n
//!                            * ((P,Q);(P,Q))_n
//! ```
//!
//! with the balance factor `B(n) = ((-1)^n (Q/P)^(n(n-1)/2))^(1+s-r)`.  For
//! the classical base `(1, q)` and pairs `(1, a_i)`, `(1, b_j)` this is the
//! one-parameter series `rphi_s(a; b; q, z)`, which has its own independent
//! evaluator so that the reduction can be verified by dual computation.
//!
//! Every evaluator works through a term recurrence: term `n` is obtained from
//! term `n-1` by multiplying one new factor per shifted factorial plus the
//! balance-factor increment, never by recomputing products from scratch.  To
//! keep the recurrence overflow-free the k-th factors are normalized by
//! `P^k`, which turns all running quantities into powers of `rho = Q/P` with
//! `|rho| < 1` in the convergence region.
//!
//! Truncation policy (see [`EvalConfig`]): a series stops after
//! `small_window` consecutive terms fall below the mixed tolerance, aborts
//! with a divergence error after `growth_window` consecutive magnitude
//! increases past term ten, and reports reaching `max_terms` honestly rather
//! than pretending convergence.  When an upper shifted factorial vanishes the
//! series is a polynomial; this is detected up front and the exact polynomial
//! is summed (termination [`Termination::Natural`], zero error estimate).

use num_complex::Complex64;

use crate::base::{cpow, PQBase, PQPair, TERMINATION_EPS};
use crate::config::EvalConfig;
use crate::error::{Error, Result};

/// A twin-basic hypergeometric series, fully specified.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSpec {
    /// Upper parameter doublets `(a_ip, a_iq)`.
    pub numerator: Vec<PQPair>,
    /// Lower parameter doublets `(b_jp, b_jq)`.
    pub denominator: Vec<PQPair>,
    /// Base doublet `(P, Q)`.
    pub base: PQBase,
    /// Series argument.
    pub z: Complex64,
}

/// How a series evaluation stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// An upper shifted factorial vanished: the series is a polynomial and
    /// was summed exactly.
    Natural,
    /// Consecutive terms fell below the configured tolerance.
    ToleranceReached,
    /// The term cap was hit before the tolerance was met.  The value is the
    /// partial sum; callers must not treat it as converged.
    MaxTermsReached,
}

/// Value and diagnostics of an adaptive series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    /// The (partial) sum.
    pub value: Complex64,
    /// Number of terms accumulated, counting term zero.
    pub terms_used: usize,
    /// Why summation stopped.
    pub termination: Termination,
    /// Magnitude of the first neglected term (zero for natural termination).
    pub error_estimate: f64,
}

/// Which component of a parameter doublet is sent to infinity in
/// [`limit_parameter_series`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitDirection {
    /// `a_p -> inf` with argument `z/a_p`; the doublet degenerates to `(1, 0)`.
    PComponent,
    /// `a_q -> inf` with argument `z/a_q`; the doublet degenerates to `(0, 1)`.
    QComponent,
}

/// Finds the first index `k < max_n` at which the shifted-factorial factor
/// `xp P^k - xq Q^k` vanishes to relative precision `1e-13`, if any.
///
/// A vanishing factor at index `k` makes `((xp,xq);(P,Q))_n = 0` for all
/// `n > k`: a series with this doublet upstairs truncates to a polynomial of
/// degree `k`.
pub fn detect_termination(pair: PQPair, base: PQBase, max_n: usize) -> Option<usize> {
    let zero = Complex64::new(0.0, 0.0);
    if base.p == zero {
        // Factors collapse to xp - xq at k = 0 and -xq Q^k afterwards.
        if max_n == 0 {
            return None;
        }
        let f0 = pair.p - pair.q;
        if f0.norm() <= TERMINATION_EPS * (pair.p.norm() + pair.q.norm()) {
            return Some(0);
        }
        if max_n > 1 && (pair.q == zero || base.q == zero) {
            return Some(1);
        }
        return None;
    }
    // Normalizing the k-th factor by P^k is exact for the relative test and
    // keeps the scan overflow-free inside the convergence region.
    let rho = base.q / base.p;
    let mut rk = Complex64::new(1.0, 0.0);
    for k in 0..max_n {
        let v = pair.q * rk;
        if !v.is_finite() {
            return None; // |rho| > 1 and the scan left the representable range
        }
        let f = pair.p - v;
        if f.norm() <= TERMINATION_EPS * (pair.p.norm() + v.norm()) {
            return Some(k);
        }
        rk *= rho;
    }
    None
}

/// Integer power with `b^0 = 1` even at `b = 0`.
fn ipow(b: Complex64, e: i32) -> Complex64 {
    if e == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        b.powi(e)
    }
}

/// Drives the term recurrence under the adaptive truncation policy.
///
/// `ratio(n)` must return the multiplier taking term `n-1` to term `n`,
/// advancing whatever running state it owns.  With `natural = Some(k)` the
/// polynomial `n = 0..=k` is summed exactly; otherwise the tolerance /
/// growth / cap policy from `cfg` applies.
pub(crate) fn sum_series<F>(
    cfg: &EvalConfig,
    natural: Option<usize>,
    mut ratio: F,
) -> Result<SeriesResult>
where
    F: FnMut(usize) -> Result<Complex64>,
{
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;

    if let Some(last) = natural {
        for n in 1..=last {
            term *= ratio(n)?;
            sum += term;
            if !term.is_finite() {
                return Err(Error::Divergence(format!(
                    "series term {n} overflowed while summing a naturally terminating series"
                )));
            }
        }
        return Ok(SeriesResult {
            value: sum,
            terms_used: last + 1,
            termination: Termination::Natural,
            error_estimate: 0.0,
        });
    }

    let mut small = 0usize;
    let mut growth = 0usize;
    let mut prev_mag = 1.0f64;
    for n in 1..cfg.max_terms {
        term *= ratio(n)?;
        sum += term;
        let mag = term.norm();
        if !mag.is_finite() {
            return Err(Error::Divergence(format!(
                "series term {n} is not finite; the series diverges for this argument"
            )));
        }
        if mag < cfg.rel_tol * sum.norm() + cfg.abs_tol {
            small += 1;
            if small >= cfg.small_window {
                let neglected = (term * ratio(n + 1)?).norm();
                return Ok(SeriesResult {
                    value: sum,
                    terms_used: n + 1,
                    termination: Termination::ToleranceReached,
                    error_estimate: neglected,
                });
            }
        } else {
            small = 0;
        }
        if n > 10 && mag > prev_mag {
            growth += 1;
            if growth >= cfg.growth_window {
                return Err(Error::Divergence(format!(
                    "term magnitude grew for {} consecutive terms (term {n} ~ {mag:.3e}); \
                     the series diverges for this argument",
                    cfg.growth_window
                )));
            }
        } else {
            growth = 0;
        }
        prev_mag = mag;
    }
    let neglected = (term * ratio(cfg.max_terms)?).norm();
    Ok(SeriesResult {
        value: sum,
        terms_used: cfg.max_terms,
        termination: Termination::MaxTermsReached,
        error_estimate: neglected,
    })
}

/// Upfront structural analysis shared by the evaluators: earliest natural
/// termination of the upper factorials and earliest term at which a vanishing
/// denominator factor would enter.
fn check_poles(natural: Option<usize>, pole_term: Option<usize>) -> Result<()> {
    if let Some(np) = pole_term {
        let harmless = matches!(natural, Some(kn) if np > kn);
        if !harmless {
            return Err(Error::Pole(format!(
                "a denominator shifted-factorial factor vanishes at term {np}, \
                 before the series terminates"
            )));
        }
    }
    Ok(())
}

/// Evaluates the classical basic hypergeometric series
/// `rphi_s(a_1..a_r; b_1..b_s; q, z)`.
///
/// This evaluator is deliberately independent of the twin-basic engine so
/// that the `(1, q)` reduction can be cross-checked between the two.
pub fn eval_q_hypergeometric(
    upper: &[Complex64],
    lower: &[Complex64],
    q: Complex64,
    z: Complex64,
    cfg: &EvalConfig,
) -> Result<SeriesResult> {
    cfg.validate()?;
    let e = 1 + lower.len() as i32 - upper.len() as i32;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let cbase = PQBase::classical(q);

    let natural = upper
        .iter()
        .filter_map(|&a| detect_termination(PQPair::new(one, a), cbase, cfg.max_terms))
        .min();
    let pole_term = lower
        .iter()
        .filter_map(|&b| detect_termination(PQPair::new(one, b), cbase, cfg.max_terms))
        .chain(detect_termination(PQPair::new(one, q), cbase, cfg.max_terms))
        .map(|k| k + 1)
        .min();
    check_poles(natural, pole_term)?;
    if natural.is_none() && q.norm() >= 1.0 {
        return Err(Error::Convergence(format!(
            "|q| = {} >= 1 and the series does not terminate",
            q.norm()
        )));
    }
    if q == zero && e < 0 && !matches!(natural, Some(k) if k <= 1) {
        return Err(Error::Divergence(
            "balance factor is singular: q = 0 with more upper than lower parameters".to_string(),
        ));
    }

    let upper = upper.to_vec();
    let lower = lower.to_vec();
    let sigma = if e.rem_euclid(2) == 1 { -one } else { one };
    let gamma = ipow(q, e);
    let mut qk = one; // q^(n-1)
    let mut qn = q; //   q^n
    let mut gk = one; // gamma^(n-1)
    sum_series(cfg, natural, move |_n| {
        let mut num = z * sigma * gk;
        for &a in &upper {
            num *= one - a * qk;
        }
        let mut den = one - qn;
        for &b in &lower {
            den *= one - b * qk;
        }
        if den == zero {
            return Err(Error::Pole(
                "denominator factor vanished during summation".to_string(),
            ));
        }
        qk *= q;
        qn *= q;
        gk *= gamma;
        Ok(num / den)
    })
}

/// Evaluates the twin-basic hypergeometric series defined by `spec`.
///
/// Requires `|Q/P| < 1` unless an upper shifted factorial vanishes, in which
/// case the series is a polynomial and is summed exactly for any base.
pub fn eval_pq_hypergeometric(spec: &SeriesSpec, cfg: &EvalConfig) -> Result<SeriesResult> {
    cfg.validate()?;
    let base = spec.base;
    let e = 1 + spec.denominator.len() as i32 - spec.numerator.len() as i32;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);

    let natural = spec
        .numerator
        .iter()
        .filter_map(|&pair| detect_termination(pair, base, cfg.max_terms))
        .min();
    let pole_term = spec
        .denominator
        .iter()
        .filter_map(|&pair| detect_termination(pair, base, cfg.max_terms))
        .chain(detect_termination(
            PQPair::new(base.p, base.q),
            base,
            cfg.max_terms,
        ))
        .map(|k| k + 1)
        .min();
    check_poles(natural, pole_term)?;

    if base.p == zero {
        // Without the P^k normalization the recurrence only makes sense for
        // a terminating, balance-free series.
        if natural.is_some() && e == 0 {
            return sum_pair_series_zero_p(spec, cfg, natural);
        }
        return Err(Error::Domain(
            "series base requires a nonzero p-component unless the series terminates \
             with matching parameter counts"
                .to_string(),
        ));
    }
    let rho = base.q / base.p;
    if natural.is_none() && rho.norm() >= 1.0 {
        return Err(Error::Convergence(format!(
            "|Q/P| = {} >= 1 and the series does not terminate",
            rho.norm()
        )));
    }
    if rho == zero && e < 0 && !matches!(natural, Some(k) if k <= 1) {
        return Err(Error::Divergence(
            "balance factor is singular: Q = 0 with more upper than lower doublets".to_string(),
        ));
    }

    let upper = spec.numerator.clone();
    let lower = spec.denominator.clone();
    let zp = spec.z / base.p;
    let sigma = if e.rem_euclid(2) == 1 { -one } else { one };
    let gamma = ipow(rho / base.p, e);
    let mut rho_k = one; // rho^(n-1), normalizes the new factorial factors
    let mut rho_n = rho; // rho^n, normalizes the new base-factorial factor
    let mut gk = one; //    gamma^(n-1), the balance-factor increment
    sum_series(cfg, natural, move |_n| {
        let mut num = zp * sigma * gk;
        for pair in &upper {
            num *= pair.p - pair.q * rho_k;
        }
        let mut den = one - rho_n;
        for pair in &lower {
            den *= pair.p - pair.q * rho_k;
        }
        if den == zero {
            return Err(Error::Pole(
                "denominator factor vanished during summation".to_string(),
            ));
        }
        rho_k *= rho;
        rho_n *= rho;
        gk *= gamma;
        Ok(num / den)
    })
}

/// Terminating, balance-free series over a base with `P = 0`, summed with
/// raw (unnormalized) factors.
fn sum_pair_series_zero_p(
    spec: &SeriesSpec,
    cfg: &EvalConfig,
    natural: Option<usize>,
) -> Result<SeriesResult> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let upper = spec.numerator.clone();
    let lower = spec.denominator.clone();
    let base = spec.base;
    let z = spec.z;
    let mut pk = one; // P^(n-1)
    let mut qk = one; // Q^(n-1)
    let mut qqn = base.q; // Q^n; the base factorial factor is P^n - Q^n = -Q^n here
    sum_series(cfg, natural, move |_n| {
        let mut num = z;
        for pair in &upper {
            num *= pair.p * pk - pair.q * qk;
        }
        let mut den = -qqn;
        for pair in &lower {
            den *= pair.p * pk - pair.q * qk;
        }
        if den == zero {
            return Err(Error::Pole(
                "denominator factor vanished during summation".to_string(),
            ));
        }
        pk *= base.p;
        qk *= base.q;
        qqn *= base.q;
        Ok(num / den)
    })
}

/// Evaluates the twin-basic series in exponent form: upper parameters
/// `q~^alpha_i`, lower parameters `q~^beta_j`, written through rising
/// twin-basic numbers,
///
/// ```text
/// term_n = prod_i ([alpha_i])_n / ( prod_j ([beta_j])_n * [n]! )
///          * B(n) / (P - Q)^(n(1+s-r)) * z^n .
/// ```
///
/// Dual route to [`eval_pq_hypergeometric`] applied to the doublets
/// `(P^alpha_i, Q^alpha_i)`; the two must agree wherever both converge.
pub fn eval_pq_hypergeometric_exponents(
    alphas: &[Complex64],
    betas: &[Complex64],
    base: PQBase,
    z: Complex64,
    cfg: &EvalConfig,
) -> Result<SeriesResult> {
    cfg.validate()?;
    let e = 1 + betas.len() as i32 - alphas.len() as i32;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let degenerate = base.is_degenerate();

    // A rising factor [x + k] vanishes where the corresponding power doublet
    // factor P^(x+k) - Q^(x+k) does -- except over a degenerate base, where
    // [x + k] = (x + k) P^(x+k-1) vanishes only at x + k = 0.
    let detect_exponent = |x: Complex64| -> Result<Option<usize>> {
        if degenerate {
            if x.im == 0.0 && x.re <= 0.0 && x.re.fract() == 0.0 && -x.re < cfg.max_terms as f64 {
                return Ok(Some(-x.re as usize));
            }
            return Ok(None);
        }
        Ok(detect_termination(
            crate::base::pq_power(base, x)?,
            base,
            cfg.max_terms,
        ))
    };

    let mut natural: Option<usize> = None;
    for &alpha in alphas {
        if let Some(k) = detect_exponent(alpha)? {
            natural = Some(natural.map_or(k, |m: usize| m.min(k)));
        }
    }
    let mut pole_term: Option<usize> = None;
    let mut note_pole = |k: usize| {
        let term = k + 1;
        pole_term = Some(pole_term.map_or(term, |m: usize| m.min(term)));
    };
    for &beta in betas {
        if let Some(k) = detect_exponent(beta)? {
            note_pole(k);
        }
    }
    if degenerate {
        // [n]! = n! P^(...) never vanishes, but (P - Q)^(n(1+s-r)) is a hard
        // zero in every denominator once n >= 1.
        if e > 0 {
            note_pole(0);
        }
    } else if let Some(k) =
        detect_termination(PQPair::new(base.p, base.q), base, cfg.max_terms)
    {
        note_pole(k);
    }
    check_poles(natural, pole_term)?;

    let rho = if base.p == zero {
        if natural.is_none() || e != 0 {
            return Err(Error::Domain(
                "series base requires a nonzero p-component unless the series terminates \
                 with matching parameter counts"
                    .to_string(),
            ));
        }
        zero // only reached with e = 0, where the balance factor is constant
    } else {
        base.q / base.p
    };
    if natural.is_none() && rho.norm() >= 1.0 {
        return Err(Error::Convergence(format!(
            "|Q/P| = {} >= 1 and the series does not terminate",
            rho.norm()
        )));
    }
    if rho == zero && base.p != zero && e < 0 && !matches!(natural, Some(k) if k <= 1) {
        return Err(Error::Divergence(
            "balance factor is singular: Q = 0 with more upper than lower exponents".to_string(),
        ));
    }

    let alphas = alphas.to_vec();
    let betas = betas.to_vec();
    let sigma = if e.rem_euclid(2) == 1 { -one } else { one };
    let balance_scale = ipow(base.p - base.q, -e); // (P-Q)^(-e) per step
    let mut rho_k = one;
    sum_series(cfg, natural, move |n| {
        let mut num = z * sigma * ipow(rho_k, e) * balance_scale;
        for &alpha in &alphas {
            num *= crate::base::pq_number(alpha + Complex64::new((n - 1) as f64, 0.0), base)?;
        }
        let mut den = crate::base::pq_number(Complex64::new(n as f64, 0.0), base)?;
        for &beta in &betas {
            den *= crate::base::pq_number(beta + Complex64::new((n - 1) as f64, 0.0), base)?;
        }
        if den == zero {
            return Err(Error::Pole(
                "denominator rising factor vanished during summation".to_string(),
            ));
        }
        rho_k *= rho;
        Ok(num / den)
    })
}

/// The parameters of the one-parameter reduction: `rho = Q/P` and the
/// rescaled argument `omega = P^(sum alpha - sum beta - 1) z`.
pub fn rho_omega_transform(
    alphas: &[Complex64],
    betas: &[Complex64],
    base: PQBase,
    z: Complex64,
) -> Result<(Complex64, Complex64)> {
    let rho = base.ratio()?;
    let exponent = alphas.iter().sum::<Complex64>()
        - betas.iter().sum::<Complex64>()
        - Complex64::new(1.0, 0.0);
    Ok((rho, cpow(base.p, exponent) * z))
}

/// Evaluates the exponent-form series with `s = r - 1` through its exact
/// one-parameter reduction
/// `rphi_(r-1)(rho^alpha_1..; rho^beta_1..; rho, omega)`.
///
/// For this parameter balance the twin-basic balance factor is identically
/// one and the reduction is an identity, giving a second, structurally
/// different route to the same value as [`eval_pq_hypergeometric_exponents`].
pub fn eval_via_burban_klimyk(
    alphas: &[Complex64],
    betas: &[Complex64],
    base: PQBase,
    z: Complex64,
    cfg: &EvalConfig,
) -> Result<SeriesResult> {
    if betas.len() + 1 != alphas.len() {
        return Err(Error::Arity(format!(
            "one-parameter reduction needs exactly one more upper than lower exponent, \
             got {} upper and {} lower",
            alphas.len(),
            betas.len()
        )));
    }
    let (rho, omega) = rho_omega_transform(alphas, betas, base, z)?;
    let upper: Vec<Complex64> = alphas.iter().map(|&a| cpow(rho, a)).collect();
    let lower: Vec<Complex64> = betas.iter().map(|&b| cpow(rho, b)).collect();
    eval_q_hypergeometric(&upper, &lower, rho, omega, cfg)
}

/// Evaluates `spec` with the upper doublet at `which` replaced by its
/// parameter-to-infinity limit: `(0, 1)` when the q-component grows (the
/// argument already rescaled by the caller), `(1, 0)` when the p-component
/// grows.
pub fn limit_parameter_series(
    spec: &SeriesSpec,
    which: usize,
    direction: LimitDirection,
    cfg: &EvalConfig,
) -> Result<SeriesResult> {
    if which >= spec.numerator.len() {
        return Err(Error::Domain(format!(
            "upper doublet index {which} out of range ({} upper doublets)",
            spec.numerator.len()
        )));
    }
    let mut limited = spec.clone();
    limited.numerator[which] = match direction {
        LimitDirection::PComponent => PQPair::new(1.0, 0.0),
        LimitDirection::QComponent => PQPair::new(0.0, 1.0),
    };
    eval_pq_hypergeometric(&limited, cfg)
}
