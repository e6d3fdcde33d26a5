//! Identity checks and special series built from the twin-basic machinery.
//!
//! The checks in this module each compute both sides of an identity through
//! structurally different code paths and report the residual, so that a
//! passing check certifies the series engine, the product engine and the
//! identity itself against one another:
//!
//! * **Binomial theorem** ([`check_pq_binomial`]): the one-doublet series
//!   `1Phi0((ap,aq); ; (P,Q), z)` equals the factorwise ratio of two infinite
//!   shifted factorials, `((P, aq z); q~)_inf / ((P, ap z); q~)_inf`.
//! * **Product invariance** ([`product_permutation_check`]): in a product of
//!   binomial series the p-components and q-components of the doublets can be
//!   permuted independently without changing the value, because each series
//!   contributes its p-component only to denominator factors and its
//!   q-component only to numerator factors.
//! * **Unit products** ([`product_unit_check`]): when the multiset of
//!   p-components equals the multiset of q-components all factors cancel and
//!   the product of series is exactly one.  The classical special case is
//!   Euler's pair of q-exponentials, `e_q(z) E_q(-z) = 1`
//!   ([`check_exp_identity`]).
//!
//! [`q_exp_small`] and [`q_exp_big`] evaluate Euler's q-exponentials.  Both
//! apply the functional equations `e_q(z) = e_q(qz)/(1-z)` and
//! `E_q(z) = (1+z) E_q(qz)` until the argument is small; this sidesteps the
//! heavy cancellation the raw alternating series suffers near the unit
//! circle (and, for `E_q`, extends evaluation to all of the complex plane).
//!
//! [`pq_exponential`] sums the twin-basic exponential
//! `sum z^n / [n]!`, and [`fibonacci_sequence`] iterates the three-term
//! recurrence `F_(m+1) = (P+Q) F_m - PQ F_(m-1)` solved by the twin-basic
//! numbers, which reproduces the classical Fibonacci and Mersenne sequences
//! for suitable bases.

use num_complex::Complex64;

use crate::base::{pq_number, pq_shifted_factorial_ratio_inf, PQBase, PQPair};
use crate::config::EvalConfig;
use crate::error::{Error, Result};
use crate::series::{eval_pq_hypergeometric, sum_series, SeriesResult, SeriesSpec};

/// Both sides of a checked identity together with residuals and verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityReport {
    /// Left-hand side as computed.
    pub lhs: Complex64,
    /// Right-hand side as computed.
    pub rhs: Complex64,
    /// `|lhs - rhs|`.
    pub abs_residual: f64,
    /// `|lhs - rhs| / max(|lhs|, |rhs|, tiny)`.
    pub rel_residual: f64,
    /// Whether the relative residual is within the requested tolerance.
    pub passed: bool,
}

impl IdentityReport {
    /// Builds a report from two computed sides and a relative tolerance.
    pub fn new(lhs: Complex64, rhs: Complex64, tol: f64) -> Self {
        let abs_residual = (lhs - rhs).norm();
        let rel_residual = abs_residual / lhs.norm().max(rhs.norm()).max(1e-300);
        IdentityReport {
            lhs,
            rhs,
            abs_residual,
            rel_residual,
            passed: rel_residual <= tol,
        }
    }
}

/// The binomial series for one doublet: `1Phi0((ap,aq); ; base, z)`.
fn binomial_series(a: PQPair, base: PQBase, z: Complex64, cfg: &EvalConfig) -> Result<Complex64> {
    let spec = SeriesSpec {
        numerator: vec![a],
        denominator: vec![],
        base,
        z,
    };
    Ok(eval_pq_hypergeometric(&spec, cfg)?.value)
}

/// Checks the twin-basic binomial theorem for one doublet: the series
/// `1Phi0((ap,aq); ; base, z)` against the infinite-product ratio
/// `((P, aq z); q~)_inf / ((P, ap z); q~)_inf`, computed factor by factor.
pub fn check_pq_binomial(
    a: PQPair,
    base: PQBase,
    z: Complex64,
    cfg: &EvalConfig,
    tol: f64,
) -> Result<IdentityReport> {
    let lhs = binomial_series(a, base, z, cfg)?;
    let rhs = pq_shifted_factorial_ratio_inf(
        PQPair::new(base.p, a.q * z),
        PQPair::new(base.p, a.p * z),
        base,
        cfg,
    )?;
    Ok(IdentityReport::new(lhs, rhs, tol))
}

fn validate_permutation(perm: &[usize], m: usize, which: &str) -> Result<()> {
    if perm.len() != m {
        return Err(Error::Domain(format!(
            "{which} permutation has length {}, expected {m}",
            perm.len()
        )));
    }
    let mut seen = vec![false; m];
    for &i in perm {
        if i >= m || seen[i] {
            return Err(Error::Domain(format!(
                "{which} permutation is not a bijection on 0..{m}"
            )));
        }
        seen[i] = true;
    }
    Ok(())
}

/// Checks that a product of binomial series is invariant under independent
/// permutations of the doublets' p-components and q-components.
///
/// The left side multiplies `1Phi0` series over `pairs` as given; the right
/// side uses the reassembled doublets
/// `(pairs[perm_p[i]].p, pairs[perm_q[i]].q)`.
pub fn product_permutation_check(
    pairs: &[PQPair],
    base: PQBase,
    z: Complex64,
    perm_p: &[usize],
    perm_q: &[usize],
    cfg: &EvalConfig,
    tol: f64,
) -> Result<IdentityReport> {
    validate_permutation(perm_p, pairs.len(), "p-component")?;
    validate_permutation(perm_q, pairs.len(), "q-component")?;
    let mut lhs = Complex64::new(1.0, 0.0);
    for &pair in pairs {
        lhs *= binomial_series(pair, base, z, cfg)?;
    }
    let mut rhs = Complex64::new(1.0, 0.0);
    for i in 0..pairs.len() {
        let shuffled = PQPair::new(pairs[perm_p[i]].p, pairs[perm_q[i]].q);
        rhs *= binomial_series(shuffled, base, z, cfg)?;
    }
    Ok(IdentityReport::new(lhs, rhs, tol))
}

/// Checks a product of binomial series against the constant one.
///
/// The product collapses to unity exactly when the multiset of p-components
/// of `pairs` coincides with the multiset of q-components (every numerator
/// factor then cancels a denominator factor); the caller is expected to pass
/// such a family, e.g. doublets obtained by cyclically shifting one
/// component list against the other.
pub fn product_unit_check(
    pairs: &[PQPair],
    base: PQBase,
    z: Complex64,
    cfg: &EvalConfig,
    tol: f64,
) -> Result<IdentityReport> {
    let mut lhs = Complex64::new(1.0, 0.0);
    for &pair in pairs {
        lhs *= binomial_series(pair, base, z, cfg)?;
    }
    Ok(IdentityReport::new(lhs, Complex64::new(1.0, 0.0), tol))
}

/// How far the argument is reduced before summing a q-exponential series.
const EXP_REDUCE_RADIUS: f64 = 0.1;
/// Cap on functional-equation steps (only binding for `|q|` extremely close
/// to one, where the series is out of floating-point reach anyway).
const EXP_REDUCE_MAX_STEPS: usize = 1_000_000;

/// Euler's small q-exponential `e_q(z) = sum z^n / (q;q)_n = 1/((z;q)_inf)`,
/// defined for `|q| < 1, |z| < 1`.
///
/// Uses `e_q(z) = e_q(qz) / (1-z)` to shrink the argument below
/// [`EXP_REDUCE_RADIUS`] before summing, which keeps the relative error near
/// machine precision even close to the unit circle.
pub fn q_exp_small(q: Complex64, z: Complex64, cfg: &EvalConfig) -> Result<Complex64> {
    cfg.validate()?;
    if q.norm() >= 1.0 {
        return Err(Error::Convergence(format!(
            "e_q is defined for |q| < 1, got |q| = {}",
            q.norm()
        )));
    }
    if z.norm() >= 1.0 {
        return Err(Error::Convergence(format!(
            "the e_q series converges for |z| < 1, got |z| = {}",
            z.norm()
        )));
    }
    let one = Complex64::new(1.0, 0.0);
    let mut prefactor = one; // prod (1 - q^j z) over the reduction steps
    let mut w = z;
    let mut steps = 0usize;
    while w.norm() > EXP_REDUCE_RADIUS {
        prefactor *= one - w;
        w *= q;
        steps += 1;
        if steps >= EXP_REDUCE_MAX_STEPS {
            return Err(Error::Convergence(
                "argument reduction stalled: |q| is too close to one".to_string(),
            ));
        }
    }
    let spec = SeriesSpec {
        numerator: vec![PQPair::new(1.0, 0.0)],
        denominator: vec![],
        base: PQBase::classical(q),
        z: w,
    };
    Ok(eval_pq_hypergeometric(&spec, cfg)?.value / prefactor)
}

/// Euler's big q-exponential
/// `E_q(z) = sum q^(n(n-1)/2) z^n / (q;q)_n = (-z;q)_inf`, entire in `z` for
/// `|q| < 1`.
///
/// Uses `E_q(z) = (1+z) E_q(qz)` to shrink the argument below
/// [`EXP_REDUCE_RADIUS`] before summing, avoiding the cancellation of the
/// raw alternating series and extending evaluation to large arguments.
pub fn q_exp_big(q: Complex64, z: Complex64, cfg: &EvalConfig) -> Result<Complex64> {
    cfg.validate()?;
    if q.norm() >= 1.0 {
        return Err(Error::Convergence(format!(
            "E_q is defined for |q| < 1, got |q| = {}",
            q.norm()
        )));
    }
    let one = Complex64::new(1.0, 0.0);
    let mut prefactor = one; // prod (1 + q^j z) over the reduction steps
    let mut w = z;
    let mut steps = 0usize;
    while w.norm() > EXP_REDUCE_RADIUS {
        prefactor *= one + w;
        w *= q;
        steps += 1;
        if steps >= EXP_REDUCE_MAX_STEPS {
            return Err(Error::Convergence(
                "argument reduction stalled: |q| is too close to one".to_string(),
            ));
        }
    }
    // The (0,1)-doublet series evaluates sum (-1)^n q^(n(n-1)/2) u^n/(q;q)_n
    // = E_q(-u); feed it u = -w.
    let spec = SeriesSpec {
        numerator: vec![PQPair::new(0.0, 1.0)],
        denominator: vec![],
        base: PQBase::classical(q),
        z: -w,
    };
    Ok(prefactor * eval_pq_hypergeometric(&spec, cfg)?.value)
}

/// Checks Euler's identity `e_q(z) E_q(-z) = 1`.
pub fn check_exp_identity(
    q: Complex64,
    z: Complex64,
    cfg: &EvalConfig,
    tol: f64,
) -> Result<IdentityReport> {
    let lhs = q_exp_small(q, z, cfg)? * q_exp_big(q, -z, cfg)?;
    Ok(IdentityReport::new(lhs, Complex64::new(1.0, 0.0), tol))
}

/// The twin-basic exponential `sum_(n>=0) z^n / [n]!` over the given base,
/// summed under the adaptive truncation policy.
///
/// Fails with a pole error if some `[n]` vanishes (e.g. bases with
/// `P^n = Q^n`) and with a divergence error outside the (base-dependent)
/// radius of convergence.
pub fn pq_exponential(base: PQBase, z: Complex64, cfg: &EvalConfig) -> Result<SeriesResult> {
    cfg.validate()?;
    let zero = Complex64::new(0.0, 0.0);
    sum_series(cfg, None, move |n| {
        let fac = pq_number(Complex64::new(n as f64, 0.0), base)?;
        if fac == zero {
            return Err(Error::Pole(format!(
                "[{n}] = 0 for this base; the twin-basic exponential has a vanishing factorial"
            )));
        }
        Ok(z / fac)
    })
}

/// The twin-basic derivative of the monomial `z^n`, returned as
/// `(coefficient, exponent)`: `D z^n = [n] z^(n-1)`, with `D 1 = 0`.
pub fn pq_derivative_monomial(n: u32, base: PQBase) -> Result<(Complex64, u32)> {
    if n == 0 {
        return Ok((Complex64::new(0.0, 0.0), 0));
    }
    let coeff = pq_number(Complex64::new(n as f64, 0.0), base)?;
    Ok((coeff, n - 1))
}

/// The twin-basic antiderivative of the monomial `z^n`, returned as
/// `(coefficient, exponent)`: `z^n -> z^(n+1) / [n+1]`.
///
/// Inverts [`pq_derivative_monomial`]; fails with a pole error when
/// `[n+1] = 0`.
pub fn pq_integral_monomial(n: u32, base: PQBase) -> Result<(Complex64, u32)> {
    let next = pq_number(Complex64::new((n + 1) as f64, 0.0), base)?;
    if next == Complex64::new(0.0, 0.0) {
        return Err(Error::Pole(format!(
            "[{}] = 0 for this base; the monomial z^{n} has no twin-basic antiderivative",
            n + 1
        )));
    }
    Ok((Complex64::new(1.0, 0.0) / next, n + 1))
}

/// The first `n_max + 1` values of the generalized Fibonacci recurrence
/// `F_0 = 0, F_1 = 1, F_(m+1) = (P+Q) F_m - PQ F_(m-1)`, whose solution is
/// the sequence of twin-basic numbers `[m]`.
///
/// Base `(2, 1)` gives the Mersenne numbers `2^m - 1`; the base formed by
/// the golden ratio and its conjugate gives the classical Fibonacci numbers.
pub fn fibonacci_sequence(base: PQBase, n_max: usize) -> Vec<Complex64> {
    let mut seq = Vec::with_capacity(n_max + 1);
    seq.push(Complex64::new(0.0, 0.0));
    if n_max == 0 {
        return seq;
    }
    seq.push(Complex64::new(1.0, 0.0));
    let s = base.p + base.q;
    let prod = base.p * base.q;
    for m in 1..n_max {
        let next = s * seq[m] - prod * seq[m - 1];
        seq.push(next);
    }
    seq
}
