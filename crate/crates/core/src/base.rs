//! Twin-basic numbers and shifted factorials.
//!
//! The objects here live over a *base doublet* `(P, Q)` of complex numbers.
//! The basic building blocks are
//!
//! * the twin-basic number       `[x] = (P^x - Q^x) / (P - Q)`,
//! * the rising product          `([x])_n = [x][x+1]...[x+n-1]`,
//! * the shifted factorial       `((xp,xq);(P,Q))_n = prod_{k<n} (xp P^k - xq Q^k)`,
//!
//! which all collapse to their one-parameter q-analogues when `P = 1`, and to
//! the ordinary integers/factorials when additionally `Q -> 1`.  Complex
//! powers use the principal branch throughout; exact small-integer exponents
//! take a repeated-squaring fast path so that integer bases produce exact
//! integer results.

use num_complex::Complex64;

use crate::config::EvalConfig;
use crate::error::{Error, Result};

/// Relative threshold below which a base is treated as degenerate (`P = Q`)
/// and twin-basic numbers switch to their analytic limit `x P^(x-1)`.
pub(crate) const DEGENERATE_EPS: f64 = 1e-14;

/// Relative threshold for detecting a vanishing shifted-factorial factor.
pub(crate) const TERMINATION_EPS: f64 = 1e-13;

/// The base doublet `(P, Q)` of the twin-basic calculus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PQBase {
    /// First component `P`.
    pub p: Complex64,
    /// Second component `Q`.
    pub q: Complex64,
}

impl PQBase {
    /// Builds a base from its two components.
    pub fn new(p: impl Into<Complex64>, q: impl Into<Complex64>) -> Self {
        PQBase {
            p: p.into(),
            q: q.into(),
        }
    }

    /// The classical base `(1, q)`, under which every operation reduces to
    /// its one-parameter q-analogue.
    pub fn classical(q: impl Into<Complex64>) -> Self {
        PQBase::new(Complex64::new(1.0, 0.0), q)
    }

    /// Ratio `Q / P`, the modulus that governs series convergence.
    pub fn ratio(&self) -> Result<Complex64> {
        if self.p == Complex64::new(0.0, 0.0) {
            return Err(Error::Domain(
                "base ratio Q/P undefined: P = 0".to_string(),
            ));
        }
        Ok(self.q / self.p)
    }

    /// True when `P` and `Q` coincide to relative precision `1e-14`; the
    /// twin-basic number then takes its analytic limit.
    pub fn is_degenerate(&self) -> bool {
        let scale = self.p.norm().max(self.q.norm()).max(1.0);
        (self.p - self.q).norm() < DEGENERATE_EPS * scale
    }
}

impl From<(f64, f64)> for PQBase {
    fn from((p, q): (f64, f64)) -> Self {
        PQBase::new(p, q)
    }
}

impl From<(Complex64, Complex64)> for PQBase {
    fn from((p, q): (Complex64, Complex64)) -> Self {
        PQBase::new(p, q)
    }
}

/// A parameter doublet `(xp, xq)` entering a shifted factorial.
///
/// Under the classical base the pair `(1, a)` plays the role of the
/// q-series parameter `a`; the degenerate pairs `(1, 0)` and `(0, 1)` are
/// the limiting parameters of the two q-exponentials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PQPair {
    /// Component multiplying powers of `P`.
    pub p: Complex64,
    /// Component multiplying powers of `Q`.
    pub q: Complex64,
}

impl PQPair {
    /// Builds a pair from its two components.
    pub fn new(p: impl Into<Complex64>, q: impl Into<Complex64>) -> Self {
        PQPair {
            p: p.into(),
            q: q.into(),
        }
    }
}

impl From<(f64, f64)> for PQPair {
    fn from((p, q): (f64, f64)) -> Self {
        PQPair::new(p, q)
    }
}

impl From<(Complex64, Complex64)> for PQPair {
    fn from((p, q): (Complex64, Complex64)) -> Self {
        PQPair::new(p, q)
    }
}

/// Principal-branch complex power with an exact fast path for small integer
/// exponents, so that e.g. `2^3 = 8` holds bit-exactly.
///
/// `0^0 = 1` by convention; `0` raised to an exponent with negative real part
/// yields an infinity (callers that consider this a domain violation check
/// before calling).
pub(crate) fn cpow(b: Complex64, e: Complex64) -> Complex64 {
    let zero = Complex64::new(0.0, 0.0);
    if e == zero {
        return Complex64::new(1.0, 0.0);
    }
    if e.im == 0.0 && e.re.fract() == 0.0 && e.re.abs() <= 512.0 {
        if b == zero {
            return if e.re > 0.0 {
                zero
            } else {
                Complex64::new(f64::INFINITY, 0.0)
            };
        }
        return b.powi(e.re as i32);
    }
    if b == zero {
        return if e.re > 0.0 {
            zero
        } else {
            Complex64::new(f64::INFINITY, f64::INFINITY)
        };
    }
    b.powc(e)
}

/// The q-number `[x]_q = (1 - q^x) / (1 - q)`.
///
/// Within `1e-14` of `q = 1` the analytic limit `x` is returned.
pub fn q_number(x: Complex64, q: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if (one - q).norm() < DEGENERATE_EPS {
        return x;
    }
    (one - cpow(q, x)) / (one - q)
}

/// The twin-basic number `[x] = (P^x - Q^x) / (P - Q)`.
///
/// For a degenerate base the analytic limit `x P^(x-1)` is returned.  Under
/// the classical base `(1, q)` this is exactly `[x]_q`.
pub fn pq_number(x: Complex64, base: PQBase) -> Result<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    if x == zero {
        return Ok(zero); // [0] = 0 for every base, including degenerate ones
    }
    if x.re < 0.0 && (base.p == zero || base.q == zero) {
        return Err(Error::Domain(format!(
            "[{}] undefined: zero base component raised to a power with negative real part",
            x
        )));
    }
    if base.is_degenerate() {
        return Ok(x * cpow(base.p, x - Complex64::new(1.0, 0.0)));
    }
    Ok((cpow(base.p, x) - cpow(base.q, x)) / (base.p - base.q))
}

/// The twin-basic number in factored form `P^(x-1) [x]_rho` with
/// `rho = Q/P`.  Agrees with [`pq_number`] away from degenerate bases and is
/// the bridge between the twin-basic and the one-parameter theories.
pub fn pq_number_factored(x: Complex64, base: PQBase) -> Result<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    if x == zero {
        return Ok(zero);
    }
    let rho = base.ratio()?;
    if x.re < 0.0 && base.q == zero {
        return Err(Error::Domain(format!(
            "[{}] undefined: zero base component raised to a power with negative real part",
            x
        )));
    }
    let prefactor = cpow(base.p, x - Complex64::new(1.0, 0.0));
    Ok(prefactor * q_number(x, rho))
}

/// Rising product `([x])_n = [x][x+1]...[x+n-1]`; empty product for `n = 0`.
pub fn pq_rising(x: Complex64, n: usize, base: PQBase) -> Result<Complex64> {
    let mut acc = Complex64::new(1.0, 0.0);
    for k in 0..n {
        acc *= pq_number(x + Complex64::new(k as f64, 0.0), base)?;
    }
    Ok(acc)
}

/// Twin-basic factorial `[n]! = [1][2]...[n]`, with `[0]! = 1`.
pub fn pq_factorial(n: usize, base: PQBase) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for m in 1..=n {
        let factor = pq_number(Complex64::new(m as f64, 0.0), base)
            .expect("[m] with positive integer m is defined for every base");
        acc *= factor;
    }
    acc
}

/// The q-shifted factorial `(x;q)_n = prod_{k<n} (1 - x q^k)`.
pub fn q_shifted_factorial(x: Complex64, q: Complex64, n: usize) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let mut qk = one;
    let mut acc = one;
    for _ in 0..n {
        acc *= one - x * qk;
        qk *= q;
    }
    acc
}

/// The twin-basic shifted factorial
/// `((xp,xq);(P,Q))_n = prod_{k<n} (xp P^k - xq Q^k)`.
///
/// With the pair `(1, x)` and base `(1, q)` this is `(x;q)_n`.
pub fn pq_shifted_factorial(pair: PQPair, base: PQBase, n: usize) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let mut pk = one;
    let mut qk = one;
    let mut acc = one;
    for _ in 0..n {
        acc *= pair.p * pk - pair.q * qk;
        pk *= base.p;
        qk *= base.q;
    }
    acc
}

/// Product of shifted factorials over several pairs at a common base and
/// order; the empty list gives 1.
pub fn multi_shifted_factorial(pairs: &[PQPair], base: PQBase, n: usize) -> Complex64 {
    pairs
        .iter()
        .map(|pair| pq_shifted_factorial(*pair, base, n))
        .product()
}

/// Ratio of two infinite shifted factorials
/// `((np,nq);(P,Q))_inf / ((dp,dq);(P,Q))_inf`, evaluated factor by factor.
///
/// The separate infinite products diverge whenever `|P| != 1`, so only the
/// factor-wise ratio is meaningful; it converges exactly when the two
/// p-components agree and `|Q/P| < 1`.  Truncation follows `cfg`: the running
/// product stops once `small_window` consecutive factors are within
/// `rel_tol` of one.
pub fn pq_shifted_factorial_ratio_inf(
    num: PQPair,
    den: PQPair,
    base: PQBase,
    cfg: &EvalConfig,
) -> Result<Complex64> {
    cfg.validate()?;
    let scale = num.p.norm().max(den.p.norm());
    if (num.p - den.p).norm() > 1e-14 * scale {
        return Err(Error::Domain(format!(
            "infinite factorial ratio requires matching p-components, got {} and {}",
            num.p, den.p
        )));
    }
    let rho = base.ratio().map_err(|_| {
        Error::Domain("infinite factorial ratio requires |Q/P| < 1, got P = 0".to_string())
    })?;
    if rho.norm() >= 1.0 {
        return Err(Error::Domain(format!(
            "infinite factorial ratio requires |Q/P| < 1, got |Q/P| = {}",
            rho.norm()
        )));
    }
    if num == den {
        return Ok(Complex64::new(1.0, 0.0));
    }

    // Normalizing the k-th factors by P^k leaves (xp - xq rho^k), which tends
    // to the common xp; the factor ratio therefore tends to one.
    let one = Complex64::new(1.0, 0.0);
    let mut rk = one;
    let mut acc = one;
    let mut settled = 0usize;
    for _ in 0..cfg.max_terms {
        let denominator = den.p - den.q * rk;
        if denominator.norm() < cfg.abs_tol {
            return Err(Error::Pole(format!(
                "denominator factor vanished in infinite factorial ratio (pair ({}, {}))",
                den.p, den.q
            )));
        }
        let factor = (num.p - num.q * rk) / denominator;
        acc *= factor;
        if (factor - one).norm() < cfg.rel_tol {
            settled += 1;
            if settled >= cfg.small_window {
                return Ok(acc);
            }
        } else {
            settled = 0;
        }
        rk *= rho;
    }
    Err(Error::Convergence(format!(
        "infinite factorial ratio did not settle within {} factors",
        cfg.max_terms
    )))
}

/// Componentwise power of the base: `(P, Q)^x = (P^x, Q^x)` as a pair, the
/// parameter doublet associated with the exponent `x`.
pub fn pq_power(base: PQBase, x: Complex64) -> Result<PQPair> {
    let zero = Complex64::new(0.0, 0.0);
    if x.re < 0.0 && (base.p == zero || base.q == zero) {
        return Err(Error::Domain(format!(
            "(P,Q)^{} undefined: zero component raised to a power with negative real part",
            x
        )));
    }
    Ok(PQPair::new(cpow(base.p, x), cpow(base.q, x)))
}

/// Two-parameter Pochhammer bracket
/// `(lambda; x)^(l) = (lambda + x)(p lambda + q x)...(p^(l-1) lambda + q^(l-1) x)`,
/// i.e. the shifted factorial of the pair `(lambda, -x)` at base `(p, q)`.
pub fn kk_adapter(lambda: Complex64, x: Complex64, p: Complex64, q: Complex64, l: usize) -> Complex64 {
    pq_shifted_factorial(PQPair::new(lambda, -x), PQBase::new(p, q), l)
}

/// Exponent-style bracket
/// `[p^mu, p^nu; p, q]_n = prod_{k<n} (p^-(mu+k) - q^(nu+k))`,
/// i.e. the shifted factorial of `(p^-mu, q^nu)` at base `(p^-1, q)`.
pub fn flv_adapter(
    mu: Complex64,
    nu: Complex64,
    p: Complex64,
    q: Complex64,
    n: usize,
) -> Result<Complex64> {
    if p == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain(
            "exponent bracket undefined for p = 0".to_string(),
        ));
    }
    let pair = PQPair::new(cpow(p, -mu), cpow(q, nu));
    let base = PQBase::new(Complex64::new(1.0, 0.0) / p, q);
    Ok(pq_shifted_factorial(pair, base, n))
}

/// Twin-basic binomial coefficient `[n]! / ([k]! [n-k]!)`.
pub fn pq_binomial_coeff(n: usize, k: usize, base: PQBase) -> Result<Complex64> {
    if k > n {
        return Err(Error::Domain(format!(
            "binomial coefficient requires k <= n, got k = {}, n = {}",
            k, n
        )));
    }
    let den = pq_factorial(k, base) * pq_factorial(n - k, base);
    if den.norm() == 0.0 {
        return Err(Error::Pole(format!(
            "binomial coefficient denominator [{}]! [{}]! vanished",
            k,
            n - k
        )));
    }
    Ok(pq_factorial(n, base) / den)
}
