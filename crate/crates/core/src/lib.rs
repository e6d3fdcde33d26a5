//! Numerics for the twin-basic `(P,Q)`-calculus.
//!
//! The crate implements the two-parameter deformation of the classical
//! q-series apparatus: twin-basic numbers `[x] = (P^x - Q^x)/(P - Q)`,
//! shifted factorials over parameter doublets, the general twin-basic
//! hypergeometric series and its reductions to the one-parameter theory,
//! identity checkers (binomial theorem, q-exponential product, permutation
//! invariance) and a verifier for the `(p,q)`-deformed oscillator algebra on
//! truncated number-state spaces.
//!
//! Organization:
//!
//! * [`base`] - numbers, factorials, shifted factorials, adapters
//! * [`series`] - adaptive evaluation of the hypergeometric series
//! * [`identities`] - residual checkers and deformed exponentials
//! * [`oscillator`] - ladder-operator realizations and relation residuals
//!
//! All scalars are `num_complex::Complex64`; complex powers take the
//! principal branch.

pub mod base;
pub mod config;
pub mod error;
pub mod identities;
pub mod oscillator;
pub mod series;

pub use base::{
    flv_adapter, kk_adapter, multi_shifted_factorial, pq_binomial_coeff, pq_factorial,
    pq_number, pq_number_factored, pq_power, pq_rising, pq_shifted_factorial,
    pq_shifted_factorial_ratio_inf, q_number, q_shifted_factorial, PQBase, PQPair,
};
pub use config::EvalConfig;
pub use error::{Error, Result};
pub use identities::{
    check_exp_identity, check_pq_binomial, fibonacci_sequence, pq_derivative_monomial,
    pq_exponential, pq_integral_monomial, product_permutation_check, product_unit_check,
    q_exp_big, q_exp_small, IdentityReport,
};
pub use oscillator::{
    build_fock, build_fock_with_mode, verify_angular_momentum, verify_oscillator,
    FockMode, FockRealization, RelationResiduals,
};
pub use series::{
    detect_termination, eval_pq_hypergeometric, eval_pq_hypergeometric_exponents,
    eval_q_hypergeometric, eval_via_burban_klimyk, limit_parameter_series,
    rho_omega_transform, LimitDirection, SeriesResult, SeriesSpec, Termination,
};
