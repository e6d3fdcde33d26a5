//! Truncated Fock-space realizations of the twin-parameter deformed
//! oscillator and numerical verification of its algebra relations.
//!
//! The deformed oscillator algebra consists of a lowering operator `a`, a
//! raising operator `a†` and a number operator `N` subject to
//!
//! ```text
//! a a† - q a† a = p^(-N) ,   [N, a] = -a ,   [N, a†] = a† ,
//! ```
//!
//! which is satisfied on the Fock basis by the matrix elements
//! `a |n> = sqrt([n]) |n-1>` built from the deformed numbers
//! `[n] = (p^(-n) - q^n) / (p^(-1) - q)`, i.e. the twin-basic numbers over
//! the base `(p^(-1), q)`.  On a finite truncation of dimension `dim` the
//! first relation necessarily fails on the top level (the rung above it is
//! cut off); [`verify_oscillator`] therefore checks it on levels
//! `0..dim-2` and the commutators with `N` on the full space, reporting
//! max-norm residuals.
//!
//! [`verify_angular_momentum`] is the companion checker for deformed
//! angular-momentum triples `(J0, J+, J-)` with
//!
//! ```text
//! [J0, J±] = ±J± ,   J+ J- - p q^(-1) J- J+ = (p^(-2 J0) - q^(2 J0)) / (p^(-1) - q) .
//! ```
//!
//! It verifies relations for caller-supplied matrices but does not construct
//! representations.  The matrix functions on the right-hand side are only
//! supported for diagonal `J0` (evaluated entrywise on the diagonal), which
//! covers weight bases without pulling in general matrix-function machinery.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::base::{cpow, pq_number, PQBase};
use crate::error::{Error, Result};

/// How the matrix entries `sqrt([n])` are taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FockMode {
    /// Principal-branch complex square roots; always succeeds.
    Complex,
    /// Demand every `[n]` be a nonnegative real, producing real matrices
    /// with `a† = aᵀ = a*ᵀ`; errors otherwise.
    RealSymmetric,
}

/// A truncated Fock-space realization of the deformed oscillator.
#[derive(Debug, Clone, PartialEq)]
pub struct FockRealization {
    /// Truncation level: the space spans `|0> .. |dim-1>`.
    pub dim: usize,
    /// First deformation parameter.
    pub p: Complex64,
    /// Second deformation parameter.
    pub q: Complex64,
    /// Lowering operator; nonzero only on the first superdiagonal
    /// (`a[(n-1, n)] = sqrt([n])` in the convention `a|n> ∝ |n-1>`).
    pub a: DMatrix<Complex64>,
    /// Raising operator, the structural transpose of `a`.
    pub a_dag: DMatrix<Complex64>,
    /// Number operator, diagonal `0, 1, .., dim-1`.
    pub n_op: DMatrix<Complex64>,
}

/// Max-norm residuals of a verified relation family.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationResiduals {
    /// Residual per relation, keyed by a stable relation name.
    pub residuals: BTreeMap<String, f64>,
    /// Dimension of the subspace on which the truncation-sensitive relation
    /// was checked (the full dimension when no restriction applies).
    pub subspace_dim: usize,
}

fn max_norm(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|e| e.norm()).fold(0.0, f64::max)
}

/// Max norm over the top-left `k x k` block.
fn max_norm_block(m: &DMatrix<Complex64>, k: usize) -> f64 {
    m.view((0, 0), (k, k))
        .iter()
        .map(|e| e.norm())
        .fold(0.0, f64::max)
}

/// Builds the truncated Fock realization with complex-mode square roots.
pub fn build_fock(p: Complex64, q: Complex64, dim: usize) -> Result<FockRealization> {
    build_fock_with_mode(p, q, dim, FockMode::Complex)
}

/// Builds the truncated Fock realization, choosing how `sqrt([n])` is taken.
///
/// The deformed numbers are `[n]` over the base `(p^(-1), q)`; the base may
/// be degenerate (`p^(-1) = q`), in which case the usual limit
/// `[n] = n p^(-(n-1))` applies.
pub fn build_fock_with_mode(
    p: Complex64,
    q: Complex64,
    dim: usize,
    mode: FockMode,
) -> Result<FockRealization> {
    if dim == 0 {
        return Err(Error::Domain(
            "Fock truncation needs at least one level".to_string(),
        ));
    }
    let zero = Complex64::new(0.0, 0.0);
    if p == zero {
        return Err(Error::Domain(
            "oscillator parameter p must be nonzero (the algebra involves p^(-N))".to_string(),
        ));
    }
    let base = PQBase::new(Complex64::new(1.0, 0.0) / p, q);
    let mut levels = Vec::with_capacity(dim);
    for n in 0..dim {
        levels.push(pq_number(Complex64::new(n as f64, 0.0), base)?);
    }
    let roots: Vec<Complex64> = match mode {
        FockMode::Complex => levels.iter().map(|v| v.sqrt()).collect(),
        FockMode::RealSymmetric => {
            let mut roots = Vec::with_capacity(dim);
            for (n, v) in levels.iter().enumerate() {
                if v.im.abs() > 1e-12 * (v.re.abs() + 1.0) || v.re < 0.0 {
                    return Err(Error::Numerical(format!(
                        "[{n}] = {v} is not a nonnegative real; \
                         real-symmetric mode needs nonnegative real deformed numbers"
                    )));
                }
                roots.push(Complex64::new(v.re.sqrt(), 0.0));
            }
            roots
        }
    };

    let mut a = DMatrix::from_element(dim, dim, zero);
    for n in 1..dim {
        a[(n - 1, n)] = roots[n];
    }
    let a_dag = a.transpose();
    let n_op = DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            Complex64::new(i as f64, 0.0)
        } else {
            zero
        }
    });
    Ok(FockRealization {
        dim,
        p,
        q,
        a,
        a_dag,
        n_op,
    })
}

/// Verifies the three oscillator relations on a realization, returning
/// max-norm residuals.
///
/// The defining relation `a a† - q a† a = p^(-N)` is checked on the
/// truncation-invariant block of levels `0..dim-2` (key
/// `"defining_relation"`, with the block size in `subspace_dim`); the number
/// commutators (keys `"number_lowering"`, `"number_raising"`) are exact on
/// the full space and checked there.
pub fn verify_oscillator(real: &FockRealization) -> RelationResiduals {
    let dim = real.dim;
    let lhs = &real.a * &real.a_dag - (&real.a_dag * &real.a) * real.q;
    let p_inv_n = DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            cpow(real.p, Complex64::new(-(i as f64), 0.0))
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let defining = lhs - p_inv_n;
    let block = dim.saturating_sub(1);

    let comm_a = &real.n_op * &real.a - &real.a * &real.n_op + &real.a;
    let comm_a_dag = &real.n_op * &real.a_dag - &real.a_dag * &real.n_op - &real.a_dag;

    let mut residuals = BTreeMap::new();
    residuals.insert(
        "defining_relation".to_string(),
        max_norm_block(&defining, block),
    );
    residuals.insert("number_lowering".to_string(), max_norm(&comm_a));
    residuals.insert("number_raising".to_string(), max_norm(&comm_a_dag));
    RelationResiduals {
        residuals,
        subspace_dim: block,
    }
}

/// Verifies the deformed angular-momentum relations for a caller-supplied
/// triple `(J0, J+, J-)`, returning max-norm residuals over the full space.
///
/// Keys: `"j0_raising"` for `[J0, J+] - J+`, `"j0_lowering"` for
/// `[J0, J-] + J-`, and `"q_commutator"` for
/// `J+ J- - p q^(-1) J- J+ - (p^(-2 J0) - q^(2 J0))/(p^(-1) - q)`.
///
/// `J0` must be diagonal: the right-hand side involves matrix functions of
/// `J0`, which this checker evaluates entrywise on the diagonal only.
pub fn verify_angular_momentum(
    j0: &DMatrix<Complex64>,
    j_plus: &DMatrix<Complex64>,
    j_minus: &DMatrix<Complex64>,
    p: Complex64,
    q: Complex64,
) -> Result<RelationResiduals> {
    let dim = j0.nrows();
    for (name, m) in [("J0", j0), ("J+", j_plus), ("J-", j_minus)] {
        if m.nrows() != m.ncols() {
            return Err(Error::Shape(format!(
                "{name} is {}x{}, expected a square matrix",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.nrows() != dim {
            return Err(Error::Shape(format!(
                "{name} is {}x{}, expected {dim}x{dim} to match J0",
                m.nrows(),
                m.ncols()
            )));
        }
    }
    let zero = Complex64::new(0.0, 0.0);
    if p == zero || q == zero {
        return Err(Error::Domain(
            "angular-momentum parameters p, q must be nonzero (the relations involve \
             p^(-2 J0) and p q^(-1))"
                .to_string(),
        ));
    }
    let diag_scale = (0..dim)
        .map(|i| j0[(i, i)].norm())
        .fold(0.0f64, f64::max);
    for i in 0..dim {
        for j in 0..dim {
            if i != j && j0[(i, j)].norm() > 1e-14 * (diag_scale + 1.0) {
                return Err(Error::Domain(
                    "J0 must be diagonal: matrix functions of a non-diagonal J0 are \
                     outside this checker's scope"
                        .to_string(),
                ));
            }
        }
    }

    let raising = j0 * j_plus - j_plus * j0 - j_plus;
    let lowering = j0 * j_minus - j_minus * j0 + j_minus;

    // RHS evaluated entrywise on the diagonal of J0: [2*lambda] over the
    // base (p^(-1), q), handling the degenerate p^(-1) = q limit.
    let base = PQBase::new(Complex64::new(1.0, 0.0) / p, q);
    let mut rhs = DMatrix::from_element(dim, dim, zero);
    for i in 0..dim {
        rhs[(i, i)] = pq_number(j0[(i, i)] * 2.0, base)?;
    }
    let q_comm = j_plus * j_minus - (j_minus * j_plus) * (p / q) - rhs;

    let mut residuals = BTreeMap::new();
    residuals.insert("j0_raising".to_string(), max_norm(&raising));
    residuals.insert("j0_lowering".to_string(), max_norm(&lowering));
    residuals.insert("q_commutator".to_string(), max_norm(&q_comm));
    Ok(RelationResiduals {
        residuals,
        subspace_dim: dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::fibonacci_sequence;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn residual(r: &RelationResiduals, key: &str) -> f64 {
        *r.residuals.get(key).expect("relation key present")
    }

    #[test]
    fn classical_boson_limit() {
        // p = q = 1: the base (1,1) is degenerate, [n] = n, and the defining
        // relation is the boson commutator a a† - a† a = 1.
        let fock = build_fock(c(1.0, 0.0), c(1.0, 0.0), 10).unwrap();
        for n in 1..10 {
            let want = (n as f64).sqrt();
            assert!(
                (fock.a[(n - 1, n)] - c(want, 0.0)).norm() < 1e-14,
                "entry sqrt({n})"
            );
        }
        let res = verify_oscillator(&fock);
        assert_eq!(res.subspace_dim, 9);
        assert!(residual(&res, "defining_relation") < 1e-13);
        assert!(residual(&res, "number_lowering") < 1e-14);
        assert!(residual(&res, "number_raising") < 1e-14);
    }

    #[test]
    fn number_basis_diagonal_matches_deformed_numbers() {
        // p = 1, q = 0.5, dim 3: a†a has diagonal (0, 1, 1.5).
        let fock = build_fock(c(1.0, 0.0), c(0.5, 0.0), 3).unwrap();
        let occupancy = &fock.a_dag * &fock.a;
        let want = [0.0, 1.0, 1.5];
        for (n, &w) in want.iter().enumerate() {
            assert!(
                (occupancy[(n, n)] - c(w, 0.0)).norm() < 1e-13,
                "level {n}: got {}",
                occupancy[(n, n)]
            );
        }
    }

    #[test]
    fn occupancy_matches_fibonacci_sequence() {
        // Cross-module consistency: the a†a diagonal is the generalized
        // Fibonacci sequence over the base (p^(-1), q).
        let (p, q) = (c(1.3, 0.0), c(0.7, 0.0));
        let fock = build_fock(p, q, 12).unwrap();
        let seq = fibonacci_sequence(PQBase::new(c(1.0, 0.0) / p, q), 11);
        let occupancy = &fock.a_dag * &fock.a;
        for n in 0..12 {
            let got = occupancy[(n, n)];
            let scale = got.norm().max(seq[n].norm()).max(1.0);
            assert!(
                (got - seq[n]).norm() / scale < 1e-12,
                "level {n}: {got} vs {}",
                seq[n]
            );
        }
    }

    #[test]
    fn generic_parameters_satisfy_algebra() {
        let fock = build_fock(c(0.8, 0.0), c(0.9, 0.0), 25).unwrap();
        let res = verify_oscillator(&fock);
        assert_eq!(res.subspace_dim, 24);
        for (name, value) in &res.residuals {
            assert!(value.is_finite());
            assert!(*value < 1e-12, "{name} residual {value}");
        }
    }

    #[test]
    fn smallest_truncations() {
        // dim = 1: all operators vanish; the defining-relation block is empty.
        let fock = build_fock(c(0.9, 0.0), c(1.2, 0.0), 1).unwrap();
        assert_eq!(fock.a, DMatrix::from_element(1, 1, c(0.0, 0.0)));
        let res = verify_oscillator(&fock);
        assert_eq!(res.subspace_dim, 0);
        assert_eq!(residual(&res, "number_lowering"), 0.0);

        // dim = 2: the one-dimensional block checks (a a† - q a†a)_00 = [1] = 1.
        let fock = build_fock(c(0.7, 0.0), c(1.1, 0.0), 2).unwrap();
        let res = verify_oscillator(&fock);
        assert_eq!(res.subspace_dim, 1);
        assert!(residual(&res, "defining_relation") < 1e-14);
    }

    #[test]
    fn real_symmetric_mode_checks_positivity() {
        // Real positive parameters: both modes agree and a† is the conjugate
        // transpose.
        let fock =
            build_fock_with_mode(c(1.2, 0.0), c(0.8, 0.0), 8, FockMode::RealSymmetric).unwrap();
        let adjoint = fock.a.adjoint();
        assert!(max_norm(&(fock.a_dag.clone() - adjoint)) < 1e-15);
        let complex_mode = build_fock(c(1.2, 0.0), c(0.8, 0.0), 8).unwrap();
        assert!(max_norm(&(fock.a.clone() - complex_mode.a)) < 1e-15);

        // A sign-indefinite spectrum is rejected in real-symmetric mode but
        // fine in complex mode ([2] = p^(-1) + q = -0.25 here).
        let (p, q) = (c(-2.0, 0.0), c(0.25, 0.0));
        assert!(matches!(
            build_fock_with_mode(p, q, 4, FockMode::RealSymmetric),
            Err(Error::Numerical(_))
        ));
        let fock = build_fock(p, q, 4).unwrap();
        let res = verify_oscillator(&fock);
        assert!(residual(&res, "defining_relation") < 1e-13);
    }

    #[test]
    fn build_rejects_bad_parameters() {
        assert!(matches!(
            build_fock(c(0.0, 0.0), c(0.5, 0.0), 4),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            build_fock(c(1.0, 0.0), c(0.5, 0.0), 0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn degenerate_base_uses_limit() {
        // p^(-1) = q: [n] = n p^(-(n-1)) = n q^(n-1).
        let (p, q) = (c(2.0, 0.0), c(0.5, 0.0));
        let fock = build_fock(p, q, 5).unwrap();
        let occupancy = &fock.a_dag * &fock.a;
        for n in 0..5 {
            let want = n as f64 * 0.5f64.powi(n as i32 - 1);
            assert!(
                (occupancy[(n, n)] - c(want, 0.0)).norm() < 1e-13,
                "degenerate level {n}"
            );
        }
        let res = verify_oscillator(&fock);
        assert!(residual(&res, "defining_relation") < 1e-13);
    }

    #[test]
    fn classical_spin_half() {
        // p = q = 1: ordinary su(2); [J+, J-] = 2 J0 on the spin-1/2 ladder.
        let j0 = DMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)]);
        let j_plus =
            DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let j_minus = j_plus.transpose();
        let res =
            verify_angular_momentum(&j0, &j_plus, &j_minus, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(res.subspace_dim, 2);
        for (name, value) in &res.residuals {
            assert!(*value < 1e-13, "{name} residual {value}");
        }
    }

    #[test]
    fn q_deformed_spin_half() {
        // p = 1, generic q: the same ladder matrices satisfy the
        // q-commutator relation, J+J- - q^(-1) J-J+ = diag([1], [-1]).
        let j0 = DMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)]);
        let j_plus =
            DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let j_minus = j_plus.transpose();
        let res =
            verify_angular_momentum(&j0, &j_plus, &j_minus, c(1.0, 0.0), c(0.6, 0.0)).unwrap();
        assert!(res.residuals["q_commutator"] < 1e-13);
        assert!(res.residuals["j0_raising"] < 1e-15);
        assert!(res.residuals["j0_lowering"] < 1e-15);
    }

    #[test]
    fn zero_ladder_operators_report_rhs_norm() {
        // J+ = J- = 0 exercises pure reporting: commutator residuals vanish
        // and the q-commutator residual is the norm of the RHS.
        let j0 = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        let zero = DMatrix::from_element(2, 2, c(0.0, 0.0));
        let (p, q) = (c(0.8, 0.0), c(1.1, 0.0));
        let res = verify_angular_momentum(&j0, &zero, &zero, p, q).unwrap();
        assert_eq!(res.residuals["j0_raising"], 0.0);
        assert_eq!(res.residuals["j0_lowering"], 0.0);
        let base = PQBase::new(c(1.0, 0.0) / p, q);
        let want = pq_number(c(2.0, 0.0), base)
            .unwrap()
            .norm()
            .max(pq_number(c(-2.0, 0.0), base).unwrap().norm());
        assert!((res.residuals["q_commutator"] - want).abs() < 1e-14);
    }

    #[test]
    fn angular_momentum_input_validation() {
        let j0 = DMatrix::from_element(2, 2, c(0.0, 0.0));
        let bad = DMatrix::from_element(3, 3, c(0.0, 0.0));
        assert!(matches!(
            verify_angular_momentum(&j0, &bad, &j0, c(1.0, 0.0), c(0.5, 0.0)),
            Err(Error::Shape(_))
        ));
        let nondiag =
            DMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.3, 0.0), c(0.0, 0.0), c(-0.5, 0.0)]);
        let zero = DMatrix::from_element(2, 2, c(0.0, 0.0));
        assert!(matches!(
            verify_angular_momentum(&nondiag, &zero, &zero, c(1.0, 0.0), c(0.5, 0.0)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            verify_angular_momentum(&j0, &zero, &zero, c(0.0, 0.0), c(0.5, 0.0)),
            Err(Error::Domain(_))
        ));
    }
}
