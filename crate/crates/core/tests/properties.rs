//! Property-based invariants connecting independent code paths of the
//! library: the twin-basic engine against the classical engine, recurrences
//! against closed forms, adapters against from-scratch products, and
//! identity checks over guarded random parameter regions.

use num_complex::Complex64;
use proptest::prelude::*;

use pqcalc::{
    build_fock, check_exp_identity, check_pq_binomial, detect_termination,
    eval_pq_hypergeometric, eval_q_hypergeometric, fibonacci_sequence, flv_adapter, kk_adapter,
    pq_number, pq_shifted_factorial, q_shifted_factorial, verify_oscillator, EvalConfig, PQBase,
    PQPair, SeriesSpec, Termination,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
}

/// A complex draw inside the disc of the given radius (axis-aligned box,
/// which is enough for coverage and keeps shrinking readable).
fn complex_in(radius: f64) -> impl Strategy<Value = Complex64> {
    (-radius..radius, -radius..radius).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    /// Doublets (1, x) over the base (1, q) reduce the twin-basic engine to
    /// the classical basic engine, term by term.
    #[test]
    fn twin_engine_reduces_to_classical(
        q in complex_in(0.8),
        a1 in complex_in(1.5),
        a2 in complex_in(1.5),
        b1 in complex_in(0.6),
        z in complex_in(0.4),
        r in 0usize..=2,
        s in 0usize..=1,
    ) {
        let upper = [a1, a2][..r].to_vec();
        let lower = [b1][..s].to_vec();
        let cfg = EvalConfig::default();
        let spec = SeriesSpec {
            numerator: upper.iter().map(|&x| PQPair::new(c(1.0, 0.0), x)).collect(),
            denominator: lower.iter().map(|&x| PQPair::new(c(1.0, 0.0), x)).collect(),
            base: PQBase::classical(q),
            z,
        };
        let twin = eval_pq_hypergeometric(&spec, &cfg);
        let classical = eval_q_hypergeometric(&upper, &lower, q, z, &cfg);
        match (twin, classical) {
            (Ok(t), Ok(cl)) => {
                prop_assert!(close(t.value, cl.value, 1e-13),
                    "values differ: {} vs {}", t.value, cl.value);
                prop_assert_eq!(t.terms_used, cl.terms_used);
            }
            (Err(t), Err(cl)) => {
                prop_assert_eq!(std::mem::discriminant(&t), std::mem::discriminant(&cl),
                    "error kinds differ: {:?} vs {:?}", t, cl);
            }
            (t, cl) => prop_assert!(false, "engines disagree on outcome: {t:?} vs {cl:?}"),
        }
    }

    /// The shifted factorial obeys its defining one-step recurrence, and the
    /// (1, x) doublet reproduces the classical q-shifted factorial.
    #[test]
    fn shifted_factorial_recurrence(
        xp in complex_in(1.5),
        xq in complex_in(1.5),
        p in complex_in(1.4),
        q in complex_in(1.4),
        n in 0usize..20,
    ) {
        let pair = PQPair::new(xp, xq);
        let base = PQBase::new(p, q);
        let shorter = pq_shifted_factorial(pair, base, n);
        let longer = pq_shifted_factorial(pair, base, n + 1);
        let pk = c(1.0, 0.0) * (0..n).fold(c(1.0, 0.0), |acc, _| acc * p);
        let qk = (0..n).fold(c(1.0, 0.0), |acc, _| acc * q);
        prop_assert!(close(longer, shorter * (xp * pk - xq * qk), 1e-12),
            "recurrence at n={n}: {longer} vs {}", shorter * (xp * pk - xq * qk));
    }

    #[test]
    fn classical_factorial_is_special_case(
        x in complex_in(1.5),
        q in complex_in(0.95),
        n in 0usize..25,
    ) {
        let via_pair = pq_shifted_factorial(PQPair::new(c(1.0, 0.0), x), PQBase::classical(q), n);
        let direct = q_shifted_factorial(x, q, n);
        prop_assert!(close(via_pair, direct, 1e-13));
    }

    /// Twin-basic numbers satisfy [x+1] = (P+Q)[x] - PQ [x-1].
    #[test]
    fn number_three_term_recurrence(
        x in complex_in(3.0),
        p in 0.3f64..1.8,
        q in 0.2f64..1.6,
    ) {
        // Real positive base keeps principal-branch powers single-valued for
        // complex x.
        let base = PQBase::new(p, q);
        let x = x + c(4.0, 0.0); // keep Re(x) > 0 away from branch issues
        let prev = pq_number(x - c(1.0, 0.0), base).unwrap();
        let here = pq_number(x, base).unwrap();
        let next = pq_number(x + c(1.0, 0.0), base).unwrap();
        let rhs = (base.p + base.q) * here - base.p * base.q * prev;
        prop_assert!(close(next, rhs, 1e-11), "recurrence: {next} vs {rhs}");
    }

    /// Fibonacci iteration equals the closed-form twin-basic numbers.
    #[test]
    fn fibonacci_matches_closed_form(
        p in 0.3f64..1.9,
        q in 0.2f64..1.7,
        n_max in 1usize..25,
    ) {
        let base = PQBase::new(p, q);
        let seq = fibonacci_sequence(base, n_max);
        prop_assert_eq!(seq.len(), n_max + 1);
        for (m, &f) in seq.iter().enumerate() {
            let direct = pq_number(c(m as f64, 0.0), base).unwrap();
            prop_assert!(close(f, direct, 1e-11), "m={m}: {f} vs {direct}");
        }
    }

    /// A doublet constructed to vanish at index m yields natural termination
    /// with exactly m+1 terms and a zero error estimate.
    #[test]
    fn constructed_termination_detected(
        ap in 0.3f64..1.5,
        p in 0.6f64..1.6,
        ratio in 1.1f64..2.5,
        m in 0usize..=8,
        z in complex_in(0.8),
    ) {
        // Base with P/Q = ratio, well separated from the degenerate line.
        let q = p / ratio;
        let base = PQBase::new(p, q);
        let aq = ap * ratio.powi(m as i32);
        let pair = PQPair::new(ap, aq);
        prop_assert_eq!(detect_termination(pair, base, 1000), Some(m));
        let cfg = EvalConfig::default();
        let spec = SeriesSpec { numerator: vec![pair], denominator: vec![], base, z };
        let got = eval_pq_hypergeometric(&spec, &cfg).unwrap();
        prop_assert_eq!(got.termination, Termination::Natural);
        prop_assert_eq!(got.terms_used, m + 1);
        prop_assert_eq!(got.error_estimate, 0.0);
    }

    /// The binomial identity holds on a guarded random region.
    #[test]
    fn binomial_identity_random_region(
        pp in 0.8f64..1.6,
        rho_mag in 0.05f64..0.6,
        rho_arg in 0.0f64..6.28,
        ap in complex_in(1.2),
        aq in complex_in(1.2),
        zm in 0.05f64..0.4,
        za in 0.0f64..6.28,
    ) {
        let p = c(pp, 0.0);
        let q = Complex64::from_polar(rho_mag * pp, rho_arg);
        let scale = ap.norm().max(aq.norm()).max(1.0);
        let z = Complex64::from_polar(zm * pp / scale, za);
        let cfg = EvalConfig::default();
        let report = check_pq_binomial(PQPair::new(ap, aq), PQBase::new(p, q), z, &cfg, 1e-10)
            .unwrap();
        prop_assert!(report.passed, "residual {} at p={p} q={q} a=({ap},{aq}) z={z}",
            report.rel_residual);
    }

    /// Euler's exponential identity holds on a guarded random region.
    #[test]
    fn exp_identity_random_region(
        qm in 0.0f64..0.9,
        qa in 0.0f64..6.28,
        zm in 0.0f64..0.85,
        za in 0.0f64..6.28,
    ) {
        let q = Complex64::from_polar(qm, qa);
        let z = Complex64::from_polar(zm, za);
        let cfg = EvalConfig::default();
        let report = check_exp_identity(q, z, &cfg, 1e-10).unwrap();
        prop_assert!(report.passed, "residual {} at q={q} z={z}", report.rel_residual);
    }

    /// Adapter shifted factorials match explicit from-scratch products.
    #[test]
    fn adapters_match_direct_products(
        lambda in complex_in(1.4),
        x in complex_in(1.4),
        p in 0.4f64..1.8,
        q in 0.3f64..1.6,
        l in 0usize..15,
    ) {
        let base_p = c(p, 0.0);
        let base_q = c(q, 0.0);
        let via_adapter = kk_adapter(lambda, x, base_p, base_q, l);
        let mut want = c(1.0, 0.0);
        let mut pk = c(1.0, 0.0);
        let mut qk = c(1.0, 0.0);
        for _ in 0..l {
            want *= lambda * pk + x * qk;
            pk *= base_p;
            qk *= base_q;
        }
        prop_assert!(close(via_adapter, want, 1e-12));

        let mu = c(1.3, 0.0);
        let nu = c(0.7, 0.0);
        let via_adapter = flv_adapter(mu, nu, base_p, base_q, l).unwrap();
        let pinv = c(1.0, 0.0) / base_p;
        let mut want = c(1.0, 0.0);
        let mut pk = c(1.0, 0.0);
        let mut qk = c(1.0, 0.0);
        for _ in 0..l {
            want *= base_p.powc(-mu) * pk - base_q.powc(nu) * qk;
            pk *= pinv;
            qk *= base_q;
        }
        prop_assert!(close(via_adapter, want, 1e-11));
    }

    /// Oscillator residuals are floating-point noise relative to the level
    /// scale across the whole parameter square.
    #[test]
    fn oscillator_relations_hold_scaled(
        p in 0.5f64..1.5,
        q in 0.5f64..1.5,
        dim in 2usize..=40,
    ) {
        let fock = build_fock(c(p, 0.0), c(q, 0.0), dim).unwrap();
        let res = verify_oscillator(&fock);
        let scale = (0..dim)
            .map(|n| pq_number(c(n as f64, 0.0), PQBase::new(c(1.0 / p, 0.0), c(q, 0.0)))
                .unwrap()
                .norm())
            .fold(1.0f64, f64::max);
        for (name, value) in &res.residuals {
            prop_assert!(value.is_finite());
            prop_assert!(value / scale < 1e-12,
                "{name} residual {value} too large for scale {scale} (p={p}, q={q}, dim={dim})");
        }
    }
}
