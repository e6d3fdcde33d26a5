//! Tolerances and truncation policy for adaptive summation.

use crate::error::{Error, Result};

/// Controls when an adaptive series or infinite product stops.
///
/// A series evaluation stops as soon as `small_window` consecutive terms fall
/// below `rel_tol * |partial sum| + abs_tol`; it aborts with a divergence
/// error when term magnitudes grow for `growth_window` consecutive steps past
/// term ten.  Infinite-product evaluation analogously stops once
/// `small_window` consecutive factors are within `rel_tol` of one.
///
/// The defaults are tuned for well-conditioned arguments.  Near the edge of a
/// convergence region (base ratio or argument magnitude close to one) the
/// transient where terms still grow can be long; raise `growth_window` (and,
/// if needed, `max_terms`) in that regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig {
    /// Relative tolerance used by the stopping rule.
    pub rel_tol: f64,
    /// Absolute floor under the stopping rule, guarding sums near zero.
    pub abs_tol: f64,
    /// Hard cap on the number of terms (or product factors).
    pub max_terms: usize,
    /// Consecutive small terms required before stopping.
    pub small_window: usize,
    /// Consecutive growing terms that trigger a divergence error.
    pub growth_window: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            rel_tol: 1e-12,
            abs_tol: 1e-300,
            max_terms: 10_000,
            small_window: 3,
            growth_window: 8,
        }
    }
}

impl EvalConfig {
    /// Checks that the tolerances are strictly positive and the windows are
    /// at least one.  Every evaluator calls this before doing work.
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::Domain(format!(
                "tolerances must be strictly positive (rel_tol={}, abs_tol={})",
                self.rel_tol, self.abs_tol
            )));
        }
        if self.max_terms == 0 || self.small_window == 0 || self.growth_window == 0 {
            return Err(Error::Domain(format!(
                "max_terms, small_window and growth_window must be at least 1 \
                 (got {}, {}, {})",
                self.max_terms, self.small_window, self.growth_window
            )));
        }
        Ok(())
    }

    /// Same configuration with a different term cap.
    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }

    /// Same configuration with a different growth window.
    pub fn with_growth_window(mut self, growth_window: usize) -> Self {
        self.growth_window = growth_window;
        self
    }
}
