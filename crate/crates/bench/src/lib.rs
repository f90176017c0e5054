//! Shared fixtures for the kernel benchmarks.

use landau_pacs::{Cutoffs, StateLabel, C64};

/// A moderately excited label with non-trivial phases.
pub fn label(n_exc: usize) -> StateLabel {
    StateLabel::new(C64::new(1.2, -0.7), C64::new(0.6, 0.4), n_exc).expect("fixed label is valid")
}

/// Cutoffs sized for [`label`].
pub fn cutoffs(n_exc: usize) -> Cutoffs {
    label(n_exc).cutoffs()
}

/// `|β|` grid used by the figure kernels.
pub fn beta_grid(steps: usize) -> Vec<f64> {
    landau_pacs::diagnostics::linspace(0.05, 5.0, steps).expect("fixed grid is valid")
}
