//! Asymptotic error rates of the reduced-state decoders.
//!
//! For the One-State decoder the state error `D_k = x_hat_k - x_k` is a
//! birth-death chain on the integers whose invariant vector has a product
//! form. For the Two-State decoder the pair `(A_k, D_k)` (probability of the
//! stored state, state error) is a Markov process on `[0,1] x Z`; its
//! transition kernel has closed-form CDFs in the new probability, which are
//! discretized on uniform bins and iterated to the invariant measure.

mod export;
mod grid;
mod kernel;
mod one_state;

pub use export::{write_one_state_csv, write_two_state_csv};
pub use grid::{
    discretize_kernel, invariant_by_iteration, two_state_asymptotic_ber, GridOptions, Start,
    TwoStateKernelGrid, DEFAULT_BINS, DEFAULT_MAX_ITERS, DEFAULT_TAIL_TOL, DEFAULT_TOL,
};
pub use kernel::{
    kernel_symmetry_defects, qbar, two_state_kernel_cdf, two_state_kernel_marginals, KernelAtoms,
    SymmetryDefects,
};
pub use one_state::{
    one_state_asymptotic_ber, one_state_invariant, one_state_transitions, OneStateChain,
    DEFAULT_D_MAX, ONE_STATE_TAIL_TOL,
};

use crate::error::{Error, Result};

pub(crate) fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSigma(sigma))
    }
}

/// Convenience: analytic One-State BER with the default truncation.
pub fn one_state_ber(sigma: f64, d_max: usize) -> Result<f64> {
    one_state_asymptotic_ber(&one_state_invariant(one_state_transitions(sigma, d_max)?)?)
}

/// Convenience: analytic Two-State BER from a fresh grid.
pub fn two_state_ber(sigma: f64, opts: &GridOptions) -> Result<f64> {
    let grid = discretize_kernel(sigma, opts.n_bins, opts.d_max)?;
    let grid = invariant_by_iteration(grid, opts)?;
    two_state_asymptotic_ber(&grid)
}
