//! Finite-size Monte Carlo evaluation.
//!
//! Channels are drawn with i.i.d. `CN(0, 1)` entries, RCI and RCI-PR precoders
//! are built by linear solves on the regularized Gram matrix, and the secrecy
//! rate of every realization is computed exactly. The leave-one-out quadratic
//! forms in [`quadratic`] give a second route to the same SINRs.

mod channel;
pub mod dump;
mod ergodic;
mod precoder;
pub mod quadratic;
mod rates;
mod spectrum;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use quadratic::{quadratic_forms, quadratic_forms_csi, QuadraticForms};
pub use channel::{sample_channel, trial_rng, ChannelSet};
pub use ergodic::{ergodic_run, ergodic_run_with_sink, map_trials, mean_and_stderr, ErgodicSummary, PrecoderKind, TrialOutcome};
pub use precoder::{
    build_rci, build_rci_pr, build_rci_with_form, GramForm, PrecoderResult, XiPolicy,
    CONDITION_LIMIT,
};
pub use rates::{compute_rates, RateReport};
pub use spectrum::GramSpectrum;

pub type CMatrix = DMatrix<Complex64>;

/// One simulated scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    /// Transmit antennas.
    pub m: usize,
    /// Single-antenna users.
    pub k: usize,
    /// Linear SNR.
    pub rho: f64,
    pub xi: f64,
    /// Variance of the channel estimation error.
    pub tau_sq: f64,
    pub trials: usize,
    pub seed: u64,
}

impl SystemConfig {
    pub fn new(m: usize, k: usize, rho: f64) -> Self {
        SystemConfig {
            m,
            k,
            rho,
            xi: 0.0,
            tau_sq: 0.0,
            trials: 1,
            seed: 0,
        }
    }

    pub fn beta(&self) -> f64 {
        self.k as f64 / self.m as f64
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.k == 0 {
            return Err(Error::validation("M and K must be at least 1"));
        }
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(Error::validation(format!("rho must be positive, got {}", self.rho)));
        }
        if !self.xi.is_finite() {
            return Err(Error::validation("xi must be finite"));
        }
        if !(0.0..=1.0).contains(&self.tau_sq) {
            return Err(Error::validation(format!("tau^2 must lie in [0, 1], got {}", self.tau_sq)));
        }
        if self.trials == 0 {
            return Err(Error::validation("trials must be at least 1"));
        }
        Ok(())
    }
}
