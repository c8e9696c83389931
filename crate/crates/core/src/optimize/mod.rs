//! Scalar searches: per-realization regularization, the high-SNR optimal load
//! and the optimal number of users.

mod search;

pub use search::{maximize_scalar, SearchDomain, DEFAULT_CLIP, GRID_POINTS};

use crate::error::{Error, Result};
use crate::mc::{CMatrix, GramSpectrum};
use crate::rmt::{beta_fixedpoint_residual, secrecy_rate_deteq, xi_star, LoadPoint};

/// Default search tolerance on the regularization.
pub const XI_TOL: f64 = 1e-6;

/// Regularization maximizing the secrecy sum-rate of one channel realization.
///
/// Regularizations at which the Gram matrix is ill-conditioned are skipped.
pub fn xi_star_empirical(h: &CMatrix, rho: f64, domain: &SearchDomain) -> Result<f64> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::validation(format!("rho must be positive, got {rho}")));
    }
    let spec = GramSpectrum::new(h);
    let f = |xi: f64| spec.sum_rate(rho, xi).unwrap_or(f64::NAN);
    match maximize_scalar(f, domain, XI_TOL) {
        Ok((xi, _)) => Ok(xi),
        Err(Error::EmptyDomain) if !domain.is_empty() => Err(Error::IllConditioned {
            condition: f64::INFINITY,
        }),
        Err(e) => Err(e),
    }
}

/// Root in `(0, 1)` of the high-SNR optimal-load fixed point, by bisection
/// until the residual is below `tol`.
pub fn solve_beta_fixedpoint(rho: f64, tol: f64) -> Result<f64> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::validation(format!("rho must be positive, got {rho}")));
    }
    if !(tol > 0.0) {
        return Err(Error::validation("tolerance must be positive"));
    }
    let (mut lo, mut hi) = (f64::EPSILON, 1.0 - f64::EPSILON);
    let (rlo, rhi) = (beta_fixedpoint_residual(lo, rho), beta_fixedpoint_residual(hi, rho));
    if rlo.signum() == rhi.signum() {
        return Err(Error::NoBracket { lo, hi });
    }
    let increasing = rhi > rlo;
    loop {
        let mid = 0.5 * (lo + hi);
        let r = beta_fixedpoint_residual(mid, rho);
        if r.abs() < tol {
            return Ok(mid);
        }
        if mid <= lo || mid >= hi {
            return Err(Error::NoBracket { lo, hi });
        }
        if (r > 0.0) == increasing {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

/// Large-system secrecy sum-rate per antenna with `k` users on `m` antennas
/// at the optimal regularization.
pub fn deteq_rate_per_antenna(m: usize, k: usize, rho: f64) -> f64 {
    let beta = k as f64 / m as f64;
    if beta >= 2.0 {
        return 0.0;
    }
    LoadPoint::new(beta, rho, xi_star(beta, rho))
        .and_then(|p| secrecy_rate_deteq(&p))
        .map_or(0.0, |r| r.rate_per_antenna)
}

/// Number of users in `1..2M` maximizing the large-system secrecy sum-rate at
/// the optimal regularization. Ties go to the smaller count.
pub fn optimal_user_count(m: usize, rho: f64) -> usize {
    let mut best = (1, f64::NEG_INFINITY);
    for k in 1..(2 * m).max(2) {
        let v = deteq_rate_per_antenna(m, k, rho);
        if v > best.1 {
            best = (k, v);
        }
    }
    best.0
}
