//! Optimal regularization, optimal SNR and the power-reduced RCI variant.

use serde::Serialize;

use super::deteq::{secrecy_rate_deteq, secrecy_rate_deteq_csi, unclamped_rate_nats};
use super::{is_beta_one, CsiDistortion, LoadPoint, XI_ZERO_THRESHOLD};
use crate::error::{Error, Result};

/// Regularization that maximizes the large-system secrecy rate.
///
/// Preconditions: `beta > 0`, `rho > 0`. The result is negative for
/// `1 < beta < 2` above the optimal SNR and exactly zero at it.
pub fn xi_star(beta: f64, rho: f64) -> f64 {
    debug_assert!(beta > 0.0 && rho > 0.0);
    let omb = 1.0 - beta;
    let root = (beta * beta * (rho * rho + rho + 1.0) - beta * (2.0 * rho * (rho - 1.0)) + rho * rho).sqrt();
    let num = -2.0 * rho * rho * omb * omb + 6.0 * rho * beta + 2.0 * beta * beta
        - 2.0 * (beta * (rho + 1.0) - rho) * root;
    let den = 6.0 * rho * rho * (beta + 2.0) + 6.0 * rho * beta;
    let xi = num / den;
    debug_assert!(
        stationary(beta, rho, xi),
        "closed-form optimum is not stationary at beta={beta}, rho={rho}, xi={xi}"
    );
    xi
}

/// Central-difference check that `xi` is a stationary point of the unclamped
/// rate. Points where the check is not meaningful pass.
fn stationary(beta: f64, rho: f64, xi: f64) -> bool {
    if beta >= 2.0 || xi.abs() < 1e-6 || rho < 1e-3 {
        return true;
    }
    let h = 1e-6 * xi.abs().max(1e-3);
    let (Some(up), Some(dn), Some(mid)) = (
        unclamped_rate_nats(beta, rho, xi + h),
        unclamped_rate_nats(beta, rho, xi - h),
        unclamped_rate_nats(beta, rho, xi),
    ) else {
        return true;
    };
    let slope = (up - dn) / (2.0 * h);
    slope.abs() <= 1e-4 * mid.abs().max(1.0)
}

/// High-SNR approximation of [`xi_star`].
pub fn xi_star_highsnr(beta: f64, rho: f64) -> f64 {
    if is_beta_one(beta) {
        1.0 / (3.0 * rho)
    } else if beta < 1.0 {
        beta / (2.0 * rho)
    } else {
        -2.0 * (beta - 1.0).powi(2) / (3.0 * (beta + 2.0)) + beta * (2.0 - beta) / (2.0 * rho * (beta + 2.0))
    }
}

/// SNR that maximizes the secrecy rate for `1 < beta < 2`, with the peak
/// per-user rate in bits.
pub fn rho_star(beta: f64) -> Result<(f64, f64)> {
    if !(beta > 1.0 && beta < 2.0) {
        return Err(Error::domain("rho_star", format!("beta = {beta} is outside (1, 2)")));
    }
    let bm1 = beta - 1.0;
    let rho = beta * (2.0 - beta) / (bm1 * bm1);
    let peak = (beta * beta / (4.0 * bm1)).log2();
    Ok((rho, peak))
}

/// High-SNR per-user secrecy rate of RCI with power reduction.
///
/// For `beta < 1` this is an asymptote and is negative at small `rho`; it is
/// returned unclamped.
pub fn rcipr_rate_highsnr(beta: f64, rho: f64) -> f64 {
    if is_beta_one(beta) {
        0.5 * (27.0f64 / 64.0).log2() + 0.5 * rho.log2()
    } else if beta < 1.0 {
        ((1.0 - beta) / beta).log2() + rho.log2()
    } else if beta < 2.0 {
        (beta * beta / (4.0 * (beta - 1.0))).log2()
    } else {
        0.0
    }
}

/// How the power-reduced precoder operates at a given load and SNR.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RciPrOperatingPoint {
    /// Regularization, chosen at the effective SNR.
    pub xi: f64,
    /// SNR actually radiated, `rho / r`.
    pub rho_effective: f64,
    /// Power-reduction factor; infinite when nothing is transmitted.
    pub r: f64,
}

impl RciPrOperatingPoint {
    pub fn transmits(&self) -> bool {
        self.r.is_finite()
    }

    /// Fraction of the available power left unused.
    pub fn power_saving(&self) -> f64 {
        1.0 - 1.0 / self.r
    }
}

pub fn rcipr_operating_point(beta: f64, rho: f64) -> RciPrOperatingPoint {
    if beta <= 1.0 {
        RciPrOperatingPoint {
            xi: xi_star(beta, rho),
            rho_effective: rho,
            r: 1.0,
        }
    } else if beta < 2.0 {
        let (rs, _) = rho_star(beta).expect("beta in (1, 2)");
        let r = (rho / rs).max(1.0);
        let rho_eff = rho.min(rs);
        let mut xi = xi_star(beta, rho_eff);
        // The closed form evaluates to a rounding residue at the optimal SNR,
        // where the optimum is exactly zero.
        if rho >= rs && xi.abs() < XI_ZERO_THRESHOLD {
            xi = 0.0;
        }
        RciPrOperatingPoint {
            xi,
            rho_effective: rho_eff,
            r,
        }
    } else {
        RciPrOperatingPoint {
            xi: 0.0,
            rho_effective: 0.0,
            r: f64::INFINITY,
        }
    }
}

/// Large-system per-user secrecy rate of RCI with power reduction.
pub fn rcipr_rate_deteq(beta: f64, rho: f64) -> Result<f64> {
    rcipr_rate_deteq_csi(beta, rho, 0.0)
}

/// As [`rcipr_rate_deteq`], with the precoder designed on an estimate with
/// error variance `tau_sq`. The transmitter does not know `tau_sq`.
pub fn rcipr_rate_deteq_csi(beta: f64, rho: f64, tau_sq: f64) -> Result<f64> {
    let op = rcipr_operating_point(beta, rho);
    if !op.transmits() {
        return Ok(0.0);
    }
    let p = LoadPoint::new(beta, op.rho_effective, op.xi)?;
    let r = if tau_sq == 0.0 {
        secrecy_rate_deteq(&p)?
    } else {
        let d = CsiDistortion::new(op.rho_effective, op.xi, tau_sq)?;
        secrecy_rate_deteq_csi(&p, &d)?
    };
    Ok(r.rate_per_user)
}

/// Residual of the high-SNR optimal-load fixed point; zero at the optimum.
pub fn beta_fixedpoint_residual(beta_tilde: f64, rho: f64) -> f64 {
    let omb = 1.0 - beta_tilde;
    beta_tilde - rho * omb * (-1.0 / omb).exp()
}
