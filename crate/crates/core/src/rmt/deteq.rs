use std::f64::consts::LN_2;

use serde::Serialize;

use super::XI_ZERO_THRESHOLD;
use crate::error::{Error, Result};

/// Operating point of the large-system model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LoadPoint {
    /// Users per transmit antenna, `K/M`.
    pub beta: f64,
    /// Linear transmit SNR.
    pub rho: f64,
    /// Regularization parameter.
    pub xi: f64,
}

impl LoadPoint {
    pub fn new(beta: f64, rho: f64, xi: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::validation(format!("beta must be positive, got {beta}")));
        }
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::validation(format!("rho must be positive, got {rho}")));
        }
        if !xi.is_finite() {
            return Err(Error::validation(format!("xi must be finite, got {xi}")));
        }
        Ok(LoadPoint { beta, rho, xi })
    }
}

/// Large-system secrecy quantities at one operating point.
///
/// `g` is infinite at `xi = 0` with `beta <= 1` (the channel-inversion limit),
/// and negative on the admissible branch left of the excluded interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetEqResult {
    pub g: f64,
    pub sinr_user: f64,
    pub sinr_eve: f64,
    pub rate_per_user: f64,
    pub rate_per_antenna: f64,
}

/// Estimation-error model `H = H_hat + E` seen through its effect on the
/// large-system rate: an effective SNR and an effective regularization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CsiDistortion {
    pub tau_sq: f64,
    pub rho_tilde: f64,
    pub xi_tilde: f64,
}

impl CsiDistortion {
    pub fn new(rho: f64, xi: f64, tau_sq: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&tau_sq) {
            return Err(Error::validation(format!("tau^2 must lie in [0, 1], got {tau_sq}")));
        }
        let rho_tilde = rho * (1.0 - tau_sq) / (rho * tau_sq + 1.0);
        let xi_tilde = if tau_sq < 1.0 {
            xi / (1.0 - tau_sq)
        } else {
            f64::INFINITY
        };
        Ok(CsiDistortion {
            tau_sq,
            rho_tilde,
            xi_tilde,
        })
    }

    pub fn perfect(rho: f64, xi: f64) -> Self {
        CsiDistortion {
            tau_sq: 0.0,
            rho_tilde: rho,
            xi_tilde: xi,
        }
    }
}

/// Deterministic equivalent `g(beta, xi)`.
///
/// Of the two roots of `xi g^2 + (xi + beta - 1) g - 1 = 0` this is the one
/// that is the limit of `h_k^H (H_k^H H_k + M xi I)^-1 h_k`: the sign-of-`xi`
/// root `(sqrt(D) - b) / (2 xi)` to the right of the excluded interval and
/// the root vanishing like `1 / xi` to its left, with `b = xi + beta - 1` and
/// `D = b^2 + 4 xi`. Each is evaluated in the form that avoids cancellation.
pub fn g_deteq(beta: f64, xi: f64) -> Result<f64> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::domain("g_deteq", format!("beta = {beta}")));
    }
    if xi == 0.0 || !xi.is_finite() {
        return Err(Error::domain("g_deteq", format!("xi = {xi} must be finite and nonzero")));
    }
    let b = xi + beta - 1.0;
    let disc = b * b + 4.0 * xi;
    if disc < 0.0 {
        return Err(Error::domain(
            "g_deteq",
            format!("xi = {xi} lies inside the excluded interval for beta = {beta}"),
        ));
    }
    let s = disc.sqrt();
    Ok(if xi < -(1.0 + beta) {
        2.0 / (b - s)
    } else if b > 0.0 {
        2.0 / (b + s)
    } else {
        (s - b) / (2.0 * xi)
    })
}

/// `d g / d xi` by implicit differentiation of the quadratic identity.
pub fn g_derivative(beta: f64, xi: f64) -> Result<f64> {
    let g = g_deteq(beta, xi)?;
    let den = 2.0 * xi * g + xi + beta - 1.0;
    if den.abs() < 1e-14 {
        return Err(Error::Singular {
            op: "g_derivative",
            detail: format!("vanishing denominator at beta = {beta}, xi = {xi}"),
        });
    }
    Ok(-g * (g + 1.0) / den)
}

/// Large-system secrecy rate of RCI precoding with perfect CSI.
pub fn secrecy_rate_deteq(p: &LoadPoint) -> Result<DetEqResult> {
    rate_core(p.beta, p.rho, &CsiDistortion::perfect(p.rho, p.xi))
}

/// Large-system secrecy rate of RCI precoding designed on an estimate whose
/// error has variance `tau^2`.
pub fn secrecy_rate_deteq_csi(p: &LoadPoint, d: &CsiDistortion) -> Result<DetEqResult> {
    if d.tau_sq >= 1.0 {
        return Ok(DetEqResult {
            g: 0.0,
            sinr_user: 0.0,
            sinr_eve: p.rho,
            rate_per_user: 0.0,
            rate_per_antenna: 0.0,
        });
    }
    rate_core(p.beta, p.rho, d)
}

fn rate_core(beta: f64, rho: f64, d: &CsiDistortion) -> Result<DetEqResult> {
    let rho_s = d.rho_tilde;
    let xi = d.xi_tilde;
    // `inv` is 1/(1+g)^2, the leaked fraction of the intended signal power.
    let (g, sinr_user, inv) = if xi.abs() < XI_ZERO_THRESHOLD {
        if beta <= 1.0 {
            (f64::INFINITY, rho_s * (1.0 - beta) / beta, 0.0)
        } else {
            let bm1 = beta - 1.0;
            let sinr = rho_s * bm1 / (rho_s * bm1 * bm1 + beta * beta);
            (1.0 / bm1, sinr, (bm1 / beta).powi(2))
        }
    } else {
        let g = g_deteq(beta, xi)?;
        let one_g2 = (1.0 + g) * (1.0 + g);
        let sinr = g * (rho_s + rho_s * xi * one_g2 / beta) / (rho_s + one_g2);
        (g, sinr, 1.0 / one_g2)
    };
    if !(sinr_user >= -1e-12) {
        return Err(Error::domain(
            "secrecy_rate_deteq",
            format!("negative intended SINR {sinr_user} at beta = {beta}, xi = {xi}"),
        ));
    }
    let sinr_user = sinr_user.max(0.0);
    let sinr_eve = rho * (d.tau_sq + (1.0 - d.tau_sq) * inv);
    let raw = (sinr_user.ln_1p() - sinr_eve.ln_1p()) / LN_2;
    let rate_per_user = raw.max(0.0);
    Ok(DetEqResult {
        g,
        sinr_user,
        sinr_eve,
        rate_per_user,
        rate_per_antenna: beta * rate_per_user,
    })
}

/// Secrecy rate before the `[.]^+` clamp, in nats. Used by the stationarity
/// guard on the optimal regularization.
pub(crate) fn unclamped_rate_nats(beta: f64, rho: f64, xi: f64) -> Option<f64> {
    let g = g_deteq(beta, xi).ok()?;
    let one_g2 = (1.0 + g) * (1.0 + g);
    let sinr = g * (rho + rho * xi * one_g2 / beta) / (rho + one_g2);
    Some(sinr.ln_1p() - (rho / one_g2).ln_1p())
}
