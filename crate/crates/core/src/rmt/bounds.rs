//! Upper bounds used to measure the secrecy loss and the multi-user loss, and
//! the CSI-accuracy scaling laws.

use serde::Serialize;

use super::{g_deteq, is_beta_one};
use crate::error::{Error, Result};

/// Per-user sum-rate of optimally regularized RCI without secrecy constraints.
pub fn sumrate_nosecrecy_deteq(beta: f64, rho: f64) -> f64 {
    // xi = beta/rho > 0, which is always admissible.
    let g = g_deteq(beta, beta / rho).expect("positive regularization is admissible");
    g.ln_1p() / std::f64::consts::LN_2
}

/// High-SNR law of [`sumrate_nosecrecy_deteq`].
pub fn sumrate_nosecrecy_highsnr(beta: f64, rho: f64) -> f64 {
    if is_beta_one(beta) {
        0.5 * rho.log2()
    } else if beta < 1.0 {
        ((1.0 - beta) / beta).log2() + rho.log2()
    } else {
        (beta / (beta - 1.0)).log2()
    }
}

/// High-SNR secrecy capacity of the single-user channel in which the other
/// `K - 1` users form one multi-antenna eavesdropper.
pub fn su_secrecy_capacity_highsnr(beta: f64, rho: f64) -> f64 {
    if is_beta_one(beta) {
        0.5 * rho.log2()
    } else if beta < 1.0 {
        rho.log2()
    } else if beta < 2.0 {
        (1.0 / (beta - 1.0)).log2()
    } else {
        0.0
    }
}

/// CSI distortion `tau^2 = c / rho` that targets a high-SNR gap of `log2(b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapSpec {
    pub b: f64,
    pub c: f64,
}

impl GapSpec {
    pub fn tau_sq(&self, rho: f64) -> f64 {
        (self.c / rho).min(1.0)
    }

    pub fn gap_bits(&self) -> f64 {
        self.b.log2()
    }
}

/// Scaling constant of the CSI distortion for loads `beta <= 1`.
///
/// For `beta > 1` any distortion vanishing with the SNR already gives a zero
/// gap, so no constant exists and a domain error is returned. `b = 1` is
/// accepted and gives `c = 0`.
pub fn gap_constant(beta: f64, b: f64) -> Result<GapSpec> {
    if !(b >= 1.0) || !b.is_finite() {
        return Err(Error::domain("gap_constant", format!("gap factor b = {b} must be at least 1")));
    }
    let c = if is_beta_one(beta) {
        2.0 / 3.0 * ((3.0 * b - 2.0).sqrt() - 1.0)
    } else if beta < 1.0 && beta > 0.0 {
        0.5 * ((4.0 * b - 3.0).sqrt() - 1.0)
    } else {
        return Err(Error::domain(
            "gap_constant",
            format!("beta = {beta} > 1: any vanishing distortion gives a zero high-SNR gap"),
        ));
    };
    Ok(GapSpec { b, c })
}

/// Feedback bits per user under random vector quantization that keep a
/// high-SNR gap of `log2(b)` at `rho_db`.
pub fn feedback_bits(m: usize, rho_db: f64, b: f64) -> Result<u32> {
    if m < 2 {
        return Err(Error::validation(format!("feedback needs at least 2 antennas, got {m}")));
    }
    if !(b > 1.0) || !b.is_finite() {
        return Err(Error::validation(format!("gap factor b = {b} must exceed 1")));
    }
    let mm1 = (m - 1) as f64;
    let bits = mm1 / 3.0 * rho_db - mm1 * (((4.0 * b - 3.0).sqrt() - 1.0).log2() - 1.0);
    Ok(if bits <= 0.0 { 0 } else { bits.ceil() as u32 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmt::rcipr_rate_highsnr;

    #[test]
    fn nosecrecy_unit_load_at_ten() {
        // 0.1 g^2 + 0.1 g - 1 = 0
        let g = (-0.1 + (0.01f64 + 0.4).sqrt()) / 0.2;
        assert!((g - 2.7016).abs() < 1e-4);
        let want = (1.0 + g).log2();
        assert!((sumrate_nosecrecy_deteq(1.0, 10.0) - want).abs() < 1e-12);
        assert!((want - 1.8881).abs() < 1e-4);
    }

    #[test]
    fn nosecrecy_limits() {
        assert!(sumrate_nosecrecy_deteq(1e6, 10.0) < 1e-4);
        assert!(sumrate_nosecrecy_deteq(1.0, 1e-9) < 1e-4);
        assert!(sumrate_nosecrecy_deteq(1.0, 1e-9) > 0.0);
    }

    #[test]
    fn secrecy_and_multiuser_losses() {
        let rho = 1e5;
        let loss = sumrate_nosecrecy_highsnr(1.0, rho) - rcipr_rate_highsnr(1.0, rho);
        assert!((loss - 0.5 * (64.0f64 / 27.0).log2()).abs() < 1e-12);
        assert!((loss - 0.62256).abs() < 1e-5);

        let beta = 1.2f64;
        let secrecy_loss = sumrate_nosecrecy_highsnr(beta, rho) - rcipr_rate_highsnr(beta, rho);
        assert!((secrecy_loss - (2.0 - beta.log2())).abs() < 1e-12);
        let mu_loss = su_secrecy_capacity_highsnr(beta, rho) - rcipr_rate_highsnr(beta, rho);
        assert!((mu_loss - (2.0 - 2.0 * beta.log2())).abs() < 1e-12);

        assert!((su_secrecy_capacity_highsnr(1.2, 7.0) - 5f64.log2()).abs() < 1e-12);
        assert_eq!(su_secrecy_capacity_highsnr(2.5, 1e4), 0.0);
    }

    #[test]
    fn gap_constant_branches() {
        let g = gap_constant(0.5, 2.0).unwrap();
        assert!((g.c - 0.5 * (5f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!((g.c - 0.61803).abs() < 1e-5);
        assert!((gap_constant(1.0, 2.0).unwrap().c - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(gap_constant(0.5, 1.0).unwrap().c, 0.0);
        assert!(gap_constant(1.2, 2.0).is_err());
        assert!(gap_constant(0.5, 0.5).is_err());
    }

    #[test]
    fn feedback_bits_examples() {
        assert_eq!(feedback_bits(10, 30.0, 2.0).unwrap(), 97);
        assert_eq!(feedback_bits(10, 0.0, 2.0).unwrap(), 7);
        assert_eq!(feedback_bits(10, -60.0, 2.0).unwrap(), 0);
        assert!(feedback_bits(1, 10.0, 2.0).is_err());
    }

    #[test]
    fn feedback_bits_meet_distortion_target() {
        let c = gap_constant(0.5, 2.0).unwrap().c;
        for m in [4usize, 10, 32] {
            for rho_db in [0.0, 10.0, 20.0, 30.0, 40.0] {
                let b = feedback_bits(m, rho_db, 2.0).unwrap() as f64;
                let tau_bound = 2f64.powf(-b / (m - 1) as f64);
                let rho = crate::rmt::db_to_linear(rho_db);
                assert!(tau_bound <= c / rho * (1.0 + 1e-12), "m={m} rho_db={rho_db}");
            }
        }
    }
}
