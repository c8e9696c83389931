//! Closed-form large-system expressions for RCI precoding in the MISO
//! broadcast channel with confidential messages.
//!
//! Everything here is a pure function of its scalar arguments. Rates are in
//! bits per channel use; "per user" rates multiply by the load `beta` to give
//! the per-antenna figure (`K/M` users per antenna).
//!
//! The central quantity is the deterministic equivalent `g(beta, xi)`, the
//! limit of the quadratic form `h_k^H (H_k^H H_k + M xi I)^{-1} h_k`. It is the
//! root of `xi g^2 + (xi + beta - 1) g - 1 = 0` picked by the sign of `xi`.

mod bounds;
mod deteq;
mod optimal;

pub use bounds::{
    feedback_bits, gap_constant, su_secrecy_capacity_highsnr, sumrate_nosecrecy_deteq,
    sumrate_nosecrecy_highsnr, GapSpec,
};
pub use deteq::{
    g_derivative, g_deteq, secrecy_rate_deteq, secrecy_rate_deteq_csi, CsiDistortion, DetEqResult,
    LoadPoint,
};
pub use optimal::{
    beta_fixedpoint_residual, rcipr_operating_point, rcipr_rate_deteq, rcipr_rate_deteq_csi,
    rcipr_rate_highsnr, rho_star, xi_star, xi_star_highsnr, RciPrOperatingPoint,
};

/// Below this magnitude `xi` is treated as zero and the channel-inversion
/// limit is evaluated instead of the general expression.
pub const XI_ZERO_THRESHOLD: f64 = 1e-9;

/// Loads within this distance of one use the `beta = 1` branch of the
/// piecewise high-SNR laws.
pub const BETA_ONE_TOL: f64 = 1e-12;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

pub(crate) fn is_beta_one(beta: f64) -> bool {
    (beta - 1.0).abs() <= BETA_ONE_TOL
}

/// Constants of the admissible regularization set: the negated
/// Marchenko-Pastur support `[-(1+sqrt(beta))^2, -(1-sqrt(beta))^2]` is removed,
/// inflated on both sides by `delta = c / M^(1/2 - epsilon)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AdmissibilityConstants {
    pub c: f64,
    pub epsilon: f64,
}

impl Default for AdmissibilityConstants {
    fn default() -> Self {
        AdmissibilityConstants {
            c: 1e-3,
            epsilon: 0.1,
        }
    }
}

impl AdmissibilityConstants {
    pub fn delta(&self, m: usize) -> f64 {
        self.c / (m as f64).powf(0.5 - self.epsilon)
    }

    /// Closed interval of regularization values excluded for `M` antennas.
    pub fn excluded_interval(&self, beta: f64, m: usize) -> (f64, f64) {
        let (lo, hi) = marchenko_pastur_excluded(beta);
        let delta = self.delta(m);
        (lo - delta, hi + delta)
    }

    pub fn is_admissible(&self, beta: f64, m: usize, xi: f64) -> bool {
        let (lo, hi) = self.excluded_interval(beta, m);
        xi.is_finite() && (xi < lo || xi > hi)
    }
}

/// The negated support of the Marchenko-Pastur law with ratio `beta`, on which
/// `g` has no real value.
pub fn marchenko_pastur_excluded(beta: f64) -> (f64, f64) {
    let s = beta.sqrt();
    (-(1.0 + s).powi(2), -(1.0 - s).powi(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn db_round_trip() {
        assert!((db_to_linear(10.0) - 10.0).abs() < 1e-12);
        assert!((db_to_linear(0.0) - 1.0).abs() < 1e-15);
        assert!((linear_to_db(db_to_linear(13.8)) - 13.8).abs() < 1e-12);
    }

    #[test]
    fn excluded_interval_shrinks_with_m() {
        let k = AdmissibilityConstants::default();
        let (lo16, hi16) = k.excluded_interval(0.8, 16);
        let (lo64, hi64) = k.excluded_interval(0.8, 64);
        assert!(lo16 < lo64 && hi16 > hi64);
        let (mlo, mhi) = marchenko_pastur_excluded(0.8);
        assert!(lo64 < mlo && hi64 > mhi);
        assert!(k.is_admissible(0.8, 64, 0.01));
        assert!(!k.is_admissible(0.8, 64, -1.0));
    }

    #[test]
    fn beta_one_excludes_nonpositive_neighbourhood() {
        let (lo, hi) = marchenko_pastur_excluded(1.0);
        assert_eq!(lo, -4.0);
        assert_eq!(hi, 0.0);
    }
}
