use std::f64::consts::LN_2;

use serde::Serialize;

use super::{CMatrix, PrecoderResult};
use crate::error::{Error, Result};

/// Per-user SINRs and secrecy rates of one realization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateReport {
    pub sinr_user: Vec<f64>,
    /// SINR of the alliance of the other `K - 1` users, who cancel
    /// interference and combine their observations.
    pub sinr_eve: Vec<f64>,
    pub rate_per_user: Vec<f64>,
    pub sum: f64,
}

impl RateReport {
    pub(crate) fn from_sinrs(sinr_user: Vec<f64>, sinr_eve: Vec<f64>) -> Self {
        let rate_per_user: Vec<f64> = sinr_user
            .iter()
            .zip(&sinr_eve)
            .map(|(&s, &e)| secrecy_bits(s, e))
            .collect();
        let sum = rate_per_user.iter().sum();
        RateReport {
            sinr_user,
            sinr_eve,
            rate_per_user,
            sum,
        }
    }

    /// Sum-rate with no secrecy constraint, `sum_k log2(1 + SINR_k)`.
    pub fn sum_rate_no_secrecy(&self) -> f64 {
        self.sinr_user.iter().map(|s| s.ln_1p() / LN_2).sum()
    }
}

pub(crate) fn secrecy_bits(sinr_user: f64, sinr_eve: f64) -> f64 {
    ((sinr_user.ln_1p() - sinr_eve.ln_1p()) / LN_2).max(0.0)
}

/// Exact SINRs of precoder `p` over the true channel `h`.
///
/// Power reduction is already folded into the scaling of `p.w`.
pub fn compute_rates(h: &CMatrix, p: &PrecoderResult, rho: f64) -> Result<RateReport> {
    let (k, m) = h.shape();
    if p.w.shape() != (m, k) {
        return Err(Error::validation(format!(
            "precoder is {}x{}, expected {m}x{k}",
            p.w.nrows(),
            p.w.ncols()
        )));
    }
    // gains[(i, j)] = |h_i^H w_j|^2
    let gains = (h * &p.w).map(|z| z.norm_sqr());
    let mut sinr_user = Vec::with_capacity(k);
    let mut sinr_eve = Vec::with_capacity(k);
    for u in 0..k {
        let interference: f64 = (0..k).filter(|&j| j != u).map(|j| gains[(u, j)]).sum();
        let leakage: f64 = (0..k).filter(|&i| i != u).map(|i| gains[(i, u)]).sum();
        sinr_user.push(rho * gains[(u, u)] / (1.0 + rho * interference));
        sinr_eve.push(rho * leakage);
    }
    Ok(RateReport::from_sinrs(sinr_user, sinr_eve))
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::mc::build_rci;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_user_has_no_eavesdropper() {
        let h = CMatrix::from_row_slice(1, 3, &[c(1.0, 0.2), c(-0.5, 0.1), c(0.3, 0.9)]);
        let p = build_rci(&h, 0.2).unwrap();
        let r = compute_rates(&h, &p, 10.0).unwrap();
        assert_eq!(r.sinr_eve, vec![0.0]);
        assert!((r.sum - (1.0 + r.sinr_user[0]).log2()).abs() < 1e-12);
    }

    #[test]
    fn zero_precoder_zero_rates() {
        let h = CMatrix::from_element(3, 2, c(0.4, -0.2));
        let p = PrecoderResult {
            w: CMatrix::zeros(2, 3),
            gamma: f64::INFINITY,
            r: f64::INFINITY,
            xi: 0.0,
        };
        let r = compute_rates(&h, &p, 100.0).unwrap();
        assert_eq!(r.sum, 0.0);
        assert!(r.rate_per_user.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn two_by_two_hand_computation() {
        let h = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.5, 0.5), c(0.0, -1.0), c(2.0, 0.0)]);
        let w = CMatrix::from_row_slice(2, 2, &[c(0.6, 0.0), c(0.1, 0.2), c(-0.2, 0.1), c(0.5, 0.0)]);
        let p = PrecoderResult {
            w,
            gamma: 1.0,
            r: 1.0,
            xi: 0.0,
        };
        let rho = 4.0;
        // h_i^H w_j written out, with h_i^H the i-th row of H.
        let t11 = c(1.0, 0.0) * c(0.6, 0.0) + c(0.5, 0.5) * c(-0.2, 0.1);
        let t12 = c(1.0, 0.0) * c(0.1, 0.2) + c(0.5, 0.5) * c(0.5, 0.0);
        let t21 = c(0.0, -1.0) * c(0.6, 0.0) + c(2.0, 0.0) * c(-0.2, 0.1);
        let t22 = c(0.0, -1.0) * c(0.1, 0.2) + c(2.0, 0.0) * c(0.5, 0.0);
        let s1 = rho * t11.norm_sqr() / (1.0 + rho * t12.norm_sqr());
        let s2 = rho * t22.norm_sqr() / (1.0 + rho * t21.norm_sqr());
        let e1 = rho * t21.norm_sqr();
        let e2 = rho * t12.norm_sqr();
        let r = compute_rates(&h, &p, rho).unwrap();
        for (got, want) in r.sinr_user.iter().zip([s1, s2]) {
            assert!((got - want).abs() < 1e-12);
        }
        for (got, want) in r.sinr_eve.iter().zip([e1, e2]) {
            assert!((got - want).abs() < 1e-12);
        }
        let want_sum = ((1.0 + s1).log2() - (1.0 + e1).log2()).max(0.0) + ((1.0 + s2).log2() - (1.0 + e2).log2()).max(0.0);
        assert!((r.sum - want_sum).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch() {
        let h = CMatrix::zeros(3, 2);
        let p = PrecoderResult {
            w: CMatrix::zeros(3, 2),
            gamma: 1.0,
            r: 1.0,
            xi: 0.0,
        };
        assert!(compute_rates(&h, &p, 1.0).is_err());
    }
}
