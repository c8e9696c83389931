use nalgebra::{Cholesky, Dyn, LU};
use num_complex::Complex64;
use serde::Serialize;

use super::CMatrix;
use crate::error::{Error, Result};
use crate::rmt::rcipr_operating_point;

/// Regularized Gram matrices whose condition estimate exceeds this are
/// rejected as [`Error::IllConditioned`].
pub const CONDITION_LIMIT: f64 = 1e12;

/// Precoding matrix with its normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecoderResult {
    /// `M x K` precoder, column `k` carrying user `k`'s message.
    pub w: CMatrix,
    /// Power normalization `tr{H^H H (H^H H + M xi I)^-2}`.
    pub gamma: f64,
    /// Power-reduction factor; 1 for plain RCI, infinite when nothing is sent.
    pub r: f64,
    pub xi: f64,
}

impl PrecoderResult {
    pub fn transmit_power(&self) -> f64 {
        self.w.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Which side of the push-through identity to factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GramForm {
    /// `H^H (H H^H + M xi I_K)^-1`
    Users,
    /// `(H^H H + M xi I_M)^-1 H^H`
    Antennas,
}

impl GramForm {
    /// The smaller of the two, which stays invertible at `xi = 0` whenever `H`
    /// has full rank.
    pub fn smaller(k: usize, m: usize) -> Self {
        if k < m {
            GramForm::Users
        } else {
            GramForm::Antennas
        }
    }
}

pub(crate) enum Factor {
    Cholesky(Cholesky<Complex64, Dyn>),
    Lu(LU<Complex64, Dyn, Dyn>),
}

impl Factor {
    /// Factors a Hermitian matrix. Cholesky is tried when it is expected to be
    /// positive definite, partial-pivot LU otherwise.
    pub(crate) fn new(a: CMatrix, positive_definite: bool) -> Result<Self> {
        if positive_definite {
            if let Some(ch) = a.clone().cholesky() {
                let diag: Vec<f64> = ch.l_dirty().diagonal().iter().map(|z| z.re).collect();
                let cond = ratio(&diag).powi(2);
                if cond > CONDITION_LIMIT {
                    return Err(Error::IllConditioned { condition: cond });
                }
                return Ok(Factor::Cholesky(ch));
            }
        }
        let lu = a.lu();
        let diag: Vec<f64> = lu.u().diagonal().iter().map(|z| z.norm()).collect();
        let cond = ratio(&diag);
        if !(cond <= CONDITION_LIMIT) {
            return Err(Error::IllConditioned { condition: cond });
        }
        Ok(Factor::Lu(lu))
    }

    pub(crate) fn solve(&self, rhs: &CMatrix) -> Result<CMatrix> {
        let x = match self {
            Factor::Cholesky(ch) => ch.solve(rhs),
            Factor::Lu(lu) => lu
                .solve(rhs)
                .ok_or(Error::IllConditioned { condition: f64::INFINITY })?,
        };
        if x.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(x)
        } else {
            Err(Error::IllConditioned { condition: f64::INFINITY })
        }
    }
}

fn ratio(diag: &[f64]) -> f64 {
    let max = diag.iter().cloned().fold(0.0, f64::max);
    let min = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    if min > 0.0 {
        max / min
    } else {
        f64::INFINITY
    }
}

/// Regularized Gram matrix of `h` in the requested form, `G + M xi I`.
pub(crate) fn regularized_gram(h: &CMatrix, xi: f64, form: GramForm) -> CMatrix {
    let m = h.ncols() as f64;
    let mut g = match form {
        GramForm::Users => h * h.adjoint(),
        GramForm::Antennas => h.adjoint() * h,
    };
    for i in 0..g.nrows() {
        g[(i, i)] += Complex64::new(m * xi, 0.0);
    }
    g
}

/// RCI precoder `(H^H H + M xi I)^-1 H^H / sqrt(gamma)`, solving with the
/// smaller Gram matrix.
pub fn build_rci(h: &CMatrix, xi: f64) -> Result<PrecoderResult> {
    build_rci_with_form(h, xi, GramForm::smaller(h.nrows(), h.ncols()))
}

pub fn build_rci_with_form(h: &CMatrix, xi: f64, form: GramForm) -> Result<PrecoderResult> {
    if !xi.is_finite() {
        return Err(Error::validation("xi must be finite"));
    }
    let a = regularized_gram(h, xi, form);
    let factor = Factor::new(a, xi > 0.0)?;
    let x = match form {
        GramForm::Antennas => factor.solve(&h.adjoint())?,
        // (H H^H + M xi I)^-1 H is the adjoint of the precoder.
        GramForm::Users => factor.solve(h)?.adjoint(),
    };
    let gamma: f64 = x.iter().map(|z| z.norm_sqr()).sum();
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::IllConditioned { condition: f64::INFINITY });
    }
    Ok(PrecoderResult {
        w: x / Complex64::new(gamma.sqrt(), 0.0),
        gamma,
        r: 1.0,
        xi,
    })
}

/// Regularization rule for the power-reduced precoder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum XiPolicy {
    /// Large-system optimum evaluated at the effective SNR `min(rho, rho*)`.
    LargeSystem,
    Fixed(f64),
}

/// RCI with power reduction.
///
/// For `beta <= 1` this is plain RCI at the large-system optimal
/// regularization. For `1 < beta < 2` the power is cut by
/// `r = max(rho / rho*, 1)`. For `beta >= 2` nothing is transmitted: the
/// precoder is zero and `gamma` and `r` are infinite.
pub fn build_rci_pr(h: &CMatrix, rho: f64, policy: XiPolicy) -> Result<PrecoderResult> {
    let beta = h.nrows() as f64 / h.ncols() as f64;
    let op = rcipr_operating_point(beta, rho);
    if !op.transmits() {
        return Ok(PrecoderResult {
            w: CMatrix::zeros(h.ncols(), h.nrows()),
            gamma: f64::INFINITY,
            r: f64::INFINITY,
            xi: op.xi,
        });
    }
    let xi = match policy {
        XiPolicy::LargeSystem => op.xi,
        XiPolicy::Fixed(xi) => xi,
    };
    let mut p = build_rci(h, xi)?;
    if op.r > 1.0 {
        p.w /= Complex64::new(op.r.sqrt(), 0.0);
        p.r = op.r;
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::{sample_channel, trial_rng, SystemConfig};
    use crate::rmt::xi_star;

    fn channel(m: usize, k: usize, seed: u64) -> CMatrix {
        sample_channel(&SystemConfig::new(m, k, 1.0), &mut trial_rng(seed, 0)).h
    }

    fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn unit_power() {
        for &(m, k, xi) in &[(8, 8, 0.1), (16, 12, 0.03), (10, 15, 0.2), (10, 15, 0.0), (12, 6, -0.05)] {
            let p = build_rci(&channel(m, k, 3), xi).unwrap();
            assert!((p.transmit_power() - 1.0).abs() < 1e-10, "m={m} k={k} xi={xi}");
            assert_eq!(p.r, 1.0);
        }
    }

    #[test]
    fn both_forms_agree() {
        for &(m, k, xi) in &[(8, 8, 0.1), (16, 12, 0.03), (10, 15, 0.2), (12, 6, -0.05), (10, 14, -0.005)] {
            let h = channel(m, k, 9);
            let a = build_rci_with_form(&h, xi, GramForm::Users).unwrap();
            let b = build_rci_with_form(&h, xi, GramForm::Antennas).unwrap();
            assert!(max_abs_diff(&a.w, &b.w) < 1e-10, "m={m} k={k} xi={xi}");
            assert!((a.gamma - b.gamma).abs() < 1e-10 * a.gamma);
        }
    }

    #[test]
    fn scalar_channel() {
        let h = CMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        let p = build_rci(&h, 1.0).unwrap();
        assert!((p.gamma - 0.25).abs() < 1e-15);
        assert!((p.w[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn singular_gram_rejected() {
        // Rank-one channel: two identical users.
        let row = [Complex64::new(1.0, 0.5), Complex64::new(-0.3, 0.2), Complex64::new(0.7, -1.0)];
        let h = CMatrix::from_fn(2, 3, |_, j| row[j]);
        assert!(matches!(build_rci(&h, 0.0), Err(Error::IllConditioned { .. })));
        assert!(build_rci(&h, 0.1).is_ok());
    }

    #[test]
    fn power_reduction_branches() {
        let h = channel(10, 8, 1);
        let pr = build_rci_pr(&h, 100.0, XiPolicy::LargeSystem).unwrap();
        let plain = build_rci(&h, xi_star(0.8, 100.0)).unwrap();
        assert_eq!(pr.r, 1.0);
        assert!(max_abs_diff(&pr.w, &plain.w) < 1e-14);

        let h = channel(10, 12, 1);
        let pr = build_rci_pr(&h, 100.0, XiPolicy::LargeSystem).unwrap();
        assert!((pr.r - 100.0 / 24.0).abs() < 1e-12);
        assert!((pr.transmit_power() - 0.24).abs() < 1e-10);
        assert!((pr.transmit_power() * pr.r - 1.0).abs() < 1e-10);
        assert_eq!(pr.xi, 0.0);

        let h = channel(8, 20, 1);
        let pr = build_rci_pr(&h, 10.0, XiPolicy::LargeSystem).unwrap();
        assert_eq!(pr.transmit_power(), 0.0);
        assert!(pr.r.is_infinite());
    }
}
