//! Leave-one-out quadratic forms behind the large-system analysis.
//!
//! With `H_k` the channel without row `k`,
//!
//! ```text
//! A_k = h_k^H (H_k^H H_k + M xi I)^-1 h_k
//! B_k = h_k^H (H_k^H H_k + M xi I)^-1 H_k^H H_k (H_k^H H_k + M xi I)^-1 h_k
//! ```
//!
//! and the RCI SINRs can be rewritten as
//! `SINR_k = rho A_k^2 / (gamma (1 + A_k)^2 + rho B_k)` and
//! `SINR_eve = rho B_k / (gamma (1 + A_k)^2)`. Computing them from these forms
//! is an independent check on [`compute_rates`](super::compute_rates).
//!
//! Under CSI error the precoder is built from `H_hat` and the eavesdroppers
//! see `H_k = H_hat_k + E_k`. With `x = Omega_k h_hat_k`,
//! `Omega_k = (H_hat_k^H H_hat_k + M xi I)^-1`,
//!
//! ```text
//! ||H_k x||^2 = B_hat_k + 2 (1 + A_hat_k) Q_k + (1 + A_hat_k)^2 R_k
//! Q_k = Re{ (H_hat_k x)^H (E_k x) } / (1 + A_hat_k)
//! R_k = ||E_k x||^2 / (1 + A_hat_k)^2
//! ```
//!
//! so both `Q_k` and `R_k` vanish without estimation error.

use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::precoder::{regularized_gram, Factor, GramForm};
use super::{CMatrix, ChannelSet};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadraticForms {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// `tr{(H^H H + M xi I)^-1} - M xi tr{(H^H H + M xi I)^-2}`
    pub gamma: f64,
    pub csi: Option<CsiQuantities>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CsiQuantities {
    pub a_hat: Vec<f64>,
    pub b_hat: Vec<f64>,
    pub q: Vec<f64>,
    pub r: Vec<f64>,
    pub gamma_hat: f64,
}

impl QuadraticForms {
    pub fn sinr_user(&self, rho: f64) -> Vec<f64> {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(&a, &b)| rho * a * a / (self.gamma * (1.0 + a).powi(2) + rho * b))
            .collect()
    }

    pub fn sinr_eve(&self, rho: f64) -> Vec<f64> {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(&a, &b)| rho * b / (self.gamma * (1.0 + a).powi(2)))
            .collect()
    }

    /// Eavesdropper SINR under CSI error; `None` for perfect-CSI quantities.
    pub fn sinr_eve_csi(&self, rho: f64) -> Option<Vec<f64>> {
        let c = self.csi.as_ref()?;
        Some(
            (0..c.a_hat.len())
                .map(|k| {
                    let one_a = 1.0 + c.a_hat[k];
                    rho * (c.b_hat[k] + 2.0 * one_a * c.q[k] + one_a * one_a * c.r[k])
                        / (c.gamma_hat * one_a * one_a)
                })
                .collect(),
        )
    }
}

struct LeaveOneOut {
    a: f64,
    b: f64,
    q: f64,
    r: f64,
}

fn without_row(h: &CMatrix, k: usize) -> CMatrix {
    h.clone().remove_row(k)
}

fn leave_one_out(h: &CMatrix, err: Option<&CMatrix>, k: usize, xi: f64) -> Result<LeaveOneOut> {
    let hk = without_row(h, k);
    let gram = regularized_gram(&hk, xi, GramForm::Antennas);
    let factor = Factor::new(gram, xi > 0.0)?;
    let h_col: DVector<Complex64> = h.row(k).adjoint();
    let x = factor.solve(&CMatrix::from_column_slice(h_col.len(), 1, h_col.as_slice()))?;
    let a = h_col.dotc(&x.column(0)).re;
    let hk_x = &hk * &x;
    let b: f64 = hk_x.iter().map(|z| z.norm_sqr()).sum();
    let (q, r) = match err {
        Some(e) => {
            let ek_x = without_row(e, k) * &x;
            let one_a = 1.0 + a;
            let cross: Complex64 = hk_x.iter().zip(ek_x.iter()).map(|(u, v)| u.conj() * v).sum();
            let r: f64 = ek_x.iter().map(|z| z.norm_sqr()).sum();
            (cross.re / one_a, r / (one_a * one_a))
        }
        None => (0.0, 0.0),
    };
    Ok(LeaveOneOut { a, b, q, r })
}

fn gamma_by_traces(h: &CMatrix, xi: f64) -> Result<f64> {
    let m = h.ncols();
    let gram = regularized_gram(h, xi, GramForm::Antennas);
    let inv = Factor::new(gram, xi > 0.0)?.solve(&CMatrix::identity(m, m))?;
    let tr1: f64 = inv.diagonal().iter().map(|z| z.re).sum();
    let tr2: f64 = inv.iter().map(|z| z.norm_sqr()).sum();
    Ok(tr1 - m as f64 * xi * tr2)
}

fn per_user(h: &CMatrix, err: Option<&CMatrix>, xi: f64) -> Result<Vec<LeaveOneOut>> {
    (0..h.nrows())
        .into_par_iter()
        .map(|k| leave_one_out(h, err, k, xi))
        .collect()
}

/// Quadratic forms of a perfectly known channel.
pub fn quadratic_forms(h: &CMatrix, xi: f64) -> Result<QuadraticForms> {
    let loo = per_user(h, None, xi)?;
    Ok(QuadraticForms {
        a: loo.iter().map(|q| q.a).collect(),
        b: loo.iter().map(|q| q.b).collect(),
        gamma: gamma_by_traces(h, xi)?,
        csi: None,
    })
}

/// Quadratic forms of the true channel together with those of the estimate
/// and the error cross terms.
pub fn quadratic_forms_csi(ch: &ChannelSet, xi: f64) -> Result<QuadraticForms> {
    let mut out = quadratic_forms(&ch.h, xi)?;
    let loo = per_user(&ch.h_hat, Some(&ch.e), xi)?;
    out.csi = Some(CsiQuantities {
        a_hat: loo.iter().map(|q| q.a).collect(),
        b_hat: loo.iter().map(|q| q.b).collect(),
        q: loo.iter().map(|q| q.q).collect(),
        r: loo.iter().map(|q| q.r).collect(),
        gamma_hat: gamma_by_traces(&ch.h_hat, xi)?,
    });
    Ok(out)
}
