use nalgebra::DVector;

use super::rates::RateReport;
use super::{CMatrix, CONDITION_LIMIT};
use crate::error::{Error, Result};

/// Eigendecomposition of `H H^H` for evaluating the RCI secrecy rate at many
/// regularization values of one realization.
///
/// With `H H^H = U diag(lambda) U^H` the effective channel of RCI is
/// `H W = U diag(d) U^H / sqrt(gamma)`, `d_i = lambda_i / (lambda_i + M xi)`,
/// which is Hermitian. Every SINR then depends only on the weights
/// `|U_ki|^2` and `d`, so each new `xi` costs `O(K^2)`.
#[derive(Debug, Clone)]
pub struct GramSpectrum {
    m: usize,
    lambda: Vec<f64>,
    /// `weights[k * n + i] = |U_ki|^2`
    weights: Vec<f64>,
}

impl GramSpectrum {
    pub fn new(h: &CMatrix) -> Self {
        let (k, m) = h.shape();
        let eig = (h * h.adjoint()).symmetric_eigen();
        let lmax = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
        // Eigenvalues at rounding level belong to the null space of H H^H
        // when K > M.
        let floor = lmax * 1e-10;
        let lambda: Vec<f64> = eig
            .eigenvalues
            .iter()
            .map(|&l| if l > floor { l } else { 0.0 })
            .collect();
        let n = lambda.len();
        let mut weights = vec![0.0; k * n];
        for u in 0..k {
            for i in 0..n {
                weights[u * n + i] = eig.eigenvectors[(u, i)].norm_sqr();
            }
        }
        GramSpectrum { m, lambda, weights }
    }

    pub fn users(&self) -> usize {
        self.lambda.len()
    }

    pub fn eigenvalues(&self) -> DVector<f64> {
        DVector::from_vec(self.lambda.clone())
    }

    /// Condition number of the regularized Gram matrix restricted to the
    /// range of `H`, which is what the RCI solve actually inverts.
    pub fn condition(&self, xi: f64) -> f64 {
        let shift = self.m as f64 * xi;
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for &l in self.lambda.iter().filter(|&&l| l > 0.0) {
            let v = (l + shift).abs();
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if lo > 0.0 {
            hi / lo
        } else {
            f64::INFINITY
        }
    }

    /// Exact rates of RCI with regularization `xi` and power reduction `r`.
    pub fn rates(&self, rho: f64, xi: f64, r: f64) -> Result<RateReport> {
        let cond = self.condition(xi);
        if !(cond <= CONDITION_LIMIT) {
            return Err(Error::IllConditioned { condition: cond });
        }
        let shift = self.m as f64 * xi;
        let d: Vec<f64> = self
            .lambda
            .iter()
            .map(|&l| if l > 0.0 { l / (l + shift) } else { 0.0 })
            .collect();
        let gamma: f64 = self
            .lambda
            .iter()
            .map(|&l| if l > 0.0 { l / ((l + shift) * (l + shift)) } else { 0.0 })
            .sum();
        let scale = 1.0 / (gamma * r);
        let n = self.lambda.len();
        let mut sinr_user = Vec::with_capacity(n);
        let mut sinr_eve = Vec::with_capacity(n);
        for u in 0..n {
            let w = &self.weights[u * n..(u + 1) * n];
            let mean: f64 = w.iter().zip(&d).map(|(wi, di)| wi * di).sum();
            // Off-diagonal energy of row u equals the weighted variance of d
            // because the weights of a unitary row sum to one.
            let spread: f64 = w.iter().zip(&d).map(|(wi, di)| wi * (di - mean) * (di - mean)).sum();
            let signal = mean * mean * scale;
            let leak = spread * scale;
            sinr_user.push(rho * signal / (1.0 + rho * leak));
            sinr_eve.push(rho * leak);
        }
        Ok(RateReport::from_sinrs(sinr_user, sinr_eve))
    }

    pub fn sum_rate(&self, rho: f64, xi: f64) -> Result<f64> {
        Ok(self.rates(rho, xi, 1.0)?.sum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::{build_rci, compute_rates, sample_channel, trial_rng, SystemConfig};

    #[test]
    fn matches_direct_solve() {
        for &(m, k) in &[(8, 8), (16, 12), (10, 15), (12, 5)] {
            let h = sample_channel(&SystemConfig::new(m, k, 1.0), &mut trial_rng(21, 0)).h;
            let spec = GramSpectrum::new(&h);
            let beta = k as f64 / m as f64;
            let mut xis = vec![0.3, 0.02, 2.0];
            if beta > 1.0 {
                xis.extend([0.0, -0.005]);
            }
            for xi in xis {
                for rho in [1.0, 10.0, 100.0] {
                    let a = spec.rates(rho, xi, 1.0).unwrap();
                    let p = build_rci(&h, xi).unwrap();
                    let b = compute_rates(&h, &p, rho).unwrap();
                    for (x, y) in a.sinr_user.iter().zip(&b.sinr_user) {
                        assert!((x - y).abs() < 1e-8 * y.max(1.0), "m={m} k={k} xi={xi}: {x} vs {y}");
                    }
                    for (x, y) in a.sinr_eve.iter().zip(&b.sinr_eve) {
                        assert!((x - y).abs() < 1e-8 * y.max(1.0), "m={m} k={k} xi={xi}: {x} vs {y}");
                    }
                }
            }
        }
    }

    #[test]
    fn condition_blows_up_on_eigenvalue() {
        let h = sample_channel(&SystemConfig::new(6, 4, 1.0), &mut trial_rng(3, 0)).h;
        let spec = GramSpectrum::new(&h);
        let l0 = spec.eigenvalues()[0];
        assert!(spec.condition(-l0 / 6.0) > 1e12);
        assert!(spec.rates(10.0, -l0 / 6.0, 1.0).is_err());
    }
}
