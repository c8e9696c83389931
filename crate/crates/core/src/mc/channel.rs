use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{CMatrix, SystemConfig};

/// True channel together with the transmitter's estimate and its error.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    pub h: CMatrix,
    pub h_hat: CMatrix,
    pub e: CMatrix,
}

/// RNG for one trial: ChaCha8 keyed by `seed`, on stream number `trial`.
///
/// Streams are independent, so a trial's draws depend only on
/// `(seed, trial)` and not on how trials are scheduled across threads.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn standard_complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    // Two independent real normals, each of variance 1/2.
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, std: f64, rng: &mut R) -> CMatrix {
    // Row-major draw order, so the layout is independent of storage order.
    let mut out = CMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            out[(i, j)] = standard_complex_gaussian(rng) * std;
        }
    }
    out
}

/// Draws `H_hat` with entry variance `1 - tau^2` and an independent error `E`
/// with variance `tau^2`, and returns them with `H = H_hat + E`.
///
/// Both matrices are always drawn, so the stream position after a call does
/// not depend on `tau^2`.
pub fn sample_channel<R: Rng + ?Sized>(cfg: &SystemConfig, rng: &mut R) -> ChannelSet {
    let h_hat = gaussian_matrix(cfg.k, cfg.m, (1.0 - cfg.tau_sq).sqrt(), rng);
    let e = gaussian_matrix(cfg.k, cfg.m, cfg.tau_sq.sqrt(), rng);
    let h = &h_hat + &e;
    ChannelSet { h, h_hat, e }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(m: usize, k: usize, tau_sq: f64) -> SystemConfig {
        SystemConfig {
            tau_sq,
            ..SystemConfig::new(m, k, 10.0)
        }
    }

    #[test]
    fn unit_variance_entries() {
        let mut rng = trial_rng(11, 0);
        let mut acc = 0.0;
        let mut n = 0usize;
        while n < 100_000 {
            let c = sample_channel(&cfg(50, 50, 0.0), &mut rng);
            acc += c.h.iter().map(|z| z.norm_sqr()).sum::<f64>();
            n += 2500;
        }
        let mean = acc / n as f64;
        assert!((mean - 1.0).abs() < 0.02, "mean |h|^2 = {mean}");
    }

    #[test]
    fn error_variance_split() {
        let mut rng = trial_rng(5, 3);
        let c = sample_channel(&cfg(100, 100, 0.25), &mut rng);
        let e = c.e.iter().map(|z| z.norm_sqr()).sum::<f64>() / 1e4;
        let hh = c.h_hat.iter().map(|z| z.norm_sqr()).sum::<f64>() / 1e4;
        assert!((e - 0.25).abs() < 0.01, "E variance {e}");
        assert!((hh - 0.75).abs() < 0.02, "H_hat variance {hh}");
        assert_eq!(c.h, &c.h_hat + &c.e);
    }

    #[test]
    fn perfect_csi_has_zero_error() {
        let mut rng = trial_rng(1, 0);
        let c = sample_channel(&cfg(4, 3, 0.0), &mut rng);
        assert!(c.e.iter().all(|z| z.norm_sqr() == 0.0));
        assert_eq!(c.h, c.h_hat);
    }

    #[test]
    fn same_seed_same_draw() {
        let a = sample_channel(&cfg(6, 5, 0.1), &mut trial_rng(42, 7));
        let b = sample_channel(&cfg(6, 5, 0.1), &mut trial_rng(42, 7));
        assert_eq!(a, b);
        let c = sample_channel(&cfg(6, 5, 0.1), &mut trial_rng(42, 8));
        assert_ne!(a.h, c.h);
    }
}
