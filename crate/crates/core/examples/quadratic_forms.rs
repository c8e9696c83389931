//! The SINRs rewritten through the leave-one-out quadratic forms A_k, B_k and
//! the normalization gamma, checked against the direct computation.

use secrecy_rci::mc::{quadratic_forms, build_rci, compute_rates, sample_channel, trial_rng, SystemConfig};
use secrecy_rci::rmt::g_deteq;

fn main() -> secrecy_rci::Result<()> {
    let (m, k, rho, xi) = (64, 48, 10.0, 0.1);
    let cfg = SystemConfig::new(m, k, rho);
    let h = sample_channel(&cfg, &mut trial_rng(9, 0)).h;

    let aq = quadratic_forms(&h, xi)?;
    let direct = compute_rates(&h, &build_rci(&h, xi)?, rho)?;
    let worst = aq
        .sinr_user(rho)
        .iter()
        .zip(&direct.sinr_user)
        .chain(aq.sinr_eve(rho).iter().zip(&direct.sinr_eve))
        .map(|(a, b)| (a - b).abs() / b.max(1.0))
        .fold(0.0, f64::max);
    println!("largest relative SINR mismatch: {worst:.2e}");

    let mean_a = aq.a.iter().sum::<f64>() / k as f64;
    println!("mean A_k = {mean_a:.5}, g(beta, xi) = {:.5}", g_deteq(cfg.beta(), xi)?);
    Ok(())
}
