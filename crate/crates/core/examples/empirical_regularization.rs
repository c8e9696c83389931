//! Per-realization optimal regularization over the admissible set, compared
//! with the large-system optimum.

use secrecy_rci::mc::{sample_channel, trial_rng, GramSpectrum, SystemConfig};
use secrecy_rci::optimize::{xi_star_empirical, SearchDomain};
use secrecy_rci::rmt::{xi_star, AdmissibilityConstants};

fn main() -> secrecy_rci::Result<()> {
    let (m, k, rho) = (16, 13, 10.0);
    let cfg = SystemConfig::new(m, k, rho);
    let domain = SearchDomain::admissible(cfg.beta(), m, &AdmissibilityConstants::default());
    println!("admissible intervals: {:?}", domain.intervals());

    let large = xi_star(cfg.beta(), rho);
    for trial in 0..5 {
        let h = sample_channel(&cfg, &mut trial_rng(2, trial)).h;
        let xi = xi_star_empirical(&h, rho, &domain)?;
        let s = GramSpectrum::new(&h);
        println!(
            "trial {trial}: xi = {xi:.5} ({:.4} bits), large-system xi = {large:.5} ({:.4} bits)",
            s.sum_rate(rho, xi)?,
            s.sum_rate(rho, large)?
        );
    }
    Ok(())
}
