//! Ergodic secrecy rate of finite systems against the large-system value.
//!
//!     cargo run --release --example monte_carlo -- 32 500

use secrecy_rci::mc::{ergodic_run, PrecoderKind, SystemConfig};
use secrecy_rci::rmt::{db_to_linear, secrecy_rate_deteq, xi_star, LoadPoint};

fn main() -> secrecy_rci::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let m = args.next().unwrap_or(32);
    let trials = args.next().unwrap_or(300);
    let rho = db_to_linear(10.0);

    for beta in [0.5, 0.8, 1.0] {
        let k = (beta * m as f64).round() as usize;
        let cfg = SystemConfig {
            trials,
            seed: 1,
            ..SystemConfig::new(m, k, rho)
        };
        let beta = cfg.beta();
        let xi = xi_star(beta, rho);
        let mc = ergodic_run(&cfg, PrecoderKind::Rci { xi })?;
        let de = secrecy_rate_deteq(&LoadPoint::new(beta, rho, xi)?)?;
        println!(
            "M={m} K={k}: MC {:.4} +- {:.4} bits/antenna, large system {:.4} ({} skipped)",
            mc.mean_per_antenna(m),
            mc.stderr / m as f64,
            de.rate_per_antenna,
            mc.skipped
        );
    }
    Ok(())
}
