//! Channel estimation error: the distortion that keeps a bounded high-SNR gap,
//! and the feedback bits needed to reach it with random vector quantization.

use secrecy_rci::mc::{ergodic_run, PrecoderKind, SystemConfig};
use secrecy_rci::rmt::{db_to_linear, feedback_bits, gap_constant, rcipr_rate_deteq, rcipr_rate_deteq_csi};

fn main() -> secrecy_rci::Result<()> {
    let beta = 0.8;
    let spec = gap_constant(beta, 2.0)?;
    println!("beta {beta}: tau^2 = {:.4}/rho targets a gap of {} bit", spec.c, spec.gap_bits());
    for db in [10.0, 20.0, 40.0, 60.0] {
        let rho = db_to_linear(db);
        let perfect = rcipr_rate_deteq(beta, rho)?;
        let csi = rcipr_rate_deteq_csi(beta, rho, spec.tau_sq(rho))?;
        println!("{db:>4} dB: perfect {perfect:.4}, estimated {csi:.4}, gap {:.4} bits/user", perfect - csi);
    }

    let cfg = SystemConfig {
        tau_sq: spec.tau_sq(100.0),
        trials: 200,
        seed: 3,
        ..SystemConfig::new(10, 8, 100.0)
    };
    let mc = ergodic_run(&cfg, PrecoderKind::RciPr)?;
    println!("M=10, K=8, 20 dB, tau^2={:.4}: MC {:.4} bits/user", cfg.tau_sq, mc.mean / 8.0);

    for db in [10.0, 20.0, 30.0] {
        println!("feedback for M=10 at {db} dB: {} bits", feedback_bits(10, db, 2.0)?);
    }
    Ok(())
}
