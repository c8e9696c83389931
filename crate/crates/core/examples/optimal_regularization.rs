//! The rate-maximizing regularization and, for loads between 1 and 2, the
//! SNR beyond which plain RCI loses secrecy rate.

use secrecy_rci::rmt::{linear_to_db, rho_star, secrecy_rate_deteq, xi_star, xi_star_highsnr, LoadPoint};

fn main() -> secrecy_rci::Result<()> {
    println!("{:>6} {:>8} {:>12} {:>12} {:>10}", "beta", "rho", "xi*", "high-SNR", "R/user");
    for beta in [0.5, 1.0, 1.2, 1.5] {
        for rho in [1.0, 10.0, 100.0, 1000.0] {
            let xi = xi_star(beta, rho);
            let r = secrecy_rate_deteq(&LoadPoint::new(beta, rho, xi)?)?;
            println!(
                "{beta:>6} {rho:>8} {xi:>12.6} {:>12.6} {:>10.4}",
                xi_star_highsnr(beta, rho),
                r.rate_per_user
            );
        }
    }
    for beta in [1.2, 1.5, 1.8] {
        let (rho, peak) = rho_star(beta)?;
        println!("beta {beta}: rate peaks at rho = {rho:.3} ({:.2} dB), {peak:.4} bits/user", linear_to_db(rho));
    }
    Ok(())
}
