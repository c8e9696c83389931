//! RCI with power reduction: above the peak SNR part of the power is left
//! unused and the secrecy rate stays at its maximum instead of falling.

use secrecy_rci::rmt::{db_to_linear, rcipr_operating_point, rcipr_rate_deteq, secrecy_rate_deteq, xi_star, LoadPoint};

fn main() -> secrecy_rci::Result<()> {
    let beta = 1.2;
    println!("{:>7} {:>10} {:>8} {:>8} {:>10} {:>10}", "rho_dB", "xi", "r", "saving", "RCI", "RCI-PR");
    for i in 0..=8 {
        let db = 5.0 * i as f64;
        let rho = db_to_linear(db);
        let op = rcipr_operating_point(beta, rho);
        let plain = secrecy_rate_deteq(&LoadPoint::new(beta, rho, xi_star(beta, rho))?)?.rate_per_user;
        println!(
            "{db:>7} {:>10.5} {:>8.3} {:>7.1}% {plain:>10.4} {:>10.4}",
            op.xi,
            op.r,
            100.0 * op.power_saving(),
            rcipr_rate_deteq(beta, rho)?
        );
    }
    let op = rcipr_operating_point(2.5, 100.0);
    println!("beta 2.5 transmits: {}", op.transmits());
    Ok(())
}
