//! How many users to serve: the high-SNR optimal load and the best user count
//! for a given array size.

use secrecy_rci::optimize::{optimal_user_count, solve_beta_fixedpoint};
use secrecy_rci::rmt::{beta_fixedpoint_residual, db_to_linear};

fn main() -> secrecy_rci::Result<()> {
    for db in [0.0, 10.0, 20.0, 30.0, 60.0] {
        let rho = db_to_linear(db);
        let beta = solve_beta_fixedpoint(rho, 1e-12)?;
        println!(
            "{db:>4} dB: optimal load {beta:.4} (residual {:.1e}); M=10 serves {} users, M=40 serves {}",
            beta_fixedpoint_residual(beta, rho),
            optimal_user_count(10, rho),
            optimal_user_count(40, rho)
        );
    }
    Ok(())
}
