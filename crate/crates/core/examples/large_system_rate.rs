//! Deterministic-equivalent SINRs and secrecy rate at one operating point.
//!
//!     cargo run --example large_system_rate -- 0.8 10

use secrecy_rci::rmt::{db_to_linear, g_deteq, secrecy_rate_deteq, xi_star, LoadPoint};

fn main() -> secrecy_rci::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse().expect("numeric argument")).collect();
    let beta = args.first().copied().unwrap_or(1.0);
    let rho = db_to_linear(args.get(1).copied().unwrap_or(10.0));

    let xi = xi_star(beta, rho);
    let r = secrecy_rate_deteq(&LoadPoint::new(beta, rho, xi)?)?;
    println!("beta = {beta}, rho = {rho:.3}, xi* = {xi:.6}");
    println!("g = {:.6}", r.g);
    println!("SINR user {:.4}, eavesdroppers {:.4}", r.sinr_user, r.sinr_eve);
    println!("secrecy rate {:.4} bits/user, {:.4} bits/antenna", r.rate_per_user, r.rate_per_antenna);

    // g on both sides of the negated Marchenko-Pastur support
    for x in [-10.0, -0.01, 0.01, 1.0] {
        match g_deteq(beta, x) {
            Ok(g) => println!("g({beta}, {x}) = {g:.6}"),
            Err(e) => println!("g({beta}, {x}): {e}"),
        }
    }
    Ok(())
}
