//! Driving the command-line front end from code.

use secrecy_rci::cli;

fn main() {
    let args = ["secrecy-rci", "deteq", "--beta", "1", "--rho-db", "10", "--xi", "auto"];
    let code = cli::parse_and_dispatch(args);
    println!("exit status {code}");
    let code = cli::parse_and_dispatch(["secrecy-rci", "mc", "--M", "8", "--K", "20", "--trials", "10"]);
    println!("exit status {code}");
}
