//! A sweep over the SNR writing CSV to standard output.

use secrecy_rci::cli::csv::write_csv;
use secrecy_rci::experiments::{run_sweep, Series, SweepSpec, SweptParameter};
use secrecy_rci::mc::SystemConfig;

fn main() -> secrecy_rci::Result<()> {
    let fixed = SystemConfig {
        trials: 100,
        seed: 1,
        ..SystemConfig::new(16, 16, 1.0)
    };
    let spec = SweepSpec::new(
        SweptParameter::RhoDb,
        vec![0.0, 10.0, 20.0, 30.0],
        fixed,
        vec![Series::Mc, Series::Deteq, Series::Highsnr, Series::Nosecrecy],
    );
    let table = run_sweep(&spec)?;
    write_csv(&table, "rho sweep at M = K = 16", std::io::stdout().lock()).expect("stdout");
    Ok(())
}
