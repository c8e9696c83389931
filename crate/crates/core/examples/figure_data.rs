//! Data behind a preset figure.
//!
//!     cargo run --release --example figure_data -- fig4

use secrecy_rci::cli::csv::write_csv;
use secrecy_rci::experiments::{run_figure, FigureId, FigureOverrides};

fn main() -> secrecy_rci::Result<()> {
    let id: FigureId = std::env::args().nth(1).as_deref().unwrap_or("fig1").parse()?;
    let o = FigureOverrides {
        trials: Some(50),
        ..Default::default()
    };
    let table = run_figure(id, &o)?;
    write_csv(&table, &format!("{id} with 50 trials"), std::io::stdout().lock()).expect("stdout");
    Ok(())
}
