//! Writing a channel realization to text and reading it back bit for bit.

use secrecy_rci::mc::{dump, sample_channel, trial_rng, SystemConfig};

fn main() -> secrecy_rci::Result<()> {
    let h = sample_channel(&SystemConfig::new(3, 2, 1.0), &mut trial_rng(4, 0)).h;
    let mut text = Vec::new();
    dump::write_matrix(&h, &mut text).expect("in-memory write");
    print!("{}", String::from_utf8_lossy(&text));
    let back = dump::read_matrix(&text[..])?;
    println!("identical after round trip: {}", back == h);
    Ok(())
}
