//! Writes the per-block capacity, expected distortion and expected growth
//! of a cover as CSV on stdout.
//!
//! cargo run --release --example cost_table -- crates/core/tests/data/covers/cameraman_q50.jpg > costs.csv

use jpeg_rdh::cost::{image_costs, write_costs_csv};
use jpeg_rdh::jpeg::parse_jpeg;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "crates/core/tests/data/covers/cameraman_q50.jpg".into());
    let costs = image_costs(&parse_jpeg(&std::fs::read(&path)?)?);
    let usable = costs.usable.iter().filter(|&&u| u).count();
    eprintln!("{path}: {} blocks, {usable} usable", costs.len());
    write_costs_csv(std::io::stdout().lock(), &costs.costs)?;
    Ok(())
}
