//! One-bit embedding cost per DCT frequency for several quality factors.
//! Coarse steps make every shift dearer, most of all at high frequencies.
//!
//! cargo run --release --example quant_step_influence -- 30 50 90

use jpeg_rdh::cost::frequency_cost_table;
use jpeg_rdh::jpeg::tables::scaled_luma_quant;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut qualities: Vec<u8> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<Result<_, _>>()?;
    if qualities.is_empty() {
        qualities = vec![30, 50, 70, 90];
    }
    for q in qualities {
        let table = frequency_cost_table(&scaled_luma_quant(q));
        let mean = table.iter().sum::<f64>() / 64.0;
        println!(
            "QF {q}: mean {mean:.2}, (0,0) {:.2}, (7,7) {:.2}",
            table[0], table[63]
        );
        for row in table.chunks(8) {
            let cells: Vec<String> = row.iter().map(|c| format!("{c:8.2}")).collect();
            println!("  {}", cells.join(""));
        }
    }
    Ok(())
}
