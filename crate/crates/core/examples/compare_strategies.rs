//! Embeds the same random payload with each strategy and prints PSNR and
//! scan-size growth side by side.
//!
//! cargo run --release --example compare_strategies -- crates/core/tests/data/covers/lena_q50.jpg 2000 6000 10000

use jpeg_rdh::cli::random_payload;
use jpeg_rdh::embed::{EmbedOptions, Strategy};
use jpeg_rdh::jpeg::parse_jpeg;
use jpeg_rdh::report::embed_and_measure;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| "crates/core/tests/data/covers/lena_q50.jpg".into());
    let mut sizes: Vec<u64> = args.map(|a| a.parse()).collect::<Result<_, _>>()?;
    if sizes.is_empty() {
        sizes = vec![2000, 6000, 10000];
    }
    let cover = parse_jpeg(&std::fs::read(&path)?)?;

    println!("{path}");
    println!(
        "{:>8} {:>9} {:>9} {:>11} {:>9} {:>7} {:>7} {:>6} {:>8}",
        "payload", "strategy", "PSNR dB", "+scan bits", "E*", "blocks", "aux", "tail", "ms"
    );
    for bits in sizes {
        let payload = random_payload(bits, 1);
        for strategy in [Strategy::MultiObjective, Strategy::Huang, Strategy::Hou] {
            let options = EmbedOptions {
                strategy,
                ..EmbedOptions::default()
            };
            match embed_and_measure(&path, &cover, &payload, &options, None) {
                Ok(m) => {
                    let r = m.report;
                    println!(
                        "{:>8} {:>9} {:>9.2} {:>11} {:>9.1} {:>7} {:>7} {:>6} {:>8}",
                        bits,
                        r.strategy,
                        r.psnr_db.unwrap_or(f64::INFINITY),
                        r.increase_bits,
                        r.e_star_bits,
                        r.selected_count,
                        r.aux_bits,
                        r.tail_blocks,
                        r.runtime_ms
                    );
                }
                Err(e) => println!("{:>8} {:>9} {e}", bits, strategy.name()),
            }
        }
    }
    Ok(())
}
