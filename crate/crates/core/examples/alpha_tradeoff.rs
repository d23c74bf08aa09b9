//! Sweeps the size-growth slack of the multi-objective selector and prints
//! how PSNR and scan growth move with it.
//!
//! cargo run --release --example alpha_tradeoff -- crates/core/tests/data/covers/lena_q50.jpg 6000

use jpeg_rdh::cli::random_payload;
use jpeg_rdh::embed::EmbedOptions;
use jpeg_rdh::jpeg::parse_jpeg;
use jpeg_rdh::report::embed_and_measure;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| "crates/core/tests/data/covers/lena_q50.jpg".into());
    let bits: u64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(6000);
    let cover = parse_jpeg(&std::fs::read(&path)?)?;
    let payload = random_payload(bits, 1);

    println!("{path}, {bits} bits");
    println!(
        "{:>6} {:>9} {:>11} {:>12}",
        "alpha", "PSNR dB", "+scan bits", "expected d"
    );
    for alpha in [0.0, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 8.0] {
        let options = EmbedOptions {
            alpha,
            ..EmbedOptions::default()
        };
        let r = embed_and_measure(&path, &cover, &payload, &options, None)?.report;
        println!(
            "{alpha:>6} {:>9.2} {:>11} {:>12.1}",
            r.psnr_db.unwrap_or(f64::INFINITY),
            r.increase_bits,
            r.expected_distortion
        );
    }
    Ok(())
}
