//! Parses baseline JPEGs, writes them back out and reports whether the
//! coefficients survive and how the file size changes.
//!
//! cargo run --release --example codec_roundtrip -- crates/core/tests/data/assorted/*.jpg

use jpeg_rdh::jpeg::tables::estimate_quality;
use jpeg_rdh::jpeg::{parse_jpeg, scan_bits, serialize_jpeg};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let paths: Vec<String> = std::env::args().skip(1).collect();
    if paths.is_empty() {
        eprintln!("usage: codec_roundtrip <file.jpg>...");
        std::process::exit(1);
    }
    for path in paths {
        let bytes = std::fs::read(&path)?;
        let img = match parse_jpeg(&bytes) {
            Ok(img) => img,
            Err(e) => {
                println!("{path}: {e}");
                continue;
            }
        };
        let written = serialize_jpeg(&img)?;
        let same = parse_jpeg(&written)?.same_coefficients(&img);
        println!(
            "{path}: QF~{} {} blocks, {} scan bits, {} -> {} bytes, coefficients {}",
            estimate_quality(img.luma_quant()),
            img.luma_block_count(),
            scan_bits(&img)?,
            bytes.len(),
            written.len(),
            if same { "identical" } else { "CHANGED" }
        );
    }
    Ok(())
}
