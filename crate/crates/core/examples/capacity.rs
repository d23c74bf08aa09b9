//! Prints how many payload bits each cover accepts under every strategy.
//!
//! cargo run --release --example capacity -- crates/core/tests/data/covers/*.jpg

use jpeg_rdh::cost::image_costs;
use jpeg_rdh::embed::{max_payload, EmbedOptions, Strategy};
use jpeg_rdh::jpeg::parse_jpeg;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let paths: Vec<String> = std::env::args().skip(1).collect();
    if paths.is_empty() {
        eprintln!("usage: capacity <cover.jpg>...");
        std::process::exit(1);
    }
    println!(
        "{:<48} {:>7} {:>9} {:>9} {:>9} {:>9}",
        "cover", "blocks", "ones", "multiobj", "huang", "hou"
    );
    for path in paths {
        let img = parse_jpeg(&std::fs::read(&path)?)?;
        let ones: u64 = image_costs(&img).costs.iter().map(|c| u64::from(c.r)).sum();
        let mut row = format!("{:<48} {:>7} {:>9}", path, img.luma_block_count(), ones);
        for strategy in [Strategy::MultiObjective, Strategy::Huang, Strategy::Hou] {
            let options = EmbedOptions {
                strategy,
                ..EmbedOptions::default()
            };
            match max_payload(&img, &options) {
                Ok(bits) => row += &format!(" {bits:>9}"),
                Err(_) => row += &format!(" {:>9}", "-"),
            }
        }
        println!("{row}");
    }
    Ok(())
}
