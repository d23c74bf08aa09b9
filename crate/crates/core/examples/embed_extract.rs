//! Hides a short message in a cover, reads it back and checks that the
//! cover comes back unchanged.
//!
//! cargo run --release --example embed_extract -- crates/core/tests/data/covers/baboon_q70.jpg "hello"

use jpeg_rdh::embed::{bits_to_bytes, bytes_to_bits, extract, plan_and_embed, EmbedOptions};
use jpeg_rdh::jpeg::{parse_jpeg, serialize_jpeg};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| "crates/core/tests/data/covers/baboon_q70.jpg".into());
    let message = args.next().unwrap_or_else(|| "attack at dawn".into());

    let cover = parse_jpeg(&std::fs::read(&path)?)?;
    let out = plan_and_embed(
        &cover,
        &bytes_to_bits(message.as_bytes()),
        &EmbedOptions::default(),
    )?;
    let stego_bytes = serialize_jpeg(&out.stego)?;
    println!(
        "embedded {} bytes into {} blocks, record {} bits in a {}-block tail",
        message.len(),
        out.plan.decision.count(),
        out.plan.aux_bits,
        cover.luma_block_count() - out.plan.tail_start
    );

    let (bits, restored) = extract(&parse_jpeg(&stego_bytes)?)?;
    println!(
        "recovered: {}",
        String::from_utf8_lossy(&bits_to_bytes(&bits))
    );
    println!(
        "cover restored exactly: {}",
        restored.same_coefficients(&cover)
    );
    Ok(())
}
