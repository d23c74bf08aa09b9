//! Measured outcome of one embedding.

use std::time::Instant;

use serde::Serialize;

use crate::embed::{plan_and_embed, EmbedOptions, EmbedOutcome};
use crate::error::Result;
use crate::jpeg::tables::estimate_quality;
use crate::jpeg::{scan_bits, serialize_jpeg, CoefficientImage};
use crate::select::HouOrder;
use crate::transform::{decompress, psnr, PixelImage};

pub const SCHEMA_VERSION: u32 = 1;

/// Everything reported about one (cover, payload, strategy) run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub cover_path: String,
    pub qf_estimate: u8,
    /// Largest payload the cover accepts.
    pub capacity_bits: u64,
    pub payload_bits: u64,
    pub strategy: &'static str,
    pub alpha: f64,
    pub hou_order: HouOrder,
    /// Against the decompressed cover; `null` when the images are identical.
    pub psnr_db: Option<f64>,
    /// Against the uncompressed original, when one was supplied.
    pub psnr_original_db: Option<f64>,
    pub file_bytes_cover: u64,
    pub file_bytes_stego: u64,
    pub scan_bits_cover: u64,
    pub scan_bits_stego: u64,
    pub increase_bits: i64,
    pub increase_percent: f64,
    pub selected_count: usize,
    pub required_bits: u64,
    pub aux_bits: usize,
    pub aux_rle: bool,
    pub tail_blocks: usize,
    pub e_star_bits: f64,
    pub expected_distortion: f64,
    pub expected_increase_bits: f64,
    pub hou_k: Option<usize>,
    pub runtime_ms: u64,
}

/// `None` for an infinite PSNR so the value stays valid JSON.
pub fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// Result of [`embed_and_measure`].
pub struct Measured {
    pub report: AnalysisReport,
    pub outcome: EmbedOutcome,
    pub stego_bytes: Vec<u8>,
}

/// Embeds and measures PSNR and size change of the result.
///
/// File sizes compare the re-serialized cover with the stego file, so
/// both go through the same writer.
pub fn embed_and_measure(
    cover_path: &str,
    cover: &CoefficientImage,
    payload: &[bool],
    options: &EmbedOptions,
    original: Option<&PixelImage>,
) -> Result<Measured> {
    let start = Instant::now();
    let outcome = plan_and_embed(cover, payload, options)?;
    let runtime_ms = start.elapsed().as_millis() as u64;

    let cover_bytes = serialize_jpeg(cover)?;
    let stego_bytes = serialize_jpeg(&outcome.stego)?;
    let scan_cover = scan_bits(cover)?;
    let scan_stego = scan_bits(&outcome.stego)?;
    let increase_bits = scan_stego as i64 - scan_cover as i64;

    let cover_pixels = decompress(cover);
    let stego_pixels = decompress(&outcome.stego);
    let psnr_db = finite(psnr(&cover_pixels, &stego_pixels)?);
    let psnr_original_db = match original {
        Some(o) => finite(psnr(o, &stego_pixels)?),
        None => None,
    };

    let plan = &outcome.plan;
    let report = AnalysisReport {
        schema: SCHEMA_VERSION,
        cover_path: cover_path.to_owned(),
        qf_estimate: estimate_quality(cover.luma_quant()),
        capacity_bits: plan.max_payload,
        payload_bits: payload.len() as u64,
        strategy: options.strategy.name(),
        alpha: options.alpha,
        hou_order: options.hou_order,
        psnr_db,
        psnr_original_db,
        file_bytes_cover: cover_bytes.len() as u64,
        file_bytes_stego: stego_bytes.len() as u64,
        scan_bits_cover: scan_cover,
        scan_bits_stego: scan_stego,
        increase_bits,
        increase_percent: if scan_cover > 0 {
            increase_bits as f64 / scan_cover as f64 * 100.0
        } else {
            0.0
        },
        selected_count: plan.decision.count(),
        required_bits: plan.required_bits,
        aux_bits: plan.aux_bits,
        aux_rle: plan.aux_rle,
        tail_blocks: cover.luma_block_count() - plan.tail_start,
        e_star_bits: plan.e_star,
        expected_distortion: plan.decision.objective_d,
        expected_increase_bits: plan.decision.objective_e,
        hou_k: plan.hou_k,
        runtime_ms,
    };
    Ok(Measured {
        report,
        outcome,
        stego_bytes,
    })
}
