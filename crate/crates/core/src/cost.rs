//! Per-block embedding costs: capacity, expected spatial distortion and
//! expected growth of the AC code.
//!
//! All expectations are over independent fair message bits on the
//! embeddable (±1) coefficients, with every larger magnitude shifted
//! outward by one.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jpeg::tables::ZIGZAG;
use crate::jpeg::{ac_code_length, Block, CoefficientImage, HuffmanTable, MAX_AC_MAGNITUDE};
use crate::transform::idct_block;

/// One 8x8 luminance block seen as an embedding unit.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    pub index: usize,
    pub coeffs: Block,
    pub quant_table_ref: u8,
}

/// Capacity, expected distortion and expected size change of a signal.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct CostVector {
    /// Bits the block can carry.
    pub r: u32,
    /// Expected squared spatial error.
    pub d: f64,
    /// Expected AC code length change in bits.
    pub e: f64,
}

/// Number of AC coefficients equal to +1 or -1.
pub fn capacity(coeffs: &Block) -> u32 {
    coeffs[1..].iter().filter(|&&v| v.abs() == 1).count() as u32
}

/// Number of AC coefficients equal to zero.
pub fn zero_ac_count(coeffs: &Block) -> u32 {
    coeffs[1..].iter().filter(|&&v| v == 0).count() as u32
}

/// Expected squared error at one coefficient position.
#[inline]
fn coefficient_distortion(v: i16, step: u16) -> f64 {
    let q2 = f64::from(step) * f64::from(step);
    match v.abs() {
        0 => 0.0,
        1 => 0.5 * q2,
        _ => q2,
    }
}

/// Closed form of the expected distortion (orthonormal IDCT preserves
/// energy, so each coefficient contributes its own dequantized change).
pub fn expected_distortion(coeffs: &Block, quant: &[u16; 64]) -> f64 {
    (1..64)
        .map(|i| coefficient_distortion(coeffs[i], quant[i]))
        .sum()
}

/// Expected distortion restricted to the positions where `mask` is set.
pub fn masked_distortion(coeffs: &Block, quant: &[u16; 64], mask: &[bool; 64]) -> f64 {
    (1..64)
        .filter(|&i| mask[i])
        .map(|i| coefficient_distortion(coeffs[i], quant[i]))
        .sum()
}

/// Expected distortion evaluated in the pixel domain.
///
/// With `f = f0 + sum_j b_j g_j`, where `f0` is the IDCT of the
/// deterministic shifts and `g_j` the IDCT of the change a 1-bit causes at
/// embeddable coefficient `j`, `E|f|^2 = |f0 + sum g_j / 2|^2 + sum |g_j|^2 / 4`.
pub fn expected_distortion_spatial(coeffs: &Block, quant: &[u16; 64]) -> f64 {
    let mut shifts = [0.0; 64];
    let mut mean = [0.0; 64];
    let mut variance = 0.0;
    for i in 1..64 {
        let v = coeffs[i];
        let sign = f64::from(v.signum());
        let step = f64::from(quant[i]);
        match v.abs() {
            0 => {}
            1 => {
                let mut unit = [0.0; 64];
                unit[i] = sign * step;
                let g = idct_block(&unit);
                variance += 0.25 * g.iter().map(|x| x * x).sum::<f64>();
                for (m, gx) in mean.iter_mut().zip(g.iter()) {
                    *m += 0.5 * gx;
                }
            }
            _ => shifts[i] = sign * step,
        }
    }
    let f0 = idct_block(&shifts);
    f0.iter()
        .zip(mean.iter())
        .map(|(a, b)| (a + b) * (a + b))
        .sum::<f64>()
        + variance
}

/// Code length of the run/size symbol plus magnitude bits.
#[inline]
fn symbol_bits(table: &HuffmanTable, run: u8, size: u8) -> Result<i64> {
    Ok(i64::from(table.code_length_or_err((run << 4) | size)?) + i64::from(size))
}

#[inline]
fn size_of(magnitude: i32) -> u8 {
    (32 - magnitude.unsigned_abs().leading_zeros()) as u8
}

/// Expected change of the AC code length in bits.
///
/// Histogram shifting never turns a zero into a nonzero or back, so the
/// run structure, ZRL and EOB codes are unchanged and only the run/size
/// symbol of each nonzero coefficient can change. The expectation is
/// therefore a sum of independent per-coefficient terms and is exact.
pub fn expected_size_delta(coeffs: &Block, table: &HuffmanTable) -> Result<f64> {
    let mut delta = 0.0;
    let mut run = 0u8;
    for &natural in &ZIGZAG[1..] {
        let v = i32::from(coeffs[natural]);
        if v == 0 {
            run += 1;
            continue;
        }
        let run16 = run % 16;
        run = 0;
        let m = v.abs();
        if m + 1 > MAX_AC_MAGNITUDE {
            return Err(Error::CoefficientOverflow {
                value: v + v.signum(),
            });
        }
        let before = symbol_bits(table, run16, size_of(m))?;
        let after = symbol_bits(table, run16, size_of(m + 1))?;
        let change = (after - before) as f64;
        delta += if m == 1 { 0.5 * change } else { change };
    }
    Ok(delta)
}

/// Realized change of the AC code length between two versions of a block.
pub fn size_delta_bits(before: &Block, after: &Block, table: &HuffmanTable) -> Result<i64> {
    Ok(i64::from(ac_code_length(after, table)?) - i64::from(ac_code_length(before, table)?))
}

/// Relative change of the AC code length in percent.
pub fn size_delta_percent(before: &Block, after: &Block, table: &HuffmanTable) -> Result<f64> {
    let base = ac_code_length(before, table)?;
    if base == 0 {
        return Err(Error::ZeroLength);
    }
    let delta = size_delta_bits(before, after, table)?;
    Ok(delta as f64 / f64::from(base) * 100.0)
}

/// Mean squared pixel change caused by a unit change of the quantized
/// coefficient at (u, v), evaluated through the IDCT.
pub fn frequency_cost(u: usize, v: usize, quant: &[u16; 64]) -> f64 {
    assert!(u < 8 && v < 8, "frequency ({u},{v}) out of range");
    let mut unit = [0.0; 64];
    unit[u * 8 + v] = f64::from(quant[u * 8 + v]);
    idct_block(&unit).iter().map(|x| x * x).sum::<f64>() / 64.0
}

/// `Q(u,v)^2 / 64`, the closed form of [`frequency_cost`].
pub fn frequency_cost_closed(u: usize, v: usize, quant: &[u16; 64]) -> f64 {
    let q = f64::from(quant[u * 8 + v]);
    q * q / 64.0
}

/// Per-frequency cost table in natural order.
pub fn frequency_cost_table(quant: &[u16; 64]) -> [f64; 64] {
    let mut out = [0.0; 64];
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = frequency_cost(i / 8, i % 8, quant);
    }
    out
}

/// Counts of ±1 and of |v| > 1 at one frequency.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct FrequencyCounts {
    pub ones: u64,
    pub outer: u64,
}

/// `(0.5 * ones + outer) * cost / ones`.
pub fn average_distortion(counts: FrequencyCounts, cost: f64, u: usize, v: usize) -> Result<f64> {
    if counts.ones == 0 {
        return Err(Error::EmptyFrequency { u, v });
    }
    let j = (0.5 * counts.ones as f64 + counts.outer as f64) * cost;
    Ok(j / counts.ones as f64)
}

/// Frequency counts over the given luminance blocks.
pub fn frequency_counts(
    img: &CoefficientImage,
    blocks: impl Iterator<Item = usize>,
) -> [FrequencyCounts; 64] {
    let mut counts = [FrequencyCounts::default(); 64];
    for b in blocks {
        let block = img.luma_block(b);
        for i in 1..64 {
            match block[i].abs() {
                0 => {}
                1 => counts[i].ones += 1,
                _ => counts[i].outer += 1,
            }
        }
    }
    counts
}

/// Average distortion of frequency (u, v) over all luminance blocks.
pub fn frequency_avg_distortion(img: &CoefficientImage, u: usize, v: usize) -> Result<f64> {
    let counts = frequency_counts(img, 0..img.luma_block_count());
    let quant = img.luma_quant();
    average_distortion(counts[u * 8 + v], frequency_cost(u, v, quant), u, v)
}

/// Luminance blocks as signals, in raster order.
pub fn signals(img: &CoefficientImage) -> Vec<Signal> {
    let table = img.luma().quant_table_id;
    (0..img.luma_block_count())
        .map(|index| Signal {
            index,
            coeffs: *img.luma_block(index),
            quant_table_ref: table,
        })
        .collect()
}

/// Costs of every luminance block.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImageCosts {
    pub costs: Vec<CostVector>,
    /// False for blocks that cannot be shifted safely (a magnitude would
    /// exceed the baseline range or the Huffman table lacks a symbol).
    pub usable: Vec<bool>,
}

impl ImageCosts {
    pub fn len(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }
}

/// Cost of one block; `None` when embedding would be unsafe.
pub fn block_cost(coeffs: &Block, quant: &[u16; 64], table: &HuffmanTable) -> Option<CostVector> {
    if coeffs[1..]
        .iter()
        .any(|&v| i32::from(v).abs() >= MAX_AC_MAGNITUDE)
    {
        return None;
    }
    let e = expected_size_delta(coeffs, table).ok()?;
    Some(CostVector {
        r: capacity(coeffs),
        d: expected_distortion(coeffs, quant),
        e,
    })
}

/// Costs for every luminance block of the image.
pub fn image_costs(img: &CoefficientImage) -> ImageCosts {
    let quant = img.luma_quant();
    let table = img.luma_ac_table();
    let results: Vec<Option<CostVector>> = (0..img.luma_block_count())
        .into_par_iter()
        .map(|i| block_cost(img.luma_block(i), quant, table))
        .collect();
    let usable = results.iter().map(Option::is_some).collect();
    let costs = results
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            c.unwrap_or_else(|| CostVector {
                r: capacity(img.luma_block(i)),
                d: expected_distortion(img.luma_block(i), quant),
                e: 0.0,
            })
        })
        .collect();
    ImageCosts { costs, usable }
}

/// Writes `index,r,d,e` rows.
pub fn write_costs_csv<W: Write>(out: W, costs: &[CostVector]) -> Result<()> {
    #[derive(Serialize)]
    struct Row {
        index: usize,
        r: u32,
        d: f64,
        e: f64,
    }
    let mut w = csv::Writer::from_writer(out);
    for (index, c) in costs.iter().enumerate() {
        w.serialize(Row {
            index,
            r: c.r,
            d: c.d,
            e: c.e,
        })
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    }
    w.flush()?;
    Ok(())
}
