use super::huffman::{HuffmanTable, TableClass};
use super::tables::{scaled_luma_quant, ZIGZAG};
use super::{Block, CoefficientImage, Component, Item, Scan, ScanComponent};
use crate::error::{Error, Result};
use crate::transform::{dct_block, PixelImage};

fn segment(marker: u8, body: &[u8]) -> Vec<u8> {
    let len = (body.len() + 2) as u16;
    let mut out = vec![0xff, marker];
    out.extend_from_slice(&len.to_be_bytes());
    out.extend_from_slice(body);
    out
}

/// Encodes a grayscale raster as a baseline JPEG with the Annex K
/// luminance tables scaled to `quality` (IJG convention).
///
/// Edges are padded by replication to a multiple of 8.
pub fn encode_grayscale(pixels: &PixelImage, quality: u8) -> Result<CoefficientImage> {
    if pixels.width == 0 || pixels.height == 0 || pixels.width > 65535 || pixels.height > 65535 {
        return Err(Error::DimensionMismatch(format!(
            "cannot encode a {}x{} image",
            pixels.width, pixels.height
        )));
    }
    if pixels.samples.len() != pixels.width * pixels.height {
        return Err(Error::DimensionMismatch(
            "sample count does not match dimensions".into(),
        ));
    }
    let quant = scaled_luma_quant(quality);
    let cols = pixels.width.div_ceil(8);
    let rows = pixels.height.div_ceil(8);
    let mut blocks: Vec<Block> = Vec::with_capacity(cols * rows);
    for by in 0..rows {
        for bx in 0..cols {
            let mut spatial = [0.0; 64];
            for y in 0..8 {
                let py = (by * 8 + y).min(pixels.height - 1);
                for x in 0..8 {
                    let px = (bx * 8 + x).min(pixels.width - 1);
                    spatial[y * 8 + x] = f64::from(pixels.get(px, py)) - 128.0;
                }
            }
            let freq = dct_block(&spatial);
            let mut block = [0i16; 64];
            for i in 0..64 {
                let limit = if i == 0 { 2047.0 } else { 1023.0 };
                block[i] = (freq[i] / f64::from(quant[i])).round().clamp(-limit, limit) as i16;
            }
            blocks.push(block);
        }
    }

    let dc = HuffmanTable::std_dc_luma();
    let ac = HuffmanTable::std_ac_luma();
    let (w, h) = (pixels.width as u16, pixels.height as u16);

    let jfif = [b'J', b'F', b'I', b'F', 0, 1, 1, 0, 0, 1, 0, 1, 0, 0];
    let mut dqt = vec![0u8];
    dqt.extend(ZIGZAG.iter().map(|&n| quant[n] as u8));
    let mut sof = vec![8];
    sof.extend_from_slice(&h.to_be_bytes());
    sof.extend_from_slice(&w.to_be_bytes());
    sof.extend_from_slice(&[1, 1, 0x11, 0]);
    let mut dht = dc.to_dht_payload(TableClass::Dc, 0);
    dht.extend(ac.to_dht_payload(TableClass::Ac, 0));
    let sos = segment(0xda, &[1, 1, 0x00, 0, 63, 0]);

    let mut quant_tables = [None; 4];
    quant_tables[0] = Some(quant);
    Ok(CoefficientImage {
        width: w,
        height: h,
        components: vec![Component {
            id: 1,
            h: 1,
            v: 1,
            quant_table_id: 0,
            blocks_wide: cols,
            blocks_high: rows,
            quant,
            blocks,
        }],
        quant_tables,
        scans: vec![Scan {
            header: sos,
            components: vec![ScanComponent {
                component: 0,
                dc_table: dc,
                ac_table: ac,
            }],
            restart_interval: 0,
        }],
        layout: vec![
            Item::Segment(segment(0xe0, &jfif)),
            Item::Segment(segment(0xdb, &dqt)),
            Item::Segment(segment(0xc0, &sof)),
            Item::Segment(segment(0xc4, &dht)),
            Item::Scan(0),
        ],
        luma_grid: (cols, rows),
    })
}
