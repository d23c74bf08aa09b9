use super::bits::{BitCounter, BitSink, BitWriter};
use super::huffman::HuffmanTable;
use super::tables::ZIGZAG;
use super::{component_extent, Block, CoefficientImage, Item, Scan, MAX_AC_MAGNITUDE};
use crate::error::{Error, Result};

#[inline]
fn magnitude_bits(v: i32) -> (u32, u8) {
    let size = (32 - v.unsigned_abs().leading_zeros()) as u8;
    let bits = if v < 0 { (v - 1) as u32 } else { v as u32 };
    (bits, size)
}

fn encode_block<S: BitSink>(
    sink: &mut S,
    block: &Block,
    pred: &mut i32,
    dc: &HuffmanTable,
    ac: &HuffmanTable,
) -> Result<()> {
    let value = i32::from(block[0]);
    let diff = value - *pred;
    *pred = value;
    let (bits, size) = magnitude_bits(diff);
    if size > 11 {
        return Err(Error::CoefficientOverflow { value: diff });
    }
    let (code, len) = dc.encode(size)?;
    sink.put(u32::from(code), len);
    sink.put(bits, size);

    let mut run = 0u8;
    for &natural in &ZIGZAG[1..] {
        let v = i32::from(block[natural]);
        if v == 0 {
            run += 1;
            continue;
        }
        if v.abs() > MAX_AC_MAGNITUDE {
            return Err(Error::CoefficientOverflow { value: v });
        }
        while run >= 16 {
            let (code, len) = ac.encode(0xf0)?;
            sink.put(u32::from(code), len);
            run -= 16;
        }
        let (bits, size) = magnitude_bits(v);
        let (code, len) = ac.encode((run << 4) | size)?;
        sink.put(u32::from(code), len);
        sink.put(bits, size);
        run = 0;
    }
    if run > 0 {
        let (code, len) = ac.encode(0x00)?;
        sink.put(u32::from(code), len);
    }
    Ok(())
}

fn encode_scan<S: BitSink>(sink: &mut S, image: &CoefficientImage, scan: &Scan) -> Result<()> {
    let h_max = image.components.iter().map(|c| c.h).max().unwrap_or(1);
    let v_max = image.components.iter().map(|c| c.v).max().unwrap_or(1);
    let first = &image.components[scan.components[0].component];
    let interleaved = scan.components.len() > 1;
    let (mcu_cols, mcu_rows) = if interleaved {
        (
            first.blocks_wide / usize::from(first.h),
            first.blocks_high / usize::from(first.v),
        )
    } else {
        component_extent(image.width, image.height, first.h, first.v, h_max, v_max)
    };
    let mut preds = vec![0i32; scan.components.len()];
    let interval = usize::from(scan.restart_interval);
    let mut rst = 0u8;

    for mcu in 0..mcu_cols * mcu_rows {
        if interval > 0 && mcu > 0 && mcu % interval == 0 {
            sink.restart_marker(rst);
            rst = (rst + 1) & 7;
            preds.iter_mut().for_each(|p| *p = 0);
        }
        let (mx, my) = (mcu % mcu_cols, mcu / mcu_cols);
        for (si, sc) in scan.components.iter().enumerate() {
            let c = &image.components[sc.component];
            if interleaved {
                for v in 0..usize::from(c.v) {
                    for h in 0..usize::from(c.h) {
                        let idx =
                            (my * usize::from(c.v) + v) * c.blocks_wide + mx * usize::from(c.h) + h;
                        encode_block(
                            sink,
                            &c.blocks[idx],
                            &mut preds[si],
                            &sc.dc_table,
                            &sc.ac_table,
                        )?;
                    }
                }
            } else {
                let idx = my * c.blocks_wide + mx;
                encode_block(
                    sink,
                    &c.blocks[idx],
                    &mut preds[si],
                    &sc.dc_table,
                    &sc.ac_table,
                )?;
            }
        }
    }
    Ok(())
}

/// Rebuilds the JPEG file: every preserved segment verbatim, each scan
/// re-encoded from the current coefficients with its original tables.
pub fn serialize_jpeg(image: &CoefficientImage) -> Result<Vec<u8>> {
    let mut out = vec![0xff, 0xd8];
    for item in &image.layout {
        match item {
            Item::Segment(bytes) => out.extend_from_slice(bytes),
            Item::Scan(i) => {
                let scan = &image.scans[*i];
                out.extend_from_slice(&scan.header);
                let mut writer = BitWriter::new();
                encode_scan(&mut writer, image, scan)?;
                out.extend_from_slice(&writer.finish());
            }
        }
    }
    out.extend_from_slice(&[0xff, 0xd9]);
    Ok(out)
}

/// Number of Huffman code bits plus appended magnitude bits over all
/// scans. Byte stuffing, padding and markers are not counted.
pub fn scan_bits(image: &CoefficientImage) -> Result<u64> {
    let mut counter = BitCounter::default();
    for scan in &image.scans {
        encode_scan(&mut counter, image, scan)?;
    }
    Ok(counter.bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn magnitude_bits_are_ones_complement_for_negatives() {
        assert_eq!(magnitude_bits(0), (0, 0));
        assert_eq!(magnitude_bits(1), (1, 1));
        assert_eq!(magnitude_bits(-1).1, 1);
        assert_eq!(magnitude_bits(-1).0 & 1, 0);
        assert_eq!(magnitude_bits(-3).1, 2);
        assert_eq!(magnitude_bits(-3).0 & 3, 0b00);
        assert_eq!(magnitude_bits(-2).0 & 3, 0b01);
        assert_eq!(magnitude_bits(1023).1, 10);
    }
}
