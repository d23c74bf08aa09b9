//! Code lengths computed straight from run/size symbols, without going
//! through a bit sink.

use super::huffman::HuffmanTable;
use super::tables::ZIGZAG;
use super::Block;
use crate::error::{Error, Result};

/// Size category: number of bits needed for `|v|` (0 for 0).
#[inline]
pub fn category(v: i32) -> u8 {
    let mut a = v.unsigned_abs();
    let mut n = 0u8;
    while a > 0 {
        a >>= 1;
        n += 1;
    }
    n
}

/// Bits spent on the AC part of one block: Huffman codes for every
/// run/size symbol, ZRL and EOB, plus the magnitude bits.
pub fn ac_code_length(block: &Block, table: &HuffmanTable) -> Result<u32> {
    let last = (1..64).rev().find(|&k| block[ZIGZAG[k]] != 0);
    let mut bits = 0u32;
    let mut run = 0u32;
    if let Some(last) = last {
        for k in 1..=last {
            let v = i32::from(block[ZIGZAG[k]]);
            if v == 0 {
                run += 1;
                continue;
            }
            let size = category(v);
            if size > 10 {
                return Err(Error::CoefficientOverflow { value: v });
            }
            bits += (run / 16) * table.code_length_or_err(0xf0)?;
            let symbol = (((run % 16) as u8) << 4) | size;
            bits += table.code_length_or_err(symbol)? + u32::from(size);
            run = 0;
        }
        if last < 63 {
            bits += table.code_length_or_err(0x00)?;
        }
    } else {
        bits += table.code_length_or_err(0x00)?;
    }
    Ok(bits)
}

/// Bits spent on a DC difference.
pub fn dc_code_length(diff: i32, table: &HuffmanTable) -> Result<u32> {
    let size = category(diff);
    if size > 11 {
        return Err(Error::CoefficientOverflow { value: diff });
    }
    Ok(table.code_length_or_err(size)? + u32::from(size))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_block_is_a_single_eob() {
        let t = HuffmanTable::std_ac_luma();
        assert_eq!(ac_code_length(&[0; 64], &t).unwrap(), 4);
    }

    #[test]
    fn single_one_then_eob() {
        let t = HuffmanTable::std_ac_luma();
        let mut b = [0i16; 64];
        b[1] = -1;
        // (0,1) = 2 bits + 1 magnitude bit + EOB 4 bits
        assert_eq!(ac_code_length(&b, &t).unwrap(), 7);
    }

    #[test]
    fn last_coefficient_needs_no_eob() {
        let t = HuffmanTable::std_ac_luma();
        let mut b = [0i16; 64];
        b[63] = 1;
        // 62 zeros: three ZRL (11 bits each) + (14,1)
        let expected = 3 * 11 + u32::from(t.code_length(0xe1).unwrap()) + 1;
        assert_eq!(ac_code_length(&b, &t).unwrap(), expected);
    }

    #[test]
    fn categories() {
        assert_eq!(category(0), 0);
        assert_eq!(category(-1), 1);
        assert_eq!(category(3), 2);
        assert_eq!(category(-1024), 11);
    }
}
