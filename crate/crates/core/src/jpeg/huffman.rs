//! Canonical Huffman tables as defined by a DHT segment.

use super::bits::BitReader;
use crate::error::{Error, Result};

/// Table class from the DHT `Tc` field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableClass {
    Dc,
    Ac,
}

/// A Huffman table with both decode (Annex F.2.2.3 maxcode/valptr) and
/// encode (per-symbol code/length) lookups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HuffmanTable {
    bits: [u8; 16],
    values: Vec<u8>,
    code: [u16; 256],
    length: [u8; 256],
    maxcode: [i32; 17],
    valptr: [i32; 17],
    mincode: [i32; 17],
}

impl HuffmanTable {
    /// Builds the table from the BITS counts and HUFFVAL list of a DHT
    /// segment.
    pub fn new(bits: [u8; 16], values: &[u8]) -> Result<Self> {
        let total: usize = bits.iter().map(|&b| b as usize).sum();
        if total != values.len() || total > 256 {
            return Err(Error::CorruptStream(format!(
                "Huffman table declares {total} codes but lists {}",
                values.len()
            )));
        }
        let mut table = HuffmanTable {
            bits,
            values: values.to_vec(),
            code: [0; 256],
            length: [0; 256],
            maxcode: [-1; 17],
            valptr: [0; 17],
            mincode: [0; 17],
        };

        let mut code: u32 = 0;
        let mut k = 0usize;
        for len in 1..=16usize {
            let count = bits[len - 1] as usize;
            if count > 0 {
                table.valptr[len] = k as i32;
                table.mincode[len] = code as i32;
                for _ in 0..count {
                    if code >= (1 << len) {
                        return Err(Error::CorruptStream("over-subscribed Huffman table".into()));
                    }
                    let sym = values[k] as usize;
                    // first definition wins if a symbol repeats
                    if table.length[sym] == 0 {
                        table.code[sym] = code as u16;
                        table.length[sym] = len as u8;
                    }
                    code += 1;
                    k += 1;
                }
                table.maxcode[len] = code as i32 - 1;
            }
            code <<= 1;
        }
        Ok(table)
    }

    pub fn bits(&self) -> &[u8; 16] {
        &self.bits
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    /// Code length for `symbol`, or `None` if the table cannot code it.
    #[inline]
    pub fn code_length(&self, symbol: u8) -> Option<u8> {
        match self.length[symbol as usize] {
            0 => None,
            n => Some(n),
        }
    }

    #[inline]
    pub fn code_length_or_err(&self, symbol: u8) -> Result<u32> {
        self.code_length(symbol)
            .map(u32::from)
            .ok_or(Error::UncodableSymbol { symbol })
    }

    /// (code, length) for `symbol`.
    #[inline]
    pub fn encode(&self, symbol: u8) -> Result<(u16, u8)> {
        match self.length[symbol as usize] {
            0 => Err(Error::UncodableSymbol { symbol }),
            n => Ok((self.code[symbol as usize], n)),
        }
    }

    /// Reads one symbol from the bit stream.
    pub fn decode(&self, reader: &mut BitReader<'_>) -> Result<u8> {
        let mut code: i32 = 0;
        for len in 1..=16usize {
            code = (code << 1) | reader.read_bit()? as i32;
            if code <= self.maxcode[len] {
                let idx = self.valptr[len] + code - self.mincode[len];
                return Ok(self.values[idx as usize]);
            }
        }
        Err(Error::CorruptStream("invalid Huffman code".into()))
    }

    /// Serialized DHT payload for this table (without marker or length).
    pub fn to_dht_payload(&self, class: TableClass, id: u8) -> Vec<u8> {
        let mut out = Vec::with_capacity(17 + self.values.len());
        let tc = match class {
            TableClass::Dc => 0u8,
            TableClass::Ac => 1u8,
        };
        out.push((tc << 4) | (id & 0x0f));
        out.extend_from_slice(&self.bits);
        out.extend_from_slice(&self.values);
        out
    }

    pub fn std_dc_luma() -> Self {
        use super::tables::{STD_DC_LUMA_BITS, STD_DC_LUMA_VALUES};
        Self::new(STD_DC_LUMA_BITS, &STD_DC_LUMA_VALUES).expect("Annex K DC table is valid")
    }

    pub fn std_ac_luma() -> Self {
        use super::tables::{STD_AC_LUMA_BITS, STD_AC_LUMA_VALUES};
        Self::new(STD_AC_LUMA_BITS, &STD_AC_LUMA_VALUES).expect("Annex K AC table is valid")
    }
}
