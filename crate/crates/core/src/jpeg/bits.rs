//! Bit-level access to entropy-coded segments (byte stuffing, restart markers).

use crate::error::{Error, Result};

/// MSB-first reader over an entropy-coded segment. Stops at the first
/// marker that is not a stuffed `FF 00`.
pub struct BitReader<'a> {
    data: &'a [u8],
    pos: usize,
    cur: u8,
    nbits: u8,
}

impl<'a> BitReader<'a> {
    pub fn new(data: &'a [u8]) -> Self {
        BitReader {
            data,
            pos: 0,
            cur: 0,
            nbits: 0,
        }
    }

    /// Byte offset just past the last consumed byte.
    pub fn position(&self) -> usize {
        self.pos
    }

    fn fetch(&mut self) -> Result<()> {
        let b = *self
            .data
            .get(self.pos)
            .ok_or_else(|| Error::CorruptStream("truncated scan".into()))?;
        if b == 0xff {
            match self.data.get(self.pos + 1) {
                Some(0x00) => self.pos += 2,
                _ => {
                    return Err(Error::CorruptStream(
                        "truncated scan (marker inside data)".into(),
                    ))
                }
            }
        } else {
            self.pos += 1;
        }
        self.cur = b;
        self.nbits = 8;
        Ok(())
    }

    #[inline]
    pub fn read_bit(&mut self) -> Result<u8> {
        if self.nbits == 0 {
            self.fetch()?;
        }
        self.nbits -= 1;
        Ok((self.cur >> self.nbits) & 1)
    }

    /// Reads `n` (<= 16) raw bits.
    pub fn receive(&mut self, n: u8) -> Result<u16> {
        let mut v: u16 = 0;
        for _ in 0..n {
            v = (v << 1) | u16::from(self.read_bit()?);
        }
        Ok(v)
    }

    /// Drops the partial byte and consumes the expected `RSTn` marker.
    pub fn restart(&mut self, n: u8) -> Result<()> {
        self.nbits = 0;
        while self.data.get(self.pos) == Some(&0xff) && self.data.get(self.pos + 1) == Some(&0xff) {
            self.pos += 1;
        }
        let expected = 0xd0 + (n & 7);
        if self.data.get(self.pos) == Some(&0xff) && self.data.get(self.pos + 1) == Some(&expected)
        {
            self.pos += 2;
            Ok(())
        } else {
            Err(Error::CorruptStream(format!(
                "expected RST{} marker",
                n & 7
            )))
        }
    }
}

/// Destination for entropy-coded bits.
pub trait BitSink {
    fn put(&mut self, code: u32, len: u8);
    /// Pads to a byte boundary with 1-bits and writes `RSTn`.
    fn restart_marker(&mut self, n: u8);
}

/// Writes bits with `FF 00` stuffing.
#[derive(Default)]
pub struct BitWriter {
    out: Vec<u8>,
    acc: u64,
    nbits: u8,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    fn pad(&mut self) {
        let rem = self.nbits % 8;
        if rem != 0 {
            let fill = 8 - rem;
            self.put((1u32 << fill) - 1, fill);
        }
    }

    /// Pads the last byte with 1-bits and returns the segment bytes.
    pub fn finish(mut self) -> Vec<u8> {
        self.pad();
        self.out
    }
}

impl BitSink for BitWriter {
    #[inline]
    fn put(&mut self, code: u32, len: u8) {
        if len == 0 {
            return;
        }
        self.acc = (self.acc << len) | u64::from(code & ((1u32 << len) - 1));
        self.nbits += len;
        while self.nbits >= 8 {
            self.nbits -= 8;
            let byte = (self.acc >> self.nbits) as u8;
            self.out.push(byte);
            if byte == 0xff {
                self.out.push(0x00);
            }
        }
    }

    fn restart_marker(&mut self, n: u8) {
        self.pad();
        self.out.push(0xff);
        self.out.push(0xd0 + (n & 7));
    }
}

/// Counts coded bits only (no stuffing, padding or markers).
#[derive(Default)]
pub struct BitCounter {
    pub bits: u64,
}

impl BitSink for BitCounter {
    #[inline]
    fn put(&mut self, _code: u32, len: u8) {
        self.bits += u64::from(len);
    }

    fn restart_marker(&mut self, _n: u8) {}
}
