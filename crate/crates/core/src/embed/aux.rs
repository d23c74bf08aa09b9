//! The record that carries the decision vector inside the stego image.
//!
//! Wire format: 32-bit big-endian payload length, 32-bit big-endian k,
//! one flag bit (0 raw, 1 run-length), then either k raw bits or 16-bit
//! big-endian run lengths alternating between 0-runs and 1-runs, starting
//! with a 0-run. Runs longer than 65535 are split by zero-length runs.

use crate::error::{Error, Result};

/// Header bits before the encoded vector.
pub const HEADER_BITS: usize = 65;

const MAX_RUN: u32 = u16::MAX as u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxRecord {
    pub payload_bits: u32,
    pub k: u32,
    /// True when the vector is run-length coded.
    pub rle: bool,
    pub v: Vec<bool>,
}

fn push_u(bits: &mut Vec<bool>, value: u32, width: u32) {
    for shift in (0..width).rev() {
        bits.push(value >> shift & 1 == 1);
    }
}

fn runs(v: &[bool]) -> Vec<u32> {
    let mut out = Vec::new();
    let mut current = false;
    let mut len = 0u32;
    let flush = |len: u32, out: &mut Vec<u32>| {
        let mut rest = len;
        while rest > MAX_RUN {
            out.push(MAX_RUN);
            out.push(0);
            rest -= MAX_RUN;
        }
        out.push(rest);
    };
    for &b in v {
        if b != current {
            flush(len, &mut out);
            current = b;
            len = 0;
        }
        len += 1;
    }
    flush(len, &mut out);
    out
}

impl AuxRecord {
    /// Picks the shorter of the raw and run-length forms (raw on ties).
    pub fn build(v: &[bool], payload_bits: u32) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::InvalidProblem("decision vector is empty".into()));
        }
        let k =
            u32::try_from(v.len()).map_err(|_| Error::InvalidProblem("too many signals".into()))?;
        let rle = 16 * runs(v).len() < v.len();
        Ok(AuxRecord {
            payload_bits,
            k,
            rle,
            v: v.to_vec(),
        })
    }

    /// Number of 16-bit runs the run-length form of `v` would need.
    pub fn run_count(v: &[bool]) -> usize {
        runs(v).len()
    }

    /// Length of the encoded vector.
    pub fn encoded_v_bits(&self) -> usize {
        if self.rle {
            16 * runs(&self.v).len()
        } else {
            self.v.len()
        }
    }

    pub fn bit_len(&self) -> usize {
        HEADER_BITS + self.encoded_v_bits()
    }

    pub fn to_bits(&self) -> Vec<bool> {
        let mut bits = Vec::with_capacity(self.bit_len());
        push_u(&mut bits, self.payload_bits, 32);
        push_u(&mut bits, self.k, 32);
        bits.push(self.rle);
        if self.rle {
            for run in runs(&self.v) {
                push_u(&mut bits, run, 16);
            }
        } else {
            bits.extend_from_slice(&self.v);
        }
        bits
    }

    /// Reads a record from a bit source. `expected_k` is the number of
    /// signals in the image; a header declaring anything else is rejected
    /// before the vector is read.
    pub fn read(source: &mut impl Iterator<Item = bool>, expected_k: usize) -> Result<Self> {
        let mut take = |width: u32| -> Result<u32> {
            let mut value = 0u32;
            for _ in 0..width {
                let bit = source.next().ok_or(Error::TruncatedStego)?;
                value = value << 1 | u32::from(bit);
            }
            Ok(value)
        };
        let payload_bits = take(32)?;
        let k = take(32)?;
        if k as usize != expected_k {
            return Err(Error::AuxDecode(format!(
                "header declares {k} signals, image has {expected_k}"
            )));
        }
        let rle = take(1)? == 1;
        let mut v = Vec::with_capacity(expected_k);
        if rle {
            let mut value = false;
            while v.len() < expected_k {
                let run = take(16)? as usize;
                if v.len() + run > expected_k {
                    return Err(Error::AuxDecode(
                        "run lengths overrun the signal count".into(),
                    ));
                }
                v.extend(std::iter::repeat_n(value, run));
                value = !value;
            }
        } else {
            for _ in 0..expected_k {
                v.push(take(1)? == 1);
            }
        }
        Ok(AuxRecord {
            payload_bits,
            k,
            rle,
            v,
        })
    }
}
