use crate::cost::{capacity, Signal};
use crate::error::{Error, Result};
use crate::jpeg::tables::ZIGZAG;
use crate::jpeg::MAX_AC_MAGNITUDE;

/// Histogram-shifting embed into one signal.
///
/// AC coefficients are visited in zigzag order: a ±1 takes the next bit
/// (0 keeps it, 1 moves it to ±2), larger magnitudes move one step away
/// from zero, zeros and DC stay. Exactly `capacity(s)` bits are consumed;
/// the caller pads the stream.
pub fn hs_embed_block(s: &Signal, bits: &[bool]) -> Result<(Signal, usize)> {
    if s.coeffs[1..]
        .iter()
        .any(|&v| i32::from(v).abs() >= MAX_AC_MAGNITUDE)
    {
        return Err(Error::OverflowRisk { block: s.index });
    }
    let needed = capacity(&s.coeffs) as usize;
    if bits.len() < needed {
        return Err(Error::ShortStream {
            needed,
            available: bits.len(),
        });
    }
    let mut out = s.clone();
    let mut next = 0;
    for &pos in &ZIGZAG[1..] {
        let v = out.coeffs[pos];
        match v.abs() {
            0 => {}
            1 => {
                if bits[next] {
                    out.coeffs[pos] = 2 * v;
                }
                next += 1;
            }
            _ => out.coeffs[pos] = v + v.signum(),
        }
    }
    Ok((out, needed))
}

/// Inverse of [`hs_embed_block`]: returns the carried bits in zigzag
/// order and the original signal.
pub fn hs_extract_block(s: &Signal) -> (Vec<bool>, Signal) {
    let mut out = s.clone();
    let mut bits = Vec::new();
    for &pos in &ZIGZAG[1..] {
        let v = out.coeffs[pos];
        match v.abs() {
            0 => {}
            1 => bits.push(false),
            2 => {
                bits.push(true);
                out.coeffs[pos] = v / 2;
            }
            _ => out.coeffs[pos] = v - v.signum(),
        }
    }
    (bits, out)
}
