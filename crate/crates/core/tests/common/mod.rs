#![allow(dead_code)]

use std::path::PathBuf;

use jpeg_rdh::jpeg::tables::ZIGZAG;
use jpeg_rdh::jpeg::{parse_jpeg, Block, CoefficientImage, HuffmanTable};

pub const IMAGES: [&str; 4] = ["aerial", "baboon", "cameraman", "lena"];
pub const QUALITIES: [u8; 4] = [30, 50, 70, 90];

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

pub fn cover_path(name: &str, quality: u8) -> PathBuf {
    data_dir()
        .join("covers")
        .join(format!("{name}_q{quality}.jpg"))
}

pub fn cover(name: &str, quality: u8) -> CoefficientImage {
    let path = cover_path(name, quality);
    parse_jpeg(&std::fs::read(&path).unwrap()).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Every baseline file in the corpus: the covers and the assorted set.
pub fn baseline_files() -> Vec<PathBuf> {
    let mut out = Vec::new();
    for dir in ["covers", "assorted"] {
        let mut files: Vec<PathBuf> = std::fs::read_dir(data_dir().join(dir))
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.extension().is_some_and(|x| x == "jpg"))
            .collect();
        files.sort();
        out.extend(files);
    }
    out
}

/// Coded length of one block's AC data by a direct reading of the
/// run/size rules, written independently of the library.
pub fn ac_length_by_rule(block: &Block, table: &HuffmanTable) -> u32 {
    let mut bits = 0;
    let mut zeros = 0;
    let mut last_nonzero = 0;
    for k in 1..64 {
        if block[ZIGZAG[k]] != 0 {
            last_nonzero = k;
        }
    }
    for k in 1..=last_nonzero {
        let v = i32::from(block[ZIGZAG[k]]);
        if v == 0 {
            zeros += 1;
            continue;
        }
        while zeros > 15 {
            bits += u32::from(table.code_length(0xf0).unwrap());
            zeros -= 16;
        }
        let size = 32 - v.unsigned_abs().leading_zeros();
        bits += u32::from(
            table
                .code_length(((zeros as u8) << 4) | size as u8)
                .unwrap(),
        ) + size;
        zeros = 0;
    }
    if last_nonzero < 63 {
        bits += u32::from(table.code_length(0x00).unwrap());
    }
    bits
}

/// Exact optimum of a selection problem by visiting every subset of the
/// eligible signals: least d among sets reaching `c` whose e stays within
/// `(1 + alpha)` times the least reachable e, ties to lower e and then to
/// the set that leaves the earliest differing signal out.
///
/// Subsets are visited in Gray-code order. Up to 16 signals every subset is
/// summed from scratch; above that running sums are used (re-anchored
/// every 4096 steps) so k up to 24 is practical.
pub struct Optimum {
    pub e_star: f64,
    pub d: f64,
    pub e: f64,
    pub bits: Vec<bool>,
}

pub fn exhaustive_optimum(p: &jpeg_rdh::select::SelectionProblem) -> Option<Optimum> {
    let items: Vec<usize> = (0..p.len()).filter(|&i| p.eligible[i]).collect();
    let m = items.len();
    assert!(m <= 26);
    let direct = |mask: u64| {
        let (mut r, mut d, mut e) = (0u64, 0.0, 0.0);
        for (j, &i) in items.iter().enumerate() {
            if mask >> j & 1 == 1 {
                r += u64::from(p.r[i]);
                d += p.d[i];
                e += p.e[i];
            }
        }
        (r, d, e)
    };
    let walk = |visit: &mut dyn FnMut(u64, u64, f64, f64)| {
        let (mut r, mut d, mut e) = (0u64, 0.0, 0.0);
        let mut mask = 0u64;
        visit(0, 0, 0.0, 0.0);
        for step in 1u64..1 << m {
            let j = step.trailing_zeros() as usize;
            let i = items[j];
            mask ^= 1 << j;
            if mask >> j & 1 == 1 {
                r += u64::from(p.r[i]);
                d += p.d[i];
                e += p.e[i];
            } else {
                r -= u64::from(p.r[i]);
                d -= p.d[i];
                e -= p.e[i];
            }
            if m <= 16 || step % 4096 == 0 {
                (r, d, e) = direct(mask);
            }
            visit(mask, r, d, e);
        }
    };

    let mut e_star = f64::INFINITY;
    walk(&mut |_, r, _, e| {
        if r >= p.c && e < e_star {
            e_star = e;
        }
    });
    if e_star.is_infinite() {
        return None;
    }
    let b = (1.0 + p.alpha) * e_star;
    let budget = b + 1e-9 * b.abs().max(1.0);
    let mut best: Option<(f64, f64, u64)> = None;
    walk(&mut |mask, r, d, e| {
        if r < p.c || e > budget {
            return;
        }
        let lex_smaller = |a: u64, b: u64| {
            let diff = a ^ b;
            diff != 0 && a >> diff.trailing_zeros() & 1 == 0
        };
        let replace = match best {
            None => true,
            Some((bd, be, bm)) => {
                d < bd || (d == bd && (e < be || (e == be && lex_smaller(mask, bm))))
            }
        };
        if replace {
            best = Some((d, e, mask));
        }
    });
    let (_, _, mask) = best?;
    let (_, d, e) = direct(mask);
    let mut bits = vec![false; p.len()];
    for (j, &i) in items.iter().enumerate() {
        bits[i] = mask >> j & 1 == 1;
    }
    Some(Optimum { e_star, d, e, bits })
}

/// Random selection problem with `k` signals, r in 0..=8, d and e in [0, 1).
pub fn random_problem(seed: u64, k: usize) -> jpeg_rdh::select::SelectionProblem {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let r: Vec<u32> = (0..k).map(|_| rng.gen_range(0..=8)).collect();
    let d: Vec<f64> = (0..k).map(|_| rng.gen()).collect();
    let e: Vec<f64> = (0..k).map(|_| rng.gen()).collect();
    let eligible: Vec<bool> = (0..k).map(|_| rng.gen_bool(0.9)).collect();
    let total: u64 = (0..k)
        .filter(|&i| eligible[i])
        .map(|i| u64::from(r[i]))
        .sum();
    let c = if total == 0 {
        0
    } else {
        rng.gen_range(1..=total)
    };
    let alpha = [0.0, 0.25, 1.0, 2.0][rng.gen_range(0..4)];
    jpeg_rdh::select::SelectionProblem::new(r, d, e, c, alpha, eligible).unwrap()
}

/// Applies histogram shifting with the given message bits to the ±1
/// coefficients in zigzag order.
pub fn shift(block: &Block, bits: &[bool]) -> Block {
    let mut out = *block;
    let mut next = bits.iter();
    for &i in &ZIGZAG[1..] {
        let v = out[i];
        match v.abs() {
            0 => {}
            1 => {
                if *next.next().unwrap() {
                    out[i] = 2 * v;
                }
            }
            _ => out[i] = v + v.signum(),
        }
    }
    out
}

/// Every message assignment, its squared pixel error and its code length.
pub fn enumerate(block: &Block, quant: &[u16; 64], table: &HuffmanTable) -> (f64, f64) {
    let r = jpeg_rdh::cost::capacity(block) as usize;
    let base = f64::from(ac_length_by_rule(block, table));
    let (mut d, mut e) = (0.0, 0.0);
    for mask in 0u32..1 << r {
        let bits: Vec<bool> = (0..r).map(|j| mask >> j & 1 == 1).collect();
        let after = shift(block, &bits);
        let mut diff = [0.0; 64];
        for i in 0..64 {
            diff[i] = f64::from(after[i] - block[i]) * f64::from(quant[i]);
        }
        d += jpeg_rdh::transform::idct_block(&diff)
            .iter()
            .map(|x| x * x)
            .sum::<f64>();
        e += f64::from(ac_length_by_rule(&after, table)) - base;
    }
    let n = f64::from(1u32 << r);
    (d / n, e / n)
}
