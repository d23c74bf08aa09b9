//! 8x8 DCT, pixel reconstruction and PSNR.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::jpeg::CoefficientImage;

/// 64 spatial-domain values (samples or deltas), row-major.
pub type SpatialBlock = [f64; 64];

/// 8-bit grayscale raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PixelImage {
    pub width: usize,
    pub height: usize,
    pub samples: Vec<u8>,
}

impl PixelImage {
    pub fn new(width: usize, height: usize, samples: Vec<u8>) -> Result<Self> {
        if samples.len() != width * height {
            return Err(Error::DimensionMismatch(format!(
                "{} samples for a {width}x{height} image",
                samples.len()
            )));
        }
        Ok(PixelImage {
            width,
            height,
            samples,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        PixelImage {
            width,
            height,
            samples: vec![value; width * height],
        }
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.samples[y * self.width + x]
    }

    /// Reads a binary PGM (P5, maxval 255).
    pub fn read_pgm(path: impl AsRef<Path>) -> Result<Self> {
        let mut reader = BufReader::new(std::fs::File::open(path)?);
        let mut fields = Vec::with_capacity(4);
        let mut line = String::new();
        while fields.len() < 4 {
            line.clear();
            if reader.read_line(&mut line)? == 0 {
                return Err(Error::DimensionMismatch("truncated PGM header".into()));
            }
            let content = line.split('#').next().unwrap_or("");
            fields.extend(content.split_whitespace().map(str::to_owned));
        }
        let bad = || Error::DimensionMismatch("not a binary 8-bit PGM".into());
        if fields[0] != "P5" {
            return Err(bad());
        }
        let width: usize = fields[1].parse().map_err(|_| bad())?;
        let height: usize = fields[2].parse().map_err(|_| bad())?;
        if fields[3] != "255" {
            return Err(bad());
        }
        let mut samples = vec![0u8; width * height];
        reader.read_exact(&mut samples)?;
        Self::new(width, height, samples)
    }

    pub fn write_pgm(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
        write!(file, "P5\n{} {}\n255\n", self.width, self.height)?;
        file.write_all(&self.samples)?;
        file.flush()?;
        Ok(())
    }
}

/// `basis()[u][x] = c(u)/2 * cos((2x+1) u pi / 16)`, with c(0) = 1/sqrt(2).
fn basis() -> &'static [[f64; 8]; 8] {
    static BASIS: OnceLock<[[f64; 8]; 8]> = OnceLock::new();
    BASIS.get_or_init(|| {
        let mut m = [[0.0; 8]; 8];
        for (u, row) in m.iter_mut().enumerate() {
            let c = if u == 0 {
                std::f64::consts::FRAC_1_SQRT_2
            } else {
                1.0
            };
            for (x, value) in row.iter_mut().enumerate() {
                let angle = (2 * x + 1) as f64 * u as f64 * std::f64::consts::PI / 16.0;
                *value = 0.5 * c * angle.cos();
            }
        }
        m
    })
}

/// Forward 2-D DCT-II, orthonormal.
pub fn dct_block(spatial: &SpatialBlock) -> [f64; 64] {
    let c = basis();
    let mut tmp = [0.0; 64];
    // rows: tmp[x][v] = sum_y C[v][y] f[x][y]
    for x in 0..8 {
        for v in 0..8 {
            tmp[x * 8 + v] = (0..8).map(|y| c[v][y] * spatial[x * 8 + y]).sum();
        }
    }
    let mut out = [0.0; 64];
    for u in 0..8 {
        for v in 0..8 {
            out[u * 8 + v] = (0..8).map(|x| c[u][x] * tmp[x * 8 + v]).sum();
        }
    }
    out
}

/// Inverse 2-D DCT, orthonormal.
pub fn idct_block(freq: &[f64; 64]) -> SpatialBlock {
    let c = basis();
    let mut tmp = [0.0; 64];
    // tmp[x][v] = sum_u C[u][x] F[u][v]
    for x in 0..8 {
        for v in 0..8 {
            tmp[x * 8 + v] = (0..8).map(|u| c[u][x] * freq[u * 8 + v]).sum();
        }
    }
    let mut out = [0.0; 64];
    for x in 0..8 {
        for y in 0..8 {
            out[x * 8 + y] = (0..8).map(|v| c[v][y] * tmp[x * 8 + v]).sum();
        }
    }
    out
}

/// Pixel dimensions of the first component.
pub fn luma_dimensions(img: &CoefficientImage) -> (usize, usize) {
    let h_max = img.components().iter().map(|c| c.h).max().unwrap_or(1);
    let v_max = img.components().iter().map(|c| c.v).max().unwrap_or(1);
    let luma = img.luma();
    let w = (usize::from(img.width()) * usize::from(luma.h)).div_ceil(usize::from(h_max));
    let h = (usize::from(img.height()) * usize::from(luma.v)).div_ceil(usize::from(v_max));
    (w, h)
}

/// Reconstructs the luminance plane: dequantize, IDCT, level shift,
/// round half away from zero, clamp.
pub fn decompress(img: &CoefficientImage) -> PixelImage {
    let (width, height) = luma_dimensions(img);
    let luma = img.luma();
    let q = &luma.quant;
    let mut out = PixelImage::filled(width, height, 0);
    for by in 0..height.div_ceil(8) {
        for bx in 0..width.div_ceil(8) {
            let block = &luma.blocks[by * luma.blocks_wide + bx];
            let mut freq = [0.0; 64];
            for i in 0..64 {
                freq[i] = f64::from(block[i]) * f64::from(q[i]);
            }
            let spatial = idct_block(&freq);
            for y in 0..8 {
                let py = by * 8 + y;
                if py >= height {
                    break;
                }
                for x in 0..8 {
                    let px = bx * 8 + x;
                    if px >= width {
                        break;
                    }
                    let s = (spatial[y * 8 + x] + 128.0).round().clamp(0.0, 255.0);
                    out.samples[py * width + px] = s as u8;
                }
            }
        }
    }
    out
}

/// Mean squared error between two equally sized images.
pub fn mse(a: &PixelImage, b: &PixelImage) -> Result<f64> {
    if a.width != b.width || a.height != b.height {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            a.width, a.height, b.width, b.height
        )));
    }
    if a.samples.is_empty() {
        return Ok(0.0);
    }
    let sum: u64 = a
        .samples
        .iter()
        .zip(&b.samples)
        .map(|(&x, &y)| {
            let d = u64::from(x.abs_diff(y));
            d * d
        })
        .sum();
    Ok(sum as f64 / a.samples.len() as f64)
}

/// Peak signal-to-noise ratio in dB; `f64::INFINITY` for identical images.
pub fn psnr(a: &PixelImage, b: &PixelImage) -> Result<f64> {
    let m = mse(a, b)?;
    if m == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (255.0 * 255.0 / m).log10())
}
