//! Baseline JPEG at the quantized-coefficient level.
//!
//! [`parse_jpeg`] decodes the entropy-coded scans of a sequential Huffman
//! (SOF0) file into quantized DCT blocks without dequantizing; everything
//! that is not entropy-coded data is kept verbatim so that
//! [`serialize_jpeg`] can rebuild the file around modified coefficients
//! using the file's own tables.
//!
//! ```text
//! JPEG bytes -> parse_jpeg -> CoefficientImage -> (edit blocks) -> serialize_jpeg -> JPEG bytes
//! ```
//!
//! Blocks are stored in natural (row-major) order with DC at index 0 and
//! DPCM already resolved, so editing one block never affects another.

mod bits;
mod encode;
mod huffman;
mod length;
mod parse;
pub mod tables;
mod write;

pub use bits::{BitCounter, BitReader, BitSink, BitWriter};
pub use encode::encode_grayscale;
pub use huffman::{HuffmanTable, TableClass};
pub use length::{ac_code_length, category, dc_code_length};
pub use parse::parse_jpeg;
pub use write::{scan_bits, serialize_jpeg};

/// One 8x8 block of quantized coefficients, natural order.
pub type Block = [i16; 64];

/// Largest AC magnitude a baseline Huffman code can carry (size category 10).
pub const MAX_AC_MAGNITUDE: i32 = 1023;

/// A frame component and its decoded blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub id: u8,
    pub h: u8,
    pub v: u8,
    pub quant_table_id: u8,
    /// Width of the MCU-padded block grid.
    pub blocks_wide: usize,
    /// Height of the MCU-padded block grid.
    pub blocks_high: usize,
    /// Quantization steps in effect when the component was coded.
    pub quant: [u16; 64],
    pub blocks: Vec<Block>,
}

/// Per-component coding parameters of one scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanComponent {
    pub component: usize,
    pub dc_table: HuffmanTable,
    pub ac_table: HuffmanTable,
}

/// A scan: its verbatim SOS segment plus the tables it was coded with.
#[derive(Debug, Clone, PartialEq)]
pub struct Scan {
    pub header: Vec<u8>,
    pub components: Vec<ScanComponent>,
    pub restart_interval: u16,
}

/// File layout between SOI and EOI.
#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    /// A marker segment kept byte for byte (APPn, COM, DQT, DHT, SOF0, DRI, ...).
    Segment(Vec<u8>),
    /// Index into [`CoefficientImage::scans`].
    Scan(usize),
}

/// A parsed baseline JPEG: quantized coefficients plus everything needed
/// to re-encode them.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientImage {
    pub(crate) width: u16,
    pub(crate) height: u16,
    pub(crate) components: Vec<Component>,
    pub(crate) quant_tables: [Option<[u16; 64]>; 4],
    pub(crate) scans: Vec<Scan>,
    pub(crate) layout: Vec<Item>,
    /// Coded block region of the first component (cols, rows).
    pub(crate) luma_grid: (usize, usize),
}

impl CoefficientImage {
    pub fn width(&self) -> u16 {
        self.width
    }

    pub fn height(&self) -> u16 {
        self.height
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn components_mut(&mut self) -> &mut [Component] {
        &mut self.components
    }

    /// Quantization tables (natural order) as defined at the end of the file.
    pub fn quant_tables(&self) -> &[Option<[u16; 64]>; 4] {
        &self.quant_tables
    }

    pub fn scans(&self) -> &[Scan] {
        &self.scans
    }

    pub fn layout(&self) -> &[Item] {
        &self.layout
    }

    /// Restart interval of the first scan (0 when restarts are disabled).
    pub fn restart_interval(&self) -> u16 {
        self.scans.first().map_or(0, |s| s.restart_interval)
    }

    /// Non-scan marker segments in file order.
    pub fn preserved_segments(&self) -> impl Iterator<Item = &[u8]> {
        self.layout.iter().filter_map(|item| match item {
            Item::Segment(bytes) => Some(bytes.as_slice()),
            Item::Scan(_) => None,
        })
    }

    pub fn is_grayscale(&self) -> bool {
        self.components.len() == 1
    }

    /// Luminance (first) component.
    pub fn luma(&self) -> &Component {
        &self.components[0]
    }

    pub fn luma_quant(&self) -> &[u16; 64] {
        &self.components[0].quant
    }

    /// Scan in which the luminance component is coded.
    fn luma_scan_component(&self) -> &ScanComponent {
        self.scans
            .iter()
            .flat_map(|s| s.components.iter())
            .find(|sc| sc.component == 0)
            .expect("every component is coded by some scan")
    }

    pub fn luma_ac_table(&self) -> &HuffmanTable {
        &self.luma_scan_component().ac_table
    }

    pub fn luma_dc_table(&self) -> &HuffmanTable {
        &self.luma_scan_component().dc_table
    }

    /// (cols, rows) of luminance blocks that are actually entropy coded.
    pub fn luma_grid(&self) -> (usize, usize) {
        self.luma_grid
    }

    /// Number of luminance blocks available as embedding units.
    pub fn luma_block_count(&self) -> usize {
        self.luma_grid.0 * self.luma_grid.1
    }

    fn luma_storage_index(&self, i: usize) -> usize {
        let (cols, _) = self.luma_grid;
        (i / cols) * self.components[0].blocks_wide + i % cols
    }

    /// The i-th coded luminance block in raster order.
    pub fn luma_block(&self, i: usize) -> &Block {
        let idx = self.luma_storage_index(i);
        &self.components[0].blocks[idx]
    }

    pub fn luma_block_mut(&mut self, i: usize) -> &mut Block {
        let idx = self.luma_storage_index(i);
        &mut self.components[0].blocks[idx]
    }

    /// True when all quantized coefficients of both images are identical.
    pub fn same_coefficients(&self, other: &CoefficientImage) -> bool {
        self.components.len() == other.components.len()
            && self
                .components
                .iter()
                .zip(other.components.iter())
                .all(|(a, b)| a.blocks == b.blocks)
    }
}

/// Rows and columns of 8x8 blocks a component covers when coded alone.
pub(crate) fn component_extent(
    width: u16,
    height: u16,
    h: u8,
    v: u8,
    h_max: u8,
    v_max: u8,
) -> (usize, usize) {
    let cw = (usize::from(width) * usize::from(h)).div_ceil(usize::from(h_max));
    let ch = (usize::from(height) * usize::from(v)).div_ceil(usize::from(v_max));
    (cw.div_ceil(8), ch.div_ceil(8))
}
