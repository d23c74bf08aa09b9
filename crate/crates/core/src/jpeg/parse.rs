use super::bits::BitReader;
use super::huffman::HuffmanTable;
use super::tables::ZIGZAG;
use super::{component_extent, Block, CoefficientImage, Component, Item, Scan, ScanComponent};
use crate::error::{Error, Result};

struct Frame {
    width: u16,
    height: u16,
    components: Vec<Component>,
    coded: Vec<bool>,
    interleaved: Vec<bool>,
    h_max: u8,
    v_max: u8,
}

#[derive(Default)]
struct TableState {
    quant: [Option<[u16; 64]>; 4],
    dc: [Option<HuffmanTable>; 4],
    ac: [Option<HuffmanTable>; 4],
    restart_interval: u16,
}

fn corrupt(msg: impl Into<String>) -> Error {
    Error::CorruptStream(msg.into())
}

fn be16(bytes: &[u8], at: usize) -> Result<u16> {
    match bytes.get(at..at + 2) {
        Some(b) => Ok(u16::from_be_bytes([b[0], b[1]])),
        None => Err(corrupt("unexpected end of file")),
    }
}

/// Decodes a baseline sequential Huffman JPEG into quantized coefficients.
///
/// Progressive, arithmetic-coded, lossless, hierarchical and 12-bit files
/// are rejected with [`Error::UnsupportedFormat`]; malformed input of any
/// kind yields an error rather than a panic.
pub fn parse_jpeg(bytes: &[u8]) -> Result<CoefficientImage> {
    if bytes.len() < 2 || bytes[0] != 0xff || bytes[1] != 0xd8 {
        return Err(Error::UnsupportedFormat("missing SOI marker".into()));
    }
    let mut pos = 2;
    let mut state = TableState::default();
    let mut frame: Option<Frame> = None;
    let mut scans: Vec<Scan> = Vec::new();
    let mut layout: Vec<Item> = Vec::new();

    loop {
        if bytes.get(pos) != Some(&0xff) {
            return Err(corrupt(format!("expected marker at offset {pos}")));
        }
        while bytes.get(pos) == Some(&0xff) {
            pos += 1;
        }
        let marker = *bytes.get(pos).ok_or_else(|| corrupt("missing EOI"))?;
        pos += 1;

        match marker {
            0xd9 => break,
            0xd0..=0xd7 => return Err(corrupt("restart marker outside scan")),
            0x01 => {
                layout.push(Item::Segment(vec![0xff, 0x01]));
                continue;
            }
            0x00 => return Err(corrupt("stuffed zero outside scan")),
            _ => {}
        }

        let len = usize::from(be16(bytes, pos)?);
        if len < 2 || pos + len > bytes.len() {
            return Err(corrupt("segment length out of range"));
        }
        let body = &bytes[pos + 2..pos + len];
        let segment = bytes[pos - 2..pos + len].to_vec();
        let seg_end = pos + len;

        match marker {
            0xc0 => {
                if frame.is_some() {
                    return Err(corrupt("more than one frame header"));
                }
                frame = Some(parse_frame(body)?);
                layout.push(Item::Segment(segment));
            }
            0xc1 => {
                return Err(Error::UnsupportedFormat(
                    "extended sequential (SOF1)".into(),
                ))
            }
            0xc2 => return Err(Error::UnsupportedFormat("progressive (SOF2)".into())),
            0xc3 => return Err(Error::UnsupportedFormat("lossless (SOF3)".into())),
            0xc5..=0xc7 => return Err(Error::UnsupportedFormat("hierarchical frame".into())),
            0xc8 => return Err(Error::UnsupportedFormat("JPG extension frame".into())),
            0xc9..=0xcb | 0xcd..=0xcf => {
                return Err(Error::UnsupportedFormat("arithmetic coding".into()))
            }
            0xcc => {
                return Err(Error::UnsupportedFormat(
                    "arithmetic conditioning (DAC)".into(),
                ))
            }
            0xc4 => {
                parse_dht(body, &mut state)?;
                layout.push(Item::Segment(segment));
            }
            0xdb => {
                parse_dqt(body, &mut state)?;
                layout.push(Item::Segment(segment));
            }
            0xdd => {
                if body.len() != 2 {
                    return Err(corrupt("bad DRI length"));
                }
                state.restart_interval = u16::from_be_bytes([body[0], body[1]]);
                layout.push(Item::Segment(segment));
            }
            0xdc => return Err(Error::UnsupportedFormat("DNL marker".into())),
            0xde | 0xdf => return Err(Error::UnsupportedFormat("hierarchical marker".into())),
            0xda => {
                let f = frame
                    .as_mut()
                    .ok_or_else(|| corrupt("scan before frame header"))?;
                let scan_components = parse_sos(body, f, &state)?;
                let data = &bytes[seg_end..];
                let consumed = decode_scan(data, f, &scan_components, state.restart_interval)?;
                scans.push(Scan {
                    header: segment,
                    components: scan_components,
                    restart_interval: state.restart_interval,
                });
                layout.push(Item::Scan(scans.len() - 1));
                pos = next_marker(bytes, seg_end + consumed);
                continue;
            }
            _ => layout.push(Item::Segment(segment)),
        }
        pos = seg_end;
    }

    let frame = frame.ok_or_else(|| corrupt("no frame header"))?;
    if let Some(i) = frame.coded.iter().position(|&c| !c) {
        return Err(corrupt(format!(
            "component {} is never coded",
            frame.components[i].id
        )));
    }
    let luma = &frame.components[0];
    let luma_grid = if frame.interleaved[0] {
        (luma.blocks_wide, luma.blocks_high)
    } else {
        component_extent(
            frame.width,
            frame.height,
            luma.h,
            luma.v,
            frame.h_max,
            frame.v_max,
        )
    };
    Ok(CoefficientImage {
        width: frame.width,
        height: frame.height,
        components: frame.components,
        quant_tables: state.quant,
        scans,
        layout,
        luma_grid,
    })
}

/// Skips anything between the end of entropy-coded data and the next
/// real marker (some encoders leave filler).
fn next_marker(bytes: &[u8], mut pos: usize) -> usize {
    while pos + 1 < bytes.len() {
        if bytes[pos] == 0xff {
            let next = bytes[pos + 1];
            if next != 0x00 && next != 0xff && !(0xd0..=0xd7).contains(&next) {
                return pos;
            }
        }
        pos += 1;
    }
    bytes.len()
}

fn parse_frame(body: &[u8]) -> Result<Frame> {
    if body.len() < 6 {
        return Err(corrupt("short frame header"));
    }
    if body[0] != 8 {
        return Err(Error::UnsupportedFormat(format!("{}-bit samples", body[0])));
    }
    let height = u16::from_be_bytes([body[1], body[2]]);
    let width = u16::from_be_bytes([body[3], body[4]]);
    let n = usize::from(body[5]);
    if height == 0 {
        return Err(Error::UnsupportedFormat("height defined by DNL".into()));
    }
    if width == 0 || n == 0 || n > 4 || body.len() != 6 + 3 * n {
        return Err(corrupt("invalid frame header"));
    }
    let mut components = Vec::with_capacity(n);
    for c in body[6..].chunks_exact(3) {
        let (h, v) = (c[1] >> 4, c[1] & 0x0f);
        if !(1..=4).contains(&h) || !(1..=4).contains(&v) || c[2] > 3 {
            return Err(corrupt("invalid component parameters"));
        }
        if components.iter().any(|x: &Component| x.id == c[0]) {
            return Err(corrupt("duplicate component id"));
        }
        components.push(Component {
            id: c[0],
            h,
            v,
            quant_table_id: c[2],
            blocks_wide: 0,
            blocks_high: 0,
            quant: [0; 64],
            blocks: Vec::new(),
        });
    }
    let h_max = components.iter().map(|c| c.h).max().unwrap_or(1);
    let v_max = components.iter().map(|c| c.v).max().unwrap_or(1);
    let mcux = usize::from(width).div_ceil(8 * usize::from(h_max));
    let mcuy = usize::from(height).div_ceil(8 * usize::from(v_max));
    for c in &mut components {
        c.blocks_wide = mcux * usize::from(c.h);
        c.blocks_high = mcuy * usize::from(c.v);
    }
    Ok(Frame {
        width,
        height,
        coded: vec![false; n],
        interleaved: vec![false; n],
        components,
        h_max,
        v_max,
    })
}

fn parse_dqt(mut body: &[u8], state: &mut TableState) -> Result<()> {
    while !body.is_empty() {
        let precision = body[0] >> 4;
        let id = usize::from(body[0] & 0x0f);
        if id > 3 || precision > 1 {
            return Err(corrupt("invalid DQT table"));
        }
        let size = if precision == 0 { 64 } else { 128 };
        let values = body
            .get(1..1 + size)
            .ok_or_else(|| corrupt("short DQT segment"))?;
        let mut table = [0u16; 64];
        for (k, &natural) in ZIGZAG.iter().enumerate() {
            table[natural] = if precision == 0 {
                u16::from(values[k])
            } else {
                u16::from_be_bytes([values[2 * k], values[2 * k + 1]])
            };
        }
        if table.contains(&0) {
            return Err(corrupt("zero quantization step"));
        }
        state.quant[id] = Some(table);
        body = &body[1 + size..];
    }
    Ok(())
}

fn parse_dht(mut body: &[u8], state: &mut TableState) -> Result<()> {
    while !body.is_empty() {
        if body.len() < 17 {
            return Err(corrupt("short DHT segment"));
        }
        let class = body[0] >> 4;
        let id = usize::from(body[0] & 0x0f);
        if class > 1 || id > 3 {
            return Err(corrupt("invalid DHT table id"));
        }
        let mut bits = [0u8; 16];
        bits.copy_from_slice(&body[1..17]);
        let count: usize = bits.iter().map(|&b| usize::from(b)).sum();
        let values = body
            .get(17..17 + count)
            .ok_or_else(|| corrupt("short DHT segment"))?;
        let table = HuffmanTable::new(bits, values)?;
        if class == 0 {
            state.dc[id] = Some(table);
        } else {
            state.ac[id] = Some(table);
        }
        body = &body[17 + count..];
    }
    Ok(())
}

fn parse_sos(body: &[u8], frame: &mut Frame, state: &TableState) -> Result<Vec<ScanComponent>> {
    let n = usize::from(*body.first().ok_or_else(|| corrupt("empty SOS"))?);
    if n == 0 || n > 4 || body.len() != 4 + 2 * n {
        return Err(corrupt("invalid scan header"));
    }
    let (ss, se, a) = (body[1 + 2 * n], body[2 + 2 * n], body[3 + 2 * n]);
    if ss != 0 || se != 63 || a != 0 {
        return Err(Error::UnsupportedFormat(
            "spectral selection / successive approximation".into(),
        ));
    }
    let mut out: Vec<ScanComponent> = Vec::with_capacity(n);
    for c in body[1..1 + 2 * n].chunks_exact(2) {
        let index = frame
            .components
            .iter()
            .position(|x| x.id == c[0])
            .ok_or_else(|| corrupt(format!("scan references unknown component {}", c[0])))?;
        if frame.coded[index] || out.iter().any(|sc| sc.component == index) {
            return Err(corrupt("component coded twice"));
        }
        let (td, ta) = (usize::from(c[1] >> 4), usize::from(c[1] & 0x0f));
        let dc = state
            .dc
            .get(td)
            .and_then(|t| t.clone())
            .ok_or_else(|| Error::MissingTable(format!("DC Huffman table {td}")))?;
        let ac = state
            .ac
            .get(ta)
            .and_then(|t| t.clone())
            .ok_or_else(|| Error::MissingTable(format!("AC Huffman table {ta}")))?;
        let qid = usize::from(frame.components[index].quant_table_id);
        let quant = state.quant[qid]
            .ok_or_else(|| Error::MissingTable(format!("quantization table {qid}")))?;
        frame.components[index].quant = quant;
        out.push(ScanComponent {
            component: index,
            dc_table: dc,
            ac_table: ac,
        });
    }
    if n > 1 {
        let per_mcu: usize = out
            .iter()
            .map(|sc| {
                let c = &frame.components[sc.component];
                usize::from(c.h) * usize::from(c.v)
            })
            .sum();
        if per_mcu > 10 {
            return Err(corrupt("too many blocks per MCU"));
        }
    }
    Ok(out)
}

#[inline]
fn extend(v: u16, size: u8) -> i32 {
    if size == 0 {
        return 0;
    }
    let v = i32::from(v);
    if v < (1 << (size - 1)) {
        v - (1 << size) + 1
    } else {
        v
    }
}

fn decode_block(
    reader: &mut BitReader<'_>,
    dc_table: &HuffmanTable,
    ac_table: &HuffmanTable,
    pred: &mut i32,
    block: &mut Block,
) -> Result<()> {
    let t = dc_table.decode(reader)?;
    if t > 11 {
        return Err(corrupt("DC size category above 11"));
    }
    let diff = extend(reader.receive(t)?, t);
    *pred += diff;
    if pred.abs() > 2047 {
        return Err(corrupt("DC value out of range"));
    }
    block[0] = *pred as i16;

    let mut k = 1usize;
    while k < 64 {
        let rs = ac_table.decode(reader)?;
        let (run, size) = (usize::from(rs >> 4), rs & 0x0f);
        if size == 0 {
            if run == 15 {
                k += 16;
                continue;
            }
            break;
        }
        if size > 10 {
            return Err(corrupt("AC size category above 10"));
        }
        k += run;
        if k > 63 {
            return Err(corrupt("AC run past end of block"));
        }
        block[ZIGZAG[k]] = extend(reader.receive(size)?, size) as i16;
        k += 1;
    }
    if k > 64 {
        return Err(corrupt("zero run past end of block"));
    }
    Ok(())
}

/// Decodes one scan; returns the number of bytes of entropy-coded data
/// consumed.
fn decode_scan(
    data: &[u8],
    frame: &mut Frame,
    scan: &[ScanComponent],
    restart_interval: u16,
) -> Result<usize> {
    // Each coded block needs at least two bits, which bounds how many
    // blocks a scan of this size can really hold.
    let budget = data.len().saturating_mul(4).saturating_add(64);
    let needed: usize = scan
        .iter()
        .map(|sc| {
            let c = &frame.components[sc.component];
            c.blocks_wide * c.blocks_high
        })
        .sum();
    if needed > budget {
        return Err(corrupt("scan data too short for the declared image size"));
    }
    for sc in scan {
        let c = &mut frame.components[sc.component];
        c.blocks = vec![[0i16; 64]; c.blocks_wide * c.blocks_high];
    }

    let mut reader = BitReader::new(data);
    let mut preds = vec![0i32; scan.len()];
    let interleaved = scan.len() > 1;

    let (mcu_cols, mcu_rows) = if interleaved {
        let c = &frame.components[scan[0].component];
        (
            c.blocks_wide / usize::from(c.h),
            c.blocks_high / usize::from(c.v),
        )
    } else {
        let c = &frame.components[scan[0].component];
        component_extent(
            frame.width,
            frame.height,
            c.h,
            c.v,
            frame.h_max,
            frame.v_max,
        )
    };
    let total = mcu_cols * mcu_rows;
    let mut rst = 0u8;

    for mcu in 0..total {
        if restart_interval > 0 && mcu > 0 && mcu % usize::from(restart_interval) == 0 {
            reader.restart(rst)?;
            rst = rst.wrapping_add(1) & 7;
            preds.iter_mut().for_each(|p| *p = 0);
        }
        let (mx, my) = (mcu % mcu_cols, mcu / mcu_cols);
        for (si, sc) in scan.iter().enumerate() {
            let c = &mut frame.components[sc.component];
            if interleaved {
                for v in 0..usize::from(c.v) {
                    for h in 0..usize::from(c.h) {
                        let row = my * usize::from(c.v) + v;
                        let col = mx * usize::from(c.h) + h;
                        let idx = row * c.blocks_wide + col;
                        decode_block(
                            &mut reader,
                            &sc.dc_table,
                            &sc.ac_table,
                            &mut preds[si],
                            &mut c.blocks[idx],
                        )?;
                    }
                }
            } else {
                let idx = my * c.blocks_wide + mx;
                decode_block(
                    &mut reader,
                    &sc.dc_table,
                    &sc.ac_table,
                    &mut preds[si],
                    &mut c.blocks[idx],
                )?;
            }
        }
    }

    for sc in scan {
        frame.coded[sc.component] = true;
        frame.interleaved[sc.component] = interleaved;
    }
    Ok(reader.position())
}
