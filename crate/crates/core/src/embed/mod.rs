//! Embedding and extraction.
//!
//! The decision vector travels in a reserved run of trailing blocks: its
//! bits replace the least significant bits of AC coefficients with
//! magnitude at least 2, read from the last block backwards. The bits
//! displaced there are carried in front of the payload in the selected
//! blocks, so extraction restores every coefficient.

mod aux;
mod compact;
mod hs;

pub use aux::{AuxRecord, HEADER_BITS};
pub use hs::{hs_embed_block, hs_extract_block};

use std::cell::RefCell;
use std::collections::HashMap;

use serde::Serialize;

use crate::cost::{image_costs, zero_ac_count, ImageCosts, Signal};
use crate::error::{Error, Result};
use crate::jpeg::tables::ZIGZAG;
use crate::jpeg::{ac_code_length, CoefficientImage};
use crate::select::{
    hou_select, huang_order, min_expansion, min_expansion_set, select_signals_seeded,
    DecisionVector, HouOrder, SelectionProblem, BUDGET_TOLERANCE,
};
use crate::transform::{decompress, mse, PixelImage};

/// Block selection strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, clap::ValueEnum)]
pub enum Strategy {
    /// Minimum distortion under a size-growth budget.
    #[default]
    #[serde(rename = "multiobj")]
    #[value(name = "multiobj")]
    MultiObjective,
    /// Blocks with the most zero AC coefficients first.
    #[serde(rename = "huang")]
    #[value(name = "huang")]
    Huang,
    /// Blocks ranked by distortion over the best frequency subset.
    #[serde(rename = "hou")]
    #[value(name = "hou")]
    Hou,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::MultiObjective => "multiobj",
            Strategy::Huang => "huang",
            Strategy::Hou => "hou",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbedOptions {
    pub strategy: Strategy,
    /// Budget slack: size growth may reach `(1 + alpha)` times its minimum.
    pub alpha: f64,
    pub hou_order: HouOrder,
}

impl Default for EmbedOptions {
    fn default() -> Self {
        EmbedOptions {
            strategy: Strategy::MultiObjective,
            alpha: 1.0,
            hou_order: HouOrder::Descending,
        }
    }
}

/// What was decided while embedding.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbedPlan {
    pub decision: DecisionVector,
    /// First block of the reserved trailing region.
    pub tail_start: usize,
    /// Original LSBs overwritten by the auxiliary record.
    pub lsb_originals: Vec<bool>,
    /// Bits that had to be carried: displaced LSBs plus payload.
    pub required_bits: u64,
    pub aux_bits: usize,
    pub aux_rle: bool,
    /// Minimum expected size growth for `required_bits`.
    pub e_star: f64,
    /// Number of frequencies used when the strategy is Hou's.
    pub hou_k: Option<usize>,
    /// Largest payload the cover accepts with these options.
    pub max_payload: u64,
}

#[derive(Debug, Clone)]
pub struct EmbedOutcome {
    pub stego: CoefficientImage,
    pub plan: EmbedPlan,
}

/// (block, natural index) of every LSB slot, from the last block
/// backwards, zigzag order within a block.
fn slots_from_end(img: &CoefficientImage) -> impl Iterator<Item = (usize, usize)> + '_ {
    (0..img.luma_block_count()).rev().flat_map(move |b| {
        let block = img.luma_block(b);
        ZIGZAG[1..]
            .iter()
            .filter(move |&&pos| block[pos].abs() >= 2)
            .map(move |&pos| (b, pos))
    })
}

/// First block of the shortest trailing run holding `needed` LSB slots.
pub fn reserve_tail(img: &CoefficientImage, needed: usize) -> Result<usize> {
    let mut have = 0usize;
    for b in (0..img.luma_block_count()).rev() {
        have += img.luma_block(b)[1..]
            .iter()
            .filter(|v| v.abs() >= 2)
            .count();
        if have >= needed {
            return Ok(b);
        }
    }
    Err(Error::InsufficientAuxCapacity {
        needed: needed as u64,
        available: have as u64,
    })
}

/// What compaction minimizes besides the record length.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Weighting {
    Distortion,
    /// Distortion plus growth scaled to `factor` times the picks' ratio.
    Mixed(f64),
    /// Growth, over picks made without slack in the growth budget.
    Growth,
}

/// Tail resizings before a compaction attempt is given up.
const MAX_LAYOUT_ROUNDS: usize = 4;

fn aux_upper_bound(img: &CoefficientImage) -> usize {
    HEADER_BITS + img.luma_block_count()
}

/// Everything the planner needs that does not depend on the payload.
struct Context<'a> {
    img: &'a CoefficientImage,
    costs: ImageCosts,
    zeros: Vec<u32>,
    options: &'a EmbedOptions,
    /// Strategy picks by (strategy, alpha bits, tail room, capacity).
    picks: RefCell<HashMap<(Strategy, u64, usize, u64), Choice>>,
}

/// Blocks open to selection when the tail holds `aux_room` slots.
struct Layout {
    aux_room: usize,
    tail_start: usize,
    eligible: Vec<bool>,
    capacity: u64,
}

#[derive(Clone)]
struct Choice {
    problem: SelectionProblem,
    decision: DecisionVector,
    record: AuxRecord,
    hou_k: Option<usize>,
}

impl<'a> Context<'a> {
    fn new(img: &'a CoefficientImage, options: &'a EmbedOptions) -> Result<Self> {
        let n = img.luma_block_count();
        if n == 0 {
            return Err(Error::InsufficientAuxCapacity {
                needed: HEADER_BITS as u64,
                available: 0,
            });
        }
        let zeros = (0..n).map(|i| zero_ac_count(img.luma_block(i))).collect();
        Ok(Context {
            img,
            costs: image_costs(img),
            zeros,
            options,
            picks: RefCell::default(),
        })
    }

    fn layout(&self, aux_room: usize) -> Result<Layout> {
        let tail_start = reserve_tail(self.img, aux_room)?;
        let eligible: Vec<bool> = (0..self.costs.len())
            .map(|i| i < tail_start && self.costs.usable[i])
            .collect();
        let capacity = (0..eligible.len())
            .filter(|&i| eligible[i])
            .map(|i| u64::from(self.costs.costs[i].r))
            .sum();
        Ok(Layout {
            aux_room,
            tail_start,
            eligible,
            capacity,
        })
    }

    /// Runs the strategy. With `fill_to` set and a record longer than that,
    /// fills gaps in the selection to shorten the record.
    fn choose(
        &self,
        layout: &Layout,
        c: u64,
        payload_bits: u32,
        fill_to: Option<usize>,
    ) -> Result<Choice> {
        self.choose_with(
            self.options.strategy,
            self.options.alpha,
            layout,
            c,
            payload_bits,
            fill_to,
        )
    }

    fn choose_with(
        &self,
        strategy: Strategy,
        alpha: f64,
        layout: &Layout,
        c: u64,
        payload_bits: u32,
        fill_to: Option<usize>,
    ) -> Result<Choice> {
        let problem =
            SelectionProblem::from_costs(&self.costs.costs, layout.eligible.clone(), c, alpha)?;
        let (mut decision, hou_k) = match strategy {
            Strategy::Huang => (huang_order(&problem, &self.zeros)?, None),
            Strategy::Hou => {
                let sel = hou_select(self.img, &problem, self.options.hou_order)?;
                (sel.decision, Some(sel.k))
            }
            Strategy::MultiObjective => {
                let seed = huang_order(&problem, &self.zeros)?;
                (select_signals_seeded(&problem, &[seed.bits])?, None)
            }
        };
        let mut record = AuxRecord::build(&decision.bits, payload_bits)?;
        if let Some(room) = fill_to.filter(|&room| record.bit_len() > room) {
            // Stay inside the size budget if possible; the record has to
            // fit either way.
            let budget = match strategy {
                Strategy::MultiObjective => problem.budget(min_expansion(&problem)?),
                _ => f64::INFINITY,
            };
            for limit in [budget, f64::INFINITY] {
                let Some(bits) = fill_gaps(&problem, &decision, room, limit) else {
                    continue;
                };
                let filled = AuxRecord::build(&bits, payload_bits)?;
                if filled.bit_len() < record.bit_len() {
                    decision = problem.decision(bits);
                    record = filled;
                }
                if record.bit_len() <= room {
                    break;
                }
            }
        }
        Ok(Choice {
            problem,
            decision,
            record,
            hou_k,
        })
    }

    /// The strategy's selection at capacity `c`, compacted under
    /// `weighting` so that it carries `payload` plus its own record.
    fn compacted(
        &self,
        strategy: Strategy,
        weighting: Weighting,
        layout: &Layout,
        c: u64,
        payload: u64,
        payload_bits: u32,
    ) -> Result<Option<Choice>> {
        let alpha = if weighting == Weighting::Growth {
            0.0
        } else {
            self.options.alpha
        };
        let key = (strategy, alpha.to_bits(), layout.aux_room, c);
        let cached = self.picks.borrow().get(&key).cloned();
        let members = match cached {
            Some(m) => m,
            None => {
                let m = match weighting {
                    Weighting::Growth => {
                        let problem = SelectionProblem::from_costs(
                            &self.costs.costs,
                            layout.eligible.clone(),
                            c,
                            0.0,
                        )?;
                        let decision = min_expansion_set(&problem)?;
                        let record = AuxRecord::build(&decision.bits, payload_bits)?;
                        Choice {
                            problem,
                            decision,
                            record,
                            hou_k: None,
                        }
                    }
                    _ => self.choose_with(strategy, alpha, layout, c, payload_bits, None)?,
                };
                self.picks.borrow_mut().insert(key, m.clone());
                m
            }
        };
        let p = &members.problem;
        let weights: Vec<f64> = match weighting {
            Weighting::Distortion => p.d.clone(),
            Weighting::Mixed(factor) => {
                let (d, e) = members
                    .decision
                    .selected()
                    .fold((0.0, 0.0), |(d, e), i| (d + p.d[i], e + p.e[i]));
                let mu = if e > 0.0 { factor * d / e } else { 0.0 };
                (0..p.len()).map(|i| p.d[i] + mu * p.e[i]).collect()
            }
            // Distortion only breaks ties.
            Weighting::Growth => (0..p.len()).map(|i| p.e[i] + 1e-9 * p.d[i]).collect(),
        };
        let blocks = compact::Blocks {
            r: &p.r,
            d: &weights,
            eligible: &layout.eligible,
            members: &members.decision.bits,
        };
        let lsb_cost = match weighting {
            Weighting::Growth => 0.0,
            _ => self.lsb_cost(layout.aux_room),
        };
        let Some(bits) = compact::compact(&blocks, payload, lsb_cost) else {
            return Ok(None);
        };
        let decision = p.decision(bits);
        let record = AuxRecord::build(&decision.bits, payload_bits)?;
        let problem = SelectionProblem {
            c: payload + record.bit_len() as u64,
            alpha: self.options.alpha,
            ..members.problem
        };
        Ok(Some(Choice {
            problem,
            decision,
            record,
            hou_k: members.hou_k,
        }))
    }

    /// Expected distortion of writing one record bit into the first
    /// `room` slots: half of them flip.
    fn lsb_cost(&self, room: usize) -> f64 {
        let quant = self.img.luma_quant();
        let (sum, count) = slots_from_end(self.img)
            .take(room)
            .fold((0.0, 0usize), |(s, n), (_, pos)| {
                (s + 0.5 * f64::from(quant[pos]).powi(2), n + 1)
            });
        if count == 0 {
            0.0
        } else {
            sum / count as f64
        }
    }

    /// Smallest tail for which selecting every usable block leaves room
    /// for its own record, and the payload that then fits.
    fn full_capacity(&self) -> Result<(Layout, u64)> {
        let n = self.img.luma_block_count();
        let mut room = HEADER_BITS + n.min(16);
        loop {
            let layout = self.layout(room)?;
            let choice = self.choose(&layout, layout.capacity, 0, Some(room))?;
            let need = choice.record.bit_len();
            if need <= room {
                // The displaced LSBs ride in the selected blocks too.
                if layout.capacity < room as u64 {
                    return Err(Error::InsufficientCapacity {
                        requested: 0,
                        available: 0,
                    });
                }
                let payload = layout.capacity - room as u64;
                return Ok((layout, payload));
            }
            room = need.max(room + 1).min(aux_upper_bound(self.img));
        }
    }
}

/// Selects whole runs of eligible blocks lying between selected ones,
/// cheapest distortion first, until the run-length record fits in `room`
/// bits or no gap is left. Each filled run removes two runs from the
/// record. Gaps that would push the size growth past `budget` are skipped.
fn fill_gaps(
    p: &SelectionProblem,
    v: &DecisionVector,
    room: usize,
    budget: f64,
) -> Option<Vec<bool>> {
    let k = v.bits.len();
    let max_runs = (room.saturating_sub(HEADER_BITS) / 16).min(k.saturating_sub(1) / 16);
    let mut runs = AuxRecord::run_count(&v.bits);
    let first = v.bits.iter().position(|&b| b)?;
    let mut gaps = Vec::new();
    let mut i = first;
    while i < k {
        if v.bits[i] {
            i += 1;
            continue;
        }
        let start = i;
        while i < k && !v.bits[i] {
            i += 1;
        }
        if i < k && (start..i).all(|j| p.eligible[j]) {
            let d: f64 = (start..i).map(|j| p.d[j]).sum();
            let e: f64 = (start..i).map(|j| p.e[j]).sum();
            gaps.push((d, e, start, i));
        }
    }
    gaps.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    let mut bits = v.bits.clone();
    let mut e_total = v.objective_e;
    for (_, e, start, end) in gaps {
        if runs <= max_runs {
            break;
        }
        if e_total + e > budget {
            continue;
        }
        bits[start..end].iter_mut().for_each(|b| *b = true);
        e_total += e;
        runs -= 2;
    }
    Some(bits)
}

/// Largest payload `plan_and_embed` accepts for `img` with `options`.
pub fn max_payload(img: &CoefficientImage, options: &EmbedOptions) -> Result<u64> {
    Ok(Context::new(img, options)?
        .full_capacity()?
        .1
        .min(u64::from(u32::MAX)))
}

/// Writes the record into the tail and the carried stream into the
/// selected blocks. Returns the stego image and the displaced LSBs.
fn realize(
    img: &CoefficientImage,
    choice: &Choice,
    payload: &[bool],
) -> Result<(CoefficientImage, Vec<bool>)> {
    let mut stego = img.clone();
    let aux_bits = choice.record.to_bits();
    let slots: Vec<(usize, usize)> = slots_from_end(img).take(aux_bits.len()).collect();
    let mut lsb_originals = Vec::with_capacity(aux_bits.len());
    for (&(b, pos), &bit) in slots.iter().zip(&aux_bits) {
        let v = stego.luma_block(b)[pos];
        lsb_originals.push(v.abs() & 1 == 1);
        let magnitude = (v.abs() & !1) | i16::from(bit);
        stego.luma_block_mut(b)[pos] = v.signum() * magnitude;
    }

    let mut stream = lsb_originals.clone();
    stream.extend_from_slice(payload);
    let capacity = choice.decision.capacity;
    if stream.len() as u64 > capacity {
        return Err(Error::InsufficientCapacity {
            requested: payload.len() as u64,
            available: capacity,
        });
    }
    stream.resize(capacity as usize, false);
    let quant_table_ref = img.luma().quant_table_id;
    let mut at = 0;
    for b in choice.decision.selected() {
        let signal = Signal {
            index: b,
            coeffs: *stego.luma_block(b),
            quant_table_ref,
        };
        let (marked, used) = hs_embed_block(&signal, &stream[at..])?;
        *stego.luma_block_mut(b) = marked.coeffs;
        at += used;
    }
    Ok((stego, lsb_originals))
}

/// Squared coefficient-domain error (dequantized) and AC code-length
/// change between two images with the same layout.
fn realized_cost(
    cover: &CoefficientImage,
    cover_pixels: &PixelImage,
    stego: &CoefficientImage,
) -> Result<(f64, f64)> {
    let table = cover.luma_ac_table();
    let mut e = 0i64;
    for b in 0..cover.luma_block_count() {
        let (x, y) = (cover.luma_block(b), stego.luma_block(b));
        if x != y {
            e += i64::from(ac_code_length(y, table)?) - i64::from(ac_code_length(x, table)?);
        }
    }
    let d = mse(cover_pixels, &decompress(stego))? * cover_pixels.samples.len() as f64;
    Ok((d, e as f64))
}

struct Candidate {
    layout: Layout,
    choice: Choice,
    stego: CoefficientImage,
    lsb_originals: Vec<bool>,
    /// Squared error of the decoded pixels.
    d: f64,
    e: f64,
    /// Drawn from the zero-count order.
    huang: bool,
}

/// Plans the selection and embeds `payload` into a copy of `img`.
///
/// The tail must hold the record, the record depends on the selection and
/// the selection on which blocks the tail leaves eligible. The strategy's
/// picks are compacted into a few intervals so the run-length record stays
/// short, and the tail is grown until that record fits; the strategy's own
/// picks with the raw record are tried as well. Every candidate is embedded
/// and its decoded pixel error and code-length change measured. Baselines
/// keep the least error. The multi-objective strategy also draws on the
/// zero-count picks and keeps the least error among candidates whose growth
/// is within `(1 + alpha)` of the smallest and which are no worse than the
/// zero-count plan on either measure. When nothing fits, every usable block
/// outside the full-capacity tail is taken.
pub fn plan_and_embed(
    img: &CoefficientImage,
    payload: &[bool],
    options: &EmbedOptions,
) -> Result<EmbedOutcome> {
    let ctx = Context::new(img, options)?;
    let requested = payload.len() as u64;
    let (full_layout, limit) = ctx.full_capacity()?;
    if requested > limit.min(u64::from(u32::MAX)) {
        return Err(Error::InsufficientCapacity {
            requested,
            available: limit,
        });
    }
    let payload_bits = requested as u32;

    let strategies: &[Strategy] = match options.strategy {
        Strategy::MultiObjective => &[Strategy::MultiObjective, Strategy::Huang],
        _ => std::slice::from_ref(&options.strategy),
    };
    let mut candidates: Vec<Candidate> = Vec::new();
    let cover_pixels = decompress(img);
    let push = |layout: Layout,
                choice: Choice,
                huang: bool,
                candidates: &mut Vec<Candidate>|
     -> Result<()> {
        if choice.record.bit_len() > layout.aux_room {
            return Ok(());
        }
        if let Some(same) = candidates
            .iter_mut()
            .find(|o| o.choice.decision.bits == choice.decision.bits)
        {
            same.huang |= huang;
            return Ok(());
        }
        let (stego, lsb_originals) = realize(img, &choice, payload)?;
        let (d, e) = realized_cost(img, &cover_pixels, &stego)?;
        candidates.push(Candidate {
            layout,
            choice,
            stego,
            lsb_originals,
            d,
            e,
            huang,
        });
        Ok(())
    };
    for &strategy in strategies {
        // Compacted selections drawn from the strategy's picks. The tail
        // grows when the record outgrows it.
        let weightings: &[Weighting] = match strategy {
            Strategy::MultiObjective => &[
                Weighting::Distortion,
                Weighting::Mixed(0.5),
                Weighting::Mixed(2.0),
                Weighting::Growth,
            ],
            _ => &[Weighting::Distortion],
        };
        for &weighting in weightings {
            let mut room = HEADER_BITS + 16 * 4;
            for _ in 0..MAX_LAYOUT_ROUNDS {
                let Ok(layout) = ctx.layout(room) else { break };
                let c = requested + room as u64;
                if c > layout.capacity {
                    break;
                }
                let Some(choice) =
                    ctx.compacted(strategy, weighting, &layout, c, requested, payload_bits)?
                else {
                    break;
                };
                if choice.record.bit_len() <= room {
                    push(layout, choice, strategy == Strategy::Huang, &mut candidates)?;
                    break;
                }
                room = choice.record.bit_len();
            }
        }
        // The strategy's own selection with the raw record.
        let room = aux_upper_bound(img);
        if let Ok(layout) = ctx.layout(room) {
            let c = requested + room as u64;
            if c <= layout.capacity {
                let choice =
                    ctx.choose_with(strategy, options.alpha, &layout, c, payload_bits, None)?;
                push(layout, choice, strategy == Strategy::Huang, &mut candidates)?;
            }
        }
    }
    if candidates.is_empty() {
        let choice = ctx.choose(
            &full_layout,
            full_layout.capacity,
            payload_bits,
            Some(full_layout.aux_room),
        )?;
        let (stego, lsb_originals) = realize(img, &choice, payload)?;
        let (d, e) = realized_cost(img, &cover_pixels, &stego)?;
        candidates.push(Candidate {
            layout: full_layout,
            choice,
            stego,
            lsb_originals,
            d,
            e,
            huang: false,
        });
    }
    let budget = match options.strategy {
        Strategy::MultiObjective => {
            let e_min = candidates.iter().map(|c| c.e).fold(f64::INFINITY, f64::min);
            let b = (1.0 + options.alpha) * e_min.max(0.0);
            b + BUDGET_TOLERANCE * b.abs().max(1.0)
        }
        _ => f64::INFINITY,
    };
    let lower = |a: &Candidate, b: &Candidate| a.d < b.d || (a.d == b.d && a.e < b.e);
    // The zero-count plan seeds the multi-objective one, which never ends
    // up worse than it on either measure.
    let seed = match options.strategy {
        Strategy::MultiObjective => candidates
            .iter()
            .filter(|c| c.huang)
            .reduce(|a, b| if lower(b, a) { b } else { a })
            .map(|c| (c.d, c.e)),
        _ => None,
    };
    let admissible = |c: &Candidate| seed.is_none_or(|(d, e)| c.d <= d && c.e <= e);
    let mut best: Option<usize> = None;
    for (i, cand) in candidates.iter().enumerate() {
        if cand.e <= budget && admissible(cand) && best.is_none_or(|b| lower(cand, &candidates[b]))
        {
            best = Some(i);
        }
    }
    // Over budget even at the seed: the least growth that still matches it.
    let best = best.unwrap_or_else(|| {
        (0..candidates.len())
            .filter(|&i| admissible(&candidates[i]))
            .min_by(|&a, &b| {
                candidates[a]
                    .e
                    .total_cmp(&candidates[b].e)
                    .then(candidates[a].d.total_cmp(&candidates[b].d))
            })
            .expect("the seed is admissible")
    });
    let Candidate {
        layout,
        choice,
        stego,
        lsb_originals,
        ..
    } = candidates.swap_remove(best);
    let Choice {
        problem,
        decision,
        record,
        hou_k,
    } = choice;
    let e_star = min_expansion(&problem)?;

    let plan = EmbedPlan {
        required_bits: problem.c,
        aux_bits: record.bit_len(),
        aux_rle: record.rle,
        decision,
        tail_start: layout.tail_start,
        lsb_originals,
        e_star,
        hou_k,
        max_payload: limit,
    };
    Ok(EmbedOutcome { stego, plan })
}

/// Recovers the payload and the cover coefficients from a stego image.
pub fn extract(stego: &CoefficientImage) -> Result<(Vec<bool>, CoefficientImage)> {
    let n = stego.luma_block_count();
    let mut slots = slots_from_end(stego);
    let mut reading = std::iter::from_fn(|| {
        let (b, pos) = slots.next()?;
        Some(stego.luma_block(b)[pos].abs() & 1 == 1)
    });
    let record = AuxRecord::read(&mut reading, n)?;
    let aux_len = record.bit_len();
    // The blocks the record was read from must not have been shifted.
    let tail_start = reserve_tail(stego, aux_len).map_err(|_| Error::TruncatedStego)?;
    if record.v[tail_start..].iter().any(|&b| b) {
        return Err(Error::AuxDecode(
            "decision vector selects blocks holding the record".into(),
        ));
    }

    let mut restored = stego.clone();
    let mut stream = Vec::new();
    let quant_table_ref = stego.luma().quant_table_id;
    for b in (0..n).filter(|&b| record.v[b]) {
        let signal = Signal {
            index: b,
            coeffs: *stego.luma_block(b),
            quant_table_ref,
        };
        let (bits, original) = hs_extract_block(&signal);
        stream.extend(bits);
        *restored.luma_block_mut(b) = original.coeffs;
    }
    let payload_bits = record.payload_bits as usize;
    if stream.len() < aux_len + payload_bits {
        return Err(Error::TruncatedStego);
    }

    let slots: Vec<(usize, usize)> = slots_from_end(stego).take(aux_len).collect();
    for (&(b, pos), &bit) in slots.iter().zip(&stream[..aux_len]) {
        let v = restored.luma_block(b)[pos];
        let magnitude = (v.abs() & !1) | i16::from(bit);
        restored.luma_block_mut(b)[pos] = v.signum() * magnitude;
    }
    let payload = stream[aux_len..aux_len + payload_bits].to_vec();
    Ok((payload, restored))
}

/// Payload bytes as bits, most significant bit first.
pub fn bytes_to_bits(bytes: &[u8]) -> Vec<bool> {
    bytes
        .iter()
        .flat_map(|&b| (0..8).rev().map(move |s| b >> s & 1 == 1))
        .collect()
}

/// Packs bits into bytes, most significant bit first; a trailing partial
/// byte is padded with zeros.
pub fn bits_to_bytes(bits: &[bool]) -> Vec<u8> {
    bits.chunks(8)
        .map(|chunk| {
            chunk
                .iter()
                .enumerate()
                .fold(0u8, |acc, (i, &b)| acc | u8::from(b) << (7 - i))
        })
        .collect()
}
