//! Run-aware compaction of a selection.
//!
//! A scattered selection is cheap in distortion but its run-length record
//! is long, and every record bit displaces an LSB that the selected blocks
//! have to carry. Compaction keeps whole intervals whose first and last
//! blocks were picked by the strategy, filling the gaps inside them, and
//! trades the distortion of the filled blocks against the 16 record bits
//! each run costs. Picks that would need a run of their own can be dropped.

use super::aux::{AuxRecord, HEADER_BITS};

/// Bits each run-length entry adds to the record.
const RUN_BITS: f64 = 16.0;

/// Per-block inputs. `members` are the strategy's picks; only eligible
/// blocks can be selected.
pub struct Blocks<'a> {
    pub r: &'a [u32],
    pub d: &'a [f64],
    pub eligible: &'a [bool],
    pub members: &'a [bool],
}

const OFF: usize = 0;
/// Selected, and the last selected block is a member.
const ON_MEMBER: usize = 1;
/// Selected, inside a gap that a member has to close.
const ON_GAP: usize = 2;

/// Minimizes `Σ (d_i − λ r_i)` over selected blocks plus `penalty` per
/// selected interval.
fn solve(b: &Blocks, lambda: f64, penalty: f64) -> Vec<bool> {
    let n = b.r.len();
    let inf = f64::INFINITY;
    let mut cost = [0.0, inf, inf];
    let mut back = vec![[OFF; 3]; n];
    for i in 0..n {
        let gain = b.d[i] - lambda * f64::from(b.r[i]);
        let mut next = [inf; 3];
        (next[OFF], back[i][OFF]) = if cost[OFF] <= cost[ON_MEMBER] {
            (cost[OFF], OFF)
        } else {
            (cost[ON_MEMBER], ON_MEMBER)
        };
        if b.eligible[i] {
            let (cont, from) = if cost[ON_MEMBER] <= cost[ON_GAP] {
                (cost[ON_MEMBER], ON_MEMBER)
            } else {
                (cost[ON_GAP], ON_GAP)
            };
            if b.members[i] {
                let open = cost[OFF] + penalty;
                let (best, from) = if cont <= open {
                    (cont, from)
                } else {
                    (open, OFF)
                };
                (next[ON_MEMBER], back[i][ON_MEMBER]) = (best + gain, from);
            } else {
                (next[ON_GAP], back[i][ON_GAP]) = (cont + gain, from);
            }
        }
        cost = next;
    }
    let mut state = if cost[OFF] <= cost[ON_MEMBER] {
        OFF
    } else {
        ON_MEMBER
    };
    let mut bits = vec![false; n];
    for i in (0..n).rev() {
        bits[i] = state != OFF;
        state = back[i][state];
    }
    bits
}

fn capacity(b: &Blocks, bits: &[bool]) -> u64 {
    bits.iter()
        .zip(b.r)
        .filter(|(&on, _)| on)
        .map(|(_, &r)| u64::from(r))
        .sum()
}

/// Cheapest compaction whose capacity covers `payload` plus its own
/// run-length record. `lsb_cost` is the expected distortion of writing one
/// record bit. `None` when even keeping every interval falls short.
pub fn compact(b: &Blocks, payload: u64, lsb_cost: f64) -> Option<Vec<bool>> {
    let fits = |bits: &[bool]| {
        let record = HEADER_BITS + 16 * AuxRecord::run_count(bits);
        capacity(b, bits) >= payload + record as u64
    };
    let attempt = |lambda: f64| {
        // One interval is two runs.
        let bits = solve(b, lambda, 2.0 * RUN_BITS * (lambda + lsb_cost));
        let ok = fits(&bits);
        (bits, ok)
    };
    let mut hi = 1.0;
    let mut best = loop {
        let (bits, ok) = attempt(hi);
        if ok {
            break bits;
        }
        if hi > 1e15 {
            return None;
        }
        hi *= 4.0;
    };
    let mut lo = 0.0;
    for _ in 0..48 {
        let mid = 0.5 * (lo + hi);
        let (bits, ok) = attempt(mid);
        if ok {
            hi = mid;
            best = bits;
        } else {
            lo = mid;
        }
    }
    Some(best)
}
