//! Covering knapsack: pick items with total size at least `c` and
//! minimum total weight.

/// Bit matrix of DP decisions, one row per item.
struct Decisions {
    cols: usize,
    words: Vec<u64>,
}

impl Decisions {
    fn new(rows: usize, cols: usize) -> Self {
        let per_row = cols.div_ceil(64);
        Decisions {
            cols: per_row * 64,
            words: vec![0; rows * per_row],
        }
    }

    #[inline]
    fn set(&mut self, row: usize, col: usize) {
        let bit = row * self.cols + col;
        self.words[bit / 64] |= 1 << (bit % 64);
    }

    #[inline]
    fn get(&self, row: usize, col: usize) -> bool {
        let bit = row * self.cols + col;
        self.words[bit / 64] >> (bit % 64) & 1 == 1
    }
}

/// Minimum-weight subset of `items` (indices into `size` / `weight`) whose
/// sizes sum to at least `c`. Returns the chosen indices, or `None` if the
/// items cannot reach `c`. Weights must be non-negative.
///
/// Runs over whichever of `c` and `total - c` is smaller: the second form
/// instead maximizes the weight left out subject to the left-out size not
/// exceeding the slack.
pub fn min_weight_cover(
    items: &[usize],
    size: &[u32],
    weight: &[f64],
    c: u64,
) -> Option<Vec<usize>> {
    let total: u64 = items.iter().map(|&i| u64::from(size[i])).sum();
    if total < c {
        return None;
    }
    if c == 0 {
        return Some(Vec::new());
    }
    let slack = total - c;
    if slack < c {
        Some(by_exclusion(items, size, weight, slack as usize))
    } else {
        Some(by_cover(items, size, weight, c as usize))
    }
}

fn by_cover(items: &[usize], size: &[u32], weight: &[f64], c: usize) -> Vec<usize> {
    let mut best = vec![f64::INFINITY; c + 1];
    best[0] = 0.0;
    let mut taken = Decisions::new(items.len(), c + 1);
    for (row, &i) in items.iter().enumerate() {
        let r = size[i] as usize;
        let w = weight[i];
        for cap in (1..=c).rev() {
            let cand = best[cap.saturating_sub(r)] + w;
            if cand < best[cap] {
                best[cap] = cand;
                taken.set(row, cap);
            }
        }
    }
    let mut chosen = Vec::new();
    let mut cap = c;
    for (row, &i) in items.iter().enumerate().rev() {
        if cap > 0 && taken.get(row, cap) {
            chosen.push(i);
            cap = cap.saturating_sub(size[i] as usize);
        }
    }
    chosen.reverse();
    chosen
}

fn by_exclusion(items: &[usize], size: &[u32], weight: &[f64], slack: usize) -> Vec<usize> {
    let mut best = vec![0.0f64; slack + 1];
    let mut dropped = Decisions::new(items.len(), slack + 1);
    for (row, &i) in items.iter().enumerate() {
        let r = size[i] as usize;
        if r > slack {
            continue;
        }
        let w = weight[i];
        for cap in (r..=slack).rev() {
            let cand = best[cap - r] + w;
            if cand > best[cap] {
                best[cap] = cand;
                dropped.set(row, cap);
            }
        }
    }
    let mut keep = vec![true; items.len()];
    let mut cap = slack;
    for (row, &i) in items.iter().enumerate().rev() {
        if dropped.get(row, cap) {
            keep[row] = false;
            cap -= size[i] as usize;
        }
    }
    items
        .iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(&i, _)| i)
        .collect()
}
