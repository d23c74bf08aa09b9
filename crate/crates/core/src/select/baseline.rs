use serde::Serialize;

use super::{DecisionVector, SelectionProblem};
use crate::cost::{average_distortion, frequency_cost, frequency_counts, masked_distortion};
use crate::error::{Error, Result};
use crate::jpeg::CoefficientImage;

/// Eligible signals ordered by zero-AC count, most zeros first, taken
/// until their capacity reaches `c`.
pub fn huang_order(p: &SelectionProblem, zero_counts: &[u32]) -> Result<DecisionVector> {
    if zero_counts.len() != p.len() {
        return Err(Error::DimensionMismatch(
            "zero counts do not match the problem size".into(),
        ));
    }
    p.check_feasible()?;
    let mut order: Vec<usize> = (0..p.len()).filter(|&i| p.eligible[i]).collect();
    order.sort_by(|&a, &b| zero_counts[b].cmp(&zero_counts[a]).then(a.cmp(&b)));
    Ok(p.decision(take_prefix(p, &order)))
}

fn take_prefix(p: &SelectionProblem, order: &[usize]) -> Vec<bool> {
    let mut bits = vec![false; p.len()];
    let mut cap = 0u64;
    for &i in order {
        if cap >= p.c {
            break;
        }
        if p.r[i] == 0 {
            continue;
        }
        bits[i] = true;
        cap += u64::from(p.r[i]);
    }
    bits
}

/// Direction in which frequencies are ranked by average distortion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum HouOrder {
    /// Largest average distortion first.
    #[default]
    Descending,
    Ascending,
}

/// One evaluated frequency-set size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HouSelection {
    pub decision: DecisionVector,
    /// Number of frequencies used to rank blocks.
    pub k: usize,
    /// Natural indices of those frequencies, in rank order.
    pub frequencies: Vec<usize>,
    /// PSNR predicted from the expected distortion of the selection.
    pub psnr_estimate: f64,
}

/// Ranks the frequencies that have at least one ±1 over eligible blocks.
fn ranked_frequencies(
    img: &CoefficientImage,
    p: &SelectionProblem,
    order: HouOrder,
) -> Result<Vec<usize>> {
    let counts = frequency_counts(img, (0..p.len()).filter(|&i| p.eligible[i]));
    let quant = img.luma_quant();
    let mut scored = Vec::new();
    for i in 1..64 {
        if counts[i].ones == 0 {
            continue;
        }
        let (u, v) = (i / 8, i % 8);
        scored.push((
            average_distortion(counts[i], frequency_cost(u, v, quant), u, v)?,
            i,
        ));
    }
    scored.sort_by(|a, b| {
        let by_score = match order {
            HouOrder::Descending => b.0.total_cmp(&a.0),
            HouOrder::Ascending => a.0.total_cmp(&b.0),
        };
        by_score.then(a.1.cmp(&b.1))
    });
    Ok(scored.into_iter().map(|(_, i)| i).collect())
}

/// Every frequency-set size the search visits, in increasing order.
pub fn hou_candidates(
    img: &CoefficientImage,
    p: &SelectionProblem,
    order: HouOrder,
) -> Result<Vec<HouSelection>> {
    if img.luma_block_count() != p.len() {
        return Err(Error::DimensionMismatch(
            "problem size differs from the block count".into(),
        ));
    }
    p.check_feasible()?;
    let ranked = ranked_frequencies(img, p, order)?;
    let quant = img.luma_quant();
    let pixels = 64.0 * p.len() as f64;
    let eligible: Vec<usize> = (0..p.len()).filter(|&i| p.eligible[i]).collect();

    let mut out = Vec::with_capacity(ranked.len());
    for k in 1..=ranked.len().max(1) {
        let mut mask = [false; 64];
        for &f in ranked.iter().take(k) {
            mask[f] = true;
        }
        let key: Vec<f64> = (0..p.len())
            .map(|i| {
                if p.eligible[i] {
                    masked_distortion(img.luma_block(i), quant, &mask)
                } else {
                    0.0
                }
            })
            .collect();
        let mut order = eligible.clone();
        order.sort_by(|&a, &b| {
            key[a]
                .total_cmp(&key[b])
                .then(p.e[a].total_cmp(&p.e[b]))
                .then(a.cmp(&b))
        });
        let decision = p.decision(take_prefix(p, &order));
        let psnr_estimate = if decision.objective_d > 0.0 {
            10.0 * (255.0 * 255.0 * pixels / decision.objective_d).log10()
        } else {
            f64::INFINITY
        };
        out.push(HouSelection {
            decision,
            k,
            frequencies: ranked[..k.min(ranked.len())].to_vec(),
            psnr_estimate,
        });
    }
    Ok(out)
}

/// Searches the number of ranked frequencies for the selection with the
/// best predicted PSNR (the smallest such number on ties).
pub fn hou_select(
    img: &CoefficientImage,
    p: &SelectionProblem,
    order: HouOrder,
) -> Result<HouSelection> {
    let mut best: Option<HouSelection> = None;
    for cand in hou_candidates(img, p, order)? {
        if best
            .as_ref()
            .is_none_or(|b| cand.psnr_estimate > b.psnr_estimate)
        {
            best = Some(cand);
        }
    }
    best.ok_or(Error::Infeasible {
        required: p.c,
        available: p.eligible_capacity(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn huang_prefers_flat_blocks() {
        let p = SelectionProblem::new(
            vec![2, 2],
            vec![1.0, 1.0],
            vec![0.0, 0.0],
            2,
            1.0,
            vec![true; 2],
        )
        .unwrap();
        assert_eq!(huang_order(&p, &[60, 10]).unwrap().bits, vec![true, false]);
        assert_eq!(huang_order(&p, &[10, 60]).unwrap().bits, vec![false, true]);
        assert_eq!(huang_order(&p, &[30, 30]).unwrap().bits, vec![true, false]);
        let all = SelectionProblem { c: 4, ..p };
        assert_eq!(huang_order(&all, &[1, 2]).unwrap().bits, vec![true, true]);
    }
}
