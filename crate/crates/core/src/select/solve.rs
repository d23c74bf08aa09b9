use std::cmp::Ordering;

use super::dp::min_weight_cover;
use super::{DecisionVector, SelectionProblem};
use crate::error::{Error, Result};

/// Largest k accepted by [`brute_force_select`].
pub const BRUTE_FORCE_LIMIT: usize = 20;

const LAMBDA_GROWTH_STEPS: usize = 64;
const BISECTION_STEPS: usize = 30;
const LOCAL_SEARCH_PASSES: usize = 50;

/// Signals that can contribute capacity.
fn candidates(p: &SelectionProblem) -> Vec<usize> {
    (0..p.len())
        .filter(|&i| p.eligible[i] && p.r[i] > 0)
        .collect()
}

fn bits_of(p: &SelectionProblem, chosen: &[usize]) -> Vec<bool> {
    let mut bits = vec![false; p.len()];
    for &i in chosen {
        bits[i] = true;
    }
    bits
}

/// Minimum total expected size growth over selections that carry `c` bits.
pub fn min_expansion(p: &SelectionProblem) -> Result<f64> {
    p.check_feasible()?;
    Ok(min_expansion_selection(p).objective_e)
}

/// A selection attaining [`min_expansion`].
pub fn min_expansion_set(p: &SelectionProblem) -> Result<DecisionVector> {
    p.check_feasible()?;
    Ok(min_expansion_selection(p))
}

fn min_expansion_selection(p: &SelectionProblem) -> DecisionVector {
    let chosen =
        min_weight_cover(&candidates(p), &p.r, &p.e, p.c).expect("feasibility checked by caller");
    p.decision(bits_of(p, &chosen))
}

/// Orders candidate answers: lower d, then lower e, then the
/// lexicographically smaller bit vector.
fn better(a: &DecisionVector, b: &DecisionVector) -> bool {
    match a.objective_d.partial_cmp(&b.objective_d) {
        Some(Ordering::Less) => return true,
        Some(Ordering::Greater) => return false,
        _ => {}
    }
    match a.objective_e.partial_cmp(&b.objective_e) {
        Some(Ordering::Less) => return true,
        Some(Ordering::Greater) => return false,
        _ => {}
    }
    a.bits < b.bits
}

fn lex_smaller(a: u32, b: u32) -> bool {
    let diff = a ^ b;
    diff != 0 && a >> diff.trailing_zeros() & 1 == 0
}

/// Exact answer by enumerating every subset of `items` (at most
/// [`BRUTE_FORCE_LIMIT`] of them).
fn exhaustive(p: &SelectionProblem, items: &[usize]) -> Result<DecisionVector> {
    let m = items.len();
    debug_assert!(m <= BRUTE_FORCE_LIMIT);
    let sums = |mask: u32| {
        let (mut r, mut d, mut e) = (0u64, 0.0, 0.0);
        for (bit, &i) in items.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                r += u64::from(p.r[i]);
                d += p.d[i];
                e += p.e[i];
            }
        }
        (r, d, e)
    };

    let mut e_star = f64::INFINITY;
    for mask in 0u32..1 << m {
        let (r, _, e) = sums(mask);
        if r >= p.c && e < e_star {
            e_star = e;
        }
    }
    if e_star.is_infinite() {
        return Err(Error::Infeasible {
            required: p.c,
            available: p.eligible_capacity(),
        });
    }
    let budget = p.budget(e_star);

    // Bit j of a mask is item j, so the lexicographically smaller vector is
    // the one that is zero at the lowest differing bit.
    let mut best: Option<(f64, f64, u32)> = None;
    for mask in 0u32..1 << m {
        let (r, d, e) = sums(mask);
        if r < p.c || e > budget {
            continue;
        }
        let replace = match best {
            None => true,
            Some((bd, be, bm)) => {
                d < bd || (d == bd && (e < be || (e == be && lex_smaller(mask, bm))))
            }
        };
        if replace {
            best = Some((d, e, mask));
        }
    }
    let (_, _, mask) = best.ok_or(Error::BudgetUnsatisfiable)?;
    let chosen: Vec<usize> = (0..m)
        .filter(|&b| mask >> b & 1 == 1)
        .map(|b| items[b])
        .collect();
    Ok(p.decision(bits_of(p, &chosen)))
}

/// Exhaustive search over all subsets of eligible signals; a test oracle.
pub fn brute_force_select(p: &SelectionProblem) -> Result<DecisionVector> {
    if p.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            k: p.len(),
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    p.check_feasible()?;
    let items: Vec<usize> = (0..p.len()).filter(|&i| p.eligible[i]).collect();
    exhaustive(p, &items)
}

/// Minimum-distortion selection within the size budget.
pub fn select_signals(p: &SelectionProblem) -> Result<DecisionVector> {
    select_signals_seeded(p, &[])
}

/// As [`select_signals`], additionally considering the given selections
/// (for instance a baseline strategy's answer) as starting points. The
/// result is never worse in d than any seed that meets the budget.
pub fn select_signals_seeded(p: &SelectionProblem, seeds: &[Vec<bool>]) -> Result<DecisionVector> {
    p.check_feasible()?;
    if p.c == 0 {
        return Ok(p.decision(vec![false; p.len()]));
    }
    let items = candidates(p);
    let result = if items.len() <= BRUTE_FORCE_LIMIT {
        exhaustive(p, &items)?
    } else {
        lagrangian(p, &items, seeds)
    };
    Ok(result)
}

fn lagrangian(p: &SelectionProblem, items: &[usize], seeds: &[Vec<bool>]) -> DecisionVector {
    let min_e = min_expansion_selection(p);
    let budget = p.budget(min_e.objective_e);
    let feasible = |v: &DecisionVector| v.capacity >= p.c && v.objective_e <= budget;

    let mut best = min_e.clone();
    let consider = |v: DecisionVector, best: &mut DecisionVector| {
        if feasible(&v) && better(&v, best) {
            *best = v;
        }
    };
    for seed in seeds {
        if seed.len() == p.len() && seed.iter().zip(&p.eligible).all(|(&s, &ok)| !s || ok) {
            consider(p.decision(seed.clone()), &mut best);
        }
    }

    let solve = |lambda: f64| {
        let w: Vec<f64> = p.d.iter().zip(&p.e).map(|(d, e)| d + lambda * e).collect();
        let chosen = min_weight_cover(items, &p.r, &w, p.c).expect("feasibility checked");
        p.decision(bits_of(p, &chosen))
    };

    let unconstrained = solve(0.0);
    if feasible(&unconstrained) {
        // optimal for the relaxed problem, hence for the constrained one
        consider(unconstrained, &mut best);
        return best;
    }
    consider(unconstrained, &mut best);

    let sum_d: f64 = items.iter().map(|&i| p.d[i]).sum();
    let sum_e: f64 = items.iter().map(|&i| p.e[i]).sum();
    let mut lo = 0.0;
    let mut hi = if sum_e > 0.0 {
        (sum_d / sum_e).max(1e-9)
    } else {
        1.0
    };
    let mut reached = false;
    for _ in 0..LAMBDA_GROWTH_STEPS {
        let v = solve(hi);
        let ok = feasible(&v);
        consider(v, &mut best);
        if ok {
            reached = true;
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    if reached {
        for _ in 0..BISECTION_STEPS {
            if hi - lo <= 1e-9 * hi {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let v = solve(mid);
            if feasible(&v) {
                hi = mid;
            } else {
                lo = mid;
            }
            consider(v, &mut best);
        }
    }

    local_search(p, items, best, budget)
}

/// Drops redundant signals and swaps single signals for cheaper ones while
/// capacity and budget hold.
fn local_search(
    p: &SelectionProblem,
    items: &[usize],
    start: DecisionVector,
    budget: f64,
) -> DecisionVector {
    let mut bits = start.bits;
    let mut cap = start.capacity;
    let mut e_total = start.objective_e;
    let margin = |d: f64| 1e-12 * d.abs().max(1.0);

    for _ in 0..LOCAL_SEARCH_PASSES {
        let mut improved = false;

        for i in 0..p.len() {
            if bits[i] && cap - u64::from(p.r[i]) >= p.c && (p.d[i] > 0.0 || p.e[i] > 0.0) {
                bits[i] = false;
                cap -= u64::from(p.r[i]);
                e_total -= p.e[i];
                improved = true;
            }
        }

        let mut outside: Vec<usize> = items.iter().copied().filter(|&j| !bits[j]).collect();
        outside.sort_by(|&a, &b| {
            p.d[a]
                .total_cmp(&p.d[b])
                .then(p.e[a].total_cmp(&p.e[b]))
                .then(a.cmp(&b))
        });
        let mut used = vec![false; outside.len()];
        let inside: Vec<usize> = items.iter().copied().filter(|&i| bits[i]).collect();
        for i in inside {
            let base_cap = cap - u64::from(p.r[i]);
            let base_e = e_total - p.e[i];
            for (slot, &j) in outside.iter().enumerate() {
                if p.d[j] >= p.d[i] - margin(p.d[i]) {
                    break;
                }
                if used[slot] || base_cap + u64::from(p.r[j]) < p.c || base_e + p.e[j] > budget {
                    continue;
                }
                bits[i] = false;
                bits[j] = true;
                cap = base_cap + u64::from(p.r[j]);
                e_total = base_e + p.e[j];
                used[slot] = true;
                improved = true;
                break;
            }
        }
        if !improved {
            break;
        }
    }
    let out = p.decision(bits);
    debug_assert!(out.capacity >= p.c && out.objective_e <= budget + 1e-6);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(r: &[u32], d: &[f64], e: &[f64], c: u64, alpha: f64) -> SelectionProblem {
        SelectionProblem::new(
            r.to_vec(),
            d.to_vec(),
            e.to_vec(),
            c,
            alpha,
            vec![true; r.len()],
        )
        .unwrap()
    }

    #[test]
    fn e_star_examples() {
        assert_eq!(
            min_expansion(&problem(&[2, 3], &[0.0, 0.0], &[5.0, 4.0], 4, 1.0)).unwrap(),
            9.0
        );
        assert_eq!(
            min_expansion(&problem(&[2, 3], &[0.0, 0.0], &[5.0, 4.0], 3, 1.0)).unwrap(),
            4.0
        );
        assert_eq!(
            min_expansion(&problem(&[2, 3], &[0.0, 0.0], &[5.0, 4.0], 0, 1.0)).unwrap(),
            0.0
        );
    }

    #[test]
    fn three_signal_example() {
        let p = problem(&[2, 3, 5], &[1.0, 2.0, 4.0], &[10.0, 5.0, 20.0], 5, 1.0);
        assert_eq!(min_expansion(&p).unwrap(), 15.0);
        let v = select_signals(&p).unwrap();
        assert_eq!(v.bits, vec![true, true, false]);
        assert_eq!(v.objective_d, 3.0);
        assert_eq!(brute_force_select(&p).unwrap(), v);
    }

    #[test]
    fn alpha_trades_size_for_distortion() {
        let tight = problem(&[5, 5], &[1.0, 2.0], &[20.0, 10.0], 5, 0.0);
        assert_eq!(select_signals(&tight).unwrap().bits, vec![false, true]);
        let loose = problem(&[5, 5], &[1.0, 2.0], &[20.0, 10.0], 5, 1.0);
        assert_eq!(select_signals(&loose).unwrap().bits, vec![true, false]);
    }

    #[test]
    fn brute_force_limits() {
        let p = problem(&[4], &[3.0], &[2.0], 4, 1.0);
        assert_eq!(brute_force_select(&p).unwrap().bits, vec![true]);
        let p = problem(&[1, 1], &[0.0, 0.0], &[0.0, 0.0], 3, 1.0);
        assert!(matches!(
            brute_force_select(&p),
            Err(Error::Infeasible { .. })
        ));
        let big = problem(&[1; 21], &[0.0; 21], &[0.0; 21], 1, 1.0);
        assert!(matches!(
            brute_force_select(&big),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn ties_prefer_the_lexicographically_smaller_vector() {
        let p = problem(&[1, 1, 1], &[1.0, 1.0, 1.0], &[1.0, 1.0, 1.0], 1, 0.0);
        assert_eq!(
            brute_force_select(&p).unwrap().bits,
            vec![false, false, true]
        );
        assert_eq!(select_signals(&p).unwrap().bits, vec![false, false, true]);
    }
}
