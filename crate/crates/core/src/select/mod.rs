//! Choosing which blocks carry the payload.
//!
//! The main solver minimizes total expected distortion subject to the
//! payload being carried and the expected size growth staying within
//! `(1 + alpha)` times its minimum. Two reference strategies order blocks
//! by zero count ([`huang_order`]) or by frequency-restricted distortion
//! ([`hou_select`]).

mod baseline;
mod dp;
mod solve;

pub use baseline::{hou_candidates, hou_select, huang_order, HouOrder, HouSelection};
pub use solve::{
    brute_force_select, min_expansion, min_expansion_set, select_signals, select_signals_seeded,
    BRUTE_FORCE_LIMIT,
};

use std::fmt::Write as _;

use serde::Serialize;

use crate::cost::CostVector;
use crate::error::{Error, Result};

/// Relative slack applied when testing the size budget.
pub const BUDGET_TOLERANCE: f64 = 1e-9;

/// Inputs of one selection.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionProblem {
    pub r: Vec<u32>,
    pub d: Vec<f64>,
    /// Clamped at zero on construction.
    pub e: Vec<f64>,
    /// Bits that must be carried.
    pub c: u64,
    pub alpha: f64,
    pub eligible: Vec<bool>,
}

impl SelectionProblem {
    pub fn new(
        r: Vec<u32>,
        d: Vec<f64>,
        e: Vec<f64>,
        c: u64,
        alpha: f64,
        eligible: Vec<bool>,
    ) -> Result<Self> {
        let k = r.len();
        if d.len() != k || e.len() != k || eligible.len() != k {
            return Err(Error::InvalidProblem(
                "r, d, e and eligible differ in length".into(),
            ));
        }
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::InvalidProblem(format!(
                "alpha must be finite and non-negative, got {alpha}"
            )));
        }
        if d.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidProblem(
                "d must be finite and non-negative".into(),
            ));
        }
        if e.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidProblem("e must be finite".into()));
        }
        let e = e.into_iter().map(|x| x.max(0.0)).collect();
        Ok(SelectionProblem {
            r,
            d,
            e,
            c,
            alpha,
            eligible,
        })
    }

    /// Builds a problem from per-block costs.
    pub fn from_costs(
        costs: &[CostVector],
        eligible: Vec<bool>,
        c: u64,
        alpha: f64,
    ) -> Result<Self> {
        Self::new(
            costs.iter().map(|x| x.r).collect(),
            costs.iter().map(|x| x.d).collect(),
            costs.iter().map(|x| x.e).collect(),
            c,
            alpha,
            eligible,
        )
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// Total capacity of the eligible signals.
    pub fn eligible_capacity(&self) -> u64 {
        self.r
            .iter()
            .zip(&self.eligible)
            .filter(|(_, &ok)| ok)
            .map(|(&r, _)| u64::from(r))
            .sum()
    }

    pub(crate) fn check_feasible(&self) -> Result<()> {
        let available = self.eligible_capacity();
        if available < self.c {
            return Err(Error::Infeasible {
                required: self.c,
                available,
            });
        }
        Ok(())
    }

    /// Size budget `(1 + alpha) * e_star` with a small numeric allowance.
    pub fn budget(&self, e_star: f64) -> f64 {
        let b = (1.0 + self.alpha) * e_star;
        b + BUDGET_TOLERANCE * b.abs().max(1.0)
    }

    /// Evaluates a selection.
    pub fn decision(&self, bits: Vec<bool>) -> DecisionVector {
        let mut out = DecisionVector {
            bits,
            objective_d: 0.0,
            objective_e: 0.0,
            capacity: 0,
        };
        for i in 0..self.len() {
            if out.bits[i] {
                out.objective_d += self.d[i];
                out.objective_e += self.e[i];
                out.capacity += u64::from(self.r[i]);
            }
        }
        out
    }

    /// Parses the line format: `k C alpha`, then k rows `r d e eligible`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidProblem(msg.to_owned());
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let head: Vec<&str> = lines
            .next()
            .ok_or_else(|| bad("empty problem"))?
            .split_whitespace()
            .collect();
        if head.len() != 3 {
            return Err(bad("header must be `k C alpha`"));
        }
        let k: usize = head[0].parse().map_err(|_| bad("bad k"))?;
        let c: u64 = head[1].parse().map_err(|_| bad("bad C"))?;
        let alpha: f64 = head[2].parse().map_err(|_| bad("bad alpha"))?;
        let (mut r, mut d, mut e, mut eligible) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for line in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 4 {
                return Err(bad("row must be `r d e eligible`"));
            }
            r.push(f[0].parse().map_err(|_| bad("bad r"))?);
            d.push(f[1].parse().map_err(|_| bad("bad d"))?);
            e.push(f[2].parse().map_err(|_| bad("bad e"))?);
            eligible.push(match f[3] {
                "1" => true,
                "0" => false,
                _ => return Err(bad("eligible must be 0 or 1")),
            });
        }
        if r.len() != k {
            return Err(bad("row count does not match k"));
        }
        Self::new(r, d, e, c, alpha, eligible)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.len(), self.c, self.alpha);
        for i in 0..self.len() {
            let _ = writeln!(
                out,
                "{} {} {} {}",
                self.r[i],
                self.d[i],
                self.e[i],
                u8::from(self.eligible[i])
            );
        }
        out
    }
}

/// A selection and its objective values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecisionVector {
    pub bits: Vec<bool>,
    pub objective_d: f64,
    pub objective_e: f64,
    pub capacity: u64,
}

impl DecisionVector {
    pub fn selected(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_roundtrip() {
        let p = SelectionProblem::new(
            vec![2, 3],
            vec![1.5, 0.1],
            vec![5.0, 4.25],
            4,
            1.0,
            vec![true, false],
        )
        .unwrap();
        assert_eq!(SelectionProblem::parse(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn negative_e_is_clamped() {
        let p = SelectionProblem::new(vec![1], vec![1.0], vec![-2.0], 1, 0.0, vec![true]).unwrap();
        assert_eq!(p.e, vec![0.0]);
    }

    #[test]
    fn mismatched_lengths_are_rejected() {
        assert!(SelectionProblem::new(
            vec![1, 2],
            vec![1.0],
            vec![0.0, 0.0],
            1,
            1.0,
            vec![true; 2]
        )
        .is_err());
    }
}
