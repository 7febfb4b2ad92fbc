//! Cut norm `sup_{g, h : G -> {0,1}} E_{x,y} F(x, y) g(x) h(y)` of a row-major
//! `n x n` array.
//!
//! For fixed rows `g` the optimal columns are `{y : sum_{x in g} F(x, y) > 0}`,
//! so the exact search runs over the `2^n` row sets only, in Gray-code order
//! with incremental column sums.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_cap, Error, Result};

/// Largest `n` for exhaustive enumeration.
pub const EXACT_CUT_CAP: u64 = 22;
pub const DEFAULT_RESTARTS: usize = 32;
pub const DEFAULT_CUT_SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutMode {
    Exact,
    Alternating {
        restarts: usize,
        seed: u64,
    },
    /// Exact when `n <= EXACT_CUT_CAP`, else alternating with the defaults.
    Auto,
}

impl CutMode {
    pub fn alternating() -> Self {
        CutMode::Alternating { restarts: DEFAULT_RESTARTS, seed: DEFAULT_CUT_SEED }
    }

    fn resolve(self, n: usize) -> Self {
        match self {
            CutMode::Auto if n as u64 <= EXACT_CUT_CAP => CutMode::Exact,
            CutMode::Auto => CutMode::alternating(),
            m => m,
        }
    }
}

/// A box `rows x cols` attaining `value`.
#[derive(Clone, Debug, PartialEq)]
pub struct CutWitness {
    pub value: f64,
    pub rows: Vec<bool>,
    pub cols: Vec<bool>,
    /// `true` when `value` is the supremum rather than a lower bound.
    pub exact: bool,
}

fn side_of(values: &[f64]) -> Result<usize> {
    let n = (values.len() as f64).sqrt().round() as usize;
    if n * n != values.len() {
        return Err(Error::invalid(format!("{} values do not form a square array", values.len())));
    }
    Ok(n)
}

pub fn cut_norm_estimate(values: &[f64], mode: CutMode) -> Result<f64> {
    Ok(cut_witness(values, mode)?.value)
}

pub fn cut_witness(values: &[f64], mode: CutMode) -> Result<CutWitness> {
    let n = side_of(values)?;
    match mode.resolve(n) {
        CutMode::Exact => exact(values, n),
        CutMode::Alternating { restarts, seed } => Ok(alternating(values, n, restarts, seed)),
        CutMode::Auto => unreachable!(),
    }
}

/// `max(cut(F), cut(-F))`, the two-sided norm, with its witness.
pub fn two_sided_witness(values: &[f64], mode: CutMode) -> Result<CutWitness> {
    let pos = cut_witness(values, mode)?;
    let neg: Vec<f64> = values.iter().map(|v| -v).collect();
    let neg = cut_witness(&neg, mode)?;
    Ok(if neg.value > pos.value { neg } else { pos })
}

fn positive_part(col: &[f64]) -> f64 {
    col.iter().filter(|&&c| c > 0.0).sum()
}

fn exact(values: &[f64], n: usize) -> Result<CutWitness> {
    check_cap("side length for the exact cut norm", EXACT_CUT_CAP, n as u64)?;
    let mut col = vec![0.0; n];
    let mut best = (0.0, 0u64);
    let mut gray = 0u64;
    for step in 1u64..(1 << n) {
        let bit = step.trailing_zeros() as usize;
        gray ^= 1 << bit;
        let row = &values[bit * n..(bit + 1) * n];
        if gray >> bit & 1 == 1 {
            col.iter_mut().zip(row).for_each(|(c, v)| *c += v);
        } else {
            col.iter_mut().zip(row).for_each(|(c, v)| *c -= v);
        }
        let v = positive_part(&col);
        if v > best.0 {
            best = (v, gray);
        }
    }
    // Recompute the winner from scratch so drift in the running sums does not
    // leak into the reported value.
    let rows: Vec<bool> = (0..n).map(|x| best.1 >> x & 1 == 1).collect();
    let (value, cols) = best_cols(values, n, &rows);
    Ok(CutWitness { value, rows, cols, exact: true })
}

fn best_cols(values: &[f64], n: usize, rows: &[bool]) -> (f64, Vec<bool>) {
    let mut col = vec![0.0; n];
    for (x, _) in rows.iter().enumerate().filter(|(_, &r)| r) {
        col.iter_mut().zip(&values[x * n..(x + 1) * n]).for_each(|(c, v)| *c += v);
    }
    let cols: Vec<bool> = col.iter().map(|&c| c > 0.0).collect();
    (positive_part(&col) / (n * n) as f64, cols)
}

fn best_rows(values: &[f64], n: usize, cols: &[bool]) -> (f64, Vec<bool>) {
    let sums: Vec<f64> =
        (0..n).map(|x| values[x * n..(x + 1) * n].iter().zip(cols).filter(|(_, &c)| c).map(|(v, _)| v).sum()).collect();
    let rows: Vec<bool> = sums.iter().map(|&s| s > 0.0).collect();
    (positive_part(&sums) / (n * n) as f64, rows)
}

fn alternating(values: &[f64], n: usize, restarts: usize, seed: u64) -> CutWitness {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = CutWitness { value: 0.0, rows: vec![false; n], cols: vec![false; n], exact: false };
    for r in 0..restarts.max(1) {
        let mut rows: Vec<bool> =
            if r == 0 { vec![true; n] } else { (0..n).map(|_| rng.next_u64() >> 63 == 1).collect() };
        let (mut value, mut cols) = best_cols(values, n, &rows);
        loop {
            let (v_rows, new_rows) = best_rows(values, n, &cols);
            let (v_cols, new_cols) = best_cols(values, n, &new_rows);
            let v = v_rows.max(v_cols);
            if v <= value * (1.0 + 1e-15) + 1e-300 {
                break;
            }
            value = v_cols;
            rows = new_rows;
            cols = new_cols;
        }
        if value > best.value {
            best = CutWitness { value, rows, cols, exact: false };
        }
    }
    best
}
