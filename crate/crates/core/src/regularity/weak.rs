//! Weak (cut-norm) regularity for functions on `G x G`.
//!
//! While some `f` has a box `I1 x I2` with `|E (f - f|_{Π x Π}) 1_{I1 x I2}| >= tau`,
//! split every part of `Π` by `I1` and by `I2`. Each split raises
//! `||f|_{Π x Π}||^2` by at least `tau^2`, so one `f` forces at most
//! `ceil(1 / tau^2)` splits.

use serde::Serialize;

use super::cut_norm::{two_sided_witness, CutMode, EXACT_CUT_CAP};
use crate::error::{check_cap, Error, Result};
use crate::partition::Partition;

/// Largest `|G|` accepted by the weak regularity driver.
pub const WEAK_CAP: u64 = 1 << 8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeakRegularityResult {
    #[serde(skip)]
    pub partition: Partition,
    pub parts: usize,
    /// `sum_f ||f|_{Π x Π}||^2` before the first split and after each split.
    pub energy: Vec<f64>,
    pub refinements: Vec<usize>,
    /// Two-sided cut norm of `f - f|_{Π x Π}` at exit, per function.
    pub residuals: Vec<f64>,
    pub threshold: f64,
    /// Residuals are exact suprema (not search lower bounds).
    pub certified: bool,
}

pub(crate) fn energy(p: &Partition, f: &[f64]) -> f64 {
    let k = p.num_parts();
    let n2 = (p.len() * p.len()) as f64;
    let means = p.block_means(f);
    let sizes = p.sizes();
    let mut e = 0.0;
    for a in 0..k {
        for b in 0..k {
            e += means[a * k + b].powi(2) * (sizes[a] * sizes[b]) as f64;
        }
    }
    e / n2
}

fn residual(p: &Partition, f: &[f64]) -> Vec<f64> {
    f.iter().zip(p.average_2d(f)).map(|(a, b)| a - b).collect()
}

pub(crate) fn validate_functions(n: usize, funcs: &[Vec<f64>]) -> Result<()> {
    for (i, f) in funcs.iter().enumerate() {
        if f.len() != n * n {
            return Err(Error::SpecMismatch(format!("function {i} has {} values, expected {}", f.len(), n * n)));
        }
        if f.iter().any(|v| !(-1e-12..=1.0 + 1e-12).contains(v)) {
            return Err(Error::invalid(format!("function {i} takes values outside [0, 1]")));
        }
    }
    Ok(())
}

/// Refines `start` until every residual is below `tau` (as judged by `mode`).
pub fn refine_weakly(
    n: usize,
    funcs: &[Vec<f64>],
    start: Partition,
    tau: f64,
    mode: CutMode,
) -> Result<WeakRegularityResult> {
    check_cap("group order for weak regularity", WEAK_CAP, n as u64)?;
    validate_functions(n, funcs)?;
    if start.len() != n {
        return Err(Error::SpecMismatch("starting partition has the wrong size".into()));
    }
    if !(tau > 0.0) {
        return Err(Error::invalid(format!("threshold must be positive, got {tau}")));
    }
    let certified = match mode {
        CutMode::Exact => true,
        CutMode::Auto => n as u64 <= EXACT_CUT_CAP,
        CutMode::Alternating { .. } => false,
    };
    let total = |p: &Partition| funcs.iter().map(|f| energy(p, f)).sum::<f64>();
    let mut p = start;
    let mut energies = vec![total(&p)];
    let mut refinements = vec![0; funcs.len()];
    let limit = (1.0 / (tau * tau)).ceil() as usize;
    loop {
        let mut split = false;
        for (i, f) in funcs.iter().enumerate() {
            let w = two_sided_witness(&residual(&p, f), mode)?;
            if w.value >= tau {
                p = p.split_by(&w.rows).split_by(&w.cols);
                refinements[i] += 1;
                energies.push(total(&p));
                if refinements[i] > limit {
                    return Err(Error::Assertion(format!(
                        "function {i} forced {} splits, the energy increment allows {limit}",
                        refinements[i]
                    )));
                }
                split = true;
            }
        }
        if !split {
            break;
        }
    }
    let residuals =
        funcs.iter().map(|f| Ok(two_sided_witness(&residual(&p, f), mode)?.value)).collect::<Result<Vec<_>>>()?;
    Ok(WeakRegularityResult {
        parts: p.num_parts(),
        partition: p,
        energy: energies,
        refinements,
        residuals,
        threshold: tau,
        certified,
    })
}

/// A partition `Π` of `G` with `||f - f|_{Π x Π}||_cut < eps` for every `f`.
pub fn weak_regularity(n: usize, funcs: &[Vec<f64>], eps: f64) -> Result<WeakRegularityResult> {
    refine_weakly(n, funcs, Partition::trivial(n), eps, CutMode::Auto)
}
