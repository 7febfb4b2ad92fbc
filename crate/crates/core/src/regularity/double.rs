//! Double regularity: a partition that is cut-norm regular for functions on
//! `G x G` and whose parts are themselves Fourier-regularized.
//!
//! 1. `Π_0 = {G}`.
//! 2. `P_i` is the Bohr partition produced by regularizing `{1_π : π in Π_i}`.
//! 3. `Π = P_i ∩ Π_i`; `Π_{i+1}` refines `Π` until every
//!    `f - f|_{Π_{i+1} x Π_{i+1}}` has cut norm `< 1/F(|Π|)`.
//! 4. Repeat while some `||f|_{Π_{i+1}^2} - f|_{Π^2}||_2 > 1/F(1/eps)`.
//!
//! The quoted targets `1/F(eps/m)` and `1/F(eps/|Π|)` are reported alongside
//! the achieved values; none of them is asserted.

use serde::Serialize;

use super::bohr_reg::{bohr_regularize, BohrDecomposition};
use super::cut_norm::{two_sided_witness, CutMode};
use super::growth::GrowthFunction;
use super::weak::{refine_weakly, validate_functions};
use crate::error::{check_cap, Error, Result};
use crate::group::GroupSpec;
use crate::harmonic::DensityFunction;
use crate::partition::{l2_distance, Partition};

/// Largest `|G|` for the double regularity driver.
pub const DOUBLE_CAP: u64 = 1 << 7;

#[derive(Clone, Debug, PartialEq)]
pub struct FunctionSplit {
    pub f0: Vec<f64>,
    pub f1: Vec<f64>,
    pub f2: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OuterRound {
    pub i: usize,
    pub bohr_parts: usize,
    pub graph_parts: usize,
    pub common_parts: usize,
    pub refined_parts: usize,
    pub bohr_rounds: usize,
    pub cut_threshold: f64,
    /// `||f|_{Π_{i+1}^2} - f|_{Π^2}||_2` per function.
    pub gaps: Vec<f64>,
    pub gap_threshold: f64,
}

#[derive(Clone, Debug)]
pub struct DoubleRegularity {
    /// `P_i`.
    pub bohr: BohrDecomposition,
    /// `Π_i`.
    pub graph: Partition,
    /// `Π = P_i ∩ Π_i`.
    pub common: Partition,
    /// `Π_{i+1}`.
    pub refined: Partition,
    pub splits: Vec<FunctionSplit>,
    /// `||f_1||_2` per function.
    pub f1_norms: Vec<f64>,
    /// Two-sided cut norm of `f_2` per function.
    pub f2_cut_norms: Vec<f64>,
    pub cut_exact: bool,
    /// `1/F(1/eps)`.
    pub f1_target: f64,
    /// `1/F(eps/|Π|)`.
    pub f2_target: f64,
    /// `1/F(eps/m)` with `m = |Π_i|`.
    pub part_l2_target: f64,
    pub rounds: usize,
    pub history: Vec<OuterRound>,
    pub degenerate: bool,
}

pub fn double_regularity(
    group: &GroupSpec,
    funcs: &[Vec<f64>],
    eps: f64,
    growth: GrowthFunction,
    max_functions: usize,
) -> Result<DoubleRegularity> {
    check_cap("group order for double regularity", DOUBLE_CAP, group.order())?;
    let n = group.size();
    validate_functions(n, funcs)?;
    if funcs.is_empty() || funcs.len() > max_functions {
        return Err(Error::invalid(format!("need between 1 and {max_functions} functions, got {}", funcs.len())));
    }
    if !(eps > 0.0) {
        return Err(Error::invalid(format!("eps must be positive, got {eps}")));
    }
    let f_inv_eps = growth.eval_real(1.0 / eps);
    let gap_threshold = 1.0 / f_inv_eps;
    let round_cap = (max_functions as f64 * f_inv_eps.ceil().powi(2)).min(u32::MAX as f64) as usize;
    let mode = CutMode::Auto;

    let mut graph = Partition::trivial(n);
    let mut history = Vec::new();
    let mut i = 0;
    loop {
        let indicators = graph
            .members()
            .iter()
            .map(|part| {
                let mut mask = vec![false; n];
                part.iter().for_each(|&x| mask[x] = true);
                DensityFunction::indicator(group, &mask)
            })
            .collect::<Result<Vec<_>>>()?;
        let bohr = bohr_regularize(&indicators, growth)?;
        let common = bohr.parts.meet(&graph);
        let cut_threshold = 1.0 / growth.eval_real(common.num_parts() as f64);
        let weak = refine_weakly(n, funcs, common.clone(), cut_threshold, mode)?;
        let refined = weak.partition;
        let gaps: Vec<f64> = funcs.iter().map(|f| l2_distance(&refined.average_2d(f), &common.average_2d(f))).collect();
        let proceed = gaps.iter().any(|&g| g > gap_threshold);
        history.push(OuterRound {
            i,
            bohr_parts: bohr.parts.num_parts(),
            graph_parts: graph.num_parts(),
            common_parts: common.num_parts(),
            refined_parts: refined.num_parts(),
            bohr_rounds: bohr.rounds,
            cut_threshold,
            gaps,
            gap_threshold,
        });
        if !proceed {
            return finish(funcs, eps, growth, bohr, graph, common, refined, gap_threshold, i, history, mode);
        }
        i += 1;
        if i > round_cap {
            return Err(Error::Assertion(format!("double regularity exceeded {round_cap} outer rounds")));
        }
        graph = refined;
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    funcs: &[Vec<f64>],
    eps: f64,
    growth: GrowthFunction,
    bohr: BohrDecomposition,
    graph: Partition,
    common: Partition,
    refined: Partition,
    f1_target: f64,
    rounds: usize,
    history: Vec<OuterRound>,
    mode: CutMode,
) -> Result<DoubleRegularity> {
    let n = graph.len();
    let mut splits = Vec::with_capacity(funcs.len());
    let mut f1_norms = Vec::with_capacity(funcs.len());
    let mut f2_cut_norms = Vec::with_capacity(funcs.len());
    let mut cut_exact = true;
    for f in funcs {
        let f0 = common.average_2d(f);
        let fine = refined.average_2d(f);
        let f1: Vec<f64> = fine.iter().zip(&f0).map(|(a, b)| a - b).collect();
        let f2: Vec<f64> = f.iter().zip(&fine).map(|(a, b)| a - b).collect();
        f1_norms.push((f1.iter().map(|v| v * v).sum::<f64>() / (n * n) as f64).sqrt());
        let w = two_sided_witness(&f2, mode)?;
        cut_exact &= w.exact;
        f2_cut_norms.push(w.value);
        splits.push(FunctionSplit { f0, f1, f2 });
    }
    let degenerate = bohr.degenerate;
    Ok(DoubleRegularity {
        f2_target: 1.0 / growth.eval_real(eps / common.num_parts() as f64),
        part_l2_target: 1.0 / growth.eval_real(eps / graph.num_parts() as f64),
        bohr,
        graph,
        common,
        refined,
        splits,
        f1_norms,
        f2_cut_norms,
        cut_exact,
        f1_target,
        rounds,
        history,
        degenerate,
    })
}
