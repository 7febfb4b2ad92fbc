//! Iterative Bohr regularization of functions `I : G -> [0, 1]`.
//!
//! Round `i` works with `P_i = 𝔅(S_i, 1/N_i)` and the Bohr set
//! `B_{i+1} = B(S_{i+1}, 1/r_{i+1})`:
//!
//! 1. `S_0 = ∅`, `r_0 = 1`.
//! 2. `N_i` is the least integer `>= F(r_i)` that is a multiple of `N_{i-1}`.
//! 3. `𝓕_i = {I * 1_p : I, p in P_i}`.
//! 4. `S_{i+1} = S_i ∪ {xi : |(I 1_p)^(xi)| >= 1/F(|𝓕_i| N_i)}`.
//! 5. `r_{i+1} = F(|S_{i+1}| N_i)`.
//! 6. Continue while some `||I|_{P_{i+1}} - I|_{P_i}||_2 > 1/F(1)`.
//!
//! Increments of the projections are orthogonal, so step 6 fires fewer than
//! `m F(1)^2` times.
//!
//! Widths and radii are kept exact. Once `N >= L` (the group exponent) the
//! partition separates every phase, so `N` is lowered to the least multiple
//! of `N_{i-1}` that is `>= L`; likewise a radius below `1/L` selects the same
//! set as `1/L`. Both substitutions are recorded.

use serde::Serialize;

use super::growth::GrowthFunction;
use crate::bohr::{BohrPartition, BohrSet};
use crate::error::{check_cap, Error, Result};
use crate::group::{Character, GroupSpec};
use crate::harmonic::{convolve, dft, large_spectrum_indices, DensityFunction};
use crate::partition::{l2_distance, Partition};
use crate::rational::Rational;

/// Largest `|G|` for Bohr regularization.
pub const BOHR_REGULARIZE_CAP: u64 = 1 << 14;
/// Largest `|𝓕_i| * |G|` (transform work per round).
pub const ROUND_WORK_CAP: u64 = 1 << 26;
/// Constant in the spectral bound `SPECTRAL_CONSTANT / F(|𝓕_i| N_i)` on the
/// uniform part restricted to a cell.
pub const SPECTRAL_CONSTANT: f64 = 4.0;

/// One JSON record per round.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundLog {
    pub i: usize,
    pub s_size: usize,
    /// `r_i = 1 / rho_i` as used.
    pub rho_inv: u64,
    /// `1 / delta_i` as used.
    pub delta_inv: u64,
    pub parts: usize,
    pub family_size: usize,
    pub spectrum_threshold: f64,
    /// `||I|_{P_i}||_2^2` per function.
    pub energies: Vec<f64>,
    /// `||I|_{P_{i+1}} - I|_{P_i}||_2` per function.
    pub gaps: Vec<f64>,
    pub gap_threshold: f64,
    pub width_capped: bool,
    pub radius_capped: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Components {
    pub i0: Vec<f64>,
    pub i1: Vec<f64>,
    pub i2: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct BohrDecomposition {
    pub growth: GrowthFunction,
    /// `P_i` at termination.
    pub partition: BohrPartition,
    pub parts: Partition,
    /// `B_{i+1}`, whose normalized indicator smooths `I`.
    pub smoothing_set: BohrSet,
    pub components: Vec<Components>,
    /// `||I_1||_2` per function.
    pub l1_norms: Vec<f64>,
    /// `max_p ||(I_2 1_p)^||_inf` per function.
    pub spectral_norms: Vec<f64>,
    /// `1 / F(1)`.
    pub l2_target: f64,
    /// `SPECTRAL_CONSTANT / F(|𝓕_i| N_i)`.
    pub spectral_target: f64,
    pub rounds: usize,
    pub history: Vec<RoundLog>,
    /// The frequency set exhausted `Ĝ` or the partition became discrete.
    pub degenerate: bool,
}

impl BohrDecomposition {
    pub fn spectral_within_target(&self) -> bool {
        self.spectral_norms.iter().all(|&s| s <= self.spectral_target + 1e-12)
    }
}

struct Level {
    freqs: Vec<usize>,
    n: u64,
    width_capped: bool,
    partition: Partition,
}

fn next_width(f: GrowthFunction, r: u64, prev: Option<u64>, l: u64) -> (u64, bool) {
    let step = prev.unwrap_or(1);
    let target = f.eval(r as u128).unwrap_or(u128::MAX).max(1);
    let lcap = (l as u128).div_ceil(step as u128) * step as u128;
    if target >= l as u128 {
        let capped = lcap.max(step as u128) as u64;
        (capped, true)
    } else {
        ((target.div_ceil(step as u128) * step as u128) as u64, false)
    }
}

fn radius_for(f: GrowthFunction, t: u128, l: u64) -> (u64, bool) {
    match f.eval(t) {
        Some(v) if v <= l as u128 => (v.max(1) as u64, false),
        _ => (l, true),
    }
}

fn chars(group: &GroupSpec, idx: &[usize]) -> Vec<Character> {
    idx.iter().map(|&k| group.character_at(k)).collect()
}

fn level(group: &GroupSpec, freqs: Vec<usize>, n: u64, width_capped: bool) -> Result<Level> {
    let partition = BohrPartition::new(group.clone(), chars(group, &freqs), n)?.partition()?;
    Ok(Level { freqs, n, width_capped, partition })
}

pub(crate) fn validate(funcs: &[DensityFunction]) -> Result<GroupSpec> {
    let group = funcs.first().ok_or_else(|| Error::invalid("need at least one function"))?.group().clone();
    for (i, f) in funcs.iter().enumerate() {
        if f.group() != &group {
            return Err(Error::SpecMismatch(format!("function {i} lives on {}, not {group}", f.group())));
        }
        if f.values().iter().any(|v| !(-1e-12..=1.0 + 1e-12).contains(v)) {
            return Err(Error::invalid(format!("function {i} takes values outside [0, 1]")));
        }
    }
    Ok(group)
}

pub fn bohr_regularize(funcs: &[DensityFunction], growth: GrowthFunction) -> Result<BohrDecomposition> {
    let group = validate(funcs)?;
    check_cap("group order for Bohr regularization", BOHR_REGULARIZE_CAP, group.order())?;
    let size = group.size();
    let l = group.exponent();
    let m = funcs.len();
    let f1 = growth.eval(1).unwrap_or(u128::MAX);
    let gap_threshold = 1.0 / f1 as f64;
    let round_cap = (m as u128).saturating_mul(f1.saturating_mul(f1));

    let (n0, capped0) = next_width(growth, 1, None, l);
    let mut cur = level(&group, Vec::new(), n0, capped0)?;
    let mut history = Vec::new();
    let mut r_cur = 1u64;
    let mut i = 0usize;
    loop {
        let family = m * cur.partition.num_parts();
        check_cap("transform work per round", ROUND_WORK_CAP, (family * size) as u64)?;
        let t = (family as u128).saturating_mul(cur.n as u128);
        let theta = growth.reciprocal(t);

        let mut in_s = vec![false; size];
        cur.freqs.iter().for_each(|&k| in_s[k] = true);
        let members = cur.partition.members();
        for f in funcs {
            for part in &members {
                let mut v = vec![0.0; size];
                part.iter().for_each(|&x| v[x] = f.values()[x]);
                let spec = dft(&DensityFunction::new(group.clone(), v)?)?;
                large_spectrum_indices(&spec, theta).into_iter().for_each(|k| in_s[k] = true);
            }
        }
        let next_freqs: Vec<usize> = (0..size).filter(|&k| in_s[k]).collect();
        let (r_next, radius_capped) = radius_for(growth, (next_freqs.len() as u128).saturating_mul(cur.n as u128), l);
        let (n_next, width_capped) = next_width(growth, r_next, Some(cur.n), l);
        let next = level(&group, next_freqs, n_next, width_capped)?;

        let mut energies = Vec::with_capacity(m);
        let mut gaps = Vec::with_capacity(m);
        for f in funcs {
            let a = cur.partition.average(f.values());
            let b = next.partition.average(f.values());
            energies.push(a.iter().map(|v| v * v).sum::<f64>() / size as f64);
            gaps.push(l2_distance(&b, &a));
        }
        let proceed = gaps.iter().any(|&g| g > gap_threshold);
        history.push(RoundLog {
            i,
            s_size: cur.freqs.len(),
            rho_inv: r_cur,
            delta_inv: cur.n,
            parts: cur.partition.num_parts(),
            family_size: family,
            spectrum_threshold: theta,
            energies,
            gaps,
            gap_threshold,
            width_capped: cur.width_capped,
            radius_capped,
        });
        if !proceed {
            let smoothing_set = BohrSet::new(group.clone(), chars(&group, &next.freqs), Rational::new(1, r_next))?;
            return finish(
                funcs,
                growth,
                cur,
                smoothing_set,
                next.freqs.len() == size,
                theta,
                gap_threshold,
                i,
                history,
            );
        }
        i += 1;
        if i as u128 > round_cap {
            return Err(Error::Assertion(format!("Bohr regularization exceeded {round_cap} rounds")));
        }
        r_cur = r_next;
        cur = next;
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    funcs: &[DensityFunction],
    growth: GrowthFunction,
    cur: Level,
    smoothing_set: BohrSet,
    all_freqs: bool,
    theta: f64,
    l2_target: f64,
    rounds: usize,
    history: Vec<RoundLog>,
) -> Result<BohrDecomposition> {
    let group = smoothing_set.group().clone();
    let size = group.size();
    let mu = smoothing_set.normalized_indicator()?;
    let members = cur.partition.members();
    let mut components = Vec::with_capacity(funcs.len());
    let mut l1_norms = Vec::with_capacity(funcs.len());
    let mut spectral_norms = Vec::with_capacity(funcs.len());
    for f in funcs {
        let i0 = cur.partition.average(f.values());
        let smooth = convolve(f, &mu)?.into_values();
        let i1: Vec<f64> = smooth.iter().zip(&i0).map(|(s, a)| s - a).collect();
        let i2: Vec<f64> = f.values().iter().zip(&smooth).map(|(v, s)| v - s).collect();
        l1_norms.push((i1.iter().map(|v| v * v).sum::<f64>() / size as f64).sqrt());
        let mut worst: f64 = 0.0;
        for part in &members {
            let mut v = vec![0.0; size];
            part.iter().for_each(|&x| v[x] = i2[x]);
            worst = worst.max(dft(&DensityFunction::new(group.clone(), v)?)?.sup_abs());
        }
        spectral_norms.push(worst);
        components.push(Components { i0, i1, i2 });
    }
    let degenerate = all_freqs || cur.partition.is_discrete() && size > 1;
    Ok(BohrDecomposition {
        growth,
        partition: BohrPartition::new(group.clone(), chars(&group, &cur.freqs), cur.n)?,
        parts: cur.partition,
        smoothing_set,
        components,
        l1_norms,
        spectral_norms,
        l2_target,
        spectral_target: SPECTRAL_CONSTANT * theta,
        rounds,
        history,
        degenerate,
    })
}
