//! End-to-end run on a small group: regularize the three hyperplane views,
//! localize the corner count to a small Bohr set and compare it with the
//! variational quantities of the outer boxes.

use serde::Serialize;

use super::bridge::{box_instances, phi_from_partition, T_of_box};
use super::grid::evaluate_T;
use crate::bohr::BohrSet;
use crate::corners::{hyperplane_integral, hyperplane_views, PlaneSet};
use crate::error::{check_cap, Error, Result};
use crate::harmonic::DensityFunction;
use crate::rational::Rational;
use crate::regularity::{double_regularity, GrowthFunction, OuterRound, RoundLog};

/// Largest `|G|` for [`pipeline_lower_bound`].
pub const PIPELINE_CAP: u64 = 1 << 7;

#[derive(Clone, Debug)]
pub struct PipelineParams {
    pub eps: f64,
    pub growth: GrowthFunction,
    /// Radius of the difference set `B(S_i, rho')`; defaults to `rho_i / 2`.
    pub nu_radius: Option<Rational>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoxSummary {
    pub outer: (usize, usize, usize),
    pub dims: [usize; 3],
    /// `mu(V ∩ P)`.
    pub plane_mass: f64,
    /// `mu(V ∩ A) / mu(V ∩ P)`.
    pub alpha: f64,
    pub phi_mean: f64,
    pub t_phi: f64,
    pub t_box: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub group: String,
    pub alpha: f64,
    pub eps: f64,
    pub growth: GrowthFunction,
    /// `S_i` as coefficient vectors.
    pub frequencies: Vec<Vec<u64>>,
    pub delta_inv: u64,
    pub rho_inv: u64,
    pub nu_radius: String,
    /// `mu(B(S_i, rho'))`.
    pub nu_measure: f64,
    /// `|P_i|`.
    pub outer_parts: usize,
    /// `|Π|`.
    pub inner_parts: usize,
    /// `m = |Π_i|`.
    pub m: usize,
    /// `E f(x,y) g(x,z) h(y,z) nu(-x-y-z)`.
    pub corner_count: f64,
    /// The same integral with `f0, g0, h0` in place of `f, g, h`, i.e. the sum
    /// over inner boxes of `f0 g0 h0` times `∫ 1_{B_i} 1_{C_j} 1_{D_k} nu`.
    pub box_count: f64,
    /// `sum_V mu(V ∩ P) T(phi_V)`.
    pub variational: f64,
    /// `sum_V mu(V ∩ P) T(V)`.
    pub variational_box: f64,
    pub gap_box: f64,
    pub gap_variational: f64,
    pub boxes: Vec<BoxSummary>,
    pub f1_norms: Vec<f64>,
    pub f2_cut_norms: Vec<f64>,
    pub f1_target: f64,
    pub f2_target: f64,
    pub part_l2_target: f64,
    pub bohr_rounds: Vec<RoundLog>,
    pub outer_rounds: Vec<OuterRound>,
    pub degenerate: bool,
}

pub fn pipeline_lower_bound(a: &PlaneSet, params: &PipelineParams) -> Result<PipelineReport> {
    let grp = a.group().clone();
    check_cap("group order for the pipeline", PIPELINE_CAP, grp.order())?;
    let n = grp.size();
    let views = hyperplane_views(a)?;
    let funcs = [views.f.to_dense(), views.g.to_dense(), views.h.to_dense()];
    let reg = double_regularity(&grp, &funcs, params.eps, params.growth, 3)?;

    let last = reg.bohr.history.last().ok_or_else(|| Error::Assertion("empty Bohr history".into()))?;
    let rho_inv = last.rho_inv;
    let radius = params.nu_radius.unwrap_or_else(|| Rational::new(1, 2 * rho_inv));
    let freqs = reg.bohr.partition.freqs().to_vec();
    let nu_set = BohrSet::new(grp.clone(), freqs.clone(), radius)?;
    let nu_measure = nu_set.measure()?;
    let nu: DensityFunction = nu_set.normalized_indicator()?;

    let corner_count = hyperplane_integral(&views, &nu)?;

    let [f0, g0, h0] = [0, 1, 2].map(|k| &reg.splits[k].f0);
    let mut box_count = 0.0;
    for x in 0..n {
        for y in 0..n {
            let fxy = f0[x * n + y];
            if fxy == 0.0 {
                continue;
            }
            let s = grp.add_idx(x, y);
            for z in 0..n {
                let d = grp.neg_idx(grp.add_idx(s, z));
                box_count += fxy * g0[x * n + z] * h0[y * n + z] * nu.values()[d];
            }
        }
    }
    box_count /= (n * n * n) as f64;

    let m = reg.graph.num_parts();
    let instances = box_instances(a, &reg.bohr.parts, &reg.common, params.eps, m as f64)?;
    let mut boxes = Vec::with_capacity(instances.len());
    let (mut variational, mut variational_box) = (0.0, 0.0);
    for (outer, inst) in &instances {
        let (_, phi) = phi_from_partition(inst)?;
        let t_phi = evaluate_T(&phi);
        let t_box = T_of_box(inst)?;
        variational += inst.plane_mass * t_phi;
        variational_box += inst.plane_mass * t_box;
        boxes.push(BoxSummary {
            outer: *outer,
            dims: inst.dims(),
            plane_mass: inst.plane_mass,
            alpha: inst.alpha(),
            phi_mean: phi.mean(),
            t_phi,
            t_box,
        });
    }

    Ok(PipelineReport {
        group: grp.to_string(),
        alpha: a.density(),
        eps: params.eps,
        growth: params.growth,
        frequencies: freqs.iter().map(|c| c.coeffs().to_vec()).collect(),
        delta_inv: reg.bohr.partition.parts_per_axis(),
        rho_inv,
        nu_radius: radius.to_string(),
        nu_measure,
        outer_parts: reg.bohr.parts.num_parts(),
        inner_parts: reg.common.num_parts(),
        m,
        corner_count,
        box_count,
        variational,
        variational_box,
        gap_box: corner_count - box_count,
        gap_variational: corner_count - variational,
        boxes,
        f1_norms: reg.f1_norms,
        f2_cut_norms: reg.f2_cut_norms,
        f1_target: reg.f1_target,
        f2_target: reg.f2_target,
        part_l2_target: reg.part_l2_target,
        bohr_rounds: reg.bohr.history,
        outer_rounds: reg.history,
        degenerate: reg.degenerate,
    })
}
