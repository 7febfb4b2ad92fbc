//! From a partitioned corner instance to the variational problem.
//!
//! `A` lives on `P = {(x, y, z) : x + y + z = 0}` as `{(x, y, -x - y)}`, and
//! `mu` is the uniform probability measure on `P`. An outer box
//! `V = B x C x D` is cut by the inner parts `B_i, C_j, D_k` with weights
//! `delta_{B_i} = mu(B_i) / mu(B)`.

use std::collections::BTreeMap;

use super::grid::{evaluate_T, GridFunction};
use crate::corners::PlaneSet;
use crate::error::{Error, Result};
use crate::partition::Partition;

const MEAN_CHECK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct BoxInstance {
    /// `delta` per axis.
    pub weights: [Vec<f64>; 3],
    /// `mu(V ∩ P)`.
    pub plane_mass: f64,
    /// `mu(V ∩ A)`.
    pub set_mass: f64,
    /// `mu(A ∩ B_i x C_j x D_k)`, `k` fastest.
    pub cell_mass: Vec<f64>,
    pub eps: f64,
    pub m: f64,
}

/// Inner parts grouped by the outer part containing them.
struct Nesting {
    children: Vec<Vec<usize>>,
    local: Vec<usize>,
    outer_of: Vec<usize>,
}

fn nesting(outer: &Partition, inner: &Partition) -> Result<Nesting> {
    if outer.len() != inner.len() {
        return Err(Error::SpecMismatch("outer and inner partitions of different sets".into()));
    }
    if !inner.refines(outer) {
        return Err(Error::invalid("inner partition does not refine the outer one"));
    }
    let mut outer_of = vec![usize::MAX; inner.num_parts()];
    for x in 0..inner.len() {
        outer_of[inner.part_of(x)] = outer.part_of(x);
    }
    let mut children = vec![Vec::new(); outer.num_parts()];
    let mut local = vec![0; inner.num_parts()];
    for (p, &o) in outer_of.iter().enumerate() {
        local[p] = children[o].len();
        children[o].push(p);
    }
    Ok(Nesting { children, local, outer_of })
}

fn axis_weights(inner: &Partition, parts: &[usize]) -> Vec<f64> {
    let total: usize = parts.iter().map(|&p| inner.sizes()[p]).sum();
    parts.iter().map(|&p| inner.sizes()[p] as f64 / total as f64).collect()
}

struct Accum {
    plane: u64,
    set: u64,
    cells: Vec<u64>,
}

impl BoxInstance {
    pub fn new(
        weights: [Vec<f64>; 3],
        plane_mass: f64,
        set_mass: f64,
        cell_mass: Vec<f64>,
        eps: f64,
        m: f64,
    ) -> Result<Self> {
        let len: usize = weights.iter().map(Vec::len).product();
        GridFunction::new(weights.clone(), vec![0.0; len])?;
        if cell_mass.len() != len {
            return Err(Error::SpecMismatch(format!("{} cell masses for {len} inner boxes", cell_mass.len())));
        }
        if cell_mass.iter().chain([&plane_mass, &set_mass]).any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::invalid("masses must be finite and nonnegative"));
        }
        if !(eps > 0.0) || !(m > 0.0) {
            return Err(Error::invalid("eps and m must be positive"));
        }
        Ok(BoxInstance { weights, plane_mass, set_mass, cell_mass, eps, m })
    }

    /// The instance on the outer box `(b, c, d)`, measured by enumerating the
    /// hyperplane points with `x in b`, `y in c`.
    pub fn from_partitions(
        a: &PlaneSet,
        outer: &Partition,
        inner: &Partition,
        (b, c, d): (usize, usize, usize),
        eps: f64,
        m: f64,
    ) -> Result<Self> {
        let mut all = box_instances_filtered(a, outer, inner, eps, m, Some((b, c, d)))?;
        match all.remove(&(b, c, d)) {
            Some(inst) => Ok(inst),
            None if [b, c, d].iter().all(|&p| p < outer.num_parts()) => {
                Err(Error::invalid(format!("outer box ({b}, {c}, {d}) has zero hyperplane mass")))
            }
            None => Err(Error::invalid(format!("outer box ({b}, {c}, {d}) is not a box of the partition"))),
        }
    }

    pub fn dims(&self) -> [usize; 3] {
        [self.weights[0].len(), self.weights[1].len(), self.weights[2].len()]
    }

    /// `mu(V ∩ A) / mu(V ∩ P)`.
    pub fn alpha(&self) -> f64 {
        self.set_mass / self.plane_mass
    }

    pub fn threshold(&self) -> f64 {
        self.eps * self.eps / self.m
    }

    fn survives(&self, i: usize, j: usize, k: usize) -> bool {
        let t = self.threshold();
        self.weights[0][i] >= t && self.weights[1][j] >= t && self.weights[2][k] >= t
    }
}

/// Every outer box with positive hyperplane mass, in lexicographic order.
pub fn box_instances(
    a: &PlaneSet,
    outer: &Partition,
    inner: &Partition,
    eps: f64,
    m: f64,
) -> Result<BTreeMap<(usize, usize, usize), BoxInstance>> {
    box_instances_filtered(a, outer, inner, eps, m, None)
}

fn box_instances_filtered(
    a: &PlaneSet,
    outer: &Partition,
    inner: &Partition,
    eps: f64,
    m: f64,
    only: Option<(usize, usize, usize)>,
) -> Result<BTreeMap<(usize, usize, usize), BoxInstance>> {
    let grp = a.group();
    let n = a.side();
    if outer.len() != n {
        return Err(Error::SpecMismatch(format!("partition of {} points for a group of order {n}", outer.len())));
    }
    let nest = nesting(outer, inner)?;
    let dim = |o: usize| nest.children[o].len();
    let mut acc: BTreeMap<(usize, usize, usize), Accum> = BTreeMap::new();
    for x in 0..n {
        for y in 0..n {
            let z = grp.neg_idx(grp.add_idx(x, y));
            let (px, py, pz) = (inner.part_of(x), inner.part_of(y), inner.part_of(z));
            let key = (nest.outer_of[px], nest.outer_of[py], nest.outer_of[pz]);
            if only.is_some_and(|k| k != key) {
                continue;
            }
            let e = acc.entry(key).or_insert_with(|| Accum {
                plane: 0,
                set: 0,
                cells: vec![0; dim(key.0) * dim(key.1) * dim(key.2)],
            });
            e.plane += 1;
            if a.contains(x, y) {
                e.set += 1;
                let cell = (nest.local[px] * dim(key.1) + nest.local[py]) * dim(key.2) + nest.local[pz];
                e.cells[cell] += 1;
            }
        }
    }
    let scale = 1.0 / (n * n) as f64;
    acc.into_iter()
        .map(|(key, e)| {
            let weights = [
                axis_weights(inner, &nest.children[key.0]),
                axis_weights(inner, &nest.children[key.1]),
                axis_weights(inner, &nest.children[key.2]),
            ];
            let cells = e.cells.iter().map(|&c| c as f64 * scale).collect();
            let inst = BoxInstance::new(weights, e.plane as f64 * scale, e.set as f64 * scale, cells, eps, m)?;
            Ok((key, inst))
        })
        .collect()
}

fn raw_phi(inst: &BoxInstance) -> Result<Vec<f64>> {
    if !(inst.plane_mass > 0.0) {
        return Err(Error::invalid("the outer box has zero hyperplane mass"));
    }
    let [nx, ny, nz] = inst.dims();
    let [wx, wy, wz] = &inst.weights;
    let mut out = Vec::with_capacity(nx * ny * nz);
    for i in 0..nx {
        for j in 0..ny {
            for k in 0..nz {
                let w = wx[i] * wy[j] * wz[k];
                let mass = inst.cell_mass[(i * ny + j) * nz + k];
                out.push(if w > 0.0 { mass / (w * inst.plane_mass) } else { 0.0 });
            }
        }
    }
    Ok(out)
}

/// `(phi', phi)`: the raw density of `A` on inner boxes and its truncation
/// (zero on boxes with a coordinate weight below `eps^2/m`, `min(phi', 1)`
/// elsewhere).
pub fn phi_from_partition(inst: &BoxInstance) -> Result<(Vec<f64>, GridFunction)> {
    let raw = raw_phi(inst)?;
    let [_, ny, nz] = inst.dims();
    let cw = GridFunction::new(inst.weights.clone(), vec![0.0; raw.len()])?.cell_weights();
    let mean: f64 = raw.iter().zip(&cw).map(|(v, w)| v * w).sum();
    let expected = inst.alpha();
    if (mean - expected).abs() > MEAN_CHECK * expected.max(1.0) {
        return Err(Error::Assertion(format!("E[phi'] = {mean} but mu(V∩A)/mu(V∩P) = {expected}")));
    }
    let trunc = raw
        .iter()
        .enumerate()
        .map(|(c, &v)| if inst.survives(c / (ny * nz), c / nz % ny, c % nz) { v.min(1.0) } else { 0.0 })
        .collect();
    Ok((raw, GridFunction::new(inst.weights.clone(), trunc)?))
}

/// `T(V)`: the `T` sum with the conditional expectations of `phi'` restricted
/// to surviving inner boxes.
#[allow(non_snake_case)]
pub fn T_of_box(inst: &BoxInstance) -> Result<f64> {
    let (raw, phi) = phi_from_partition(inst)?;
    let [nx, ny, nz] = inst.dims();
    let [wx, wy, wz] = &inst.weights;
    let mut f = vec![0.0; nx * ny];
    let mut g = vec![0.0; nx * nz];
    let mut h = vec![0.0; ny * nz];
    for i in 0..nx {
        for j in 0..ny {
            for k in 0..nz {
                let v = raw[(i * ny + j) * nz + k];
                f[i * ny + j] += wz[k] * v;
                g[i * nz + k] += wy[j] * v;
                h[j * nz + k] += wx[i] * v;
            }
        }
    }
    let mut t = 0.0;
    for i in 0..nx {
        for j in 0..ny {
            for k in 0..nz {
                if inst.survives(i, j, k) {
                    t += wx[i] * wy[j] * wz[k] * f[i * ny + j] * g[i * nz + k] * h[j * nz + k];
                }
            }
        }
    }
    let tp = evaluate_T(&phi);
    if tp > t + 1e-12 {
        return Err(Error::Assertion(format!("T(phi) = {tp} exceeds T(V) = {t}")));
    }
    Ok(t)
}
