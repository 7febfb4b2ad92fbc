//! The symmetric model on `P = {(x, y, z) : x + y + z = 0}`.
//!
//! `A` is sent to `{(x, y, -x - y)}`; its projections to the three coordinate
//! planes are `f(x, y) = 1_A(x, y)`, `g(x, z) = 1_A(x, -x - z)` and
//! `h(y, z) = 1_A(-y - z, y)`. A triple `(x, y, z)` with `d = -x - y - z`
//! then has `g(x, z) = 1_A(x, y + d)` and `h(y, z) = 1_A(x + d, y)`.

use super::{check_nu, PlaneSet};
use crate::error::{check_cap, Error, Result};
use crate::group::GroupSpec;
use crate::harmonic::DensityFunction;

/// Largest `|G|` for the direct `O(|G|^3)` triple sum.
pub const HYPERPLANE_CAP: u64 = 1 << 9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperplaneViews {
    pub f: PlaneSet,
    pub g: PlaneSet,
    pub h: PlaneSet,
}

pub fn hyperplane_views(a: &PlaneSet) -> Result<HyperplaneViews> {
    let grp = a.group();
    let f = a.clone();
    let g = PlaneSet::from_fn(grp, |x, z| a.contains(x, grp.neg_idx(grp.add_idx(x, z))))?;
    let h = PlaneSet::from_fn(grp, |y, z| a.contains(grp.neg_idx(grp.add_idx(y, z)), y))?;
    Ok(HyperplaneViews { f, g, h })
}

/// `E_{x,y,z} f(x, y) g(x, z) h(y, z) nu(-x - y - z)` by direct summation.
pub fn hyperplane_integral(views: &HyperplaneViews, nu: &DensityFunction) -> Result<f64> {
    let grp = views.f.group();
    if views.g.group() != grp || views.h.group() != grp {
        return Err(Error::SpecMismatch("hyperplane views on different groups".into()));
    }
    check_cap("group order for the hyperplane sum", HYPERPLANE_CAP, grp.order())?;
    check_nu(grp, nu)?;
    Ok(triple_sum(
        grp,
        |x, y| views.f.contains(x, y),
        |x, z| views.g.contains(x, z),
        |y, z| views.h.contains(y, z),
        nu.values(),
    ))
}

fn triple_sum(
    grp: &GroupSpec,
    f: impl Fn(usize, usize) -> bool,
    g: impl Fn(usize, usize) -> bool,
    h: impl Fn(usize, usize) -> bool,
    nu: &[f64],
) -> f64 {
    let n = grp.size();
    let mut total = 0.0;
    for x in 0..n {
        for y in 0..n {
            if !f(x, y) {
                continue;
            }
            let s = grp.add_idx(x, y);
            for z in 0..n {
                if g(x, z) && h(y, z) {
                    total += nu[grp.neg_idx(grp.add_idx(s, z))];
                }
            }
        }
    }
    let nf = n as f64;
    total / (nf * nf * nf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corners::weighted_corner_count;

    #[test]
    fn full_set_views_are_full() {
        let grp: GroupSpec = "Z2xZ3".parse().unwrap();
        let v = hyperplane_views(&PlaneSet::full(&grp).unwrap()).unwrap();
        assert!(v.f.len() == 36 && v.g.len() == 36 && v.h.len() == 36);
    }

    #[test]
    fn views_preserve_density_and_count() {
        let grp = GroupSpec::cyclic(4).unwrap();
        let a = PlaneSet::random(&grp, 0.5, 5).unwrap();
        let v = hyperplane_views(&a).unwrap();
        assert_eq!(v.g.len(), a.len());
        assert_eq!(v.h.len(), a.len());
        let nu = DensityFunction::constant(&grp, 1.0);
        let lhs = hyperplane_integral(&v, &nu).unwrap();
        assert!((lhs - weighted_corner_count(&a, &nu).unwrap()).abs() < 1e-15);
    }
}
