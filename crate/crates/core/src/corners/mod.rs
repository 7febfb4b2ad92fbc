//! Corners `{(x, y), (x, y + d), (x + d, y)}` in `A ⊂ G x G`.
//!
//! `N(d)` counts the base points `(x, y)` of corners with difference `d`, so
//! `N(0) = |A|` (the degenerate corners) and `sum_d N(d) / |G|^3` is the total
//! corner density. Popularity searches only consider `d != 0`.

mod bits;
mod hyperplane;
mod integer;
mod plane;

use num_complex::Complex64;

use crate::error::{check_cap, Error, Result};
use crate::group::GroupSpec;
use crate::harmonic::{dft, DensityFunction};
use crate::par::map_range;

pub use hyperplane::{hyperplane_integral, hyperplane_views, HyperplaneViews, HYPERPLANE_CAP};
pub use integer::{integer_corner_scan, list_integer_corners, IntegerScan, INTEGER_SCAN_CAP};
pub(crate) use plane::unit_draw;
pub use plane::{PlaneSet, PLANE_CAP};

/// Largest `|G|` for the all-differences profile.
pub const PROFILE_CAP: u64 = 1 << 12;
/// Largest `|G|` for the Fourier evaluation path.
pub const FOURIER_CHECK_CAP: u64 = 1 << 8;
/// Allowed deviation of `E[nu]` from 1.
pub const NU_MEAN_TOLERANCE: f64 = 1e-9;

/// `N(d)` for every `d`, indexed by element index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerProfile {
    group: GroupSpec,
    counts: Vec<u64>,
}

impl CornerProfile {
    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, d: usize) -> u64 {
        self.counts[d]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `sum_d N(d) / |G|^3`.
    pub fn total_density(&self) -> f64 {
        let n = self.group.order() as f64;
        self.total() as f64 / (n * n * n)
    }

    /// `argmax_{d != 0} N(d)`, ties to the smallest index.
    pub fn popular(&self) -> Result<(usize, u64)> {
        if self.counts.len() < 2 {
            return Err(Error::invalid("the trivial group has no nonzero difference"));
        }
        let mut best = (1, self.counts[1]);
        for (d, &c) in self.counts.iter().enumerate().skip(2) {
            if c > best.1 {
                best = (d, c);
            }
        }
        Ok(best)
    }

    /// `(1/|G|^3) sum_d nu(d) N(d)`.
    pub fn weighted(&self, nu: &DensityFunction) -> Result<f64> {
        check_nu(&self.group, nu)?;
        let n = self.group.order() as f64;
        let s: f64 = nu.values().iter().zip(&self.counts).map(|(w, &c)| w * c as f64).sum();
        Ok(s / (n * n * n))
    }
}

pub(crate) fn check_nu(group: &GroupSpec, nu: &DensityFunction) -> Result<()> {
    if nu.group() != group {
        return Err(Error::SpecMismatch(format!("weight on {} for a set in {}", nu.group(), group)));
    }
    let mean = nu.mean();
    if (mean - 1.0).abs() > NU_MEAN_TOLERANCE {
        return Err(Error::invalid(format!("difference weight must have mean 1, got {mean}")));
    }
    Ok(())
}

/// `N(d)` for all `d` by row AND/popcount.
///
/// With `r_x` the row of `x`, `N(d) = sum_x |r_x ∩ (r_x - d) ∩ r_{x+d}|`.
/// Cyclic groups shift by word rotation; other groups gather through the
/// translation table.
pub fn corner_count_by_difference(a: &PlaneSet) -> Result<CornerProfile> {
    let g = a.group();
    check_cap("group order for the corner profile", PROFILE_CAP, g.order())?;
    let n = g.size();
    let w = a.words();
    let cyclic = g.is_cyclic();
    let counts = map_range(n, |d| {
        let mut shifted = vec![0u64; w];
        let table = if cyclic { Vec::new() } else { g.translation_table(d) };
        let mut total = 0;
        for x in 0..n {
            let row = a.row(x);
            if cyclic {
                bits::rotate_into(row, d, n, &mut shifted);
            } else {
                shifted.iter_mut().for_each(|s| *s = 0);
                for (y, &t) in table.iter().enumerate() {
                    if bits::get(row, t) {
                        bits::set(&mut shifted, y);
                    }
                }
            }
            let xd = if cyclic { (x + d) % n } else { g.add_idx(x, d) };
            total += bits::and3_popcount(row, &shifted, a.row(xd));
        }
        total
    });
    Ok(CornerProfile { group: g.clone(), counts })
}

/// `(d*, N(d*))` over `d != 0`, ties to the smallest element index.
pub fn popular_difference(a: &PlaneSet) -> Result<(usize, u64)> {
    if a.group().order() < 2 {
        return Err(Error::invalid("the trivial group has no nonzero difference"));
    }
    corner_count_by_difference(a)?.popular()
}

/// `(1/|G|^3) sum_d nu(d) N(d)` for a weight `nu` of mean 1.
pub fn weighted_corner_count(a: &PlaneSet, nu: &DensityFunction) -> Result<f64> {
    check_nu(a.group(), nu)?;
    corner_count_by_difference(a)?.weighted(nu)
}

/// The weighted count again, with each `N(d)` obtained as a sum of
/// correlations evaluated in frequency space.
///
/// For fixed `x` and `d`, put `u = r_x ∩ r_{x+d}` and `v = r_x`; then
/// `sum_y u(y) v(y + d) = |G| sum_xi v^(xi) conj(u^(xi)) e(xi(d))`.
pub fn corner_count_fourier_check(a: &PlaneSet, nu: &DensityFunction) -> Result<f64> {
    let g = a.group();
    check_cap("group order for the Fourier corner check", FOURIER_CHECK_CAP, g.order())?;
    check_nu(g, nu)?;
    let n = g.size();
    let l = g.exponent() as f64;

    // e(xi(d)) as a table [xi][d].
    let mut waves = Vec::with_capacity(n * n);
    for k in 0..n {
        for p in g.phase_table(&g.character_at(k))? {
            waves.push(Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * p as f64 / l));
        }
    }
    let rows: Vec<Vec<f64>> =
        (0..n).map(|x| (0..n).map(|y| if a.contains(x, y) { 1.0 } else { 0.0 }).collect()).collect();
    let row_hats = rows
        .iter()
        .map(|r| Ok(dft(&DensityFunction::new(g.clone(), r.clone())?)?.coeffs().to_vec()))
        .collect::<Result<Vec<_>>>()?;

    let per_d: Vec<Result<f64>> = map_range(n, |d| {
        let mut total = 0.0;
        for x in 0..n {
            let xd = g.add_idx(x, d);
            let u: Vec<f64> = rows[x].iter().zip(&rows[xd]).map(|(p, q)| p * q).collect();
            let u_hat = dft(&DensityFunction::new(g.clone(), u)?)?;
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, (vh, uh)) in row_hats[x].iter().zip(u_hat.coeffs()).enumerate() {
                acc += vh * uh.conj() * waves[k * n + d];
            }
            total += acc.re * n as f64;
        }
        Ok(total)
    });
    let mut s = 0.0;
    for (w, c) in nu.values().iter().zip(per_d) {
        s += w * c?;
    }
    let nf = n as f64;
    Ok(s / (nf * nf * nf))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(a: &PlaneSet) -> Vec<u64> {
        let g = a.group();
        let n = g.size();
        (0..n)
            .map(|d| {
                let mut c = 0;
                for x in 0..n {
                    for y in 0..n {
                        if a.contains(x, y) && a.contains(x, g.add_idx(y, d)) && a.contains(g.add_idx(x, d), y) {
                            c += 1;
                        }
                    }
                }
                c
            })
            .collect()
    }

    #[test]
    fn small_cyclic_example() {
        let g = GroupSpec::cyclic(3).unwrap();
        let a = PlaneSet::from_fn(&g, |x, y| x < 2 && y < 2).unwrap();
        let p = corner_count_by_difference(&a).unwrap();
        assert_eq!(p.counts(), &[4, 1, 1]);
        assert_eq!(p.counts(), naive(&a).as_slice());
        assert_eq!(p.popular().unwrap(), (1, 1));
    }

    #[test]
    fn empty_and_full() {
        let g: GroupSpec = "Z2xZ3".parse().unwrap();
        let e = corner_count_by_difference(&PlaneSet::empty(&g).unwrap()).unwrap();
        assert!(e.counts().iter().all(|&c| c == 0));
        let f = corner_count_by_difference(&PlaneSet::full(&g).unwrap()).unwrap();
        assert!(f.counts().iter().all(|&c| c == 36));
        assert_eq!(f.popular().unwrap(), (1, 36));
        assert!((f.total_density() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn generic_path_matches_naive() {
        for spec in ["Z2xZ4", "Z3xZ3", "Z2xZ2xZ2", "Z70"] {
            let g: GroupSpec = spec.parse().unwrap();
            for seed in 0..3 {
                let a = PlaneSet::random(&g, 0.5, seed).unwrap();
                assert_eq!(corner_count_by_difference(&a).unwrap().counts(), naive(&a).as_slice());
            }
        }
    }

    #[test]
    fn weighted_count_special_weights() {
        let g = GroupSpec::cyclic(7).unwrap();
        let a = PlaneSet::random(&g, 0.4, 3).unwrap();
        let mut point = vec![0.0; 7];
        point[0] = 7.0;
        let delta = DensityFunction::new(g.clone(), point).unwrap();
        assert!((weighted_corner_count(&a, &delta).unwrap() - a.density()).abs() < 1e-15);
        let uniform = DensityFunction::constant(&g, 1.0);
        let p = corner_count_by_difference(&a).unwrap();
        assert!((weighted_corner_count(&a, &uniform).unwrap() - p.total_density()).abs() < 1e-15);
        let bad = DensityFunction::constant(&g, 0.5);
        assert!(weighted_corner_count(&a, &bad).is_err());
    }

    #[test]
    fn fourier_path_agrees() {
        for spec in ["Z12", "Z2xZ6"] {
            let g: GroupSpec = spec.parse().unwrap();
            let a = PlaneSet::random(&g, 0.5, 9).unwrap();
            let nu = DensityFunction::constant(&g, 1.0);
            let direct = weighted_corner_count(&a, &nu).unwrap();
            let fourier = corner_count_fourier_check(&a, &nu).unwrap();
            assert!((direct - fourier).abs() < 1e-9);
        }
    }

    #[test]
    fn trivial_group_has_no_popular_difference() {
        let g = GroupSpec::cyclic(1).unwrap();
        assert!(popular_difference(&PlaneSet::full(&g).unwrap()).is_err());
    }
}
