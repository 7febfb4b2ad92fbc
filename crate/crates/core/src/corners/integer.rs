//! Corners in `[n]^2` found through `Z/nZ`.
//!
//! The set is embedded in `(Z/nZ)^2` and differences are drawn from
//! `D = B({x -> x/n} ∪ S, rho)` with `rho < 1/2`, so every `d` in `D` has a
//! unique signed representative with `|d| < rho n`. A corner is counted only
//! when its three points, read back as integers, stay inside `[0, n)^2`.

use super::{bits, PlaneSet};
use crate::bohr::BohrSet;
use crate::error::{check_cap, Error, Result};
use crate::group::Character;
use crate::par::map_range;
use crate::rational::Rational;

/// Largest `n` accepted by the scan.
pub const INTEGER_SCAN_CAP: u64 = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerScan {
    pub n: usize,
    pub rho: Rational,
    /// `(d, valid corner count)` for every nonzero signed `d` in `D`, ordered
    /// `1, -1, 2, -2, ...`.
    pub counts: Vec<(i64, u64)>,
    /// First maximum of `counts`, or `None` when `D = {0}`.
    pub best: Option<(i64, u64)>,
}

/// Scans every nonzero `d` in the difference set, counting only corners that
/// do not wrap around.
pub fn integer_corner_scan(a: &PlaneSet, extra: &[Character], rho: Rational) -> Result<IntegerScan> {
    let grp = a.group();
    if !grp.is_cyclic() {
        return Err(Error::invalid(format!("an integer scan needs a cyclic group, got {grp}")));
    }
    check_cap("n for the integer scan", INTEGER_SCAN_CAP, grp.order())?;
    if *rho.numer() == 0 || rho >= Rational::new(1, 2) {
        return Err(Error::invalid(format!("rho must lie in (0, 1/2), got {rho}")));
    }
    let n = grp.size();
    let unit = grp.character(vec![1 % grp.order()])?;
    let mut freqs = vec![unit.clone()];
    freqs.extend(extra.iter().filter(|xi| **xi != unit).cloned());
    let members = BohrSet::new(grp.clone(), freqs, rho)?.members()?;

    let mut ds = Vec::new();
    for m in 1..=n / 2 {
        if members[m] {
            ds.push(m as i64);
        }
        if 2 * m != n && members[n - m] {
            ds.push(-(m as i64));
        }
    }
    let counts: Vec<(i64, u64)> = map_range(ds.len(), |i| (ds[i], count_valid(a, ds[i]))).into_iter().collect();
    let mut best: Option<(i64, u64)> = None;
    for &(d, c) in &counts {
        if best.is_none_or(|(_, b)| c > b) {
            best = Some((d, c));
        }
    }
    Ok(IntegerScan { n, rho, counts, best })
}

fn count_valid(a: &PlaneSet, d: i64) -> u64 {
    let n = a.side();
    let mut shifted = vec![0u64; a.words()];
    let mut total = 0;
    for x in 0..n {
        let xd = x as i64 + d;
        if xd < 0 || xd >= n as i64 {
            continue;
        }
        let row = a.row(x);
        bits::shift_into(row, d, n, &mut shifted);
        total += bits::and3_popcount(row, &shifted, a.row(xd as usize));
    }
    total
}

/// Base points `(x, y)` of the non-wrapping corners with signed difference `d`.
pub fn list_integer_corners(a: &PlaneSet, d: i64) -> Vec<(usize, usize)> {
    let n = a.side() as i64;
    let inside = |v: i64| (0..n).contains(&v);
    a.points()
        .filter(|&(x, y)| {
            let (x, y) = (x as i64, y as i64);
            inside(x + d)
                && inside(y + d)
                && a.contains(x as usize, (y + d) as usize)
                && a.contains((x + d) as usize, y as usize)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    #[test]
    fn full_square_counts_lattice_corners() {
        let g = GroupSpec::cyclic(10).unwrap();
        let scan = integer_corner_scan(&PlaneSet::full(&g).unwrap(), &[], Rational::new(3, 10)).unwrap();
        let ds: Vec<i64> = scan.counts.iter().map(|c| c.0).collect();
        assert_eq!(ds, vec![1, -1, 2, -2]);
        for &(d, c) in &scan.counts {
            assert_eq!(c, (10 - d.unsigned_abs()).pow(2));
        }
        assert_eq!(scan.best, Some((1, 81)));
    }

    #[test]
    fn listing_matches_counts() {
        let g = GroupSpec::cyclic(30).unwrap();
        let a = PlaneSet::random(&g, 0.4, 1).unwrap();
        let scan = integer_corner_scan(&a, &[], Rational::new(1, 4)).unwrap();
        for &(d, c) in &scan.counts {
            assert_eq!(list_integer_corners(&a, d).len() as u64, c);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = GroupSpec::cyclic(10).unwrap();
        let a = PlaneSet::empty(&g).unwrap();
        assert!(integer_corner_scan(&a, &[], Rational::new(1, 2)).is_err());
        let scan = integer_corner_scan(&a, &[], Rational::new(1, 4)).unwrap();
        assert_eq!(scan.best, Some((1, 0)));
        let h: GroupSpec = "Z2xZ5".parse().unwrap();
        assert!(integer_corner_scan(&PlaneSet::empty(&h).unwrap(), &[], Rational::new(1, 4)).is_err());
    }
}
