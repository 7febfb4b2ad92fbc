//! Bohr sets `B(S, rho)`, Bohr partitions `𝔅(S, 1/N)`, and exhaustive
//! verifiers for how translates of small Bohr sets sit inside partitions.
//!
//! All interval tests are decided on exact phase numerators over the group
//! exponent, so boundary points are classified deterministically.
//!
//! The containment/absorption statements only hold up to unspecified `O(eps0)`
//! constants. The verifiers return measured values; the bounds asserted by the
//! test suite use the pinned constants in [`TRANSLATE_CONSTANT`] and
//! [`ABSORPTION_CONSTANT`].

use crate::error::{check_cap, Error, Result};
use crate::group::{phase_distance, Character, Element, GroupSpec, DEFAULT_ENUMERATION_CAP};
use crate::harmonic::{convolve, DensityFunction};
use crate::partition::{l2_distance, Partition};
use crate::rational::{to_f64, Rational};

/// Bad translates of `B(S, rho)` in `𝔅(S, delta)` are at most
/// `TRANSLATE_CONSTANT * |S| * rho / delta` of `G`.
pub const TRANSLATE_CONSTANT: f64 = 8.0;
/// Non-absorbed `y` in `B(S, rho)` are at most
/// `ABSORPTION_CONSTANT * |S| * delta' / (rho * C_{|S|,rho})` of the set.
pub const ABSORPTION_CONSTANT: f64 = 4.0;
/// Box approximation residual is asserted `<= eps0 * mu(B)` once
/// `delta' <= eps0 * C_{|S|,rho} / (BOX_CONSTANT * |S|)`.
pub const BOX_CONSTANT: f64 = 8.0;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BohrSet {
    group: GroupSpec,
    freqs: Vec<Character>,
    radius: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BohrPartition {
    group: GroupSpec,
    freqs: Vec<Character>,
    parts_per_axis: u64,
}

/// An exact count `bad` out of `total`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Measured {
    pub bad: u64,
    pub total: u64,
}

impl Measured {
    pub fn value(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.bad as f64 / self.total as f64
        }
    }
}

fn check_freqs(group: &GroupSpec, freqs: &[Character]) -> Result<()> {
    freqs.iter().try_for_each(|xi| group.check_character(xi))
}

/// `‖p / L‖ < r`, exactly.
fn within(p: u64, l: u64, r: Rational) -> bool {
    (phase_distance(p, l) as u128) * (*r.denom() as u128) < (*r.numer() as u128) * (l as u128)
}

impl BohrSet {
    /// Radii in `(0, 1]` are accepted; any radius above `1/2` only excludes
    /// points with some `xi(x) = 1/2`, and `1` gives all of `G`.
    pub fn new(group: GroupSpec, freqs: Vec<Character>, radius: Rational) -> Result<Self> {
        if *radius.numer() == 0 || radius > Rational::from_integer(1) {
            return Err(Error::invalid(format!("Bohr radius must lie in (0, 1], got {radius}")));
        }
        check_freqs(&group, &freqs)?;
        Ok(BohrSet { group, freqs, radius })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn freqs(&self) -> &[Character] {
        &self.freqs
    }

    pub fn radius(&self) -> Rational {
        self.radius
    }

    pub fn contains(&self, x: &Element) -> Result<bool> {
        self.group.check_element(x)?;
        let l = self.group.exponent();
        for xi in &self.freqs {
            if !within(self.group.char_phase(xi, x)?, l, self.radius) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Membership mask over all of `G` in enumeration order.
    pub fn members(&self) -> Result<Vec<bool>> {
        check_cap("group order for enumeration", DEFAULT_ENUMERATION_CAP, self.group.order())?;
        let l = self.group.exponent();
        let mut mask = vec![true; self.group.size()];
        for xi in &self.freqs {
            let phases = self.group.phase_table(xi)?;
            for (m, p) in mask.iter_mut().zip(phases) {
                *m = *m && within(p, l, self.radius);
            }
        }
        Ok(mask)
    }

    pub fn count(&self) -> Result<u64> {
        Ok(self.members()?.iter().filter(|&&m| m).count() as u64)
    }

    pub fn measure(&self) -> Result<f64> {
        Ok(self.count()? as f64 / self.group.order() as f64)
    }

    /// `mu_B`, the indicator normalized to mean 1.
    pub fn normalized_indicator(&self) -> Result<DensityFunction> {
        DensityFunction::normalized_indicator(&self.group, &self.members()?)
    }
}

impl BohrPartition {
    /// `𝔅(S, 1/N)`.
    pub fn new(group: GroupSpec, freqs: Vec<Character>, parts_per_axis: u64) -> Result<Self> {
        if parts_per_axis == 0 {
            return Err(Error::invalid("a Bohr partition needs N >= 1"));
        }
        check_freqs(&group, &freqs)?;
        Ok(BohrPartition { group, freqs, parts_per_axis })
    }

    /// `𝔅(S, delta)` for `delta = 1/N`.
    pub fn with_width(group: GroupSpec, freqs: Vec<Character>, width: Rational) -> Result<Self> {
        if *width.numer() != 1 {
            return Err(Error::invalid(format!("partition width must be 1/N, got {width}")));
        }
        Self::new(group, freqs, *width.denom())
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn freqs(&self) -> &[Character] {
        &self.freqs
    }

    pub fn parts_per_axis(&self) -> u64 {
        self.parts_per_axis
    }

    pub fn width(&self) -> Rational {
        Rational::new(1, self.parts_per_axis)
    }

    fn slot(&self, phase: u64) -> u64 {
        (self.parts_per_axis as u128 * phase as u128 / self.group.exponent() as u128) as u64 + 1
    }

    /// `s_i = 1 + floor(N xi_i(x))`, in `[1, N]`.
    pub fn label(&self, x: &Element) -> Result<Vec<u64>> {
        self.group.check_element(x)?;
        self.freqs.iter().map(|xi| Ok(self.slot(self.group.char_phase(xi, x)?))).collect()
    }

    /// Labels of every element, in enumeration order.
    pub fn labels(&self) -> Result<Vec<Vec<u64>>> {
        check_cap("group order for enumeration", DEFAULT_ENUMERATION_CAP, self.group.order())?;
        let mut labels = vec![Vec::with_capacity(self.freqs.len()); self.group.size()];
        for xi in &self.freqs {
            for (label, p) in labels.iter_mut().zip(self.group.phase_table(xi)?) {
                label.push(self.slot(p));
            }
        }
        Ok(labels)
    }

    /// The nonempty parts.
    pub fn partition(&self) -> Result<Partition> {
        Ok(Partition::from_keys(self.labels()?))
    }
}

/// Smallest `N` with `1/N < rho`.
pub fn covering_number(rho: Rational) -> u64 {
    rho.denom() / rho.numer() + 1
}

/// `N^{-s}` with `N` the smallest integer with `1/N < rho`; a lower bound for
/// `mu(B(S, rho))` whenever `|S| = s`.
pub fn volume_lower_bound(s: usize, rho: Rational) -> Result<f64> {
    if *rho.numer() == 0 || rho > Rational::new(1, 2) {
        return Err(Error::invalid(format!("radius must lie in (0, 1/2], got {rho}")));
    }
    Ok((covering_number(rho) as f64).powi(-(s as i32)))
}

/// Exact fraction of `x` in `G` whose translate `x + B(S, rho)` meets more than
/// one part of `𝔅(S, delta)`.
pub fn verify_translate_containment(
    group: &GroupSpec,
    freqs: &[Character],
    delta: Rational,
    rho: Rational,
) -> Result<Measured> {
    let bohr = BohrSet::new(group.clone(), freqs.to_vec(), rho)?;
    let partition = BohrPartition::with_width(group.clone(), freqs.to_vec(), delta)?.partition()?;
    let ball: Vec<usize> = indices(&bohr.members()?);
    let bad = (0..group.size())
        .filter(|&x| {
            let home = partition.part_of(x);
            ball.iter().any(|&b| partition.part_of(group.add_idx(x, b)) != home)
        })
        .count() as u64;
    Ok(Measured { bad, total: group.order() })
}

/// Worst case over `x` in `G` of the fraction of `y` in `B(S, rho)` for which
/// the part of `𝔅(S', delta')` containing `x + y` is not inside `x + B(S, rho)`.
pub fn verify_part_absorption(
    group: &GroupSpec,
    freqs: &[Character],
    fine_freqs: &[Character],
    rho: Rational,
    fine_width: Rational,
) -> Result<Measured> {
    if let Some(missing) = freqs.iter().find(|xi| !fine_freqs.contains(xi)) {
        return Err(Error::invalid(format!("fine frequency set is missing {missing}")));
    }
    let bohr = BohrSet::new(group.clone(), freqs.to_vec(), rho)?;
    let in_ball = bohr.members()?;
    let ball = indices(&in_ball);
    let fine = BohrPartition::with_width(group.clone(), fine_freqs.to_vec(), fine_width)?.partition()?;
    let parts = fine.members();

    let mut worst = 0u64;
    let mut verdict: Vec<Option<bool>> = vec![None; fine.num_parts()];
    for x in 0..group.size() {
        verdict.iter_mut().for_each(|v| *v = None);
        let mut bad = 0u64;
        for &y in &ball {
            let p = fine.part_of(group.add_idx(x, y));
            let inside = *verdict[p].get_or_insert_with(|| parts[p].iter().all(|&z| in_ball[group.sub_idx(z, x)]));
            if !inside {
                bad += 1;
            }
        }
        worst = worst.max(bad);
    }
    Ok(Measured { bad: worst, total: ball.len() as u64 })
}

/// Disjoint fine boxes `p x q` inside `{(x, y) : x + y + z0 in target}` and the
/// uncovered remainder.
#[derive(Clone, Debug)]
pub struct BoxDecomposition {
    /// Parts of the fine partition, by index.
    pub parts: Vec<Vec<usize>>,
    /// `(row part, column part)` pairs.
    pub boxes: Vec<(usize, usize)>,
    /// `mu(target)`, which equals the measure of the sheared set in `G x G`.
    pub target_measure: f64,
    pub residual_measure: f64,
    /// Set when the smallness hypothesis on `delta'` holds and the residual
    /// was checked against `eps0 * mu(B)`.
    pub hypothesis_holds: bool,
}

impl BoxDecomposition {
    pub fn box_sets(&self, i: usize) -> (&[usize], &[usize]) {
        let (p, q) = self.boxes[i];
        (&self.parts[p], &self.parts[q])
    }

    pub fn relative_residual(&self) -> f64 {
        if self.target_measure == 0.0 {
            0.0
        } else {
            self.residual_measure / self.target_measure
        }
    }
}

/// Boxes from a fine partition that lie inside the shear of an arbitrary target
/// set (a Bohr set or a Bohr part).
pub fn box_approximation_of(
    group: &GroupSpec,
    target: &[bool],
    fine: &Partition,
    z0: usize,
) -> Result<BoxDecomposition> {
    if target.len() != group.size() || fine.len() != group.size() {
        return Err(Error::SpecMismatch("target or partition does not match the group".into()));
    }
    let n = group.size();
    let parts = fine.members();
    // Membership of x + y + z0, i.e. target shifted by -z0.
    let shifted: Vec<bool> = (0..n).map(|s| target[group.add_idx(s, z0)]).collect();
    let mut boxes = Vec::new();
    let mut covered = 0u64;
    for (p, rows) in parts.iter().enumerate() {
        for (q, cols) in parts.iter().enumerate() {
            let inside = rows.iter().all(|&x| cols.iter().all(|&y| shifted[group.add_idx(x, y)]));
            if inside {
                boxes.push((p, q));
                covered += (rows.len() * cols.len()) as u64;
            }
        }
    }
    let total = (n as u64) * (n as u64);
    let target_count = target.iter().filter(|&&t| t).count() as u64;
    // Each x + y + z0 in target is hit by exactly |G| pairs.
    let target_pairs = target_count * n as u64;
    if covered > target_pairs {
        return Err(Error::Assertion("fine boxes cover more than the target".into()));
    }
    Ok(BoxDecomposition {
        parts,
        boxes,
        target_measure: target_count as f64 / n as f64,
        residual_measure: (target_pairs - covered) as f64 / total as f64,
        hypothesis_holds: false,
    })
}

/// Box approximation of `B_{z0}` for a Bohr set, using the fine partition
/// `𝔅(S, delta')` on the set's own frequencies.
pub fn box_approximation(bohr: &BohrSet, z0: &Element, eps0: f64, fine_width: Rational) -> Result<BoxDecomposition> {
    let group = bohr.group();
    let z0 = group.index_of(z0)?;
    let fine = BohrPartition::with_width(group.clone(), bohr.freqs().to_vec(), fine_width)?.partition()?;
    let mut dec = box_approximation_of(group, &bohr.members()?, &fine, z0)?;
    let s = bohr.freqs().len().max(1) as f64;
    let radius = bohr.radius().min(Rational::new(1, 2));
    let c = volume_lower_bound(bohr.freqs().len(), radius)?;
    dec.hypothesis_holds = to_f64(fine_width) <= eps0 * c / (BOX_CONSTANT * s);
    if dec.hypothesis_holds && dec.residual_measure > eps0 * dec.target_measure + 1e-12 {
        return Err(Error::Assertion(format!(
            "box residual {} exceeds eps0 * mu(B) = {}",
            dec.residual_measure,
            eps0 * dec.target_measure
        )));
    }
    Ok(dec)
}

/// The two smoothing deviations
/// `e1 = ‖f|_𝔅 - mu_B * (f|_𝔅)‖_{L^2}` and `e2 = ‖mu_B * f - mu_B * (f|_𝔅')‖_{L^2}`.
#[derive(Clone, Copy, Debug)]
pub struct SmoothingReport {
    pub coarse_deviation: f64,
    pub fine_deviation: f64,
    /// `rho <= eps0^2 delta / |S|`.
    pub radius_hypothesis: bool,
    /// `delta' <= eps0 C_{|S|,rho} / |S|`.
    pub fine_width_hypothesis: bool,
}

pub struct SmoothingParams<'a> {
    pub freqs: &'a [Character],
    pub fine_freqs: &'a [Character],
    pub width: Rational,
    pub fine_width: Rational,
    pub radius: Rational,
    pub eps0: f64,
}

pub fn check_convolution_smoothing(f: &DensityFunction, params: &SmoothingParams<'_>) -> Result<SmoothingReport> {
    let group = f.group();
    let bohr = BohrSet::new(group.clone(), params.freqs.to_vec(), params.radius)?;
    let mu_b = bohr.normalized_indicator()?;
    let coarse = BohrPartition::with_width(group.clone(), params.freqs.to_vec(), params.width)?.partition()?;
    let fine = BohrPartition::with_width(group.clone(), params.fine_freqs.to_vec(), params.fine_width)?.partition()?;

    let f_coarse = DensityFunction::new(group.clone(), coarse.average(f.values()))?;
    let smoothed_coarse = convolve(&mu_b, &f_coarse)?;
    let e1 = l2_distance(f_coarse.values(), smoothed_coarse.values());

    let f_fine = DensityFunction::new(group.clone(), fine.average(f.values()))?;
    let a = convolve(&mu_b, f)?;
    let b = convolve(&mu_b, &f_fine)?;
    let e2 = l2_distance(a.values(), b.values());

    let s = params.freqs.len().max(1) as f64;
    let c = volume_lower_bound(params.freqs.len(), params.radius.min(Rational::new(1, 2)))?;
    Ok(SmoothingReport {
        coarse_deviation: e1,
        fine_deviation: e2,
        radius_hypothesis: to_f64(params.radius) <= params.eps0 * params.eps0 * to_f64(params.width) / s,
        fine_width_hypothesis: to_f64(params.fine_width) <= params.eps0 * c / s,
    })
}

fn indices(mask: &[bool]) -> Vec<usize> {
    mask.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> GroupSpec {
        GroupSpec::cyclic(n).unwrap()
    }

    fn chars(g: &GroupSpec, coeffs: &[u64]) -> Vec<Character> {
        coeffs.iter().map(|&a| g.character(vec![a]).unwrap()).collect()
    }

    #[test]
    fn z12_worked_example() {
        let g = z(12);
        let b = BohrSet::new(g.clone(), chars(&g, &[1]), Rational::new(1, 5)).unwrap();
        assert!(b.contains(&g.element(vec![2]).unwrap()).unwrap());
        assert!(!b.contains(&g.element(vec![3]).unwrap()).unwrap());
        let members: Vec<usize> = indices(&b.members().unwrap());
        assert_eq!(members, vec![0, 1, 2, 10, 11]);
        assert_eq!(b.count().unwrap(), 5);
        assert_eq!(volume_lower_bound(1, Rational::new(1, 5)).unwrap(), 1.0 / 6.0);
    }

    #[test]
    fn trivial_and_empty_frequency_sets() {
        let g = z(10);
        let b = BohrSet::new(g.clone(), vec![g.trivial_character()], Rational::new(1, 7)).unwrap();
        assert_eq!(b.measure().unwrap(), 1.0);
        let b = BohrSet::new(g.clone(), vec![], Rational::new(1, 7)).unwrap();
        assert_eq!(b.measure().unwrap(), 1.0);
        let p = BohrPartition::new(g, vec![], 5).unwrap().partition().unwrap();
        assert_eq!(p.num_parts(), 1);
    }

    #[test]
    fn half_radius_excludes_only_half_points() {
        let g = z(6);
        let b = BohrSet::new(g.clone(), chars(&g, &[1]), Rational::new(1, 2)).unwrap();
        let m = b.members().unwrap();
        assert_eq!(m, vec![true, true, true, false, true, true]);
    }

    #[test]
    fn volume_bound_examples() {
        assert_eq!(volume_lower_bound(0, Rational::new(1, 3)).unwrap(), 1.0);
        assert_eq!(volume_lower_bound(2, Rational::new(1, 2)).unwrap(), 1.0 / 9.0);
        assert!(volume_lower_bound(1, Rational::new(3, 4)).is_err());
        assert!(volume_lower_bound(1, Rational::new(0, 1)).is_err());
    }

    #[test]
    fn partition_labels() {
        let g = z(12);
        let p = BohrPartition::new(g.clone(), chars(&g, &[1]), 4).unwrap();
        assert_eq!(p.label(&g.zero()).unwrap(), vec![1]);
        assert_eq!(p.label(&g.element(vec![3]).unwrap()).unwrap(), vec![2]);
        assert_eq!(p.label(&g.element(vec![11]).unwrap()).unwrap(), vec![4]);
        let part = p.partition().unwrap();
        assert_eq!(part.sizes().iter().sum::<usize>(), 12);
        assert_eq!(part.num_parts(), 4);
    }

    #[test]
    fn translate_containment_examples() {
        let g = z(100);
        let s = chars(&g, &[1]);
        // B(S, 1/100) = {0}.
        let m = verify_translate_containment(&g, &s, Rational::new(1, 4), Rational::new(1, 100)).unwrap();
        assert_eq!(m.bad, 0);
        let m = verify_translate_containment(&g, &[g.trivial_character()], Rational::new(1, 4), Rational::new(1, 3))
            .unwrap();
        assert_eq!(m.bad, 0);
        let m = verify_translate_containment(&g, &s, Rational::new(1, 4), Rational::new(1, 20)).unwrap();
        // Translates of {-4..4} straddle 4 boundaries: 8 bad x per boundary.
        assert_eq!(m.bad, 32);
        assert!(m.value() <= TRANSLATE_CONSTANT * (1.0 / 20.0) / 0.25);
    }

    #[test]
    fn absorption_examples() {
        let g = z(128);
        let s = chars(&g, &[1]);
        let m = verify_part_absorption(&g, &s, &s, Rational::new(1, 8), Rational::new(1, 128)).unwrap();
        assert_eq!(m.bad, 0);
        let m = verify_part_absorption(&g, &s, &s, Rational::new(1, 8), Rational::new(1, 4)).unwrap();
        assert!(m.value() > 0.0);
        assert!(verify_part_absorption(&g, &s, &[], Rational::new(1, 8), Rational::new(1, 4)).is_err());
    }

    #[test]
    fn box_approximation_examples() {
        let g = z(16);
        let all = BohrSet::new(g.clone(), vec![], Rational::new(1, 2)).unwrap();
        let dec = box_approximation(&all, &g.zero(), 0.1, Rational::new(1, 1)).unwrap();
        assert_eq!(dec.boxes.len(), 1);
        assert_eq!(dec.residual_measure, 0.0);

        // B = {0}: the anti-diagonal {(x, -x - z0)} in singleton boxes.
        let point = BohrSet::new(g.clone(), chars(&g, &[1]), Rational::new(1, 16)).unwrap();
        let z0 = g.element(vec![3]).unwrap();
        let dec = box_approximation(&point, &z0, 0.1, Rational::new(1, 16)).unwrap();
        assert_eq!(dec.boxes.len(), 16);
        assert_eq!(dec.residual_measure, 0.0);
        for i in 0..dec.boxes.len() {
            let (r, c) = dec.box_sets(i);
            assert_eq!(g.add_idx(g.add_idx(r[0], c[0]), 3), 0);
        }
    }

    #[test]
    fn smoothing_trivial_cases() {
        let g = z(32);
        let s = chars(&g, &[1]);
        let params = SmoothingParams {
            freqs: &s,
            fine_freqs: &s,
            width: Rational::new(1, 4),
            fine_width: Rational::new(1, 8),
            radius: Rational::new(1, 16),
            eps0: 0.5,
        };
        let r = check_convolution_smoothing(&DensityFunction::constant(&g, 0.3), &params).unwrap();
        assert!(r.coarse_deviation < 1e-12 && r.fine_deviation < 1e-12);

        // B = {0}: e1 = 0 and e2 = ‖f - f|_𝔅'‖.
        let f = DensityFunction::new(g.clone(), (0..32).map(|i| ((i * 7) % 5) as f64 / 4.0).collect()).unwrap();
        let params = SmoothingParams { radius: Rational::new(1, 32), ..params };
        let r = check_convolution_smoothing(&f, &params).unwrap();
        let fine = BohrPartition::new(g.clone(), s.clone(), 8).unwrap().partition().unwrap();
        let expected = l2_distance(f.values(), &fine.average(f.values()));
        assert!(r.coarse_deviation < 1e-12);
        assert!((r.fine_deviation - expected).abs() < 1e-12);
    }
}
