//! Fourier analysis on a finite abelian group with the integral convention:
//! transforms average over the group and inverse transforms sum over the dual.
//!
//! `f^(xi) = (1/|G|) sum_x f(x) e(-xi(x))`, `f(x) = sum_xi f^(xi) e(xi(x))`,
//! `(f * g)(x) = (1/|G|) sum_y f(y) g(x - y)`, so `(f * g)^ = f^ g^` and
//! `||f||_{L^2} = ||f^||_{l^2}`.

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use crate::error::{check_cap, Error, Result};
use crate::group::{Character, GroupSpec};

pub const DEFAULT_TRANSFORM_CAP: u64 = 1 << 20;

/// A real function on `G`, indexed by element index.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityFunction {
    group: GroupSpec,
    values: Vec<f64>,
}

/// Fourier coefficients indexed by character index (same mixed radix as `G`).
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    group: GroupSpec,
    coeffs: Vec<Complex64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Norm {
    L1,
    L2,
    Sup,
}

impl Norm {
    pub fn from_exponent(p: f64) -> Result<Self> {
        match p {
            p if p == 1.0 => Ok(Norm::L1),
            p if p == 2.0 => Ok(Norm::L2),
            p if p == f64::INFINITY => Ok(Norm::Sup),
            _ => Err(Error::invalid(format!("unsupported norm exponent {p}"))),
        }
    }
}

impl DensityFunction {
    pub fn new(group: GroupSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != group.size() {
            return Err(Error::SpecMismatch(format!("{} values for a group of order {}", values.len(), group.order())));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("function values must be finite"));
        }
        Ok(DensityFunction { group, values })
    }

    pub fn constant(group: &GroupSpec, c: f64) -> Self {
        DensityFunction { group: group.clone(), values: vec![c; group.size()] }
    }

    pub fn indicator(group: &GroupSpec, members: &[bool]) -> Result<Self> {
        let values = members.iter().map(|&m| if m { 1.0 } else { 0.0 }).collect();
        Self::new(group.clone(), values)
    }

    /// `mu_X = 1_X / mu(X)`, which has mean 1.
    pub fn normalized_indicator(group: &GroupSpec, members: &[bool]) -> Result<Self> {
        let count = members.iter().filter(|&&m| m).count();
        if count == 0 {
            return Err(Error::invalid("cannot normalize the indicator of an empty set"));
        }
        let scale = group.size() as f64 / count as f64;
        let values = members.iter().map(|&m| if m { scale } else { 0.0 }).collect();
        Self::new(group.clone(), values)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    fn check_same(&self, other: &GroupSpec) -> Result<()> {
        if &self.group != other {
            return Err(Error::SpecMismatch(format!("{} vs {}", self.group, other)));
        }
        Ok(())
    }
}

impl Spectrum {
    pub fn new(group: GroupSpec, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != group.size() {
            return Err(Error::SpecMismatch(format!(
                "{} coefficients for a group of order {}",
                coeffs.len(),
                group.order()
            )));
        }
        Ok(Spectrum { group, coeffs })
    }

    pub fn zero(group: &GroupSpec) -> Self {
        Spectrum { group: group.clone(), coeffs: vec![Complex64::new(0.0, 0.0); group.size()] }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// `sup_xi |F(xi)|`.
    pub fn sup_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Runs a 1-D transform along every axis of the mixed-radix layout.
fn transform_axes(group: &GroupSpec, data: &mut [Complex64], direction: FftDirection) {
    let mut planner = FftPlanner::<f64>::new();
    let moduli = group.moduli();
    let mut stride = 1usize;
    let mut line = Vec::new();
    for &n in moduli.iter().rev() {
        let n = n as usize;
        if n > 1 {
            let fft = planner.plan_fft(n, direction);
            line.resize(n, Complex64::new(0.0, 0.0));
            let block = n * stride;
            for start in (0..data.len()).step_by(block) {
                for offset in 0..stride {
                    let base = start + offset;
                    for (t, slot) in line.iter_mut().enumerate() {
                        *slot = data[base + t * stride];
                    }
                    fft.process(&mut line);
                    for (t, v) in line.iter().enumerate() {
                        data[base + t * stride] = *v;
                    }
                }
            }
        }
        stride *= n;
    }
}

pub fn dft(f: &DensityFunction) -> Result<Spectrum> {
    dft_with_cap(f, DEFAULT_TRANSFORM_CAP)
}

pub fn dft_with_cap(f: &DensityFunction, cap: u64) -> Result<Spectrum> {
    check_cap("group order for transform", cap, f.group.order())?;
    let mut data: Vec<Complex64> = f.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    transform_axes(&f.group, &mut data, FftDirection::Forward);
    let scale = 1.0 / f.group.order() as f64;
    data.iter_mut().for_each(|c| *c *= scale);
    Ok(Spectrum { group: f.group.clone(), coeffs: data })
}

/// Complex-valued inverse transform `sum_xi F(xi) e(xi(x))`.
pub fn inverse_dft_complex(spec: &Spectrum) -> Result<Vec<Complex64>> {
    check_cap("group order for transform", DEFAULT_TRANSFORM_CAP, spec.group.order())?;
    let mut data = spec.coeffs.clone();
    transform_axes(&spec.group, &mut data, FftDirection::Inverse);
    Ok(data)
}

/// Inverse transform, keeping the real part.
pub fn inverse_dft(spec: &Spectrum) -> Result<DensityFunction> {
    let data = inverse_dft_complex(spec)?;
    DensityFunction::new(spec.group.clone(), data.iter().map(|c| c.re).collect())
}

/// Direct `O(|G|^2)` evaluation of the transform, using exact character phases.
/// Kept as the reference the factored transform is checked against.
pub fn dft_direct(f: &DensityFunction) -> Result<Spectrum> {
    let g = &f.group;
    let l = g.exponent() as f64;
    let mut coeffs = Vec::with_capacity(g.size());
    for k in 0..g.size() {
        let phases = g.phase_table(&g.character_at(k))?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (v, p) in f.values.iter().zip(&phases) {
            let angle = -2.0 * std::f64::consts::PI * (*p as f64 / l);
            acc += Complex64::from_polar(*v, angle);
        }
        coeffs.push(acc / g.order() as f64);
    }
    Spectrum::new(g.clone(), coeffs)
}

pub fn convolve(f: &DensityFunction, g: &DensityFunction) -> Result<DensityFunction> {
    f.check_same(&g.group)?;
    let mut fh = dft(f)?;
    let gh = dft(g)?;
    fh.coeffs.iter_mut().zip(&gh.coeffs).for_each(|(a, b)| *a *= b);
    inverse_dft(&fh)
}

/// `{xi : |f^(xi)| >= theta}` in character-index order.
pub fn large_spectrum(f: &DensityFunction, theta: f64) -> Result<Vec<Character>> {
    if !(theta > 0.0) {
        return Err(Error::invalid(format!("threshold must be positive, got {theta}")));
    }
    let spec = dft(f)?;
    let chosen = large_spectrum_indices(&spec, theta);
    let energy = lp_norm(f, Norm::L2).powi(2);
    let bound = energy / (theta * theta);
    if chosen.len() as f64 > bound * (1.0 + 1e-9) + 1e-9 {
        return Err(Error::Assertion(format!(
            "large spectrum has {} characters, Plancherel allows {bound}",
            chosen.len()
        )));
    }
    Ok(chosen.into_iter().map(|k| f.group.character_at(k)).collect())
}

pub(crate) fn large_spectrum_indices(spec: &Spectrum, theta: f64) -> Vec<usize> {
    spec.coeffs.iter().enumerate().filter(|(_, c)| c.norm() >= theta).map(|(k, _)| k).collect()
}

/// Mean-normalized `L^p` norm on `G`.
pub fn lp_norm(f: &DensityFunction, p: Norm) -> f64 {
    let n = f.values.len() as f64;
    match p {
        Norm::L1 => f.values.iter().map(|v| v.abs()).sum::<f64>() / n,
        Norm::L2 => (f.values.iter().map(|v| v * v).sum::<f64>() / n).sqrt(),
        Norm::Sup => f.values.iter().map(|v| v.abs()).fold(0.0, f64::max),
    }
}

/// Sum-normalized `l^p` norm on the dual group.
pub fn lp_dual_norm(spec: &Spectrum, p: Norm) -> f64 {
    match p {
        Norm::L1 => spec.coeffs.iter().map(|c| c.norm()).sum(),
        Norm::L2 => spec.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt(),
        Norm::Sup => spec.sup_abs(),
    }
}
