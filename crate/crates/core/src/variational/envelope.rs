use serde::Serialize;

use super::solve::{minimize_T, MinimizeOptions, Minimum};
use crate::error::{Error, Result};
use crate::par::map_range;

/// Samples `(alpha, m_hat)` and their lower convex envelope.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnvelopePoints {
    samples: Vec<(f64, f64)>,
    hull: Vec<(f64, f64)>,
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

impl EnvelopePoints {
    /// Lower hull of the samples by the monotone chain.
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::invalid("the envelope needs at least two samples"));
        }
        if samples.iter().any(|(a, m)| !a.is_finite() || !m.is_finite()) {
            return Err(Error::invalid("envelope samples must be finite"));
        }
        if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::invalid("envelope samples must have strictly increasing alpha"));
        }
        let mut hull: Vec<(f64, f64)> = Vec::new();
        for &p in &samples {
            while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        Ok(EnvelopePoints { samples, hull })
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn hull(&self) -> &[(f64, f64)] {
        &self.hull
    }

    /// The minorant at `alpha`, by linear interpolation between hull vertices.
    /// `None` outside the sampled range.
    pub fn eval(&self, alpha: f64) -> Option<f64> {
        let (first, last) = (self.hull[0], self.hull[self.hull.len() - 1]);
        if !(first.0..=last.0).contains(&alpha) {
            return None;
        }
        let k = self.hull.partition_point(|p| p.0 < alpha);
        let b = self.hull[k];
        if b.0 == alpha {
            return Some(b.1);
        }
        let a = self.hull[k - 1];
        let s = (alpha - a.0) / (b.0 - a.0);
        Some(a.1 + s * (b.1 - a.1))
    }

    /// The minorant at every sample.
    pub fn values(&self) -> Vec<f64> {
        self.samples.iter().map(|&(a, _)| self.eval(a).expect("sample inside its own range")).collect()
    }

    pub fn slopes(&self) -> Vec<f64> {
        self.hull.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct Sweep {
    pub n: usize,
    pub minima: Vec<Minimum>,
    pub envelope: EnvelopePoints,
    /// Samples whose estimate was improved by the monotone repair pass.
    pub repaired: Vec<usize>,
}

/// `minimize_T` at every alpha, then a backward pass that restarts any sample
/// with `m_hat(alpha_s) > m_hat(alpha_{s+1})` from the scaled minimizer of
/// `alpha_{s+1}`, and finally the lower convex envelope.
pub fn sweep_and_envelope(alphas: &[f64], n: usize, opts: &MinimizeOptions) -> Result<Sweep> {
    if alphas.len() < 2 {
        return Err(Error::invalid("a sweep needs at least two alpha samples"));
    }
    if alphas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("alpha samples must be strictly increasing"));
    }
    let mut minima =
        map_range(alphas.len(), |s| minimize_T(alphas[s], n, opts)).into_iter().collect::<Result<Vec<_>>>()?;
    let mut repaired = Vec::new();
    for s in (0..alphas.len() - 1).rev() {
        let next = &minima[s + 1];
        if minima[s].t <= next.t || next.alpha == 0.0 {
            continue;
        }
        let scale = alphas[s] / next.alpha;
        let warm: Vec<f64> = next.phi.values().iter().map(|v| v * scale).collect();
        let retry = MinimizeOptions { restarts: 1, warm_starts: vec![warm], ..opts.clone() };
        let m = minimize_T(alphas[s], n, &retry)?;
        if m.t < minima[s].t {
            minima[s] = m;
            repaired.push(s);
        }
    }
    repaired.reverse();
    let envelope = EnvelopePoints::new(minima.iter().map(|m| (m.alpha, m.t)).collect())?;
    Ok(Sweep { n, minima, envelope, repaired })
}
