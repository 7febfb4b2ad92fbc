use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::grid::{bracket, evaluate_T, GridFunction};
use crate::corners::unit_draw;
use crate::error::{Error, Result};
use crate::par::map_range;

pub const DEFAULT_MAX_ITER: usize = 10_000;
pub const DEFAULT_RESTARTS: usize = 8;
const BISECTION_STEPS: usize = 100;
const MEAN_TOLERANCE: f64 = 1e-13;
const MIN_STEP: f64 = 1e-12;
const MIN_MOVE: f64 = 1e-12;

/// Orientations of the slab starts: cells are filled in increasing order of
/// `s . (i, j, k)`.
const SLABS: [[f64; 3]; 4] = [[1.0, 1.0, 1.0], [1.0, 1.0, -1.0], [1.0, -1.0, 1.0], [-1.0, 1.0, 1.0]];

#[derive(Clone, Debug)]
pub struct MinimizeOptions {
    /// Start profiles, in order: constant, three seeded uniforms, four slabs,
    /// then further seeded uniforms.
    pub restarts: usize,
    pub max_iter: usize,
    pub seed: u64,
    pub initial_step: f64,
    /// Extra starting points (raw cell values), tried after the profiles.
    pub warm_starts: Vec<Vec<f64>>,
    /// Keep the accepted `T` values of every run.
    pub trace: bool,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions {
            restarts: DEFAULT_RESTARTS,
            max_iter: DEFAULT_MAX_ITER,
            seed: 0,
            initial_step: 1.0,
            warm_starts: Vec::new(),
            trace: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Minimum {
    pub alpha: f64,
    pub phi: GridFunction,
    /// `T(phi)`, an upper bound on `m(alpha)`.
    pub t: f64,
    /// Index of the winning start.
    pub start: usize,
    pub iterations: usize,
    pub converged: bool,
    pub traces: Vec<Vec<f64>>,
}

/// Nearest point (in the `w`-weighted norm) of `{0 <= phi <= 1, sum w phi = alpha}`:
/// `clip(v - lambda)` with `lambda` from bisection on the weighted mean.
pub fn project(v: &[f64], w: &[f64], alpha: f64) -> Vec<f64> {
    let mean = |lam: f64| -> f64 { v.iter().zip(w).map(|(x, wi)| wi * (x - lam).clamp(0.0, 1.0)).sum() };
    let lo0 = v.iter().cloned().fold(f64::INFINITY, f64::min) - 1.0;
    let hi0 = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let (mut lo, mut hi) = (lo0, hi0);
    let mut lam = 0.5 * (lo + hi);
    for _ in 0..BISECTION_STEPS {
        lam = 0.5 * (lo + hi);
        let m = mean(lam);
        if (m - alpha).abs() <= MEAN_TOLERANCE {
            break;
        }
        if m > alpha {
            lo = lam;
        } else {
            hi = lam;
        }
    }
    // Solve the linear equation on the final active set.
    let (mut free_w, mut free_wv, mut upper) = (0.0, 0.0, 0.0);
    for (x, wi) in v.iter().zip(w) {
        let y = x - lam;
        if y >= 1.0 {
            upper += wi;
        } else if y > 0.0 {
            free_w += wi;
            free_wv += wi * x;
        }
    }
    if free_w > 0.0 {
        let exact = (free_wv + upper - alpha) / free_w;
        if (mean(exact) - alpha).abs() < (mean(lam) - alpha).abs() {
            lam = exact;
        }
    }
    v.iter().map(|x| (x - lam).clamp(0.0, 1.0)).collect()
}

fn start_values(k: usize, template: &GridFunction, alpha: f64, seed: u64) -> Vec<f64> {
    let [nx, ny, nz] = template.dims();
    let len = nx * ny * nz;
    match k {
        0 => vec![alpha; len],
        4..=7 => {
            let s = SLABS[k - 4];
            let w = template.cell_weights();
            let score = |c: usize| {
                let (i, j, l) = (c / (ny * nz), c / nz % ny, c % nz);
                s[0] * (i as f64 + 0.5) / nx as f64
                    + s[1] * (j as f64 + 0.5) / ny as f64
                    + s[2] * (l as f64 + 0.5) / nz as f64
            };
            let mut order: Vec<usize> = (0..len).collect();
            order.sort_by(|&a, &b| score(a).total_cmp(&score(b)).then(a.cmp(&b)));
            let mut vals = vec![0.0; len];
            let mut left = alpha;
            for c in order {
                if left <= 0.0 || w[c] == 0.0 {
                    continue;
                }
                let take = (left / w[c]).min(1.0);
                vals[c] = take;
                left -= take * w[c];
            }
            vals
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            (0..len).map(|_| unit_draw(&mut rng)).collect()
        }
    }
}

struct Run {
    phi: Vec<f64>,
    t: f64,
    iterations: usize,
    converged: bool,
    trace: Vec<f64>,
}

fn descend(template: &GridFunction, start: Vec<f64>, alpha: f64, opts: &MinimizeOptions) -> Run {
    let w = template.cell_weights();
    let mut phi = project(&start, &w, alpha);
    let mut t = evaluate_T(&template.with_values(phi.clone()));
    let mut trace = if opts.trace { vec![t] } else { Vec::new() };
    let mut step = opts.initial_step;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        iterations += 1;
        let b = bracket(&template.with_values(phi.clone()));
        let moved: Vec<f64> = phi.iter().zip(&b).map(|(p, g)| p - step * g).collect();
        let cand = project(&moved, &w, alpha);
        let tc = evaluate_T(&template.with_values(cand.clone()));
        if tc < t {
            let shift = phi.iter().zip(&cand).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            phi = cand;
            t = tc;
            if opts.trace {
                trace.push(t);
            }
            if shift < MIN_MOVE {
                converged = true;
                break;
            }
        } else {
            step *= 0.5;
            if step < MIN_STEP {
                converged = true;
                break;
            }
        }
    }
    Run { phi, t, iterations, converged, trace }
}

/// Multi-start projected gradient descent for `inf { T(phi) : E[phi] = alpha }`
/// on the uniform `n x n x n` grid.
#[allow(non_snake_case)]
pub fn minimize_T(alpha: f64, n: usize, opts: &MinimizeOptions) -> Result<Minimum> {
    if n < 2 {
        return Err(Error::invalid(format!("grid size must be >= 2, got {n}")));
    }
    let template = GridFunction::constant(n, 0.0)?;
    minimize_on(&template, alpha, opts)
}

/// As [`minimize_T`], on the weights of `template`.
pub fn minimize_on(template: &GridFunction, alpha: f64, opts: &MinimizeOptions) -> Result<Minimum> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::invalid(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    if opts.restarts == 0 {
        return Err(Error::invalid("at least one restart (the constant start) is required"));
    }
    let len = template.values().len();
    if let Some(bad) = opts.warm_starts.iter().find(|s| s.len() != len) {
        return Err(Error::SpecMismatch(format!("warm start has {} values, grid has {len}", bad.len())));
    }
    if alpha == 0.0 || alpha == 1.0 {
        // The only feasible point; T is exactly alpha since the weights sum to 1.
        let phi = template.with_values(vec![alpha; len]);
        let traces = if opts.trace { vec![vec![alpha]] } else { Vec::new() };
        return Ok(Minimum { alpha, phi, t: alpha, start: 0, iterations: 0, converged: true, traces });
    }
    let total = opts.restarts + opts.warm_starts.len();
    let runs = map_range(total, |k| {
        let start = if k < opts.restarts {
            start_values(k, template, alpha, opts.seed)
        } else {
            opts.warm_starts[k - opts.restarts].clone()
        };
        descend(template, start, alpha, opts)
    });
    let mut best = 0;
    for (k, r) in runs.iter().enumerate() {
        if r.t < runs[best].t {
            best = k;
        }
    }
    let iterations = runs[best].iterations;
    let converged = runs[best].converged;
    let t = runs[best].t;
    let traces = if opts.trace { runs.iter().map(|r| r.trace.clone()).collect() } else { Vec::new() };
    let phi = template.with_values(runs.into_iter().nth(best).unwrap().phi);

    let (lo, hi) = (alpha.powi(4) - 1e-6, alpha.powi(3) + 1e-9);
    if !(lo..=hi).contains(&t) {
        return Err(Error::Assertion(format!("T = {t} at alpha = {alpha} is outside [alpha^4, alpha^3]")));
    }
    Ok(Minimum { alpha, phi, t, start: best, iterations, converged, traces })
}
