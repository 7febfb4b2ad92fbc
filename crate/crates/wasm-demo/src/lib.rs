//! Browser bindings for three small views: the variational curve, a Bohr set
//! and the corner profile of a random set. Each call returns a JSON string
//! that `www/index.html` draws on a canvas.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use cornerlab::bohr::{covering_number, volume_lower_bound, BohrSet};
use cornerlab::corners::{corner_count_by_difference, PlaneSet};
use cornerlab::rational::parse_rational;
use cornerlab::variational::{sweep_and_envelope, MinimizeOptions};
use cornerlab::{Character, GroupSpec};

/// Largest group drawn by the demo.
pub const DEMO_CAP: u64 = 1 << 10;

#[derive(Serialize)]
struct Curve {
    alpha: Vec<f64>,
    m_hat: Vec<f64>,
    envelope: Vec<f64>,
}

#[derive(Serialize)]
struct BohrView {
    moduli: Vec<u64>,
    members: Vec<bool>,
    measure: f64,
    /// `N^{-|S|}`, or null when the radius exceeds 1/2.
    volume_bound: Option<f64>,
    covering_number: u64,
}

#[derive(Serialize)]
struct Profile {
    side: usize,
    set: Vec<u8>,
    counts: Vec<u64>,
    d_star: usize,
    count: u64,
    alpha: f64,
    alpha3_g2: f64,
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn small_group(spec: &str) -> Result<GroupSpec, String> {
    let g: GroupSpec = spec.parse().map_err(err)?;
    if g.order() > DEMO_CAP {
        return Err(format!("the demo draws groups of order at most {DEMO_CAP}"));
    }
    Ok(g)
}

pub fn variational_curve_json(n: usize, restarts: usize, samples: usize, seed: u64) -> Result<String, String> {
    if !(2..=8).contains(&n) || !(2..=41).contains(&samples) || !(1..=16).contains(&restarts) {
        return Err("keep 2 <= n <= 8, 2 <= samples <= 41 and 1 <= restarts <= 16".into());
    }
    let alphas: Vec<f64> = (0..samples).map(|i| i as f64 / (samples - 1) as f64).collect();
    let opts = MinimizeOptions { restarts, seed, max_iter: 2_000, ..Default::default() };
    let sweep = sweep_and_envelope(&alphas, n, &opts).map_err(err)?;
    let curve =
        Curve { alpha: alphas, m_hat: sweep.minima.iter().map(|m| m.t).collect(), envelope: sweep.envelope.values() };
    serde_json::to_string(&curve).map_err(err)
}

/// `freqs` lists characters separated by `;`, coordinates by `,`
/// (for example `1,0;0,2`).
pub fn bohr_set_view_json(group: &str, freqs: &str, radius: &str) -> Result<String, String> {
    let g = small_group(group)?;
    let chars = freqs
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let coeffs = s
                .split(',')
                .map(|c| c.trim().parse::<u64>().map_err(|_| format!("bad coefficient {c:?}")))
                .collect::<Result<Vec<_>, _>>()?;
            g.character(coeffs).map_err(err)
        })
        .collect::<Result<Vec<Character>, String>>()?;
    let rho = parse_rational(radius).map_err(err)?;
    let s = chars.len();
    let set = BohrSet::new(g.clone(), chars, rho).map_err(err)?;
    let view = BohrView {
        moduli: g.moduli().to_vec(),
        members: set.members().map_err(err)?,
        measure: set.measure().map_err(err)?,
        volume_bound: volume_lower_bound(s, rho).ok(),
        covering_number: covering_number(rho),
    };
    serde_json::to_string(&view).map_err(err)
}

pub fn corner_profile_json(group: &str, density: f64, seed: u64) -> Result<String, String> {
    let g = small_group(group)?;
    if g.order() < 2 {
        return Err("the trivial group has no nonzero difference".into());
    }
    let a = PlaneSet::random(&g, density, seed).map_err(err)?;
    let profile = corner_count_by_difference(&a).map_err(err)?;
    let (d_star, count) = profile.popular().map_err(err)?;
    let alpha = a.density();
    let out = Profile {
        side: a.side(),
        set: a.to_dense().iter().map(|&v| v as u8).collect(),
        counts: profile.counts().to_vec(),
        d_star,
        count,
        alpha,
        alpha3_g2: alpha.powi(3) * (g.order() as f64).powi(2),
    };
    serde_json::to_string(&out).map_err(err)
}

#[wasm_bindgen]
pub fn variational_curve(n: usize, restarts: usize, samples: usize, seed: u64) -> Result<String, JsError> {
    variational_curve_json(n, restarts, samples, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn bohr_set_view(group: &str, freqs: &str, radius: &str) -> Result<String, JsError> {
    bohr_set_view_json(group, freqs, radius).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn corner_profile(group: &str, density: f64, seed: u64) -> Result<String, JsError> {
    corner_profile_json(group, density, seed).map_err(|e| JsError::new(&e))
}
