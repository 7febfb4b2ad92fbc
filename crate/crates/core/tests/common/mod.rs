//! Brute-force references shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cornerlab::corners::PlaneSet;
use cornerlab::GroupSpec;

pub fn coords(g: &GroupSpec, mut i: usize) -> Vec<u64> {
    let mut c = vec![0; g.rank()];
    for (slot, &n) in c.iter_mut().zip(g.moduli()).rev() {
        *slot = (i % n as usize) as u64;
        i /= n as usize;
    }
    c
}

pub fn index(g: &GroupSpec, c: &[u64]) -> usize {
    c.iter().zip(g.moduli()).fold(0, |acc, (&x, &n)| acc * n as usize + (x % n) as usize)
}

pub fn add(g: &GroupSpec, a: usize, b: usize) -> usize {
    let (x, y) = (coords(g, a), coords(g, b));
    let s: Vec<u64> = x.iter().zip(&y).map(|(p, q)| p + q).collect();
    index(g, &s)
}

pub fn neg(g: &GroupSpec, a: usize) -> usize {
    let n: Vec<u64> = coords(g, a).iter().zip(g.moduli()).map(|(&x, &m)| (m - x) % m).collect();
    index(g, &n)
}

/// `N(d)` by the triple loop over `(x, y, d)`.
pub fn naive_profile(a: &PlaneSet) -> Vec<u64> {
    let g = a.group();
    let n = a.side();
    let mut out = vec![0; n];
    for (d, slot) in out.iter_mut().enumerate() {
        for x in 0..n {
            for y in 0..n {
                if a.contains(x, y) && a.contains(x, add(g, y, d)) && a.contains(add(g, x, d), y) {
                    *slot += 1;
                }
            }
        }
    }
    out
}

/// `(1/|G|) sum_x f(x) e(-sum_j xi_j x_j / n_j)` with floating phases.
pub fn naive_dft(g: &GroupSpec, f: &[f64]) -> Vec<Complex64> {
    let n = g.size();
    (0..n)
        .map(|k| {
            let xi = coords(g, k);
            let mut acc = Complex64::new(0.0, 0.0);
            for (x, &v) in f.iter().enumerate() {
                let c = coords(g, x);
                let t: f64 = xi.iter().zip(&c).zip(g.moduli()).map(|((a, b), &m)| (a * b % m) as f64 / m as f64).sum();
                acc += Complex64::from_polar(v, -2.0 * PI * t);
            }
            acc / n as f64
        })
        .collect()
}

/// `||xi(x)|| < num/den` using exact integers over the lcm of the moduli.
pub fn naive_bohr_member(g: &GroupSpec, freqs: &[Vec<u64>], x: usize, num: u64, den: u64) -> bool {
    let l = g.moduli().iter().fold(1u64, |a, &b| a / gcd(a, b) * b);
    let c = coords(g, x);
    freqs.iter().all(|xi| {
        let p = xi.iter().zip(&c).zip(g.moduli()).map(|((a, b), &m)| a * b % m * (l / m)).sum::<u64>() % l;
        let dist = p.min(l - p);
        (dist as u128) * (den as u128) < (num as u128) * (l as u128)
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Valid corners `(x, y), (x, y + d), (x + d, y)` inside `[0, n)^2`.
pub fn naive_integer_count(a: &PlaneSet, d: i64) -> u64 {
    let n = a.side() as i64;
    let inside = |v: i64| (0..n).contains(&v);
    let mut c = 0;
    for x in 0..n {
        for y in 0..n {
            if inside(y + d) && inside(x + d) {
                let (xu, yu) = (x as usize, y as usize);
                if a.contains(xu, yu) && a.contains(xu, (y + d) as usize) && a.contains((x + d) as usize, yu) {
                    c += 1;
                }
            }
        }
    }
    c
}

/// `T` summed directly over `(i, j, k)` and the three inner fibers, with no
/// intermediate tables.
pub fn naive_t(w: &[Vec<f64>; 3], v: &[f64]) -> f64 {
    let (nx, ny, nz) = (w[0].len(), w[1].len(), w[2].len());
    let at = |i: usize, j: usize, k: usize| v[(i * ny + j) * nz + k];
    let mut t = 0.0;
    for i in 0..nx {
        for j in 0..ny {
            for k in 0..nz {
                let f: f64 = (0..nz).map(|kk| w[2][kk] * at(i, j, kk)).sum();
                let g: f64 = (0..ny).map(|jj| w[1][jj] * at(i, jj, k)).sum();
                let h: f64 = (0..nx).map(|ii| w[0][ii] * at(ii, j, k)).sum();
                t += w[0][i] * w[1][j] * w[2][k] * f * g * h;
            }
        }
    }
    t
}

/// `max over S, T of |E_{x,y} F(x,y) 1_S(x) 1_T(y)|`: every row selector `S`
/// is enumerated, and for fixed `S` the best `T` keeps the columns whose sum
/// has the sign being maximized.
pub fn brute_cut_norm(values: &[f64], n: usize) -> f64 {
    let mut best: f64 = 0.0;
    let mut cols = vec![0.0; n];
    for s in 0u32..(1 << n) {
        cols.iter_mut().for_each(|c| *c = 0.0);
        for x in (0..n).filter(|x| s >> x & 1 == 1) {
            for (c, v) in cols.iter_mut().zip(&values[x * n..(x + 1) * n]) {
                *c += v;
            }
        }
        let pos: f64 = cols.iter().filter(|&&c| c > 0.0).sum();
        let neg: f64 = cols.iter().filter(|&&c| c < 0.0).sum();
        best = best.max(pos).max(-neg);
    }
    best / (n * n) as f64
}

/// `mu(V ∩ P)` and `mu(V ∩ A)` by scanning every triple with `x + y + z = 0`.
pub fn hyperplane_masses(a: &PlaneSet, labels: &[usize], (b, c, d): (usize, usize, usize)) -> (f64, f64) {
    let g = a.group();
    let n = a.side();
    let (mut plane, mut set) = (0u64, 0u64);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if add(g, add(g, x, y), z) != 0 {
                    continue;
                }
                if labels[x] == b && labels[y] == c && labels[z] == d {
                    plane += 1;
                    if a.contains(x, y) {
                        set += 1;
                    }
                }
            }
        }
    }
    let scale = (n * n) as f64;
    (plane as f64 / scale, set as f64 / scale)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_values(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.random::<f64>()).collect()
}
