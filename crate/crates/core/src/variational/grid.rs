use crate::error::{Error, Result};

const WEIGHT_TOLERANCE: f64 = 1e-12;

/// `phi(i, j, k)` on a product of three finite probability spaces, stored
/// with `k` fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    weights: [Vec<f64>; 3],
    values: Vec<f64>,
}

fn check_weights(w: &[f64]) -> Result<()> {
    if w.is_empty() || w.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
        return Err(Error::invalid("axis weights must be nonnegative and nonempty"));
    }
    let s: f64 = w.iter().sum();
    if (s - 1.0).abs() > WEIGHT_TOLERANCE {
        return Err(Error::invalid(format!("axis weights sum to {s}, not 1")));
    }
    Ok(())
}

pub fn uniform_weights(n: usize) -> Vec<f64> {
    vec![1.0 / n as f64; n]
}

impl GridFunction {
    pub fn new(weights: [Vec<f64>; 3], values: Vec<f64>) -> Result<Self> {
        weights.iter().try_for_each(|w| check_weights(w))?;
        let len = weights.iter().map(Vec::len).product::<usize>();
        if values.len() != len {
            return Err(Error::SpecMismatch(format!("{} values for a grid of {len} cells", values.len())));
        }
        if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::invalid("grid values must lie in [0, 1]"));
        }
        Ok(GridFunction { weights, values })
    }

    /// `n x n x n` grid with uniform weights.
    pub fn uniform(n: usize, values: Vec<f64>) -> Result<Self> {
        Self::new([uniform_weights(n), uniform_weights(n), uniform_weights(n)], values)
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        Self::uniform(n, vec![c; n * n * n])
    }

    pub fn dims(&self) -> [usize; 3] {
        [self.weights[0].len(), self.weights[1].len(), self.weights[2].len()]
    }

    pub fn weights(&self) -> &[Vec<f64>; 3] {
        &self.weights
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Product weight of each cell.
    pub fn cell_weights(&self) -> Vec<f64> {
        let [wx, wy, wz] = &self.weights;
        let mut out = Vec::with_capacity(self.values.len());
        for a in wx {
            for b in wy {
                out.extend(wz.iter().map(|c| a * b * c));
            }
        }
        out
    }

    pub fn mean(&self) -> f64 {
        self.cell_weights().iter().zip(&self.values).map(|(w, v)| w * v).sum()
    }

    pub(crate) fn with_values(&self, values: Vec<f64>) -> GridFunction {
        GridFunction { weights: self.weights.clone(), values }
    }

    /// The three conditional expectations `F(i,j) = E(phi | X, Y)`,
    /// `G(i,k) = E(phi | X, Z)`, `H(j,k) = E(phi | Y, Z)`.
    fn marginals(&self) -> [Vec<f64>; 3] {
        let [nx, ny, nz] = self.dims();
        let [wx, wy, wz] = &self.weights;
        let mut f = vec![0.0; nx * ny];
        let mut g = vec![0.0; nx * nz];
        let mut h = vec![0.0; ny * nz];
        for i in 0..nx {
            for j in 0..ny {
                let row = &self.values[(i * ny + j) * nz..(i * ny + j + 1) * nz];
                for (k, &v) in row.iter().enumerate() {
                    f[i * ny + j] += wz[k] * v;
                    g[i * nz + k] += wy[j] * v;
                    h[j * nz + k] += wx[i] * v;
                }
            }
        }
        [f, g, h]
    }
}

/// `T(phi) = E[E(phi|X,Y) E(phi|X,Z) E(phi|Y,Z)]`.
#[allow(non_snake_case)]
pub fn evaluate_T(phi: &GridFunction) -> f64 {
    let [nx, ny, nz] = phi.dims();
    let [wx, wy, wz] = &phi.weights;
    let [f, g, h] = phi.marginals();
    let mut t = 0.0;
    for i in 0..nx {
        for j in 0..ny {
            let fij = f[i * ny + j];
            if fij == 0.0 {
                continue;
            }
            let mut s = 0.0;
            for k in 0..nz {
                s += wz[k] * g[i * nz + k] * h[j * nz + k];
            }
            t += wx[i] * wy[j] * fij * s;
        }
    }
    t
}

/// The bracket `b(a,b,c)` with `dT/dphi(a,b,c) = w(a,b,c) b(a,b,c)`; this is
/// the gradient for the `w`-weighted inner product.
pub(crate) fn bracket(phi: &GridFunction) -> Vec<f64> {
    let [nx, ny, nz] = phi.dims();
    let [wx, wy, wz] = &phi.weights;
    let [f, g, h] = phi.marginals();
    // p(a,b) = sum_k wz G(a,k) H(b,k); q(a,c) = sum_j wy F(a,j) H(j,c);
    // r(b,c) = sum_i wx F(i,b) G(i,c).
    let mut p = vec![0.0; nx * ny];
    let mut q = vec![0.0; nx * nz];
    let mut r = vec![0.0; ny * nz];
    for a in 0..nx {
        for b in 0..ny {
            p[a * ny + b] = (0..nz).map(|k| wz[k] * g[a * nz + k] * h[b * nz + k]).sum();
        }
        for c in 0..nz {
            q[a * nz + c] = (0..ny).map(|j| wy[j] * f[a * ny + j] * h[j * nz + c]).sum();
        }
    }
    for b in 0..ny {
        for c in 0..nz {
            r[b * nz + c] = (0..nx).map(|i| wx[i] * f[i * ny + b] * g[i * nz + c]).sum();
        }
    }
    let mut out = Vec::with_capacity(nx * ny * nz);
    for a in 0..nx {
        for b in 0..ny {
            for c in 0..nz {
                out.push(p[a * ny + b] + q[a * nz + c] + r[b * nz + c]);
            }
        }
    }
    out
}

/// `dT / dphi(a,b,c)` with respect to the raw cell values.
#[allow(non_snake_case)]
pub fn gradient_T(phi: &GridFunction) -> Vec<f64> {
    bracket(phi).iter().zip(phi.cell_weights()).map(|(b, w)| b * w).collect()
}

/// Block-constant lift to a grid with every axis cell split in two (uniform
/// weights halve). `T` and the mean are unchanged.
pub fn refine_grid(phi: &GridFunction) -> GridFunction {
    let [nx, ny, nz] = phi.dims();
    let split = |w: &Vec<f64>| w.iter().flat_map(|&v| [v / 2.0, v / 2.0]).collect::<Vec<_>>();
    let weights = [split(&phi.weights[0]), split(&phi.weights[1]), split(&phi.weights[2])];
    let mut values = Vec::with_capacity(8 * phi.values.len());
    for i in 0..2 * nx {
        for j in 0..2 * ny {
            for k in 0..2 * nz {
                values.push(phi.values[((i / 2) * ny + j / 2) * nz + k / 2]);
            }
        }
    }
    GridFunction { weights, values }
}
