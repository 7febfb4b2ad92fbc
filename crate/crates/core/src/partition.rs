//! Partitions of the element indices `0..|G|` and the averaging projections
//! `f|_P` (on `G`) and `f|_{P x P}` (on `G x G`).

use std::collections::HashMap;
use std::hash::Hash;

/// Parts are numbered in order of first appearance of their smallest element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    part_of: Vec<usize>,
    sizes: Vec<usize>,
}

impl Partition {
    pub fn trivial(n: usize) -> Self {
        Partition { part_of: vec![0; n], sizes: if n > 0 { vec![n] } else { vec![] } }
    }

    pub fn discrete(n: usize) -> Self {
        Partition { part_of: (0..n).collect(), sizes: vec![1; n] }
    }

    /// Groups elements by equal key.
    pub fn from_keys<K: Hash + Eq>(keys: impl IntoIterator<Item = K>) -> Self {
        let mut ids: HashMap<K, usize> = HashMap::new();
        let mut part_of = Vec::new();
        let mut sizes = Vec::new();
        for key in keys {
            let next = ids.len();
            let id = *ids.entry(key).or_insert(next);
            if id == sizes.len() {
                sizes.push(0);
            }
            sizes[id] += 1;
            part_of.push(id);
        }
        Partition { part_of, sizes }
    }

    pub fn len(&self) -> usize {
        self.part_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.part_of.is_empty()
    }

    pub fn num_parts(&self) -> usize {
        self.sizes.len()
    }

    pub fn part_of(&self, x: usize) -> usize {
        self.part_of[x]
    }

    pub fn labels(&self) -> &[usize] {
        &self.part_of
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_parts()];
        for (x, &p) in self.part_of.iter().enumerate() {
            out[p].push(x);
        }
        out
    }

    pub fn is_discrete(&self) -> bool {
        self.num_parts() == self.len()
    }

    /// Common refinement `self ∩ other`.
    pub fn meet(&self, other: &Partition) -> Partition {
        assert_eq!(self.len(), other.len(), "partitions of different sets");
        Partition::from_keys(self.part_of.iter().zip(&other.part_of).map(|(a, b)| (*a, *b)))
    }

    /// Splits every part by membership in `subset`.
    pub fn split_by(&self, subset: &[bool]) -> Partition {
        assert_eq!(self.len(), subset.len());
        Partition::from_keys(self.part_of.iter().zip(subset).map(|(a, b)| (*a, *b)))
    }

    pub fn refines(&self, coarser: &Partition) -> bool {
        let mut image = vec![usize::MAX; self.num_parts()];
        for (&p, &q) in self.part_of.iter().zip(&coarser.part_of) {
            if image[p] == usize::MAX {
                image[p] = q;
            } else if image[p] != q {
                return false;
            }
        }
        true
    }

    /// Per-part means of `values`.
    pub fn part_means(&self, values: &[f64]) -> Vec<f64> {
        let mut sums = vec![0.0; self.num_parts()];
        for (v, &p) in values.iter().zip(&self.part_of) {
            sums[p] += v;
        }
        sums.iter().zip(&self.sizes).map(|(s, &n)| s / n as f64).collect()
    }

    /// `f|_P`: each value replaced by its part mean.
    pub fn average(&self, values: &[f64]) -> Vec<f64> {
        assert_eq!(values.len(), self.len());
        let means = self.part_means(values);
        self.part_of.iter().map(|&p| means[p]).collect()
    }

    /// Block means of a row-major `n x n` array over `P x P`, as a
    /// `num_parts x num_parts` row-major table.
    pub fn block_means(&self, values: &[f64]) -> Vec<f64> {
        let n = self.len();
        let k = self.num_parts();
        assert_eq!(values.len(), n * n);
        let mut sums = vec![0.0; k * k];
        for x in 0..n {
            let px = self.part_of[x] * k;
            let row = &values[x * n..(x + 1) * n];
            for (y, v) in row.iter().enumerate() {
                sums[px + self.part_of[y]] += v;
            }
        }
        for p in 0..k {
            for q in 0..k {
                sums[p * k + q] /= (self.sizes[p] * self.sizes[q]) as f64;
            }
        }
        sums
    }

    /// `f|_{P x P}` on a row-major `n x n` array.
    pub fn average_2d(&self, values: &[f64]) -> Vec<f64> {
        let n = self.len();
        let k = self.num_parts();
        let means = self.block_means(values);
        let mut out = Vec::with_capacity(n * n);
        for x in 0..n {
            let px = self.part_of[x] * k;
            out.extend((0..n).map(|y| means[px + self.part_of[y]]));
        }
        out
    }
}

/// Mean-normalized `L^2` distance between two arrays of equal length.
pub fn l2_distance(a: &[f64], b: &[f64]) -> f64 {
    let s: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (s / a.len() as f64).sqrt()
}

/// Mean-normalized inner product.
pub fn inner(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / a.len() as f64
}
