use std::fmt::Write as _;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::bits;
use crate::error::{check_cap, Error, Result};
use crate::group::GroupSpec;

/// Largest `|G|` for which a `|G| x |G|` bit matrix is materialized.
pub const PLANE_CAP: u64 = 1 << 14;

/// A subset `A` of `G x G` as one bit row per `x`, indexed by `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneSet {
    group: GroupSpec,
    words: usize,
    bits: Vec<u64>,
    len: u64,
}

impl PlaneSet {
    pub fn empty(group: &GroupSpec) -> Result<Self> {
        check_cap("group order for a plane set", PLANE_CAP, group.order())?;
        let words = bits::words_for(group.size());
        Ok(PlaneSet { group: group.clone(), words, bits: vec![0; words * group.size()], len: 0 })
    }

    pub fn full(group: &GroupSpec) -> Result<Self> {
        Self::from_fn(group, |_, _| true)
    }

    pub fn from_fn(group: &GroupSpec, mut f: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let mut a = Self::empty(group)?;
        let n = group.size();
        for x in 0..n {
            for y in 0..n {
                if f(x, y) {
                    a.insert(x, y);
                }
            }
        }
        Ok(a)
    }

    /// Bernoulli(`density`) cells from a ChaCha8 stream seeded with `seed`.
    ///
    /// Cells are visited row by row (`x` outer, `y` inner). Each draws one
    /// `u64`, keeps its top 53 bits as `u = (w >> 11) * 2^-53`, and is in the
    /// set iff `u < density`.
    pub fn random(group: &GroupSpec, density: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&density) {
            return Err(Error::invalid(format!("density must lie in [0, 1], got {density}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::from_fn(group, |_, _| unit_draw(&mut rng) < density)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    /// `|G|`.
    pub fn side(&self) -> usize {
        self.group.size()
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn density(&self) -> f64 {
        let n = self.group.order() as f64;
        self.len as f64 / (n * n)
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        bits::get(self.row(x), y)
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        if !self.contains(x, y) {
            let w = self.words;
            bits::set(&mut self.bits[x * w..(x + 1) * w], y);
            self.len += 1;
        }
    }

    pub fn remove(&mut self, x: usize, y: usize) {
        if self.contains(x, y) {
            let w = self.words;
            bits::clear(&mut self.bits[x * w..(x + 1) * w], y);
            self.len -= 1;
        }
    }

    pub(crate) fn words(&self) -> usize {
        self.words
    }

    pub(crate) fn row(&self, x: usize) -> &[u64] {
        &self.bits[x * self.words..(x + 1) * self.words]
    }

    pub fn points(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.side()).flat_map(move |x| bits::ones(self.row(x)).map(move |y| (x, y)))
    }

    /// `{(y, x) : (x, y) in A}`.
    pub fn transpose(&self) -> PlaneSet {
        let mut t = PlaneSet { bits: vec![0; self.bits.len()], len: 0, ..self.clone() };
        for (x, y) in self.points() {
            t.insert(y, x);
        }
        t
    }

    /// Row-major 0/1 values.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.side();
        let mut out = vec![0.0; n * n];
        for (x, y) in self.points() {
            out[x * n + y] = 1.0;
        }
        out
    }

    /// Header `group <spec> density <alpha>` then one `0`/`1` line per row.
    pub fn to_text(&self) -> String {
        let n = self.side();
        let mut s = String::with_capacity(n * (n + 1) + 64);
        writeln!(s, "group {} density {}", self.group, self.density()).unwrap();
        for x in 0..n {
            s.extend((0..n).map(|y| if self.contains(x, y) { '1' } else { '0' }));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty plane set file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let (group, density) = match fields.as_slice() {
            ["group", spec, "density", alpha] => (
                spec.parse::<GroupSpec>()?,
                alpha.parse::<f64>().map_err(|_| Error::Parse(format!("bad density {alpha:?}")))?,
            ),
            _ => return Err(Error::Parse(format!("bad header {header:?}"))),
        };
        let mut a = Self::empty(&group)?;
        let n = group.size();
        let mut rows = 0;
        for (x, line) in lines.enumerate() {
            let line = line.trim();
            if x >= n || line.len() != n {
                return Err(Error::Parse(format!("row {x} is not a line of {n} cells")));
            }
            for (y, c) in line.chars().enumerate() {
                match c {
                    '1' => a.insert(x, y),
                    '0' => {}
                    _ => return Err(Error::Parse(format!("bad cell {c:?} in row {x}"))),
                }
            }
            rows += 1;
        }
        if rows != n {
            return Err(Error::Parse(format!("expected {n} rows, found {rows}")));
        }
        if (a.density() - density).abs() > 1e-9 {
            return Err(Error::Parse(format!("header density {density} does not match the {} cells present", a.len())));
        }
        Ok(a)
    }
}

pub(crate) fn unit_draw(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
