//! Finite abelian groups presented as products of cyclic groups.
//!
//! Elements are stored as residue vectors and enumerated in mixed-radix order
//! with the last coordinate varying fastest, so element `i` and the bit `i` of
//! every row in a [`PlaneSet`](crate::corners::PlaneSet) refer to the same
//! point. Characters are coefficient vectors `a` with
//! `xi(x) = sum a_i x_i / n_i mod 1`; their values are kept as exact numerators
//! over the group exponent `lcm(n_i)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{check_cap, Error, Result};

/// Largest group order accepted by [`GroupSpec::new`].
pub const MAX_ORDER: u64 = 1 << 32;
/// Default cap for materializing every element.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    moduli: Vec<u64>,
    order: u64,
    exponent: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    coords: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    coeffs: Vec<u64>,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl GroupSpec {
    pub fn new(moduli: Vec<u64>) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::invalid("a group needs at least one cyclic factor"));
        }
        let mut order: u64 = 1;
        let mut exponent: u64 = 1;
        for &n in &moduli {
            if n == 0 {
                return Err(Error::invalid("cyclic factor orders must be >= 1"));
            }
            order = order
                .checked_mul(n)
                .filter(|&o| o <= MAX_ORDER)
                .ok_or_else(|| Error::cap("group order", MAX_ORDER, u64::MAX))?;
            exponent = exponent / gcd(exponent, n) * n;
        }
        Ok(GroupSpec { moduli, order, exponent })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// `|G|` as a `usize`, for indexing.
    pub fn size(&self) -> usize {
        self.order as usize
    }

    /// `lcm(n_i)`, the common denominator of every character value.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// True when at most one factor is nontrivial, so the group is `Z_n` with
    /// element index equal to the residue.
    pub fn is_cyclic(&self) -> bool {
        self.moduli.iter().filter(|&&n| n > 1).count() <= 1
    }

    pub fn zero(&self) -> Element {
        Element { coords: vec![0; self.rank()] }
    }

    pub fn element(&self, coords: Vec<u64>) -> Result<Element> {
        let e = Element { coords };
        self.check_element(&e)?;
        Ok(e)
    }

    pub fn character(&self, coeffs: Vec<u64>) -> Result<Character> {
        let c = Character { coeffs };
        self.check_character(&c)?;
        Ok(c)
    }

    pub fn trivial_character(&self) -> Character {
        Character { coeffs: vec![0; self.rank()] }
    }

    pub fn check_element(&self, x: &Element) -> Result<()> {
        self.check_vec(&x.coords, "element")
    }

    pub fn check_character(&self, xi: &Character) -> Result<()> {
        self.check_vec(&xi.coeffs, "character")
    }

    fn check_vec(&self, v: &[u64], what: &str) -> Result<()> {
        if v.len() != self.rank() {
            return Err(Error::SpecMismatch(format!(
                "{what} has {} coordinates, group {self} has rank {}",
                v.len(),
                self.rank()
            )));
        }
        for (c, n) in v.iter().zip(&self.moduli) {
            if c >= n {
                return Err(Error::SpecMismatch(format!("{what} coordinate {c} out of range for Z{n} in {self}")));
            }
        }
        Ok(())
    }

    pub fn add(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check_element(x)?;
        self.check_element(y)?;
        let coords = x.coords.iter().zip(&y.coords).zip(&self.moduli).map(|((a, b), n)| (a + b) % n).collect();
        Ok(Element { coords })
    }

    pub fn neg(&self, x: &Element) -> Result<Element> {
        self.check_element(x)?;
        let coords = x.coords.iter().zip(&self.moduli).map(|(a, n)| (n - a) % n).collect();
        Ok(Element { coords })
    }

    pub fn index_of(&self, x: &Element) -> Result<usize> {
        self.check_element(x)?;
        Ok(self.index_unchecked(&x.coords))
    }

    fn index_unchecked(&self, coords: &[u64]) -> usize {
        coords.iter().zip(&self.moduli).fold(0u64, |acc, (c, n)| acc * n + c) as usize
    }

    pub fn element_at(&self, index: usize) -> Element {
        let mut coords = vec![0; self.rank()];
        self.decode(index, &mut coords);
        Element { coords }
    }

    /// The character whose coefficient vector has mixed-radix index `index`.
    pub fn character_at(&self, index: usize) -> Character {
        let mut coeffs = vec![0; self.rank()];
        self.decode(index, &mut coeffs);
        Character { coeffs }
    }

    fn decode(&self, index: usize, out: &mut [u64]) {
        debug_assert!((index as u64) < self.order);
        let mut rest = index as u64;
        for (slot, &n) in out.iter_mut().zip(&self.moduli).rev() {
            *slot = rest % n;
            rest /= n;
        }
    }

    /// Index of `x + y` for element indices.
    pub fn add_idx(&self, i: usize, j: usize) -> usize {
        self.combine(i, j, |a, b, n| (a + b) % n)
    }

    /// Index of `x - y` for element indices.
    pub fn sub_idx(&self, i: usize, j: usize) -> usize {
        self.combine(i, j, |a, b, n| (a + n - b) % n)
    }

    pub fn neg_idx(&self, i: usize) -> usize {
        self.sub_idx(0, i)
    }

    fn combine(&self, i: usize, j: usize, op: impl Fn(u64, u64, u64) -> u64) -> usize {
        let (mut a, mut b) = (i as u64, j as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        for &n in self.moduli.iter().rev() {
            out += op(a % n, b % n, n) * place;
            place *= n;
            a /= n;
            b /= n;
        }
        out as usize
    }

    /// Table `t[j] = index(j + d)` for a fixed `d`.
    pub fn translation_table(&self, d: usize) -> Vec<usize> {
        (0..self.size()).map(|j| self.add_idx(j, d)).collect()
    }

    pub fn enumerate(&self) -> Result<Vec<Element>> {
        self.enumerate_with_cap(DEFAULT_ENUMERATION_CAP)
    }

    pub fn enumerate_with_cap(&self, cap: u64) -> Result<Vec<Element>> {
        check_cap("group order for enumeration", cap, self.order)?;
        Ok((0..self.size()).map(|i| self.element_at(i)).collect())
    }

    /// Numerator of `xi(x)` over [`exponent`](Self::exponent), in `[0, L)`.
    pub fn char_phase(&self, xi: &Character, x: &Element) -> Result<u64> {
        self.check_character(xi)?;
        self.check_element(x)?;
        Ok(self.phase_unchecked(&xi.coeffs, &x.coords))
    }

    fn phase_unchecked(&self, coeffs: &[u64], coords: &[u64]) -> u64 {
        let l = self.exponent as u128;
        let mut acc: u128 = 0;
        for ((&a, &x), &n) in coeffs.iter().zip(coords).zip(&self.moduli) {
            let scale = (self.exponent / n) as u128;
            acc = (acc + (a as u128 * x as u128 % n as u128) * scale) % l;
        }
        acc as u64
    }

    /// `xi(x)` in `[0, 1)`, reduced exactly before the final division.
    pub fn char_eval(&self, xi: &Character, x: &Element) -> Result<f64> {
        let p = self.char_phase(xi, x)?;
        Ok(p as f64 / self.exponent as f64)
    }

    /// Phase numerators of `xi` at every element, in enumeration order.
    pub fn phase_table(&self, xi: &Character) -> Result<Vec<u64>> {
        self.check_character(xi)?;
        let mut coords = vec![0; self.rank()];
        Ok((0..self.size())
            .map(|i| {
                self.decode(i, &mut coords);
                self.phase_unchecked(&xi.coeffs, &coords)
            })
            .collect())
    }
}

impl Element {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

impl Character {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(|&a| a == 0)
    }
}

fn fmt_vec(v: &[u64], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if v.len() == 1 {
        return write!(f, "{}", v[0]);
    }
    write!(f, "(")?;
    for (i, c) in v.iter().enumerate() {
        if i > 0 {
            write!(f, " ")?;
        }
        write!(f, "{c}")?;
    }
    write!(f, ")")
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_vec(&self.coords, f)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_vec(&self.coeffs, f)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.moduli.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "Z{n}")?;
        }
        Ok(())
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Parses `"Z12"`, `"Z2xZ3xZ5"`; case-insensitive, whitespace ignored.
    fn from_str(s: &str) -> Result<Self> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).flat_map(char::to_lowercase).collect();
        if cleaned.is_empty() {
            return Err(Error::Parse("empty group spec".into()));
        }
        let moduli = cleaned
            .split('x')
            .map(|factor| {
                factor
                    .strip_prefix('z')
                    .and_then(|n| n.parse::<u64>().ok())
                    .ok_or_else(|| Error::Parse(format!("bad cyclic factor {factor:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        GroupSpec::new(moduli)
    }
}

/// Distance from `t` to the nearest integer.
pub fn torus_norm(t: f64) -> f64 {
    (t - t.round()).abs()
}

/// `min(p, L - p)`: the torus norm of `p / L` scaled by `L`.
pub(crate) fn phase_distance(p: u64, l: u64) -> u64 {
    p.min(l - p)
}
