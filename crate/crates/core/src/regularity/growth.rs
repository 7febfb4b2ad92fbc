use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// The growth function `F` that drives the regularity thresholds.
///
/// Text form: `poly:c:k` for `c * t^k`, `exp:c` for `c * 2^t`, with integers
/// `c >= 1` (and `k >= 1`), so `F(t) >= 1` and nondecreasing on `t >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(into = "String")]
pub enum GrowthFunction {
    Poly { c: u64, k: u32 },
    Exp { c: u64 },
}

impl GrowthFunction {
    pub fn poly(c: u64, k: u32) -> Result<Self> {
        if c == 0 || k == 0 {
            return Err(Error::invalid("polynomial growth needs c >= 1 and k >= 1"));
        }
        Ok(GrowthFunction::Poly { c, k })
    }

    pub fn exp(c: u64) -> Result<Self> {
        if c == 0 {
            return Err(Error::invalid("exponential growth needs c >= 1"));
        }
        Ok(GrowthFunction::Exp { c })
    }

    /// `F(t)` for integer `t`; `None` once the value leaves `u128`.
    pub fn eval(&self, t: u128) -> Option<u128> {
        match *self {
            GrowthFunction::Poly { c, k } => t.checked_pow(k)?.checked_mul(c as u128),
            GrowthFunction::Exp { c } => {
                let shift = u32::try_from(t).ok().filter(|&s| s < 128)?;
                (c as u128).checked_mul(1u128 << shift).filter(|v| v >> shift == c as u128)
            }
        }
    }

    /// `F(t)` in floating point; may be `inf`.
    pub fn eval_real(&self, t: f64) -> f64 {
        match *self {
            GrowthFunction::Poly { c, k } => c as f64 * t.powi(k as i32),
            GrowthFunction::Exp { c } => c as f64 * t.exp2(),
        }
    }

    /// `1 / F(t)`, zero when `F(t)` overflows.
    pub fn reciprocal(&self, t: u128) -> f64 {
        self.eval(t).map_or(0.0, |v| 1.0 / v as f64)
    }
}

impl fmt::Display for GrowthFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthFunction::Poly { c, k } => write!(f, "poly:{c}:{k}"),
            GrowthFunction::Exp { c } => write!(f, "exp:{c}"),
        }
    }
}

impl From<GrowthFunction> for String {
    fn from(g: GrowthFunction) -> String {
        g.to_string()
    }
}

impl FromStr for GrowthFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let int = |p: &str| p.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad growth parameter {p:?}")));
        match parts.as_slice() {
            ["poly", c, k] => {
                let k = u32::try_from(int(k)?).map_err(|_| Error::Parse("exponent too large".into()))?;
                Self::poly(int(c)?, k)
            }
            ["exp", c] => Self::exp(int(c)?),
            _ => Err(Error::Parse(format!("unknown growth function {s:?} (expected poly:c:k or exp:c)"))),
        }
    }
}
