use std::collections::BTreeMap;
use std::fs;
use std::str::FromStr;

use cornerlab::corners::PlaneSet;
use cornerlab::rational::parse_rational;
use cornerlab::regularity::GrowthFunction;
use cornerlab::{GroupSpec, Rational};

use crate::CliError;

/// Every key accepted in a config file (flag names without the dashes).
pub const KEYS: &[&str] = &[
    "group", "density", "seed", "set-file", "rho", "delta", "eps", "growth", "grid-n", "restarts", "out", "threads",
    "alpha", "samples", "input",
];

/// Keys that never reach the output header: where the output goes and how
/// many workers produced it do not change its content.
const UNRECORDED: &[&str] = &["out", "threads", "config"];

pub fn read_config_file(path: &str) -> Result<BTreeMap<String, String>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::validation(format!("cannot read {path}: {e}")))?;
    let mut map = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::validation(format!("{path}:{}: expected key=value", no + 1)))?;
        let k = k.trim();
        if !KEYS.contains(&k) {
            return Err(CliError::validation(format!("{path}:{}: unknown key {k:?}", no + 1)));
        }
        map.insert(k.to_string(), v.trim().to_string());
    }
    Ok(map)
}

/// The resolved configuration: config-file values overridden by flags, plus
/// the defaults a command actually consulted.
#[derive(Debug, Default)]
pub struct RunConfig {
    pub command: String,
    values: BTreeMap<String, String>,
    recorded: BTreeMap<String, String>,
}

fn parse<T: FromStr>(key: &str, raw: &str) -> Result<T, CliError> {
    raw.parse().map_err(|_| CliError::validation(format!("bad value for --{key}: {raw:?}")))
}

impl RunConfig {
    pub fn new(command: &str, values: BTreeMap<String, String>) -> Self {
        RunConfig { command: command.to_string(), values, recorded: BTreeMap::new() }
    }

    fn record(&mut self, key: &str, raw: &str) {
        if !UNRECORDED.contains(&key) {
            self.recorded.insert(key.to_string(), raw.to_string());
        }
    }

    pub fn raw(&mut self, key: &str) -> Option<String> {
        let v = self.values.get(key).cloned();
        if let Some(v) = &v {
            self.record(key, v);
        }
        v
    }

    pub fn get_or<T: FromStr>(&mut self, key: &str, default: &str) -> Result<T, CliError> {
        let raw = self.values.get(key).cloned().unwrap_or_else(|| default.to_string());
        self.record(key, &raw);
        parse(key, &raw)
    }

    pub fn rational(&mut self, key: &str) -> Result<Option<Rational>, CliError> {
        self.raw(key).map(|raw| parse_rational(&raw).map_err(CliError::from)).transpose()
    }

    pub fn rational_or(&mut self, key: &str, default: &str) -> Result<Rational, CliError> {
        let raw = self.values.get(key).cloned().unwrap_or_else(|| default.to_string());
        self.record(key, &raw);
        Ok(parse_rational(&raw)?)
    }

    pub fn growth(&mut self) -> Result<GrowthFunction, CliError> {
        let raw = self.values.get("growth").cloned().unwrap_or_else(|| "poly:2:1".to_string());
        self.record("growth", &raw);
        Ok(raw.parse()?)
    }

    pub fn eps(&mut self) -> Result<f64, CliError> {
        let eps: f64 = self.get_or("eps", "0.25")?;
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(CliError::validation(format!("--eps must lie in (0, 1], got {eps}")));
        }
        Ok(eps)
    }

    pub fn group(&mut self) -> Result<GroupSpec, CliError> {
        let raw = self.raw("group").ok_or_else(|| CliError::validation("--group is required"))?;
        Ok(raw.parse()?)
    }

    /// The input set: `--set-file`, or a seeded random set of `--density` on
    /// `--group`.
    pub fn plane_set(&mut self) -> Result<PlaneSet, CliError> {
        if let Some(path) = self.raw("set-file") {
            let text =
                fs::read_to_string(&path).map_err(|e| CliError::validation(format!("cannot read {path}: {e}")))?;
            let set = PlaneSet::from_text(&text)?;
            if let Some(g) = self.values.get("group").cloned() {
                let g: GroupSpec = g.parse()?;
                if &g != set.group() {
                    return Err(CliError::validation(format!(
                        "--group {g} does not match the set file ({})",
                        set.group()
                    )));
                }
            }
            self.record("group", &set.group().to_string());
            return Ok(set);
        }
        let group = self.group()?;
        let density: f64 = self.get_or("density", "0.5")?;
        let seed: u64 = self.get_or("seed", "0")?;
        Ok(PlaneSet::random(&group, density, seed)?)
    }

    pub fn recorded(&self) -> &BTreeMap<String, String> {
        &self.recorded
    }

    /// `# key=value` lines for CSV outputs.
    pub fn csv_header(&self) -> String {
        let mut s = format!("# cornerlab {}\n", self.command);
        for (k, v) in &self.recorded {
            s.push_str(&format!("# {k}={v}\n"));
        }
        s
    }
}
