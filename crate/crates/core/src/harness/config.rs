//! Flat `key = value` run configuration.
//!
//! ```text
//! # comment
//! problem = ex2-ii
//! N = 50
//! taus = 0.01, 0.005, 0.0025
//! [mu]
//! kind = linear
//! start = 0.6
//! ```
//!
//! A `[name]` header prefixes the keys below it with `name.`. The headers
//! `[problem]`, `[discretisation]` and `[output]` only group keys and add no
//! prefix.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::oracle::Benchmark;
use crate::profiles::{CoefficientFn, MuProfile};
use crate::stepper::{InitialField, Nonlinearity};

pub const DEFAULT_TAUS: [f64; 5] = [0.01, 0.005, 0.0025, 0.00125, 0.000625];
pub const DEFAULT_NS: [usize; 6] = [5, 10, 20, 30, 40, 50];

const GROUPING_SECTIONS: [&str; 3] = ["problem", "discretisation", "output"];

const KNOWN_KEYS: [&str; 26] = [
    "problem",
    "mu.kind",
    "mu.start",
    "mu.end",
    "domain.a",
    "domain.b",
    "T",
    "N",
    "n",
    "taus",
    "Ns",
    "quad.order",
    "rho.kind",
    "rho.value",
    "beta.kind",
    "beta.value",
    "f",
    "clamp",
    "phi0",
    "psi0",
    "mode.index",
    "dump.times",
    "dump.points",
    "out",
    "threads",
    "label",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    /// A manufactured benchmark with a closed-form solution.
    Benchmark(Benchmark),
    /// One sine mode of the homogeneous constant-order problem, checked
    /// against the modal series.
    Mode,
    /// User data with no reference solution.
    Custom,
}

impl ProblemKind {
    pub fn from_tag(tag: &str) -> Result<Self> {
        match tag {
            "mode" => Ok(Self::Mode),
            "custom" => Ok(Self::Custom),
            other => Benchmark::from_tag(other).map(Self::Benchmark),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Self::Benchmark(b) => b.tag(),
            Self::Mode => "mode",
            Self::Custom => "custom",
        }
    }
}

/// Initial data selectable from a config file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Zero,
    Sine,
    Bubble,
}

impl FieldKind {
    pub fn from_tag(tag: &str) -> Result<Self> {
        match tag {
            "zero" => Ok(Self::Zero),
            "sine" => Ok(Self::Sine),
            "bubble" => Ok(Self::Bubble),
            other => Err(Error::Config(format!("unknown initial field `{other}`"))),
        }
    }

    pub fn build(self, a: f64, b: f64, mode: u32) -> InitialField {
        match self {
            Self::Zero => InitialField::zero(),
            Self::Sine => InitialField::sine(a, b, mode),
            Self::Bubble => InitialField::bubble(a, b),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemKind,
    pub mu_kind: Option<String>,
    pub mu_start: Option<f64>,
    pub mu_end: Option<f64>,
    pub a: f64,
    pub b: f64,
    pub horizon: f64,
    /// Spectral truncation for single runs and time ladders.
    pub n_modes: usize,
    /// Step count for single runs and space ladders.
    pub n_steps: usize,
    pub taus: Vec<f64>,
    pub ns: Vec<usize>,
    pub quad_order: Option<usize>,
    pub rho: Option<CoefficientFn>,
    pub beta: Option<CoefficientFn>,
    pub nonlinearity: Option<Nonlinearity>,
    pub clamp: Option<f64>,
    pub phi0: Option<FieldKind>,
    pub psi0: Option<FieldKind>,
    pub mode_index: u32,
    pub dump_times: Vec<f64>,
    pub dump_points: usize,
    pub out: Option<String>,
    pub threads: Option<usize>,
    pub label: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            problem: ProblemKind::Benchmark(Benchmark::SineOscillating),
            mu_kind: None,
            mu_start: None,
            mu_end: None,
            a: 0.0,
            b: 1.0,
            horizon: 1.0,
            n_modes: 50,
            n_steps: 1600,
            taus: DEFAULT_TAUS.to_vec(),
            ns: DEFAULT_NS.to_vec(),
            quad_order: None,
            rho: None,
            beta: None,
            nonlinearity: None,
            clamp: None,
            phi0: None,
            psi0: None,
            mode_index: 1,
            dump_times: Vec::new(),
            dump_points: 101,
            out: None,
            threads: None,
            label: None,
        }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>().map_err(|_| Error::Config(format!("`{key}`: expected a number, got `{v}`")))
}

fn parse_usize(key: &str, v: &str) -> Result<usize> {
    v.parse::<usize>().map_err(|_| Error::Config(format!("`{key}`: expected a non-negative integer, got `{v}`")))
}

fn split_list(v: &str) -> impl Iterator<Item = &str> {
    v.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty())
}

/// Raw `key -> value` pairs with section prefixes resolved.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    let mut prefix = String::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| Error::Config(format!("line {}: unterminated section header", lineno + 1)))?
                .trim();
            prefix = if name.is_empty() || GROUPING_SECTIONS.contains(&name) { String::new() } else { format!("{name}.") };
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
        let key = format!("{prefix}{}", key.trim());
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(Error::Config(format!("line {}: unknown key `{key}`", lineno + 1)));
        }
        if out.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(Error::Config(format!("line {}: duplicate key `{key}`", lineno + 1)));
        }
    }
    Ok(out)
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let pairs = parse_pairs(text)?;
        let mut cfg = Self::default();
        let get = |k: &str| pairs.get(k).map(String::as_str);
        if let Some(v) = get("problem") {
            cfg.problem = ProblemKind::from_tag(v)?;
        }
        cfg.mu_kind = get("mu.kind").map(str::to_string);
        cfg.mu_start = get("mu.start").map(|v| parse_f64("mu.start", v)).transpose()?;
        cfg.mu_end = get("mu.end").map(|v| parse_f64("mu.end", v)).transpose()?;
        if let Some(v) = get("domain.a") {
            cfg.a = parse_f64("domain.a", v)?;
        }
        if let Some(v) = get("domain.b") {
            cfg.b = parse_f64("domain.b", v)?;
        }
        if let Some(v) = get("T") {
            cfg.horizon = parse_f64("T", v)?;
        }
        if let Some(v) = get("N") {
            cfg.n_modes = parse_usize("N", v)?;
        }
        if let Some(v) = get("n") {
            cfg.n_steps = parse_usize("n", v)?;
        }
        if let Some(v) = get("taus") {
            cfg.taus = split_list(v).map(|s| parse_f64("taus", s)).collect::<Result<_>>()?;
        }
        if let Some(v) = get("Ns") {
            cfg.ns = split_list(v).map(|s| parse_usize("Ns", s)).collect::<Result<_>>()?;
        }
        cfg.quad_order = get("quad.order").map(|v| parse_usize("quad.order", v)).transpose()?;
        cfg.rho = coefficient(&pairs, "rho")?;
        cfg.beta = coefficient(&pairs, "beta")?;
        cfg.nonlinearity = get("f").map(Nonlinearity::from_tag).transpose()?;
        cfg.clamp = get("clamp").map(|v| parse_f64("clamp", v)).transpose()?;
        cfg.phi0 = get("phi0").map(FieldKind::from_tag).transpose()?;
        cfg.psi0 = get("psi0").map(FieldKind::from_tag).transpose()?;
        if let Some(v) = get("mode.index") {
            cfg.mode_index = parse_usize("mode.index", v)? as u32;
        }
        if let Some(v) = get("dump.times") {
            cfg.dump_times = split_list(v).map(|s| parse_f64("dump.times", s)).collect::<Result<_>>()?;
        }
        if let Some(v) = get("dump.points") {
            cfg.dump_points = parse_usize("dump.points", v)?;
        }
        cfg.out = get("out").map(str::to_string);
        cfg.threads = get("threads").map(|v| parse_usize("threads", v)).transpose()?;
        cfg.label = get("label").map(str::to_string);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(&tau) = self.taus.iter().find(|&&t| !(t > 0.0 && t < 1.0)) {
            return Err(Error::Config(format!("every step size must lie in (0, 1), got {tau}")));
        }
        if let Some(&n) = self.ns.iter().find(|&&n| n < 4) {
            return Err(Error::Config(format!("every truncation must be at least 4, got {n}")));
        }
        if self.n_modes < 4 {
            return Err(Error::Config(format!("N must be at least 4, got {}", self.n_modes)));
        }
        if self.n_steps < 2 {
            return Err(Error::Config(format!("n must be at least 2, got {}", self.n_steps)));
        }
        if !(self.horizon > 0.0) {
            return Err(Error::Config(format!("T must be positive, got {}", self.horizon)));
        }
        if !(self.b > self.a) {
            return Err(Error::Config(format!("empty domain [{}, {}]", self.a, self.b)));
        }
        if self.mode_index == 0 {
            return Err(Error::Config("mode.index starts at 1".into()));
        }
        if self.dump_points < 2 {
            return Err(Error::Config("dump.points must be at least 2".into()));
        }
        if matches!(self.problem, ProblemKind::Benchmark(_)) && (self.a != 0.0 || self.b != 1.0) {
            return Err(Error::Config("benchmark problems live on [0, 1]".into()));
        }
        Ok(())
    }

    /// Order profile: explicit keys override the problem default.
    pub fn mu_profile(&self, default: Option<&MuProfile>) -> Result<MuProfile> {
        if self.mu_kind.is_none() && self.mu_start.is_none() && self.mu_end.is_none() {
            if let Some(p) = default {
                return Ok(p.clone());
            }
        }
        let kind = self.mu_kind.as_deref().unwrap_or("constant");
        let start = self.mu_start.unwrap_or(0.5);
        let end = self.mu_end.unwrap_or(start);
        MuProfile::from_kind(kind, start, end, self.horizon)
    }
}

fn coefficient(pairs: &BTreeMap<String, String>, name: &str) -> Result<Option<CoefficientFn>> {
    let kind = pairs.get(&format!("{name}.kind"));
    let value = pairs.get(&format!("{name}.value"));
    if kind.is_none() && value.is_none() {
        return Ok(None);
    }
    let value = value.map(|v| parse_f64(&format!("{name}.value"), v)).transpose()?.unwrap_or(1.0);
    CoefficientFn::from_kind(kind.map(String::as_str).unwrap_or("constant"), value).map(Some)
}
