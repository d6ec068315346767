//! Run configuration: a flat `key = value` file merged with flag overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use sitterloc::DeSitterParams;

use crate::error::CliError;

/// Keys accepted in config files and their flag equivalents.
pub const KEYS: &[&str] = &[
    "alpha", "M", "lmax", "grid", "t0", "t1", "steps", "out", "tol", "seed", "sector", "packet", "theta0", "phi0",
    "width", "state",
];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_flat(text: &str, origin: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("{origin}:{}: expected key = value", n + 1)))?;
        let k = k.trim();
        if !KEYS.contains(&k) {
            return Err(CliError::Usage(format!("{origin}:{}: unknown key '{k}'", n + 1)));
        }
        out.insert(k.to_string(), v.trim().to_string());
    }
    Ok(out)
}

pub fn load_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_flat(&text, &path.display().to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectorChoice {
    Positive,
    Negative,
    Cross,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PacketKind {
    Heat,
    Random,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub alpha: f64,
    pub mass: f64,
    pub l_max: usize,
    pub grid: (usize, usize),
    pub t0: f64,
    pub t1: f64,
    pub steps: usize,
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
    pub seed: u64,
    pub sector: SectorChoice,
    pub packet: PacketKind,
    pub theta0: f64,
    pub phi0: f64,
    pub width: f64,
    pub state: Option<PathBuf>,
}

fn num<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str, default: T) -> Result<T, CliError> {
    match map.get(key) {
        None => Ok(default),
        Some(v) => v.parse().map_err(|_| CliError::Usage(format!("{key}: cannot parse '{v}'"))),
    }
}

pub fn parse_grid(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("grid must look like 16x32, got '{s}'"));
    let (a, b) = s.to_ascii_lowercase().split_once('x').map(|(a, b)| (a.to_string(), b.to_string())).ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

impl RunConfig {
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self, CliError> {
        let l_max: usize = num(map, "lmax", 6)?;
        let default_theta = (l_max + 2).max(16);
        let grid = match map.get("grid") {
            Some(g) => parse_grid(g)?,
            None => (default_theta, 2 * default_theta),
        };
        let sector = match map.get("sector").map(String::as_str).unwrap_or("positive") {
            "positive" | "u" => SectorChoice::Positive,
            "negative" | "v" => SectorChoice::Negative,
            "cross" => SectorChoice::Cross,
            "all" => SectorChoice::All,
            other => return Err(CliError::Usage(format!("sector must be positive, negative, cross or all, got '{other}'"))),
        };
        let packet = match map.get("packet").map(String::as_str).unwrap_or("heat") {
            "heat" => PacketKind::Heat,
            "random" => PacketKind::Random,
            other => return Err(CliError::Usage(format!("packet must be heat or random, got '{other}'"))),
        };
        let cfg = Self {
            alpha: num(map, "alpha", 1.0)?,
            mass: num(map, "M", 2.5)?,
            l_max,
            grid,
            t0: num(map, "t0", 0.0)?,
            t1: num(map, "t1", 3.0)?,
            steps: num(map, "steps", 31)?,
            out: map.get("out").map(PathBuf::from),
            tol: map.get("tol").map(|v| v.parse()).transpose().map_err(|_| CliError::Usage("tol: not a number".into()))?,
            seed: num(map, "seed", 1)?,
            sector,
            packet,
            theta0: num(map, "theta0", 0.0)?,
            phi0: num(map, "phi0", 0.0)?,
            width: num(map, "width", 4.0)?,
            state: map.get("state").map(PathBuf::from),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if !(self.mass > 0.0) {
            return Err(CliError::Usage(format!("M must be positive, got {}", self.mass)));
        }
        if self.mass == 1.0 {
            return Err(CliError::Usage("excluded case: M = 1 is not treated (the energy splitting degenerates)".into()));
        }
        if !(self.alpha > 0.0) {
            return Err(CliError::Usage(format!("alpha must be positive, got {}", self.alpha)));
        }
        if self.grid.0 < self.l_max + 2 {
            return Err(CliError::Usage(format!("grid needs n_theta >= lmax + 2 = {}", self.l_max + 2)));
        }
        if self.grid.1 < 2 * self.l_max + 2 {
            return Err(CliError::Usage(format!("grid needs n_phi >= 2 lmax + 2 = {}", 2 * self.l_max + 2)));
        }
        if self.steps == 0 {
            return Err(CliError::Usage("steps must be at least 1".into()));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0) {
                return Err(CliError::Usage(format!("tol must be positive, got {t}")));
            }
        }
        Ok(())
    }

    pub fn params(&self) -> Result<DeSitterParams, CliError> {
        Ok(DeSitterParams::new(self.alpha, self.mass)?)
    }

    pub fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    /// `steps` evenly spaced times from `t0` to `t1`, in units of `alpha`.
    pub fn times(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.t0 * self.alpha];
        }
        (0..self.steps)
            .map(|k| (self.t0 + (self.t1 - self.t0) * k as f64 / (self.steps - 1) as f64) * self.alpha)
            .collect()
    }
}
