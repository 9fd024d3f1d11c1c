//! Plain-text `key = value` run configuration.
//!
//! Lines are UTF-8, `#` starts a comment, blank lines are ignored. Unknown
//! keys are rejected with the file and line. Values set later (command-line
//! flags) override earlier ones.

use crate::error::{Error, Result};
use crate::medium::{AlphaModel, MediumParams, OpenRates};
use crate::quadrature::Numerics;
use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

/// Every accepted key with a one-line description.
pub const KEYS: &[(&str, &str)] = &[
    ("delta", "pump detuning [Gamma]"),
    ("kv0", "Doppler width [Gamma]"),
    ("beta", "coupling fraction into the guided mode"),
    ("od", "resonant optical depth"),
    ("gamma", "residual relaxation rate of the nearly closed system [Gamma]"),
    ("gamma1", "open system: ground-state exchange rate [Gamma]"),
    ("gamma2", "open system: upper-state decay rate [Gamma]"),
    ("gamma12", "open system: coherence decay rate [Gamma]"),
    ("gamma21", "open system: transfer rate from upper to lower state [Gamma]"),
    ("alpha_model", "closed_limit or rates"),
    ("flux", "incident photon flux [Gamma]"),
    ("kvz", "Doppler shift of a single atom [Gamma]"),
    ("varpi", "frequency offset [Gamma]"),
    ("tol", "quadrature tolerance"),
    ("max_intervals", "quadrature subdivision limit"),
    ("hermite_order", "Gauss-Hermite order"),
    ("jobs", "worker threads, 0 for all cores"),
    ("output", "output directory"),
    ("cache_dir", "sweep cache directory"),
    ("branch", "detuned antibunching branch, 0 for resonance"),
    ("asymptotic", "use large-depth formulas (true/false)"),
    ("od_min", "figure grid: smallest optical depth"),
    ("od_max", "figure grid: largest optical depth"),
    ("od_points", "figure grid: optical depth points"),
    ("delta_min", "figure grid: smallest detuning [Gamma]"),
    ("delta_max", "figure grid: largest detuning [Gamma]"),
    ("delta_points", "figure grid: detuning points"),
    ("kv0_max", "figure grid: largest Doppler width [Gamma]"),
    ("kv0_points", "figure grid: Doppler width points"),
    ("tau_max", "figure grid: largest scaled delay"),
    ("tau_points", "figure grid: delay points"),
    ("clamp", "figure maps: cap applied to the clamped g2 column"),
];

#[derive(Debug, Clone, PartialEq)]
enum Origin {
    File { path: String, line: usize },
    Flag,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::File { path, line } => write!(f, "{path}:{line}"),
            Origin::Flag => write!(f, "command line"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    entries: BTreeMap<String, (String, Origin)>,
}

fn known(key: &str) -> bool {
    KEYS.iter().any(|(k, _)| *k == key)
}

impl RunConfig {
    pub fn parse_str(text: &str, source: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let origin = Origin::File {
                path: source.to_string(),
                line: i + 1,
            };
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::Config(format!("{origin}: expected `key = value`, got `{line}`")));
            };
            let (k, v) = (k.trim(), v.trim());
            if !known(k) {
                return Err(Error::Config(format!("{origin}: unknown key `{k}`")));
            }
            if v.is_empty() {
                return Err(Error::Config(format!("{origin}: key `{k}` has no value")));
            }
            cfg.entries.insert(k.to_string(), (v.to_string(), origin));
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_str(&text, &path.display().to_string())
    }

    /// Sets `key` from the command line, overriding any file value.
    pub fn set(&mut self, key: &str, value: impl ToString) -> Result<()> {
        if !known(key) {
            return Err(Error::Config(format!("unknown key `{key}`")));
        }
        self.entries
            .insert(key.to_string(), (value.to_string(), Origin::Flag));
        Ok(())
    }

    pub fn has(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(v, _)| v.as_str())
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str, what: &str) -> Result<Option<T>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some((v, origin)) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::Config(format!("{origin}: key `{key}` needs {what}, got `{v}`"))),
        }
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>> {
        let v: Option<f64> = self.parsed(key, "a number")?;
        if let Some(x) = v {
            if !x.is_finite() {
                let (_, origin) = &self.entries[key];
                return Err(Error::Config(format!("{origin}: key `{key}` must be finite")));
            }
        }
        Ok(v)
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.get_f64(key)?.unwrap_or(default))
    }

    pub fn get_usize(&self, key: &str) -> Result<Option<usize>> {
        self.parsed(key, "a non-negative integer")
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        Ok(self.get_usize(key)?.unwrap_or(default))
    }

    pub fn get_bool(&self, key: &str) -> Result<Option<bool>> {
        self.parsed(key, "true or false")
    }

    /// Medium parameters: `defaults` overridden by any configured value,
    /// then validated.
    pub fn params(&self, defaults: MediumParams) -> Result<MediumParams> {
        let mut p = defaults;
        p.delta = self.f64_or("delta", p.delta)?;
        p.kv0 = self.f64_or("kv0", p.kv0)?;
        p.beta = self.f64_or("beta", p.beta)?;
        p.od = self.f64_or("od", p.od)?;
        p.gamma_small = self.f64_or("gamma", p.gamma_small)?;
        let rates = ["gamma1", "gamma2", "gamma12", "gamma21"];
        let given: Vec<Option<f64>> = rates
            .iter()
            .map(|k| self.get_f64(k))
            .collect::<Result<_>>()?;
        match given.as_slice() {
            [Some(g1), Some(g2), Some(g12), Some(g21)] => {
                p.open_rates = Some(OpenRates {
                    gamma1: *g1,
                    gamma2: *g2,
                    gamma12: *g12,
                    gamma21: *g21,
                });
            }
            [None, None, None, None] => {}
            _ => {
                return Err(Error::Config(
                    "open rates need all of gamma1, gamma2, gamma12, gamma21".into(),
                ))
            }
        }
        if let Some(m) = self.get_str("alpha_model") {
            p.alpha_model = match m {
                "closed_limit" => AlphaModel::ClosedLimit,
                "rates" => AlphaModel::Rates,
                other => {
                    return Err(Error::Config(format!(
                        "alpha_model must be closed_limit or rates, got `{other}`"
                    )))
                }
            };
        }
        p.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(p)
    }

    pub fn numerics(&self) -> Result<Numerics> {
        let d = Numerics::default();
        let n = Numerics {
            tol: self.f64_or("tol", d.tol)?,
            max_intervals: self.usize_or("max_intervals", d.max_intervals)?,
            hermite_order: self.usize_or("hermite_order", d.hermite_order)?,
        };
        if !(n.tol > 0.0) || n.max_intervals == 0 || n.hermite_order == 0 {
            return Err(Error::Config(format!("invalid numerical settings {n:?}")));
        }
        Ok(n)
    }

    pub fn jobs(&self) -> Result<usize> {
        self.usize_or("jobs", 0)
    }

    pub fn output_dir(&self) -> PathBuf {
        PathBuf::from(self.get_str("output").unwrap_or("."))
    }

    pub fn cache_dir(&self) -> Option<PathBuf> {
        self.get_str("cache_dir").map(PathBuf::from)
    }
}
