use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::ecf::EcfConfig;
use crate::error::{Error, Result};
use crate::model::{table1_model, validate_params, ArfismaParams, SeasonalSpec};
use crate::simulate::DEFAULT_TRUNCATION;
use crate::twostep::WhittleConfig;

/// Replication count of the full study.
pub const PAPER_REPLICATIONS: usize = 1500;
pub const DEFAULT_REPLICATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Ecf,
    Tsm,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ecf" => Ok(Method::Ecf),
            "tsm" => Ok(Method::Tsm),
            other => Err(Error::Config(format!("unknown method `{other}` (expected ecf or tsm)"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Ecf => "ecf",
            Method::Tsm => "tsm",
        })
    }
}

/// One Monte Carlo study. Estimator seeds inside `ecf` and `whittle` are
/// replaced per replication by seeds derived from `master_seed`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub preset: Option<usize>,
    pub psi: ArfismaParams,
    pub spec: SeasonalSpec,
    pub length: usize,
    pub replications: usize,
    /// Simulator truncation `M`.
    pub truncation: usize,
    pub method: Method,
    /// Overlaps tried by the block-size selection; `ecf.m` is used otherwise.
    pub m_grid: Vec<usize>,
    pub ecf: EcfConfig,
    /// Seed ECF fits with the two-step estimate as an extra start.
    pub tsm_start: bool,
    pub whittle: WhittleConfig,
    pub master_seed: u64,
    /// Worker threads; `None` uses every core. Never affects results.
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let (psi, spec) = table1_model(1).expect("preset 1 exists");
        ExperimentConfig {
            preset: Some(1),
            psi,
            spec,
            length: 1500,
            replications: DEFAULT_REPLICATIONS,
            truncation: DEFAULT_TRUNCATION,
            method: Method::Ecf,
            m_grid: (1..=8).collect(),
            ecf: EcfConfig::default(),
            tsm_start: true,
            whittle: WhittleConfig::default(),
            master_seed: 0,
            threads: None,
            out: None,
        }
    }
}

impl ExperimentConfig {
    pub fn preset(index: usize) -> Result<Self> {
        let (psi, spec) = table1_model(index)?;
        Ok(ExperimentConfig { preset: Some(index), psi, spec, ..Default::default() })
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::Config("replications must be at least 1".into()));
        }
        if self.length < crate::twostep::MIN_LENGTH {
            return Err(Error::Config(format!("length {} is below {}", self.length, crate::twostep::MIN_LENGTH)));
        }
        if self.truncation == 0 {
            return Err(Error::Config("truncation must be positive".into()));
        }
        if self.m_grid.is_empty() {
            return Err(Error::Config("m_grid is empty".into()));
        }
        if let Some(p) = self.preset {
            let (psi, spec) = table1_model(p)?;
            if psi != self.psi || spec != self.spec {
                return Err(Error::Config(format!("parameters differ from preset {p}")));
            }
        }
        validate_params(&self.psi, &self.spec).into_result()?;
        self.ecf.validate()?;
        self.whittle.validate()
    }

    /// Builds a config from `key = value` pairs on top of the defaults; later
    /// pairs win. A `model` preset is applied before any explicit
    /// coordinate, and explicit coordinates clear the preset tag.
    pub fn from_pairs(pairs: &[(String, String)]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (k, v) in pairs {
            let key = canonical_key(k)?;
            map.insert(key, v.trim().to_string());
        }
        let mut c = match map.get("model") {
            Some(v) => ExperimentConfig::preset(parse(v, "model")?)?,
            None => ExperimentConfig::default(),
        };
        let mut model_changed = false;
        for (key, value) in &map {
            let v = value.as_str();
            match *key {
                "model" => {}
                "s" => {
                    c.spec.s = parse(v, key)?;
                    model_changed = true;
                }
                "alpha" | "d" | "D" => {
                    let x = parse(v, key)?;
                    match *key {
                        "alpha" => c.psi.alpha = x,
                        "d" => c.psi.d = x,
                        _ => c.psi.d_seasonal = x,
                    }
                    model_changed = true;
                }
                "phi" => {
                    c.psi.phi = parse_list(v, key)?;
                    model_changed = true;
                }
                "theta" => {
                    c.psi.theta = parse_list(v, key)?;
                    model_changed = true;
                }
                "Phi" => {
                    c.psi.phi_seasonal = parse_list(v, key)?;
                    model_changed = true;
                }
                "Theta" => {
                    c.psi.theta_seasonal = parse_list(v, key)?;
                    model_changed = true;
                }
                "length" => c.length = parse(v, key)?,
                "replications" => c.replications = parse(v, key)?,
                "full_scale" => {}
                "truncation" => c.truncation = parse(v, key)?,
                "method" => c.method = v.parse()?,
                "m" => c.ecf.m = parse(v, key)?,
                "m_grid" => c.m_grid = parse_list(v, key)?,
                "nodes" => c.ecf.nodes = parse(v, key)?,
                "cf_truncation" => c.ecf.truncation = parse(v, key)?,
                "restarts" => c.ecf.random_restarts = parse(v, key)?,
                "max_evaluations" => c.ecf.optimizer.max_evaluations = parse(v, key)?,
                "tsm_start" => c.tsm_start = parse_bool(v, key)?,
                "draws" => c.whittle.draws = parse(v, key)?,
                "burn_in" => c.whittle.burn_in = parse(v, key)?,
                "proposal_scale" => c.whittle.proposal_scale = parse(v, key)?,
                "seed" => c.master_seed = parse(v, key)?,
                "threads" => c.threads = Some(parse::<usize>(v, key)?).filter(|&t| t > 0),
                "out" => c.out = Some(PathBuf::from(v)),
                _ => unreachable!("canonical_key only returns known keys"),
            }
        }
        if map.get("full_scale").map(|v| parse_bool(v, "full_scale")).transpose()? == Some(true) {
            c.replications = PAPER_REPLICATIONS;
        }
        if model_changed {
            let spec = c.psi.spec(c.spec.s);
            c.spec = spec;
            if c.preset.is_some_and(|p| table1_model(p).map(|(psi, spec)| psi != c.psi || spec != c.spec).unwrap_or(true)) {
                c.preset = None;
            }
        }
        c.validate()?;
        Ok(c)
    }

    /// Canonical pairs describing everything that affects results; written
    /// into output headers so a run can be repeated from its own files.
    pub fn to_pairs(&self) -> Vec<(String, String)> {
        let list = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let mut out = Vec::new();
        if let Some(p) = self.preset {
            out.push(("model", p.to_string()));
        }
        out.extend([
            ("s", self.spec.s.to_string()),
            ("alpha", self.psi.alpha.to_string()),
            ("d", self.psi.d.to_string()),
            ("D", self.psi.d_seasonal.to_string()),
            ("phi", list(&self.psi.phi)),
            ("theta", list(&self.psi.theta)),
            ("Phi", list(&self.psi.phi_seasonal)),
            ("Theta", list(&self.psi.theta_seasonal)),
            ("length", self.length.to_string()),
            ("replications", self.replications.to_string()),
            ("truncation", self.truncation.to_string()),
            ("method", self.method.to_string()),
            ("m", self.ecf.m.to_string()),
            ("m_grid", self.m_grid.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",")),
            ("nodes", self.ecf.nodes.to_string()),
            ("cf_truncation", self.ecf.truncation.to_string()),
            ("restarts", self.ecf.random_restarts.to_string()),
            ("max_evaluations", self.ecf.optimizer.max_evaluations.to_string()),
            ("tsm_start", self.tsm_start.to_string()),
            ("draws", self.whittle.draws.to_string()),
            ("burn_in", self.whittle.burn_in.to_string()),
            ("proposal_scale", self.whittle.proposal_scale.to_string()),
            ("seed", self.master_seed.to_string()),
        ]);
        out.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }
}

const KEYS: &[&str] = &[
    "model", "s", "alpha", "d", "D", "phi", "theta", "Phi", "Theta", "length", "replications", "full_scale",
    "truncation", "method", "m", "m_grid", "nodes", "cf_truncation", "restarts", "max_evaluations", "tsm_start",
    "draws", "burn_in", "proposal_scale", "seed", "threads", "out",
];

fn canonical_key(key: &str) -> Result<&'static str> {
    let key = key.trim();
    let alias = match key {
        "T" => "length",
        "R" => "replications",
        "M" => "truncation",
        "K" => "nodes",
        "N" => "draws",
        "J_cf" => "cf_truncation",
        other => other,
    };
    KEYS.iter().copied().find(|&k| k == alias).ok_or_else(|| Error::Config(format!("unknown key `{key}`")))
}

fn parse<T: FromStr>(v: &str, key: &str) -> Result<T> {
    v.trim().parse().map_err(|_| Error::Config(format!("cannot parse `{v}` for `{key}`")))
}

fn parse_list<T: FromStr>(v: &str, key: &str) -> Result<Vec<T>> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(|s| parse(s, key)).collect()
}

fn parse_bool(v: &str, key: &str) -> Result<bool> {
    match v.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(Error::Config(format!("cannot parse `{v}` for `{key}` as a boolean"))),
    }
}

/// Parses `key = value` lines. Blank lines and anything after `#` are
/// ignored; keys are not checked here.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`, got `{raw}`", i + 1)))?;
        if k.trim().is_empty() {
            return Err(Error::Config(format!("line {}: empty key", i + 1)));
        }
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}
