//! Run configuration files.
//!
//! Two interchangeable formats. Flat key-value text:
//!
//! ```text
//! # standard annulus
//! gamma = 3
//! a = 5
//! R = 6
//! v_a_sq = 0.7
//! v_0 = 1.3416407864998738
//! ```
//!
//! or a JSON object with the same keys. Every key is optional and defaults
//! to the standard configuration above with `v_0² = 1.8`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::gas::GasParameters;
use crate::numerics::QuadratureSpec;
use crate::radial::{FlowMode, ModelConfig, Tolerances};

pub const DEFAULT_SWEEP_N: usize = 2001;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub gamma: f64,
    pub c_star_sq: f64,
    pub m0: f64,
    pub a: f64,
    pub r_outer: f64,
    pub v_a: f64,
    pub v_0: f64,
    pub mode: FlowMode,
    pub sweep_n: usize,
    pub tol_root: Option<f64>,
    pub tol_quad: Option<f64>,
    pub output_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            gamma: 3.0,
            c_star_sq: 1.0,
            m0: 1.0,
            a: 5.0,
            r_outer: 6.0,
            v_a: 0.7f64.sqrt(),
            v_0: 1.8f64.sqrt(),
            mode: FlowMode::Transonic,
            sweep_n: DEFAULT_SWEEP_N,
            tol_root: None,
            tol_quad: None,
            output_dir: None,
        }
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

fn number(key: &str, raw: &str) -> Result<f64> {
    let v: f64 = raw
        .trim()
        .parse()
        .map_err(|_| invalid(format!("{key}: cannot parse '{raw}' as a number")))?;
    if !v.is_finite() {
        return Err(invalid(format!("{key}: value must be finite, got {raw}")));
    }
    Ok(v)
}

fn positive(key: &str, raw: &str) -> Result<f64> {
    let v = number(key, raw)?;
    if v <= 0.0 {
        return Err(invalid(format!("{key}: value must be positive, got {raw}")));
    }
    Ok(v)
}

fn unquote(raw: &str) -> &str {
    let t = raw.trim();
    t.strip_prefix('"')
        .and_then(|s| s.strip_suffix('"'))
        .unwrap_or(t)
}

impl RunConfig {
    /// Detects JSON by a leading `{`.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_key_values(text)
        }
    }

    pub fn from_key_values(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| invalid(format!("line {}: expected 'key = value'", lineno + 1)))?;
            pairs.push((key.trim().to_string(), unquote(value).to_string()));
        }
        Self::from_pairs(pairs)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| invalid(format!("invalid JSON: {e}")))?;
        let object = value
            .as_object()
            .ok_or_else(|| invalid("JSON config must be an object"))?;
        let pairs = object
            .iter()
            .map(|(k, v)| {
                let raw = match v {
                    serde_json::Value::String(s) => s.clone(),
                    serde_json::Value::Number(n) => n.to_string(),
                    other => return Err(invalid(format!("{k}: unsupported value {other}"))),
                };
                Ok((k.clone(), raw))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_pairs(pairs)
    }

    fn from_pairs(pairs: Vec<(String, String)>) -> Result<Self> {
        let mut seen = BTreeMap::new();
        for (k, v) in pairs {
            if seen.insert(k.clone(), v).is_some() {
                return Err(invalid(format!("duplicate key '{k}'")));
            }
        }
        let mut cfg = RunConfig::default();
        let mut v_a_set = false;
        let mut v_0_set = false;
        for (key, raw) in &seen {
            match key.as_str() {
                "gamma" => cfg.gamma = number(key, raw)?,
                "c_star_sq" => cfg.c_star_sq = positive(key, raw)?,
                "m0" => cfg.m0 = positive(key, raw)?,
                "a" => cfg.a = positive(key, raw)?,
                "R" | "r_outer" => cfg.r_outer = positive(key, raw)?,
                "v_a" | "v_a_sq" | "v_0" | "v_0_sq" => {
                    let v = positive(key, raw)?;
                    let v = if key.ends_with("_sq") { v.sqrt() } else { v };
                    let (slot, flag) = if key.starts_with("v_a") {
                        (&mut cfg.v_a, &mut v_a_set)
                    } else {
                        (&mut cfg.v_0, &mut v_0_set)
                    };
                    if *flag {
                        return Err(invalid(format!("{key}: speed given twice")));
                    }
                    *slot = v;
                    *flag = true;
                }
                "mode" => {
                    cfg.mode = match raw.as_str() {
                        "transonic" => FlowMode::Transonic,
                        "subsonic-only" | "subsonic_only" => FlowMode::SubsonicOnly,
                        other => return Err(invalid(format!("mode: unknown value '{other}'"))),
                    }
                }
                "sweep_n" => {
                    cfg.sweep_n = raw
                        .parse()
                        .map_err(|_| invalid(format!("sweep_n: cannot parse '{raw}'")))?
                }
                "tol_root" => cfg.tol_root = Some(positive(key, raw)?),
                "tol_quad" => cfg.tol_quad = Some(positive(key, raw)?),
                "output_dir" => cfg.output_dir = Some(PathBuf::from(raw)),
                other => return Err(invalid(format!("unknown key '{other}'"))),
            }
        }
        if cfg.sweep_n < 3 {
            return Err(invalid(format!(
                "sweep_n must be at least 3, got {}",
                cfg.sweep_n
            )));
        }
        Ok(cfg)
    }

    pub fn tolerances(&self) -> Tolerances {
        let mut t = Tolerances::default();
        if let Some(r) = self.tol_root {
            t.root_tol = r;
        }
        if let Some(q) = self.tol_quad {
            t.quad = QuadratureSpec {
                abs_tol: q,
                rel_tol: q,
                ..t.quad
            };
        }
        t
    }

    /// Validated model configuration.
    pub fn model(&self) -> Result<ModelConfig> {
        let params = GasParameters::new(self.gamma, self.c_star_sq, self.m0)?;
        let config = match self.mode {
            FlowMode::Transonic => {
                ModelConfig::new(params, self.a, self.r_outer, self.v_a, self.v_0)?
            }
            FlowMode::SubsonicOnly => {
                ModelConfig::subsonic_only(params, self.a, self.r_outer, self.v_a)?
            }
        };
        config.with_tolerances(self.tolerances())
    }
}
