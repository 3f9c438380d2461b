//! Gateway configuration: a TOML file plus `VRCAPTCHA_*` environment
//! overrides.
//!
//! ```toml
//! port = 8080
//! ttl_s = 180
//! max_sessions = 10000
//! calibration_path = "calibration.json"
//!
//! [verify]
//! rotation_tol_deg = 10
//!
//! [gating]
//! TaskDriven = true
//! MotionBased = true
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::challenge::GenerationParams;
use crate::error::{Error, Result};
use crate::model::ChallengeKind;
use crate::verify::VerifyConfig;

/// Prefix of every environment override.
pub const ENV_PREFIX: &str = "VRCAPTCHA_";

/// Fingerprint and near-duplicate replay detection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReplayConfig {
    /// How long an exact trace fingerprint stays on record, per kind.
    pub window_s: f64,
    /// RMS position distance (meters) under which an equal-length trace
    /// counts as a resubmission of an accepted one.
    pub near_dup_rms_m: f64,
    /// Accepted traces kept per kind for the near-duplicate check.
    pub near_dup_history: usize,
}

impl Default for ReplayConfig {
    fn default() -> Self {
        Self { window_s: 86_400.0, near_dup_rms_m: 0.0025, near_dup_history: 1000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GatewayConfig {
    pub bind: String,
    pub port: u16,
    /// Seconds a token stays redeemable after issue.
    pub ttl_s: f64,
    /// Upper bound on stored sessions.
    pub max_sessions: usize,
    /// Image/scene catalog; the built-in catalog when absent.
    pub catalog_path: Option<PathBuf>,
    /// Calibration artifact; the built-in artifact when absent.
    pub calibration_path: Option<PathBuf>,
    pub verify: VerifyConfig,
    pub generation: GenerationParams,
    /// Humanness gating per kind. Kinds not listed are ungated.
    pub gating: BTreeMap<ChallengeKind, bool>,
    pub replay: ReplayConfig,
}

impl Default for GatewayConfig {
    fn default() -> Self {
        Self {
            bind: "127.0.0.1".into(),
            port: 8080,
            ttl_s: 180.0,
            max_sessions: 10_000,
            catalog_path: None,
            calibration_path: None,
            verify: VerifyConfig::default(),
            generation: GenerationParams::default(),
            gating: BTreeMap::from([
                (ChallengeKind::TaskDriven, true),
                (ChallengeKind::MotionBased, true),
            ]),
            replay: ReplayConfig::default(),
        }
    }
}

fn parse_env<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| Error::malformed(format!("{key}: cannot parse {value:?}")))
}

fn parse_switch(key: &str, value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "on" | "yes" => Ok(true),
        "0" | "false" | "off" | "no" => Ok(false),
        _ => Err(Error::malformed(format!("{key}: expected on/off, got {value:?}"))),
    }
}

impl GatewayConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: GatewayConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn gated(&self, kind: ChallengeKind) -> bool {
        self.gating.get(&kind).copied().unwrap_or(false)
    }

    /// Applies `VRCAPTCHA_*` overrides from `vars`; other variables are
    /// ignored, unknown `VRCAPTCHA_*` names are an error.
    ///
    /// `VRCAPTCHA_GATING` takes a comma-separated list such as
    /// `TaskDriven=on,MotionBased=off`.
    pub fn apply_env<I, K, V>(&mut self, vars: I) -> Result<()>
    where
        I: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: AsRef<str>,
    {
        for (key, value) in vars {
            let (key, value) = (key.as_ref(), value.as_ref());
            let Some(name) = key.strip_prefix(ENV_PREFIX) else { continue };
            match name {
                "BIND" => self.bind = value.trim().to_string(),
                "PORT" => self.port = parse_env(key, value)?,
                "TTL_S" => self.ttl_s = parse_env(key, value)?,
                "MAX_SESSIONS" => self.max_sessions = parse_env(key, value)?,
                "CATALOG" => self.catalog_path = Some(PathBuf::from(value)),
                "CALIBRATION" => self.calibration_path = Some(PathBuf::from(value)),
                "ROTATION_TOL_DEG" => self.verify.rotation_tol_deg = parse_env(key, value)?,
                "PUZZLE_TOL" => self.verify.puzzle_tol = parse_env(key, value)?,
                "LIFT_THRESHOLD_M" => self.verify.lift_threshold_m = parse_env(key, value)?,
                "GATING" => {
                    for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        let (kind, switch) = item.split_once('=').ok_or_else(|| {
                            Error::malformed(format!("{key}: expected Kind=on|off, got {item:?}"))
                        })?;
                        self.gating.insert(kind.trim().parse()?, parse_switch(key, switch)?);
                    }
                }
                _ => return Err(Error::malformed(format!("unknown override {key}"))),
            }
        }
        self.validate()
    }

    /// Overrides from the process environment.
    pub fn apply_process_env(&mut self) -> Result<()> {
        self.apply_env(std::env::vars())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ttl_s.is_finite() && self.ttl_s > 0.0) {
            return Err(Error::malformed("ttl_s must be positive"));
        }
        if self.max_sessions == 0 {
            return Err(Error::malformed("max_sessions must be at least 1"));
        }
        let r = &self.replay;
        if !(r.window_s.is_finite() && r.window_s > 0.0) {
            return Err(Error::malformed("replay.window_s must be positive"));
        }
        if !(r.near_dup_rms_m.is_finite() && r.near_dup_rms_m >= 0.0) {
            return Err(Error::malformed("replay.near_dup_rms_m must be >= 0"));
        }
        self.verify.validate()
    }
}
