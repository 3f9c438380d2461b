//! Experiment configuration, read from TOML.
//!
//! ```toml
//! seed = 7
//! n_per_cell = 100
//! kinds = ["Text", "TaskDriven"]
//!
//! [[profiles]]
//! name = "human"
//!
//! [[profiles]]
//! name = "naive_bot"
//! kind = "naive_bot"
//!
//! [gateway.gating]
//! TaskDriven = true
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use vrcaptcha_core::agents::{AgentKind, AgentProfile, SolveTimeModel};
use vrcaptcha_core::gateway::GatewayConfig;
use vrcaptcha_core::model::ChallengeKind;

use crate::error::{HarnessError, Result};

/// Corpus sizes and the motion threshold quantile for `calibrate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CalibrationConfig {
    /// Traces per class (human, bot) and trace kind.
    pub corpus_per_class: usize,
    /// Fresh traces per class for the holdout check.
    pub holdout_per_class: usize,
    /// Quantile of human motion distances used as the motion threshold.
    pub theta_quantile: f64,
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        Self { corpus_per_class: 1000, holdout_per_class: 1000, theta_quantile: 0.99 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    /// Attempts per (kind, profile) cell.
    pub n_per_cell: usize,
    pub kinds: Vec<ChallengeKind>,
    pub profiles: Vec<AgentProfile>,
    pub solve_time: SolveTimeModel,
    pub gateway: GatewayConfig,
    pub calibration: CalibrationConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            n_per_cell: 100,
            kinds: ChallengeKind::ALL.to_vec(),
            profiles: vec![AgentProfile::human(), AgentProfile::naive_bot()],
            solve_time: SolveTimeModel::default(),
            gateway: GatewayConfig::default(),
            calibration: CalibrationConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(HarnessError::Config(msg.into()));
        if self.kinds.is_empty() {
            return bad("kinds must not be empty");
        }
        if self.profiles.is_empty() {
            return bad("profiles must not be empty");
        }
        for (i, p) in self.profiles.iter().enumerate() {
            p.validate()?;
            if self.profiles[..i].iter().any(|q| q.name == p.name) {
                return Err(HarnessError::Config(format!("duplicate profile name {:?}", p.name)));
            }
        }
        let c = &self.calibration;
        if c.corpus_per_class < 2 || c.holdout_per_class < 1 {
            return bad("calibration corpus needs at least two traces per class");
        }
        if !(c.theta_quantile > 0.0 && c.theta_quantile <= 1.0) {
            return bad("theta_quantile must be in (0, 1]");
        }
        self.solve_time.validate()?;
        self.gateway.validate()?;
        Ok(())
    }

    /// The first profile of `kind`, or its built-in default.
    pub fn profile_of(&self, kind: AgentKind) -> AgentProfile {
        self.profiles.iter().find(|p| p.kind == kind).cloned().unwrap_or_else(|| match kind {
            AgentKind::Human => AgentProfile::human(),
            AgentKind::NaiveBot => AgentProfile::naive_bot(),
            AgentKind::ReplayBot => AgentProfile::replay_bot(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_is_six_kinds_by_two_profiles() {
        let cfg = ExperimentConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.kinds.len() * cfg.profiles.len(), 12);
    }

    #[test]
    fn toml_profiles_default_to_human_parameters() {
        let cfg = ExperimentConfig::from_toml_str(
            "seed = 3\nkinds = [\"Text\"]\n[[profiles]]\nname = \"slow\"\ntempo_scale = [1.5, 2.0]\n\
             [[profiles]]\nname = \"bot\"\nkind = \"naive_bot\"\n",
        )
        .unwrap();
        assert_eq!(cfg.seed, 3);
        assert_eq!(cfg.kinds, [ChallengeKind::Text]);
        assert_eq!(cfg.profiles[0].kind, AgentKind::Human);
        assert_eq!(cfg.profiles[0].tempo_scale.lo(), 1.5);
        assert_eq!(cfg.profiles[1].kind, AgentKind::NaiveBot);
        assert_eq!(cfg.profile_of(AgentKind::ReplayBot).kind, AgentKind::ReplayBot);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        assert!(ExperimentConfig::from_toml_str("kinds = []").is_err());
        assert!(ExperimentConfig::from_toml_str("kinds = [\"Foo\"]").is_err());
        assert!(ExperimentConfig::from_toml_str("nper = 1").is_err());
        assert!(ExperimentConfig::from_toml_str(
            "[[profiles]]\nname = \"a\"\n[[profiles]]\nname = \"a\"\n"
        )
        .is_err());
        assert!(ExperimentConfig::from_toml_str("[calibration]\ntheta_quantile = 0").is_err());
    }
}
