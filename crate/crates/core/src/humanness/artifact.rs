//! The calibration artifact: fitted humanness models plus the motion threshold.

use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::score::HumannessModel;
use crate::error::{Error, Result};
use crate::model::ChallengeKind;

const BUILTIN_CALIBRATION: &str = include_str!("../../data/calibration.json");

pub const ARTIFACT_VERSION: u32 = 1;

/// Everything the gateway needs that is fitted from a simulated corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationArtifact {
    pub version: u32,
    /// Seed the corpus was generated from.
    pub seed: u64,
    /// Traces per class and kind in the corpus.
    pub corpus_per_class: usize,
    /// SHA-256 over the canonical corpus records, hex-encoded.
    pub corpus_fingerprint: String,
    /// Length-normalized DTW threshold for motion challenges.
    pub motion_theta: f64,
    pub task: HumannessModel,
    pub motion: HumannessModel,
}

impl CalibrationArtifact {
    /// The artifact shipped with the crate.
    pub fn builtin() -> &'static CalibrationArtifact {
        static BUILTIN: OnceLock<CalibrationArtifact> = OnceLock::new();
        BUILTIN.get_or_init(|| {
            Self::from_json(BUILTIN_CALIBRATION).expect("built-in calibration is valid")
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let artifact: CalibrationArtifact = serde_json::from_str(text)?;
        artifact.validate()?;
        Ok(artifact)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Pretty JSON with a trailing newline; stable for a given value.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("artifact serializes");
        s.push('\n');
        s
    }

    /// The humanness model for a trace-bearing kind.
    pub fn model_for(&self, kind: ChallengeKind) -> Option<&HumannessModel> {
        match kind {
            ChallengeKind::TaskDriven => Some(&self.task),
            ChallengeKind::MotionBased => Some(&self.motion),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != ARTIFACT_VERSION {
            return Err(Error::malformed(format!(
                "calibration version {} unsupported, expected {ARTIFACT_VERSION}",
                self.version
            )));
        }
        if !(self.motion_theta.is_finite() && self.motion_theta > 0.0) {
            return Err(Error::malformed("motion_theta must be positive"));
        }
        self.task.validate()?;
        self.motion.validate()
    }
}
