use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// The six challenge designs served by the gateway.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChallengeKind {
    Text,
    ImageRotated,
    ImagePuzzled,
    ImageSelected,
    TaskDriven,
    MotionBased,
}

impl ChallengeKind {
    pub const ALL: [ChallengeKind; 6] = [
        ChallengeKind::Text,
        ChallengeKind::ImageRotated,
        ChallengeKind::ImagePuzzled,
        ChallengeKind::ImageSelected,
        ChallengeKind::TaskDriven,
        ChallengeKind::MotionBased,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ChallengeKind::Text => "Text",
            ChallengeKind::ImageRotated => "ImageRotated",
            ChallengeKind::ImagePuzzled => "ImagePuzzled",
            ChallengeKind::ImageSelected => "ImageSelected",
            ChallengeKind::TaskDriven => "TaskDriven",
            ChallengeKind::MotionBased => "MotionBased",
        }
    }

    /// Kinds whose answers carry an interaction trace.
    pub fn has_trace(self) -> bool {
        matches!(self, ChallengeKind::TaskDriven | ChallengeKind::MotionBased)
    }
}

impl fmt::Display for ChallengeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ChallengeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ChallengeKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::malformed(format!("unknown challenge kind {s:?}")))
    }
}
