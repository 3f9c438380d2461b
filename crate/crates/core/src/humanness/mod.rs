//! Kinematic humanness scoring of interaction traces.
//!
//! Five features are extracted from the more-traveled hand, standardized
//! against a simulated human population, and combined by a logistic model
//! that penalizes deviations beyond a dead zone. Motion that is too perfect
//! (straight, jerk-free, perfectly regular sampling) and motion that is too
//! erratic both lower the score. The feature set is this crate's proposal,
//! not an established standard.

mod artifact;
mod features;
mod roc;
mod score;

pub use artifact::{CalibrationArtifact, ARTIFACT_VERSION};
pub use features::{
    extract_features, HumannessFeatures, FEATURE_RATE_HZ, MIN_FEATURE_DURATION_S, PAUSE_SPEED_M_S,
};
pub use roc::{calibrate_threshold, evaluate_roc, Labeled, Roc};
pub use score::{
    humanness_score, logistic, FeatureModel, HumannessModel, HumannessScore, ScoringWeights, Shape,
    DEFAULT_DEAD_ZONE,
};
