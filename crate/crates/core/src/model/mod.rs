//! Shared domain types and geometric helpers.

mod angle;
mod kind;
mod trace;
mod vec3;

pub use angle::angular_distance;
pub use kind::ChallengeKind;
pub use trace::{
    InteractionTrace, PoseSample, MAX_RESAMPLE_HZ, MAX_TRACE_DURATION_S, MAX_TRACE_SAMPLES,
    MIN_NORMALIZATION_SCALE_M, MIN_RESAMPLE_HZ,
};
pub use vec3::Vec3;

/// Standing head position used by templates and simulated agents.
pub const DEFAULT_HEAD: Vec3 = Vec3::new(0.0, 1.6, 0.0);
