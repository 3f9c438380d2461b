//! Pure verification of answers against challenge secrets.

mod dtw;
mod grab;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use dtw::{dtw_banded, dtw_distance, hand_pairs, HandPair};
pub use grab::{extract_grab_events, GrabEvent, Hand};

use crate::challenge::{
    Challenge, MotionSecret, PuzzleSecret, RotationSecret, SelectionSecret, TaskPresentation,
    TaskSecret, TextSecret, GRID_SIZE,
};
use crate::error::{Error, Result};
use crate::model::{angular_distance, ChallengeKind, InteractionTrace};
use crate::{Reason, Verdict};

/// Slack for floating-point comparisons against tolerances.
const TOL_EPS: f64 = 1e-9;

/// A client's solution, tagged by kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum Answer {
    Text { text: String },
    Rotation { user_delta: f64 },
    Puzzle { final_x: f64 },
    Selection { indices: BTreeSet<u32> },
    Task { trace: InteractionTrace },
    Motion { trace: InteractionTrace },
}

impl Answer {
    /// The challenge kind this answer is for.
    pub fn kind(&self) -> ChallengeKind {
        match self {
            Answer::Text { .. } => ChallengeKind::Text,
            Answer::Rotation { .. } => ChallengeKind::ImageRotated,
            Answer::Puzzle { .. } => ChallengeKind::ImagePuzzled,
            Answer::Selection { .. } => ChallengeKind::ImageSelected,
            Answer::Task { .. } => ChallengeKind::TaskDriven,
            Answer::Motion { .. } => ChallengeKind::MotionBased,
        }
    }

    pub fn trace(&self) -> Option<&InteractionTrace> {
        match self {
            Answer::Task { trace } | Answer::Motion { trace } => Some(trace),
            _ => None,
        }
    }
}

/// Tolerances used by the verifier. All are overridable from config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub text_case_sensitive: bool,
    pub rotation_tol_deg: f64,
    pub puzzle_tol: f64,
    pub lift_threshold_m: f64,
    pub motion_rate_hz: f64,
    /// Normalized DTW threshold. Not read from config files: it always comes
    /// from a calibration artifact, the built-in one by default.
    #[serde(skip_deserializing)]
    pub motion_theta: f64,
    /// Sequences longer than this use a banded DTW.
    pub dtw_exact_max_len: usize,
    pub dtw_band_fraction: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            text_case_sensitive: false,
            rotation_tol_deg: 10.0,
            puzzle_tol: 0.02,
            lift_threshold_m: 0.05,
            motion_rate_hz: 50.0,
            motion_theta: crate::humanness::CalibrationArtifact::builtin().motion_theta,
            dtw_exact_max_len: 250,
            dtw_band_fraction: 0.2,
        }
    }
}

pub fn verify_text(secret: &TextSecret, answer: &str, case_sensitive: bool) -> Verdict {
    let expected = secret.expected.as_bytes();
    let given = answer.as_bytes();
    let eq = |a: u8, b: u8| if case_sensitive { a == b } else { a.eq_ignore_ascii_case(&b) };
    if expected.len() == given.len() && expected.iter().zip(given).all(|(&a, &b)| eq(a, b)) {
        return Verdict::pass(1.0);
    }
    let matching = expected.iter().zip(given).filter(|(&a, &b)| eq(a, b)).count();
    let denom = expected.len().max(given.len()).max(1);
    Verdict::fail(Reason::WrongAnswer, matching as f64 / denom as f64)
}

/// Passes when the tilt plus the user's correction lands within `tol_deg`
/// of upright.
pub fn verify_rotation(secret: &RotationSecret, user_delta: f64, tol_deg: f64) -> Verdict {
    let Ok(dist) = angular_distance(secret.applied_rotation + user_delta, 0.0) else {
        return Verdict::reject(Reason::Malformed);
    };
    let correctness = (1.0 - dist / 180.0).max(0.0);
    if dist <= tol_deg + TOL_EPS {
        Verdict::pass(correctness)
    } else {
        Verdict::fail(Reason::WrongAnswer, correctness)
    }
}

pub fn verify_puzzle(secret: &PuzzleSecret, final_x: f64, tol: f64) -> Verdict {
    if !(0.0..=1.0).contains(&final_x) {
        return Verdict::reject(Reason::Malformed);
    }
    let err = (final_x - secret.gap_x).abs();
    let correctness = 1.0 - err;
    if err <= tol + TOL_EPS {
        Verdict::pass(correctness)
    } else {
        Verdict::fail(Reason::WrongAnswer, correctness)
    }
}

/// Exact set match; correctness is the Jaccard index.
pub fn verify_selection(secret: &SelectionSecret, indices: &BTreeSet<u32>) -> Verdict {
    if indices.iter().any(|&i| i as usize >= GRID_SIZE) {
        return Verdict::reject(Reason::Malformed);
    }
    let truth: BTreeSet<u32> = secret.truth.iter().map(|&i| u32::from(i)).collect();
    let inter = truth.intersection(indices).count();
    let union = truth.union(indices).count();
    let jaccard = if union == 0 { 1.0 } else { inter as f64 / union as f64 };
    if truth == *indices {
        Verdict::pass(jaccard)
    } else {
        Verdict::fail(Reason::WrongAnswer, jaccard)
    }
}

/// Passes when some grab lifts the object at least `lift_threshold_m`
/// above its spawn height and releases it inside the target sphere.
///
/// Failing reasons: `no_grab` without grab events, `outside_target` when
/// no release lands in the target, `wrong_answer` when a release lands in
/// the target but the object was never lifted.
pub fn verify_task(
    task: &TaskPresentation,
    secret: &TaskSecret,
    trace: &InteractionTrace,
    lift_threshold_m: f64,
) -> Verdict {
    let events = extract_grab_events(task, secret, trace);
    if events.is_empty() {
        return Verdict::reject(Reason::NoGrab);
    }
    let lift_height = task.object_spawn.y + lift_threshold_m;
    let in_target = |e: &GrabEvent| {
        e.release_pos.distance(task.target_center) <= task.target_radius + TOL_EPS
    };
    let lifted = |e: &GrabEvent| e.max_carry_height + TOL_EPS >= lift_height;
    let best_dist = events
        .iter()
        .map(|e| e.release_pos.distance(task.target_center))
        .fold(f64::INFINITY, f64::min);
    let correctness = (1.0 - best_dist / (2.0 * task.target_radius)).max(0.0);

    if events.iter().any(|e| in_target(e) && lifted(e)) {
        Verdict::pass(1.0)
    } else if events.iter().any(in_target) {
        Verdict::fail(Reason::WrongAnswer, correctness)
    } else {
        Verdict::fail(Reason::OutsideTarget, correctness)
    }
}

/// Length-normalized DTW distance between a template and an answer trace,
/// both normalized and resampled to `cfg.motion_rate_hz`.
pub fn motion_distance(
    template: &InteractionTrace,
    answer: &InteractionTrace,
    cfg: &VerifyConfig,
) -> Result<f64> {
    let a = hand_pairs(&template.normalize().resample(cfg.motion_rate_hz)?);
    let b = hand_pairs(&answer.normalize().resample(cfg.motion_rate_hz)?);
    let longest = a.len().max(b.len());
    let window = (longest > cfg.dtw_exact_max_len)
        .then(|| (cfg.dtw_band_fraction * longest as f64).ceil() as usize);
    let raw = dtw_banded(&a, &b, window)?;
    Ok(raw / (a.len() + b.len()) as f64)
}

pub fn verify_motion(secret: &MotionSecret, trace: &InteractionTrace, cfg: &VerifyConfig) -> Verdict {
    let theta = cfg.motion_theta;
    let Ok(d) = motion_distance(&secret.template_trace, trace, cfg) else {
        return Verdict::reject(Reason::Malformed);
    };
    let correctness = (1.0 - d / (2.0 * theta)).max(0.0);
    if d <= theta {
        Verdict::pass(correctness)
    } else {
        Verdict::fail(Reason::MotionMismatch, correctness)
    }
}

/// Verifies any answer; a kind mismatch is `malformed`.
pub fn verify(challenge: &Challenge, answer: &Answer, cfg: &VerifyConfig) -> Verdict {
    match (challenge, answer) {
        (Challenge::Text(c), Answer::Text { text }) => {
            verify_text(&c.secret, text, cfg.text_case_sensitive)
        }
        (Challenge::Rotation(c), Answer::Rotation { user_delta }) => {
            verify_rotation(&c.secret, *user_delta, cfg.rotation_tol_deg)
        }
        (Challenge::Puzzle(c), Answer::Puzzle { final_x }) => {
            verify_puzzle(&c.secret, *final_x, cfg.puzzle_tol)
        }
        (Challenge::Selection(c), Answer::Selection { indices }) => {
            verify_selection(&c.secret, indices)
        }
        (Challenge::Task(c), Answer::Task { trace }) => {
            verify_task(&c.presentation, &c.secret, trace, cfg.lift_threshold_m)
        }
        (Challenge::Motion(c), Answer::Motion { trace }) => verify_motion(&c.secret, trace, cfg),
        _ => Verdict::reject(Reason::Malformed),
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("rotation_tol_deg", self.rotation_tol_deg),
            ("puzzle_tol", self.puzzle_tol),
            ("lift_threshold_m", self.lift_threshold_m),
            ("motion_theta", self.motion_theta),
            ("dtw_band_fraction", self.dtw_band_fraction),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::malformed(format!("{name} must be positive")));
            }
        }
        if !(crate::model::MIN_RESAMPLE_HZ..=crate::model::MAX_RESAMPLE_HZ)
            .contains(&self.motion_rate_hz)
        {
            return Err(Error::malformed("motion_rate_hz out of range"));
        }
        Ok(())
    }
}
