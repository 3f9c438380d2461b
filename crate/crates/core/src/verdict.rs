use serde::{Deserialize, Serialize};

use crate::humanness::HumannessScore;

/// Why a submission passed or failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    Ok,
    WrongAnswer,
    NoGrab,
    WrongObject,
    OutsideTarget,
    MotionMismatch,
    HumannessReject,
    Expired,
    Replay,
    Malformed,
}

impl Reason {
    pub fn as_str(self) -> &'static str {
        match self {
            Reason::Ok => "ok",
            Reason::WrongAnswer => "wrong_answer",
            Reason::NoGrab => "no_grab",
            Reason::WrongObject => "wrong_object",
            Reason::OutsideTarget => "outside_target",
            Reason::MotionMismatch => "motion_mismatch",
            Reason::HumannessReject => "humanness_reject",
            Reason::Expired => "expired",
            Reason::Replay => "replay",
            Reason::Malformed => "malformed",
        }
    }
}

/// Outcome of verifying one submission. `pass` implies `reason == Ok`.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pass: bool,
    reason: Reason,
    correctness: f64,
    humanness: Option<HumannessScore>,
}

impl Verdict {
    pub fn pass(correctness: f64) -> Self {
        Self { pass: true, reason: Reason::Ok, correctness: clamp01(correctness), humanness: None }
    }

    /// A failing verdict. `reason` must not be [`Reason::Ok`].
    pub fn fail(reason: Reason, correctness: f64) -> Self {
        debug_assert_ne!(reason, Reason::Ok);
        let reason = if reason == Reason::Ok { Reason::WrongAnswer } else { reason };
        Self { pass: false, reason, correctness: clamp01(correctness), humanness: None }
    }

    pub fn reject(reason: Reason) -> Self {
        Self::fail(reason, 0.0)
    }

    pub fn with_humanness(mut self, score: HumannessScore) -> Self {
        self.humanness = Some(score);
        self
    }

    /// Turns a passing verdict into a humanness rejection, keeping correctness.
    pub fn into_humanness_reject(self) -> Self {
        Self { pass: false, reason: Reason::HumannessReject, ..self }
    }

    pub fn is_pass(&self) -> bool {
        self.pass
    }

    pub fn reason(&self) -> Reason {
        self.reason
    }

    pub fn correctness(&self) -> f64 {
        self.correctness
    }

    pub fn humanness(&self) -> Option<&HumannessScore> {
        self.humanness.as_ref()
    }
}

fn clamp01(x: f64) -> f64 {
    if x.is_nan() {
        0.0
    } else {
        x.clamp(0.0, 1.0)
    }
}
