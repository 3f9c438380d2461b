//! Seeded generation of the six challenge kinds.
//!
//! Every generator is a pure function of its seed and catalog and returns a
//! presentation (sent to the client) paired with a secret (kept server-side).
//! Secrets deliberately do not implement `Serialize`.

mod catalog;
mod image;
mod motion;
mod task;
mod text;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use catalog::{
    in_reach_volume, Catalog, ImageEntry, SceneEntry, MIN_OBJECT_TARGET_DISTANCE_M, REACH_CENTER,
    REACH_HALF_EXTENT_M, TARGET_RADIUS_RANGE_M,
};
pub use image::{
    gen_puzzle, gen_rotation, gen_selection, PuzzleChallenge, PuzzlePresentation, PuzzleSecret,
    RotationChallenge, RotationPresentation, RotationSecret, SelectionChallenge,
    SelectionPresentation, SelectionSecret, GAP_X_RANGE, GRID_SIZE, MIN_ROTATION_DEG,
    TRUTH_SIZE_RANGE,
};
pub use motion::{
    gen_motion, gen_motion_with, Keyframe, MotionChallenge, MotionPresentation, MotionSecret,
    MotionTemplate, MotionTemplateId, NOMINAL_DURATION_S, REST_LEFT, REST_RIGHT, TEMPLATE_RATE_HZ,
};
pub use task::{
    gen_task, TaskChallenge, TaskPresentation, TaskSecret, DEFAULT_GRAB_RADIUS_M,
    POSITION_JITTER_M,
};
pub use text::{gen_text, TextChallenge, TextPresentation, TextSecret, TEXT_ALPHABET, TEXT_LENGTH_RANGE};

use crate::error::Result;
use crate::model::ChallengeKind;

/// Knobs for [`generate`] that are not part of the catalog.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenerationParams {
    pub text_length: usize,
    pub grab_radius: f64,
    pub motion_repetitions: u32,
}

impl Default for GenerationParams {
    fn default() -> Self {
        Self { text_length: 6, grab_radius: DEFAULT_GRAB_RADIUS_M, motion_repetitions: 1 }
    }
}

/// A generated challenge of any kind.
#[derive(Debug, Clone, PartialEq)]
pub enum Challenge {
    Text(TextChallenge),
    Rotation(RotationChallenge),
    Puzzle(PuzzleChallenge),
    Selection(SelectionChallenge),
    Task(TaskChallenge),
    Motion(MotionChallenge),
}

/// Client-visible half of a challenge.
#[derive(Debug, Clone, Copy, Serialize)]
#[serde(untagged)]
pub enum Presentation<'a> {
    Text(&'a TextPresentation),
    Rotation(&'a RotationPresentation),
    Puzzle(&'a PuzzlePresentation),
    Selection(&'a SelectionPresentation),
    Task(&'a TaskPresentation),
    Motion(&'a MotionPresentation),
}

impl Challenge {
    pub fn kind(&self) -> ChallengeKind {
        match self {
            Challenge::Text(_) => ChallengeKind::Text,
            Challenge::Rotation(_) => ChallengeKind::ImageRotated,
            Challenge::Puzzle(_) => ChallengeKind::ImagePuzzled,
            Challenge::Selection(_) => ChallengeKind::ImageSelected,
            Challenge::Task(_) => ChallengeKind::TaskDriven,
            Challenge::Motion(_) => ChallengeKind::MotionBased,
        }
    }

    pub fn presentation(&self) -> Presentation<'_> {
        match self {
            Challenge::Text(c) => Presentation::Text(&c.presentation),
            Challenge::Rotation(c) => Presentation::Rotation(&c.presentation),
            Challenge::Puzzle(c) => Presentation::Puzzle(&c.presentation),
            Challenge::Selection(c) => Presentation::Selection(&c.presentation),
            Challenge::Task(c) => Presentation::Task(&c.presentation),
            Challenge::Motion(c) => Presentation::Motion(&c.presentation),
        }
    }

    /// Literal secret values, for leak checks on client-facing output.
    ///
    /// For motion challenges the keyframes are public; only rendered
    /// template coordinates that do not already appear in a keyframe count.
    pub fn secret_values(&self) -> SecretValues {
        let mut out = SecretValues::default();
        match self {
            Challenge::Text(c) => out.strings.push(c.secret.expected.clone()),
            Challenge::Rotation(c) => out.numbers.push(c.secret.applied_rotation),
            Challenge::Puzzle(c) => out.numbers.push(c.secret.gap_x),
            Challenge::Selection(c) => {
                out.index_sets.push(c.secret.truth.iter().map(|&i| u64::from(i)).collect())
            }
            Challenge::Task(c) => out.numbers.push(c.secret.grab_radius),
            Challenge::Motion(c) => {
                let public: Vec<f64> = c
                    .presentation
                    .keyframes
                    .iter()
                    .flat_map(|k| {
                        k.left_hand.to_array().into_iter().chain(k.right_hand.to_array())
                    })
                    .collect();
                for s in c.secret.template_trace.samples() {
                    for v in s.left_hand.to_array().into_iter().chain(s.right_hand.to_array()) {
                        if !public.iter().any(|p| same_number(*p, v)) {
                            out.numbers.push(v);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Secret values of one challenge, see [`Challenge::secret_values`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SecretValues {
    pub strings: Vec<String>,
    pub numbers: Vec<f64>,
    pub index_sets: Vec<Vec<u64>>,
}

fn same_number(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

impl SecretValues {
    /// Searches a client-facing JSON document for any secret value.
    ///
    /// Strings match case-insensitively against JSON string values and as
    /// quoted substrings; numbers match any JSON number within 1e-12
    /// relative; index sets match any JSON array holding exactly that set.
    pub fn find_in_json(&self, json: &str) -> Option<String> {
        let lower = json.to_ascii_lowercase();
        for s in &self.strings {
            if lower.contains(&format!("\"{}\"", s.to_ascii_lowercase())) {
                return Some(format!("string {s:?}"));
            }
        }
        let value: Value = serde_json::from_str(json).ok()?;
        let mut hit = None;
        walk(&value, &mut |v| {
            if hit.is_some() {
                return;
            }
            match v {
                Value::String(s) => {
                    if self.strings.iter().any(|x| x.eq_ignore_ascii_case(s)) {
                        hit = Some(format!("string {s:?}"));
                    }
                }
                Value::Number(n) => {
                    if let Some(f) = n.as_f64() {
                        if self.numbers.iter().any(|x| same_number(*x, f)) {
                            hit = Some(format!("number {f}"));
                        }
                    }
                }
                Value::Array(items) if !self.index_sets.is_empty() => {
                    let mut ints: Vec<u64> = items.iter().filter_map(Value::as_u64).collect();
                    if ints.len() == items.len() {
                        ints.sort_unstable();
                        ints.dedup();
                        if self.index_sets.iter().any(|set| *set == ints) {
                            hit = Some(format!("index set {ints:?}"));
                        }
                    }
                }
                _ => {}
            }
        });
        hit
    }
}

fn walk(v: &Value, f: &mut impl FnMut(&Value)) {
    f(v);
    match v {
        Value::Array(items) => items.iter().for_each(|i| walk(i, f)),
        Value::Object(map) => map.values().for_each(|i| walk(i, f)),
        _ => {}
    }
}

/// Generates a challenge of `kind` from `seed`.
pub fn generate(
    kind: ChallengeKind,
    seed: u64,
    catalog: &Catalog,
    params: &GenerationParams,
) -> Result<Challenge> {
    Ok(match kind {
        ChallengeKind::Text => Challenge::Text(gen_text(seed, params.text_length)?),
        ChallengeKind::ImageRotated => Challenge::Rotation(gen_rotation(seed, catalog.images())?),
        ChallengeKind::ImagePuzzled => Challenge::Puzzle(gen_puzzle(seed, catalog.images())?),
        ChallengeKind::ImageSelected => {
            Challenge::Selection(gen_selection(seed, catalog.images())?)
        }
        ChallengeKind::TaskDriven => {
            Challenge::Task(gen_task(seed, catalog.scenes(), params.grab_radius)?)
        }
        ChallengeKind::MotionBased => {
            Challenge::Motion(gen_motion_with(seed, params.motion_repetitions)?)
        }
    })
}
