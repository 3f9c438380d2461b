use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::agents::min_jerk;
use crate::error::{Error, Result};
use crate::model::{InteractionTrace, PoseSample, Vec3, DEFAULT_HEAD};

/// Rate at which template traces are rendered.
pub const TEMPLATE_RATE_HZ: f64 = 50.0;
pub const NOMINAL_DURATION_S: f64 = 3.0;

/// Hands hanging at thigh height.
pub const REST_LEFT: Vec3 = Vec3::new(-0.2, 0.85, 0.05);
pub const REST_RIGHT: Vec3 = Vec3::new(0.2, 0.85, 0.05);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MotionTemplateId {
    FrontRaise,
    SideRaise,
    UpRaise,
}

impl MotionTemplateId {
    pub const ALL: [MotionTemplateId; 3] =
        [MotionTemplateId::FrontRaise, MotionTemplateId::SideRaise, MotionTemplateId::UpRaise];

    pub fn as_str(self) -> &'static str {
        match self {
            MotionTemplateId::FrontRaise => "front_raise",
            MotionTemplateId::SideRaise => "side_raise",
            MotionTemplateId::UpRaise => "up_raise",
        }
    }

    /// Hand positions at the top of the movement.
    fn apex(self) -> (Vec3, Vec3) {
        match self {
            // straight ahead at shoulder height
            MotionTemplateId::FrontRaise => (Vec3::new(-0.2, 1.45, 0.6), Vec3::new(0.2, 1.45, 0.6)),
            // out to the sides at shoulder height
            MotionTemplateId::SideRaise => (Vec3::new(-0.8, 1.45, 0.0), Vec3::new(0.8, 1.45, 0.0)),
            // overhead
            MotionTemplateId::UpRaise => (Vec3::new(-0.2, 2.05, 0.05), Vec3::new(0.2, 2.05, 0.05)),
        }
    }
}

impl fmt::Display for MotionTemplateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MotionTemplateId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        MotionTemplateId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::malformed(format!("unknown motion template {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Keyframe {
    pub t: f64,
    pub left_hand: Vec3,
    pub right_hand: Vec3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotionTemplate {
    pub template_id: MotionTemplateId,
    pub keyframes: Vec<Keyframe>,
    pub nominal_duration: f64,
}

impl MotionTemplate {
    /// Rest, apex, rest over [`NOMINAL_DURATION_S`].
    pub fn builtin(id: MotionTemplateId) -> Self {
        let (apex_l, apex_r) = id.apex();
        let half = NOMINAL_DURATION_S / 2.0;
        MotionTemplate {
            template_id: id,
            keyframes: vec![
                Keyframe { t: 0.0, left_hand: REST_LEFT, right_hand: REST_RIGHT },
                Keyframe { t: half, left_hand: apex_l, right_hand: apex_r },
                Keyframe { t: NOMINAL_DURATION_S, left_hand: REST_LEFT, right_hand: REST_RIGHT },
            ],
            nominal_duration: NOMINAL_DURATION_S,
        }
    }

    /// Keyframes for `repetitions` back-to-back performances.
    pub fn repeated_keyframes(&self, repetitions: u32) -> Vec<Keyframe> {
        let mut out = self.keyframes.clone();
        for r in 1..repetitions {
            let shift = self.nominal_duration * f64::from(r);
            out.extend(
                self.keyframes.iter().skip(1).map(|k| Keyframe { t: k.t + shift, ..*k }),
            );
        }
        out
    }

    /// Hand positions at time `t`, min-jerk interpolated between keyframes.
    pub fn pose_at(keyframes: &[Keyframe], t: f64) -> (Vec3, Vec3) {
        let last = keyframes.len() - 1;
        if t <= keyframes[0].t {
            return (keyframes[0].left_hand, keyframes[0].right_hand);
        }
        if t >= keyframes[last].t {
            return (keyframes[last].left_hand, keyframes[last].right_hand);
        }
        let i = keyframes.partition_point(|k| k.t <= t) - 1;
        let (a, b) = (&keyframes[i], &keyframes[i + 1]);
        let span = b.t - a.t;
        let local = (t - a.t).clamp(0.0, span);
        (
            min_jerk(a.left_hand, b.left_hand, span, local).expect("t within segment"),
            min_jerk(a.right_hand, b.right_hand, span, local).expect("t within segment"),
        )
    }

    /// Renders the template at [`TEMPLATE_RATE_HZ`] with a fixed head.
    pub fn render(&self, repetitions: u32) -> InteractionTrace {
        let keyframes = self.repeated_keyframes(repetitions.max(1));
        let total = keyframes[keyframes.len() - 1].t;
        let steps = (total * TEMPLATE_RATE_HZ).round() as usize;
        let samples = (0..=steps)
            .map(|k| {
                let t = k as f64 / TEMPLATE_RATE_HZ;
                let (left_hand, right_hand) = Self::pose_at(&keyframes, t);
                PoseSample {
                    t,
                    head: DEFAULT_HEAD,
                    left_hand,
                    right_hand,
                    trigger_left: false,
                    trigger_right: false,
                }
            })
            .collect();
        InteractionTrace::new(samples, TEMPLATE_RATE_HZ).expect("template renders a valid trace")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MotionPresentation {
    pub template_id: MotionTemplateId,
    pub repetitions: u32,
    /// The avatar animation the user follows.
    pub keyframes: Vec<Keyframe>,
    pub nominal_duration: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MotionSecret {
    pub template_trace: InteractionTrace,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MotionChallenge {
    pub presentation: MotionPresentation,
    pub secret: MotionSecret,
}

pub fn gen_motion(seed: u64) -> MotionChallenge {
    gen_motion_with(seed, 1).expect("one repetition is valid")
}

pub fn gen_motion_with(seed: u64, repetitions: u32) -> Result<MotionChallenge> {
    if repetitions == 0 {
        return Err(Error::malformed("repetitions must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = MotionTemplateId::ALL[rng.random_range(0..MotionTemplateId::ALL.len())];
    let template = MotionTemplate::builtin(id);
    let template_trace = template.render(repetitions);
    Ok(MotionChallenge {
        presentation: MotionPresentation {
            template_id: id,
            repetitions,
            keyframes: template.keyframes.clone(),
            nominal_duration: template.nominal_duration,
        },
        secret: MotionSecret { template_trace },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_templates_with_closed_keyframes() {
        let ids: Vec<&str> = MotionTemplateId::ALL.iter().map(|i| i.as_str()).collect();
        assert_eq!(ids, ["front_raise", "side_raise", "up_raise"]);
        for id in MotionTemplateId::ALL {
            let t = MotionTemplate::builtin(id);
            let (first, last) = (t.keyframes[0], t.keyframes[t.keyframes.len() - 1]);
            assert_eq!(first.left_hand, last.left_hand);
            assert_eq!(first.right_hand, last.right_hand);
            assert_eq!(first.t, 0.0);
            assert_eq!(last.t, t.nominal_duration);
            assert!(t.keyframes.windows(2).all(|w| w[0].t < w[1].t));
        }
    }

    #[test]
    fn front_raise_goes_from_thigh_to_shoulder_height_ahead() {
        let t = MotionTemplate::builtin(MotionTemplateId::FrontRaise);
        let apex = t.keyframes[1];
        assert!(apex.right_hand.y > REST_RIGHT.y + 0.5);
        assert!(apex.right_hand.z > REST_RIGHT.z + 0.5);
        assert_eq!(apex.right_hand.x, REST_RIGHT.x);
        assert_eq!(apex.left_hand.x, REST_LEFT.x);
    }

    #[test]
    fn rendered_trace_spans_nominal_duration() {
        for id in MotionTemplateId::ALL {
            let tr = MotionTemplate::builtin(id).render(1);
            assert_eq!(tr.first().t, 0.0);
            assert_eq!(tr.duration(), NOMINAL_DURATION_S);
            assert_eq!(tr.len(), 151);
            assert!(tr.samples().windows(2).all(|w| w[0].t < w[1].t));
        }
        let twice = MotionTemplate::builtin(MotionTemplateId::UpRaise).render(2);
        assert_eq!(twice.duration(), 2.0 * NOMINAL_DURATION_S);
    }

    #[test]
    fn generation_is_deterministic_and_covers_all_templates() {
        assert_eq!(gen_motion(7), gen_motion(7));
        let mut seen = std::collections::BTreeSet::new();
        for seed in 0..200 {
            let c = gen_motion(seed);
            assert_eq!(c.presentation.repetitions, 1);
            seen.insert(c.presentation.template_id);
        }
        assert_eq!(seen.len(), 3);
        assert!(gen_motion_with(1, 0).is_err());
    }
}
