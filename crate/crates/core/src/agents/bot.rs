//! Adversary models: geometrically perfect scripted solvers and replays.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::human::{gauss3, presented_template};
use crate::challenge::{MotionPresentation, TaskPresentation, REST_LEFT};
use crate::model::{InteractionTrace, PoseSample, Vec3, DEFAULT_HEAD};

/// Sampling rate of scripted bots; intervals are exactly uniform.
pub const BOT_RATE_HZ: f64 = 90.0;
/// Carry speed of the scripted task bot.
pub const BOT_SPEED_M_S: f64 = 0.5;
/// Scripted task traces last at least this long.
pub const BOT_MIN_DURATION_S: f64 = 0.6;
/// Height above the lift threshold the task bot aims for.
const LIFT_MARGIN_M: f64 = 0.01;

/// Point at arc length `s` along a polyline; extrapolates along the first
/// segment for negative `s` and stops at the last point.
fn along(points: &[Vec3], s: f64) -> Vec3 {
    if s < 0.0 {
        let d = points[1] - points[0];
        return points[0] + d * (s / d.norm());
    }
    let mut rest = s;
    for w in points.windows(2) {
        let len = w[0].distance(w[1]);
        if len > 0.0 && rest <= len {
            return w[0] + (w[1] - w[0]) * (rest / len);
        }
        rest -= len;
    }
    points[points.len() - 1]
}

fn polyline_length(points: &[Vec3]) -> f64 {
    points.windows(2).map(|w| w[0].distance(w[1])).sum()
}

/// Straight-line, constant-speed solution with uniform sampling.
///
/// The hand starts on the object, squeezes at sample 1 and lets go at the
/// last sample. The object goes straight to a point above the target
/// center high enough to count as lifted; if that point falls outside the
/// target, it is lifted straight up first and then carried to the center.
/// The bot is deterministic; the seed is accepted for interface symmetry.
pub fn sim_bot_naive_task(task: &TaskPresentation, lift_threshold_m: f64, _seed: u64) -> InteractionTrace {
    let spawn = task.object_spawn;
    let lift_y = spawn.y + lift_threshold_m + LIFT_MARGIN_M;
    let height = (lift_y - task.target_center.y).max(0.0);
    let path: Vec<Vec3> = if height <= 0.9 * task.target_radius {
        vec![spawn, task.target_center + Vec3::UP * height]
    } else {
        vec![spawn, Vec3::new(spawn.x, lift_y, spawn.z), task.target_center]
    };
    let length = polyline_length(&path);
    let steps = ((length / BOT_SPEED_M_S).max(BOT_MIN_DURATION_S) * BOT_RATE_HZ).ceil() as usize;
    // object position at sample k is along((k - 1) * step); the hand holds
    // the object at zero offset, so sample 0 sits one step behind the spawn
    let step = length / (steps - 1) as f64;
    let samples = (0..=steps)
        .map(|k| PoseSample {
            t: k as f64 / BOT_RATE_HZ,
            head: DEFAULT_HEAD,
            left_hand: REST_LEFT,
            right_hand: along(&path, (k as f64 - 1.0) * step),
            trigger_left: false,
            trigger_right: k >= 1 && k < steps,
        })
        .collect();
    InteractionTrace::new(samples, BOT_RATE_HZ).expect("scripted task trace is valid")
}

/// Piecewise-linear, constant-velocity pass through the avatar keyframes
/// with uniform sampling and no reaction delay.
pub fn sim_bot_naive_motion(motion: &MotionPresentation, _seed: u64) -> InteractionTrace {
    let keyframes = presented_template(motion).repeated_keyframes(motion.repetitions);
    let end = keyframes[keyframes.len() - 1].t;
    let steps = (end * BOT_RATE_HZ).round() as usize;
    let samples = (0..=steps)
        .map(|k| {
            let t = k as f64 / BOT_RATE_HZ;
            let i = keyframes.partition_point(|f| f.t <= t).clamp(1, keyframes.len() - 1) - 1;
            let (a, b) = (&keyframes[i], &keyframes[i + 1]);
            let alpha = ((t - a.t) / (b.t - a.t)).clamp(0.0, 1.0);
            PoseSample {
                t,
                head: DEFAULT_HEAD,
                left_hand: a.left_hand.lerp(b.left_hand, alpha),
                right_hand: a.right_hand.lerp(b.right_hand, alpha),
                trigger_left: false,
                trigger_right: false,
            }
        })
        .collect();
    InteractionTrace::new(samples, BOT_RATE_HZ).expect("scripted motion trace is valid")
}

/// Copy of `recorded` with i.i.d. Gaussian noise of `jitter_sigma` per axis
/// on every position; timing and triggers are preserved.
pub fn sim_bot_replay(recorded: &InteractionTrace, jitter_sigma: f64, seed: u64) -> InteractionTrace {
    if jitter_sigma == 0.0 {
        return recorded.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = recorded
        .samples()
        .iter()
        .map(|s| PoseSample {
            head: s.head + gauss3(&mut rng, jitter_sigma),
            left_hand: s.left_hand + gauss3(&mut rng, jitter_sigma),
            right_hand: s.right_hand + gauss3(&mut rng, jitter_sigma),
            ..*s
        })
        .collect();
    InteractionTrace::new(samples, recorded.declared_rate_hz()).expect("jitter keeps the trace valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::challenge::{gen_motion, gen_task, Catalog, DEFAULT_GRAB_RADIUS_M};
    use crate::humanness::extract_features;
    use crate::verify::{verify_motion, verify_task, VerifyConfig};

    #[test]
    fn naive_task_bot_solves_geometry_with_perfect_features() {
        let scenes = Catalog::builtin();
        for seed in 0..300 {
            let c = gen_task(seed, scenes.scenes(), DEFAULT_GRAB_RADIUS_M).unwrap();
            let tr = sim_bot_naive_task(&c.presentation, 0.05, seed);
            let v = verify_task(&c.presentation, &c.secret, &tr, 0.05);
            assert!(v.is_pass(), "seed {seed}: {:?}", v.reason());
            let f = extract_features(&tr).unwrap();
            assert_eq!(f.dt_cv, 0.0);
            if tr.samples().len() > 2 && f.path_efficiency == 1.0 {
                assert!(f.norm_jerk < 1e-9, "seed {seed}: {}", f.norm_jerk);
            }
        }
    }

    #[test]
    fn straight_bot_path_is_exactly_efficient() {
        let c = gen_task(1, Catalog::builtin().scenes(), DEFAULT_GRAB_RADIUS_M).unwrap();
        let f = extract_features(&sim_bot_naive_task(&c.presentation, 0.05, 0)).unwrap();
        assert_eq!(f.path_efficiency, 1.0);
        assert!(f.norm_jerk < 1e-9);
        assert_eq!(f.dt_cv, 0.0);
    }

    #[test]
    fn naive_motion_bot_matches_template_geometry() {
        let cfg = VerifyConfig::default();
        for seed in 0..20 {
            let c = gen_motion(seed);
            let tr = sim_bot_naive_motion(&c.presentation, seed);
            assert!(verify_motion(&c.secret, &tr, &cfg).is_pass(), "seed {seed}");
            assert_eq!(extract_features(&tr).unwrap().dt_cv, 0.0);
        }
    }

    #[test]
    fn replay_without_jitter_is_identical() {
        let c = gen_motion(1);
        let tr = sim_bot_naive_motion(&c.presentation, 0);
        let replay = sim_bot_replay(&tr, 0.0, 5);
        assert_eq!(replay.to_canonical_json(), tr.to_canonical_json());
        let jittered = sim_bot_replay(&tr, 0.001, 5);
        assert_eq!(jittered.len(), tr.len());
        assert_ne!(jittered, tr);
        assert!(jittered.samples().iter().zip(tr.samples()).all(|(a, b)| a.t == b.t));
    }
}
