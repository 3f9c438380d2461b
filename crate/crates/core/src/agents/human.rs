//! Simulated human solvers.

use std::f64::consts::TAU;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::minjerk::min_jerk_profile;
use super::profile::AgentProfile;
use crate::challenge::{
    Keyframe, MotionPresentation, MotionTemplate, PuzzleChallenge, RotationChallenge,
    SelectionChallenge, TaskPresentation, TextChallenge, GRID_SIZE, REST_LEFT, REST_RIGHT,
    TEXT_ALPHABET,
};
use crate::model::{InteractionTrace, PoseSample, Vec3, DEFAULT_HEAD};

pub(crate) fn gauss(rng: &mut impl Rng, sigma: f64) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    sigma * z
}

pub(crate) fn gauss3(rng: &mut impl Rng, sigma: f64) -> Vec3 {
    Vec3::new(gauss(rng, sigma), gauss(rng, sigma), gauss(rng, sigma))
}

fn uniform3(rng: &mut impl Rng, half: f64) -> Vec3 {
    Vec3::new(
        rng.random_range(-half..=half),
        rng.random_range(-half..=half),
        rng.random_range(-half..=half),
    )
}

/// Sample times from 0 to about `duration` with jittered intervals.
fn sample_times(duration: f64, profile: &AgentProfile, rng: &mut impl Rng) -> Vec<f64> {
    let dt = 1.0 / profile.sample_rate_hz;
    let mut times = vec![0.0];
    let mut t = 0.0;
    loop {
        t += dt * (1.0 + gauss(rng, profile.dt_cv)).max(0.2);
        if t > duration {
            break;
        }
        times.push(t);
    }
    times
}

/// Physiological tremor plus tracking noise for one tracked point.
struct Wobble {
    freq: f64,
    amp: f64,
    phase: [f64; 3],
    sensor: f64,
}

impl Wobble {
    fn new(profile: &AgentProfile, amp: f64, rng: &mut impl Rng) -> Self {
        Wobble {
            freq: profile.tremor_hz * rng.random_range(0.9..=1.1),
            amp,
            phase: [rng.random_range(0.0..TAU), rng.random_range(0.0..TAU), rng.random_range(0.0..TAU)],
            sensor: profile.sensor_noise_m,
        }
    }

    fn apply(&self, p: Vec3, t: f64, rng: &mut impl Rng) -> Vec3 {
        let w = TAU * self.freq * t;
        let tremor = Vec3::new(
            (w + self.phase[0]).sin(),
            (w + self.phase[1]).sin(),
            (w + self.phase[2]).sin(),
        ) * self.amp;
        p + tremor + gauss3(rng, self.sensor)
    }
}

/// Slow postural sway of the head around a standing position.
struct Sway {
    base: Vec3,
    freq: f64,
    phase: f64,
}

impl Sway {
    fn new(base: Vec3, rng: &mut impl Rng) -> Self {
        Sway { base, freq: rng.random_range(0.15..0.4), phase: rng.random_range(0.0..TAU) }
    }

    fn at(&self, t: f64) -> Vec3 {
        let s = (TAU * self.freq * t + self.phase).sin() * 0.008;
        self.base + Vec3::new(s, 0.3 * s, 0.5 * s)
    }
}

/// A point-to-point move; the position follows the minimum-jerk profile and
/// an optional vertical bump of height `arc` peaks halfway.
#[derive(Clone, Copy)]
struct Move {
    start: f64,
    duration: f64,
    from: Vec3,
    to: Vec3,
    arc: f64,
}

impl Move {
    fn end(&self) -> f64 {
        self.start + self.duration
    }

    fn at(&self, t: f64) -> Vec3 {
        let tau = ((t - self.start) / self.duration).clamp(0.0, 1.0);
        let s = min_jerk_profile(tau);
        self.from.lerp(self.to, s) + Vec3::UP * (self.arc * 4.0 * s * (1.0 - s))
    }
}

fn path_at(moves: &[Move], rest: Vec3, t: f64) -> Vec3 {
    match moves.iter().rev().find(|m| t >= m.start) {
        Some(m) => m.at(t),
        None => rest,
    }
}

/// Movement time for a reach of `dist` meters.
fn reach_time(dist: f64, base: f64, per_m: f64, tempo: f64) -> f64 {
    tempo * (base + per_m * dist)
}

/// Reach for the object, carry it over an arc, release it above the
/// target, and bring the hand back toward rest.
pub fn sim_human_task(task: &TaskPresentation, profile: &AgentProfile, seed: u64) -> InteractionTrace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tempo = profile.tempo_scale.sample(&mut rng);
    let reaction = profile.reaction_delay_s.sample(&mut rng);
    let rest_r = REST_RIGHT + uniform3(&mut rng, 0.03);
    let rest_l = REST_LEFT + uniform3(&mut rng, 0.03);
    let head = Sway::new(DEFAULT_HEAD + uniform3(&mut rng, 0.04), &mut rng);

    let grab_at = task.object_spawn + gauss3(&mut rng, profile.noise_sigma_m);
    let reach = Move {
        start: reaction,
        duration: reach_time(rest_r.distance(grab_at), 0.35, 0.5, tempo),
        from: rest_r,
        to: grab_at,
        arc: 0.0,
    };
    let press_t = reach.end() + rng.random_range(0.04..0.08);
    let carry_start = press_t + rng.random_range(0.04..0.08);

    // aim the object, not the hand, at a spot a little above the target center
    let drop = task.target_center
        + gauss3(&mut rng, profile.noise_sigma_m)
        + Vec3::UP * rng.random_range(0.0..0.04);
    let grip_offset = task.object_spawn - grab_at;
    let release_hand = drop - grip_offset;
    let lift = rng.random_range(0.12..0.2);
    let mid_y = (grab_at.y + release_hand.y) / 2.0;
    let carry = Move {
        start: carry_start,
        duration: reach_time(grab_at.distance(release_hand), 0.45, 0.6, tempo),
        from: grab_at,
        to: release_hand,
        arc: (task.object_spawn.y + lift - grip_offset.y - mid_y).max(0.0),
    };
    let release_t = carry.end() + rng.random_range(0.04..0.1);
    let back_to = release_hand.lerp(rest_r, rng.random_range(0.4..0.8));
    let retract = Move {
        start: release_t + rng.random_range(0.05..0.12),
        duration: reach_time(release_hand.distance(back_to), 0.3, 0.4, tempo),
        from: release_hand,
        to: back_to,
        arc: 0.0,
    };
    let end = retract.end() + rng.random_range(0.1..0.25);
    let moves = [reach, carry, retract];

    let wobble_r = Wobble::new(profile, profile.tremor_amp_m, &mut rng);
    let wobble_l = Wobble::new(profile, profile.tremor_amp_m, &mut rng);
    let samples = sample_times(end, profile, &mut rng)
        .into_iter()
        .map(|t| PoseSample {
            t,
            head: head.at(t) + gauss3(&mut rng, profile.sensor_noise_m),
            left_hand: wobble_l.apply(rest_l, t, &mut rng),
            right_hand: wobble_r.apply(path_at(&moves, rest_r, t), t, &mut rng),
            trigger_left: false,
            trigger_right: t >= press_t && t < release_t,
        })
        .collect();
    InteractionTrace::from_samples(samples).expect("simulated task trace is valid")
}

/// The template a motion presentation animates.
pub(crate) fn presented_template(p: &MotionPresentation) -> MotionTemplate {
    MotionTemplate {
        template_id: p.template_id,
        keyframes: p.keyframes.clone(),
        nominal_duration: p.nominal_duration,
    }
}

/// Follow the avatar with a lag, a personal tempo, imperfect amplitude and
/// pose, at a random position and body size.
pub fn sim_human_motion(
    motion: &MotionPresentation,
    profile: &AgentProfile,
    seed: u64,
) -> InteractionTrace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let keyframes = presented_template(motion).repeated_keyframes(motion.repetitions);
    let lag = profile.follow_lag_s.sample(&mut rng);
    let tempo = profile.tempo_scale.sample(&mut rng);
    let gain_l = 1.0 + rng.random_range(-1.0..=1.0) * profile.amplitude_jitter;
    let gain_r = 1.0 + rng.random_range(-1.0..=1.0) * profile.amplitude_jitter;
    let body_offset = Vec3::new(rng.random_range(-1.0..1.0), 0.0, rng.random_range(-1.0..1.0));
    let body_scale = rng.random_range(0.9..1.1);
    let rest_l = REST_LEFT + uniform3(&mut rng, 0.02);
    let rest_r = REST_RIGHT + uniform3(&mut rng, 0.02);

    let performed: Vec<Keyframe> = keyframes
        .iter()
        .map(|k| Keyframe {
            t: lag + k.t * tempo,
            left_hand: rest_l + (k.left_hand - REST_LEFT) * gain_l + gauss3(&mut rng, profile.pose_noise_m),
            right_hand: rest_r + (k.right_hand - REST_RIGHT) * gain_r + gauss3(&mut rng, profile.pose_noise_m),
        })
        .collect();
    let end = performed[performed.len() - 1].t + rng.random_range(0.1..0.3);

    let head = Sway::new(DEFAULT_HEAD + uniform3(&mut rng, 0.02), &mut rng);
    let wobble_r = Wobble::new(profile, profile.tremor_amp_m, &mut rng);
    let wobble_l = Wobble::new(profile, profile.tremor_amp_m, &mut rng);
    let body = |p: Vec3| body_offset + p * body_scale;
    let samples = sample_times(end, profile, &mut rng)
        .into_iter()
        .map(|t| {
            let (l, r) = MotionTemplate::pose_at(&performed, t);
            PoseSample {
                t,
                head: body(head.at(t) + gauss3(&mut rng, profile.sensor_noise_m)),
                left_hand: body(wobble_l.apply(l, t, &mut rng)),
                right_hand: body(wobble_r.apply(r, t, &mut rng)),
                trigger_left: false,
                trigger_right: false,
            }
        })
        .collect();
    InteractionTrace::from_samples(samples).expect("simulated motion trace is valid")
}

/// Types the prompt with occasional wrong keys and random letter case.
pub fn sim_human_text(c: &TextChallenge, profile: &AgentProfile, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    c.secret
        .expected
        .bytes()
        .map(|b| {
            let typo = rng.random_bool(profile.typo_prob);
            let mut key = b;
            if typo {
                while key == b {
                    key = TEXT_ALPHABET[rng.random_range(0..TEXT_ALPHABET.len())];
                }
            }
            let lower = rng.random_bool(0.5);
            char::from(if lower { key.to_ascii_lowercase() } else { key })
        })
        .collect()
}

/// Drags the slider back toward upright with Gaussian aiming error.
pub fn sim_human_rotation(c: &RotationChallenge, profile: &AgentProfile, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = &c.presentation;
    (-c.secret.applied_rotation + gauss(&mut rng, profile.rotation_sigma_deg))
        .clamp(p.slider_min, p.slider_max)
}

/// Drops the puzzle piece near the gap.
pub fn sim_human_puzzle(c: &PuzzleChallenge, profile: &AgentProfile, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (c.secret.gap_x + gauss(&mut rng, profile.puzzle_sigma)).clamp(0.0, 1.0)
}

/// Selects matching tiles, misjudging each tile with a small probability.
pub fn sim_human_selection(c: &SelectionChallenge, profile: &AgentProfile, seed: u64) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..GRID_SIZE as u32)
        .filter(|&i| {
            let truth = c.secret.truth.contains(&(i as u8));
            truth != rng.random_bool(profile.tile_slip_prob)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::challenge::{gen_motion, gen_task, Catalog, MotionTemplateId, DEFAULT_GRAB_RADIUS_M};
    use crate::verify::{extract_grab_events, verify_task, VerifyConfig};

    fn task(seed: u64) -> crate::challenge::TaskChallenge {
        gen_task(seed, Catalog::builtin().scenes(), DEFAULT_GRAB_RADIUS_M).unwrap()
    }

    #[test]
    fn task_trace_is_deterministic_and_well_formed() {
        let c = task(3);
        let p = AgentProfile::human();
        let a = sim_human_task(&c.presentation, &p, 17);
        assert_eq!(a, sim_human_task(&c.presentation, &p, 17));
        assert_ne!(a, sim_human_task(&c.presentation, &p, 18));
        assert!(!a.first().trigger_right);
        let mean_dt = a.duration() / (a.len() - 1) as f64;
        assert!((mean_dt * 90.0 - 1.0).abs() < 0.02, "{mean_dt}");
    }

    #[test]
    fn task_carry_arcs_above_spawn() {
        let p = AgentProfile::human();
        for seed in 0..50 {
            let c = task(seed);
            let tr = sim_human_task(&c.presentation, &p, seed);
            let ev = extract_grab_events(&c.presentation, &c.secret, &tr);
            assert_eq!(ev.len(), 1, "seed {seed}");
            assert!(ev[0].max_carry_height >= c.presentation.object_spawn.y + 0.1, "seed {seed}");
        }
    }

    #[test]
    fn huge_endpoint_noise_mostly_fails() {
        let p = AgentProfile { noise_sigma_m: 0.2, ..AgentProfile::human() };
        let passes = (0..200)
            .filter(|&seed| {
                let c = task(seed);
                let tr = sim_human_task(&c.presentation, &p, seed);
                verify_task(&c.presentation, &c.secret, &tr, 0.05).is_pass()
            })
            .count();
        assert!(passes < 100, "{passes}");
    }

    #[test]
    fn motion_trace_follows_lag_and_tempo() {
        let c = gen_motion(5);
        let p = AgentProfile::human();
        let tr = sim_human_motion(&c.presentation, &p, 9);
        assert_eq!(tr, sim_human_motion(&c.presentation, &p, 9));
        // lag + tempo-scaled 3 s + tail
        assert!(tr.duration() > 3.0 * 0.9 + 0.12 && tr.duration() < 3.0 * 1.2 + 0.18 + 0.3);
        let d = crate::verify::motion_distance(&c.secret.template_trace, &tr, &VerifyConfig::default())
            .unwrap();
        assert!(d.is_finite() && d > 0.0);
    }

    #[test]
    fn text_typos_follow_probability() {
        let c = crate::challenge::gen_text(4, 8).unwrap();
        let clean = AgentProfile { typo_prob: 0.0, ..AgentProfile::human() };
        assert!(sim_human_text(&c, &clean, 1).eq_ignore_ascii_case(&c.secret.expected));
        let sloppy = AgentProfile { typo_prob: 1.0, ..AgentProfile::human() };
        let typed = sim_human_text(&c, &sloppy, 1).to_ascii_uppercase();
        assert!(typed.bytes().zip(c.secret.expected.bytes()).all(|(a, b)| a != b));
    }

    #[test]
    fn wrong_template_follow_is_far() {
        let front = gen_motion_for(MotionTemplateId::FrontRaise);
        let side = gen_motion_for(MotionTemplateId::SideRaise);
        let cfg = VerifyConfig::default();
        let tr = sim_human_motion(&side.presentation, &AgentProfile::human(), 2);
        let wrong = crate::verify::motion_distance(&front.secret.template_trace, &tr, &cfg).unwrap();
        let right = crate::verify::motion_distance(&side.secret.template_trace, &tr, &cfg).unwrap();
        assert!(wrong > 2.0 * right, "{wrong} vs {right}");
    }

    fn gen_motion_for(id: MotionTemplateId) -> crate::challenge::MotionChallenge {
        (0..).map(gen_motion).find(|c| c.presentation.template_id == id).unwrap()
    }
}
