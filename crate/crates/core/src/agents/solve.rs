//! One simulated attempt: an answer plus its modeled solve time.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::bot::{sim_bot_naive_motion, sim_bot_naive_task, sim_bot_replay};
use super::human::{
    sim_human_motion, sim_human_puzzle, sim_human_rotation, sim_human_selection, sim_human_task,
    sim_human_text,
};
use super::profile::{AgentKind, AgentProfile};
use crate::challenge::{Challenge, GRID_SIZE};
use crate::verify::{Answer, VerifyConfig};

/// Time costs of the 2D interactions, in seconds.
///
/// Trace-bearing kinds take the duration of the trace itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolveTimeModel {
    /// Reading the prompt.
    pub read_s: f64,
    /// Pressing one virtual-keyboard key.
    pub keypress_s: f64,
    /// Moving the pointer to the next key.
    pub pointing_s: f64,
    /// Confirming the answer.
    pub confirm_s: f64,
    /// Grabbing a slider handle or puzzle piece.
    pub grab_s: f64,
    /// Dragging across the full slider range.
    pub full_drag_s: f64,
    /// Fine adjustment before letting go.
    pub adjust_s: f64,
    /// Looking at one selection tile.
    pub scan_per_tile_s: f64,
    /// Pointing at and selecting one tile.
    pub select_per_tile_s: f64,
    /// A scripted bot answering a 2D challenge.
    pub bot_s: f64,
}

impl Default for SolveTimeModel {
    fn default() -> Self {
        Self {
            read_s: 0.6,
            keypress_s: 0.9,
            pointing_s: 0.4,
            confirm_s: 0.6,
            grab_s: 0.5,
            full_drag_s: 1.5,
            adjust_s: 0.8,
            scan_per_tile_s: 0.35,
            select_per_tile_s: 0.6,
            bot_s: 0.05,
        }
    }
}

/// A simulated answer and how long a solver would have spent on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Attempt {
    pub answer: Answer,
    pub solve_time_s: f64,
}

/// Draw-independent sub-seeds so each simulator gets its own stream.
fn sub_seed(seed: u64, lane: u64) -> u64 {
    use rand::Rng;
    ChaCha8Rng::seed_from_u64(seed ^ lane.wrapping_mul(0x9E37_79B9_7F4A_7C15)).random()
}

/// Solves `challenge` as a human or a naive bot would.
///
/// Replay bots have nothing to replay here and solve like a human; use
/// [`replay_attempt`] to resubmit a recorded answer.
pub fn solve(
    challenge: &Challenge,
    profile: &AgentProfile,
    times: &SolveTimeModel,
    verify: &VerifyConfig,
    seed: u64,
) -> Attempt {
    match profile.kind {
        AgentKind::NaiveBot => solve_naive(challenge, times, verify, seed),
        AgentKind::Human | AgentKind::ReplayBot => solve_human(challenge, profile, times, seed),
    }
}

fn solve_human(challenge: &Challenge, profile: &AgentProfile, times: &SolveTimeModel, seed: u64) -> Attempt {
    let answer_seed = sub_seed(seed, 1);
    let reaction = profile.reaction_delay_s.sample(&mut ChaCha8Rng::seed_from_u64(sub_seed(seed, 2)));
    let tempo = profile.tempo_scale.sample(&mut ChaCha8Rng::seed_from_u64(sub_seed(seed, 3)));
    let (answer, solve_time_s) = match challenge {
        Challenge::Text(c) => {
            let text = sim_human_text(c, profile, answer_seed);
            let per_key = tempo * (times.keypress_s + times.pointing_s);
            let t = reaction + times.read_s + per_key * text.len() as f64 + times.confirm_s;
            (Answer::Text { text }, t)
        }
        Challenge::Rotation(c) => {
            let user_delta = sim_human_rotation(c, profile, answer_seed);
            let span = c.presentation.slider_max - c.presentation.slider_min;
            let drag = times.full_drag_s * user_delta.abs() / span;
            let t = reaction + times.read_s + tempo * (times.grab_s + drag + times.adjust_s) + times.confirm_s;
            (Answer::Rotation { user_delta }, t)
        }
        Challenge::Puzzle(c) => {
            let final_x = sim_human_puzzle(c, profile, answer_seed);
            let drag = times.full_drag_s * final_x;
            let t = reaction + times.read_s + tempo * (times.grab_s + drag + times.adjust_s) + times.confirm_s;
            (Answer::Puzzle { final_x }, t)
        }
        Challenge::Selection(c) => {
            let indices: BTreeSet<u32> = sim_human_selection(c, profile, answer_seed).into_iter().collect();
            let scan = times.scan_per_tile_s * GRID_SIZE as f64;
            let picks = times.select_per_tile_s * indices.len() as f64;
            let t = reaction + times.read_s + tempo * (scan + picks) + times.confirm_s;
            (Answer::Selection { indices }, t)
        }
        Challenge::Task(c) => {
            let trace = sim_human_task(&c.presentation, profile, answer_seed);
            let t = trace.last().t;
            (Answer::Task { trace }, t)
        }
        Challenge::Motion(c) => {
            let trace = sim_human_motion(&c.presentation, profile, answer_seed);
            let t = trace.last().t;
            (Answer::Motion { trace }, t)
        }
    };
    Attempt { answer, solve_time_s }
}

/// The analytically correct answer, produced instantly and perfectly.
fn solve_naive(challenge: &Challenge, times: &SolveTimeModel, verify: &VerifyConfig, seed: u64) -> Attempt {
    let answer = oracle_answer(challenge, verify, seed);
    let solve_time_s = answer.trace().map_or(times.bot_s, |t| t.last().t);
    Attempt { answer, solve_time_s }
}

/// The geometrically correct answer for any challenge: the exact secret for
/// 2D kinds, the scripted bot trace for tasks and the rendered template for
/// motion challenges.
pub fn oracle_answer(challenge: &Challenge, verify: &VerifyConfig, seed: u64) -> Answer {
    match challenge {
        Challenge::Text(c) => Answer::Text { text: c.secret.expected.clone() },
        Challenge::Rotation(c) => Answer::Rotation { user_delta: -c.secret.applied_rotation },
        Challenge::Puzzle(c) => Answer::Puzzle { final_x: c.secret.gap_x },
        Challenge::Selection(c) => Answer::Selection {
            indices: c.secret.truth.iter().map(|&i| u32::from(i)).collect(),
        },
        Challenge::Task(c) => Answer::Task {
            trace: sim_bot_naive_task(&c.presentation, verify.lift_threshold_m, seed),
        },
        Challenge::Motion(c) => Answer::Motion { trace: sim_bot_naive_motion(&c.presentation, seed) },
    }
}

/// Resubmits a recorded answer; traces get the profile's replay jitter.
pub fn replay_attempt(recorded: &Answer, profile: &AgentProfile, times: &SolveTimeModel, seed: u64) -> Attempt {
    let jitter = |t| sim_bot_replay(t, profile.replay_jitter_m, seed);
    let answer = match recorded {
        Answer::Task { trace } => Answer::Task { trace: jitter(trace) },
        Answer::Motion { trace } => Answer::Motion { trace: jitter(trace) },
        other => other.clone(),
    };
    let solve_time_s = answer.trace().map_or(times.bot_s, |t| t.last().t);
    Attempt { answer, solve_time_s }
}

impl SolveTimeModel {
    pub fn validate(&self) -> crate::Result<()> {
        let all = [
            self.read_s,
            self.keypress_s,
            self.pointing_s,
            self.confirm_s,
            self.grab_s,
            self.full_drag_s,
            self.adjust_s,
            self.scan_per_tile_s,
            self.select_per_tile_s,
            self.bot_s,
        ];
        if all.iter().all(|v| v.is_finite() && *v >= 0.0) {
            Ok(())
        } else {
            Err(crate::Error::Malformed("solve-time costs must be finite and >= 0".into()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::challenge::{generate, Catalog, GenerationParams};
    use crate::model::ChallengeKind;
    use crate::verify::verify;

    #[test]
    fn text_is_slowest_for_a_human() {
        let cat = Catalog::builtin();
        let params = GenerationParams::default();
        let (times, cfg, human) = (SolveTimeModel::default(), VerifyConfig::default(), AgentProfile::human());
        let mean = |kind| {
            (0..100)
                .map(|s| {
                    let c = generate(kind, s, &cat, &params).unwrap();
                    solve(&c, &human, &times, &cfg, s).solve_time_s
                })
                .sum::<f64>()
                / 100.0
        };
        let text = mean(ChallengeKind::Text);
        for kind in ChallengeKind::ALL.into_iter().filter(|k| *k != ChallengeKind::Text) {
            assert!(text > mean(kind), "{kind}");
        }
    }

    #[test]
    fn oracle_answers_pass_2d_kinds() {
        let cat = Catalog::builtin();
        let cfg = VerifyConfig::default();
        for kind in [ChallengeKind::Text, ChallengeKind::ImageRotated, ChallengeKind::ImagePuzzled, ChallengeKind::ImageSelected] {
            for seed in 0..50 {
                let c = generate(kind, seed, &cat, &GenerationParams::default()).unwrap();
                assert!(verify(&c, &oracle_answer(&c, &cfg, seed), &cfg).is_pass());
            }
        }
    }

    #[test]
    fn solving_is_deterministic() {
        let cat = Catalog::builtin();
        let c = generate(ChallengeKind::TaskDriven, 4, &cat, &GenerationParams::default()).unwrap();
        let (p, t, v) = (AgentProfile::human(), SolveTimeModel::default(), VerifyConfig::default());
        assert_eq!(solve(&c, &p, &t, &v, 8), solve(&c, &p, &t, &v, 8));
    }
}
