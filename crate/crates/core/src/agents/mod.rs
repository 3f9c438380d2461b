//! Simulated humans and bots that solve challenges.
//!
//! These populations are the oracle for calibration and for the harness.
//! Human motion uses minimum-jerk reaches with tremor, tracking noise and
//! jittered sampling; bots produce geometrically perfect, perfectly
//! regular traces or replay recorded ones.

mod bot;
mod corpus;
mod human;
mod minjerk;
mod profile;
mod solve;

pub use bot::{
    sim_bot_naive_motion, sim_bot_naive_task, sim_bot_replay, BOT_MIN_DURATION_S, BOT_RATE_HZ,
    BOT_SPEED_M_S,
};
pub use corpus::{read_corpus, write_corpus, CorpusRecord};
pub use human::{
    sim_human_motion, sim_human_puzzle, sim_human_rotation, sim_human_selection, sim_human_task,
    sim_human_text,
};
pub use minjerk::{min_jerk, min_jerk_profile, min_jerk_velocity_profile};
pub use profile::{AgentKind, AgentProfile, Range};
pub use solve::{oracle_answer, replay_attempt, solve, Attempt, SolveTimeModel};
