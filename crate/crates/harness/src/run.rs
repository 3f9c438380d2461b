//! The experiment runner: every (kind, profile) cell is played through its
//! own gateway on a manual clock, and each attempt becomes one CSV row.

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use vrcaptcha_core::agents::{replay_attempt, solve, AgentKind, AgentProfile};
use vrcaptcha_core::gateway::{Gateway, ManualClock, SeedSource};
use vrcaptcha_core::humanness::{evaluate_roc, CalibrationArtifact, Labeled};
use vrcaptcha_core::model::ChallengeKind;
use vrcaptcha_core::Verdict;

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::seed::derive_seed;

/// Start of the simulated clock; any fixed value works.
const CLOCK_START_S: f64 = 1_000_000.0;
/// Simulated pause between attempts in a cell.
const INTER_ATTEMPT_S: f64 = 1.0;

/// One attempt, as written to the results CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub kind: ChallengeKind,
    pub profile: String,
    pub seed: u64,
    pub pass: bool,
    pub reason: String,
    pub correctness: f64,
    pub humanness_score: Option<f64>,
    pub simulated_solve_time_s: f64,
}

/// Aggregates of one (kind, profile) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub kind: ChallengeKind,
    pub profile: String,
    pub n: usize,
    pub pass_rate: f64,
    pub mean_time_s: f64,
    pub p95_time_s: f64,
    pub reasons: BTreeMap<String, usize>,
}

/// Human-versus-naive-bot separation for one kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KindSummary {
    pub kind: ChallengeKind,
    /// AUC of humanness scores, humans positive; `None` without scores
    /// for both classes.
    pub humanness_auc: Option<f64>,
    pub human_pass_rate: Option<f64>,
    pub naive_bot_reject_rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub seed: u64,
    pub n_per_cell: usize,
    pub cells: Vec<CellSummary>,
    pub kinds: Vec<KindSummary>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub rows: Vec<Row>,
    pub summary: Summary,
}

/// Loads the calibration the experiment's gateways use.
pub fn load_calibration(config: &ExperimentConfig) -> Result<CalibrationArtifact> {
    Ok(match &config.gateway.calibration_path {
        Some(p) => CalibrationArtifact::load(p)?,
        None => CalibrationArtifact::builtin().clone(),
    })
}

/// Runs every cell of the experiment grid.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunOutput> {
    config.validate()?;
    let calibration = load_calibration(config)?;
    let cells: Vec<(ChallengeKind, &AgentProfile)> = config
        .kinds
        .iter()
        .flat_map(|&k| config.profiles.iter().map(move |p| (k, p)))
        .collect();
    let per_cell: Vec<Vec<Row>> = cells
        .par_iter()
        .map(|&(kind, profile)| run_cell(config, &calibration, kind, profile))
        .collect::<Result<_>>()?;
    let rows: Vec<Row> = per_cell.into_iter().flatten().collect();
    let summary = summarize(config, &rows);
    Ok(RunOutput { rows, summary })
}

fn run_cell(
    config: &ExperimentConfig,
    calibration: &CalibrationArtifact,
    kind: ChallengeKind,
    profile: &AgentProfile,
) -> Result<Vec<Row>> {
    let clock = Arc::new(ManualClock::new(CLOCK_START_S));
    let mut gw_config = config.gateway.clone();
    gw_config.max_sessions = gw_config.max_sessions.max(2 * config.n_per_cell + 2);
    gw_config.calibration_path = None;
    let gw = Gateway::new(gw_config)?
        .with_clock(clock.clone())
        .with_calibration(calibration.clone())
        .with_seed(derive_seed(config.seed, &["gateway", kind.as_str(), &profile.name], 0));
    let victim = config.profile_of(AgentKind::Human);

    let mut rows = Vec::with_capacity(config.n_per_cell);
    for i in 0..config.n_per_cell as u64 {
        let seed = derive_seed(config.seed, &[kind.as_str(), &profile.name], i);
        let challenge_seed = derive_seed(seed, &["challenge"], 0);
        let agent_seed = derive_seed(seed, &["agent"], 0);

        let (token, attempt) = if profile.kind == AgentKind::ReplayBot {
            // a legitimate user solves first; the bot captures that answer
            // and resubmits it against a new challenge of the same kind
            let original = gw.issue(Some(kind), SeedSource::Fixed(challenge_seed))?;
            let recorded = solve(
                &original.challenge,
                &victim,
                &config.solve_time,
                gw.verify_config(),
                agent_seed,
            );
            clock.advance(recorded.solve_time_s);
            gw.submit(&original.token, &recorded.answer);
            let target = gw.issue(Some(kind), SeedSource::Fixed(derive_seed(seed, &["target"], 0)))?;
            let jitter_seed = derive_seed(seed, &["jitter"], 0);
            (target.token, replay_attempt(&recorded.answer, profile, &config.solve_time, jitter_seed))
        } else {
            let issued = gw.issue(Some(kind), SeedSource::Fixed(challenge_seed))?;
            let attempt =
                solve(&issued.challenge, profile, &config.solve_time, gw.verify_config(), agent_seed);
            (issued.token, attempt)
        };
        clock.advance(attempt.solve_time_s);
        let verdict = gw.submit(&token, &attempt.answer);
        rows.push(row(kind, profile, seed, &verdict, attempt.solve_time_s));
        clock.advance(INTER_ATTEMPT_S);
    }
    Ok(rows)
}

fn row(kind: ChallengeKind, profile: &AgentProfile, seed: u64, v: &Verdict, time: f64) -> Row {
    Row {
        kind,
        profile: profile.name.clone(),
        seed,
        pass: v.is_pass(),
        reason: v.reason().as_str().to_string(),
        correctness: v.correctness(),
        humanness_score: v.humanness().map(|h| h.score),
        simulated_solve_time_s: time,
    }
}

/// Nearest-rank percentile of `values` (which must be non-empty).
pub fn percentile(values: &[f64], q: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let rank = ((q * v.len() as f64).ceil() as usize).clamp(1, v.len());
    v[rank - 1]
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

pub fn summarize(config: &ExperimentConfig, rows: &[Row]) -> Summary {
    let mut cells = Vec::new();
    for &kind in &config.kinds {
        for profile in &config.profiles {
            let cell: Vec<&Row> =
                rows.iter().filter(|r| r.kind == kind && r.profile == profile.name).collect();
            if cell.is_empty() {
                continue;
            }
            let times: Vec<f64> = cell.iter().map(|r| r.simulated_solve_time_s).collect();
            let mut reasons = BTreeMap::new();
            for r in &cell {
                *reasons.entry(r.reason.clone()).or_insert(0) += 1;
            }
            cells.push(CellSummary {
                kind,
                profile: profile.name.clone(),
                n: cell.len(),
                pass_rate: cell.iter().filter(|r| r.pass).count() as f64 / cell.len() as f64,
                mean_time_s: mean(&times),
                p95_time_s: percentile(&times, 0.95),
                reasons,
            });
        }
    }

    let names = |k: AgentKind| -> Vec<&str> {
        config.profiles.iter().filter(|p| p.kind == k).map(|p| p.name.as_str()).collect()
    };
    let (humans, bots) = (names(AgentKind::Human), names(AgentKind::NaiveBot));
    let kinds = config
        .kinds
        .iter()
        .map(|&kind| {
            let of = |names: &[&str]| -> Vec<&Row> {
                rows.iter().filter(|r| r.kind == kind && names.contains(&r.profile.as_str())).collect()
            };
            let (h, b) = (of(&humans), of(&bots));
            let labeled: Vec<Labeled> = h
                .iter()
                .filter_map(|r| r.humanness_score.map(|s| (s, true)))
                .chain(b.iter().filter_map(|r| r.humanness_score.map(|s| (s, false))))
                .collect();
            let rate = |rows: &[&Row], pass: bool| {
                (!rows.is_empty()).then(|| {
                    rows.iter().filter(|r| r.pass == pass).count() as f64 / rows.len() as f64
                })
            };
            KindSummary {
                kind,
                humanness_auc: evaluate_roc(&labeled).ok().map(|roc| roc.auc),
                human_pass_rate: rate(&h, true),
                naive_bot_reject_rate: rate(&b, false),
            }
        })
        .collect();
    Summary { seed: config.seed, n_per_cell: config.n_per_cell, cells, kinds }
}

/// Writes rows with the header
/// `kind,profile,seed,pass,reason,correctness,humanness_score,simulated_solve_time_s`.
pub fn write_csv<W: Write>(out: W, rows: &[Row]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for r in csv::Reader::from_reader(input).deserialize() {
        rows.push(r?);
    }
    Ok(rows)
}

/// Pretty JSON with a trailing newline.
pub fn summary_json(summary: &Summary) -> String {
    let mut s = serde_json::to_string_pretty(summary).expect("summary serializes");
    s.push('\n');
    s
}
