//! Replay detection for trace answers.
//!
//! Two checks run per kind: an exact fingerprint of the trace quantized to
//! 1 mm and 1 ms, remembered for a time window, and a near-duplicate check
//! against recently accepted traces that catches resubmissions with small
//! added noise.

use std::collections::{BTreeMap, HashSet, VecDeque};

use sha2::{Digest, Sha256};

use super::config::ReplayConfig;
use crate::model::{ChallengeKind, InteractionTrace, Vec3};

pub type Fingerprint = [u8; 32];

const MM_PER_M: f64 = 1000.0;
const MS_PER_S: f64 = 1000.0;

fn quantize(v: f64, scale: f64) -> i64 {
    (v * scale).round() as i64
}

/// SHA-256 over the trace with positions rounded to 1 mm and timestamps to
/// 1 ms. Traces that agree after rounding share a fingerprint.
pub fn trace_fingerprint(trace: &InteractionTrace) -> Fingerprint {
    let mut h = Sha256::new();
    h.update((trace.len() as u64).to_le_bytes());
    for s in trace.samples() {
        h.update(quantize(s.t, MS_PER_S).to_le_bytes());
        for p in [s.head, s.left_hand, s.right_hand] {
            for c in p.to_array() {
                h.update(quantize(c, MM_PER_M).to_le_bytes());
            }
        }
        h.update([u8::from(s.trigger_left) | u8::from(s.trigger_right) << 1]);
    }
    h.finalize().into()
}

/// Root-mean-square distance over all tracked positions of two traces with
/// the same sample count; `None` for different lengths.
pub fn rms_position_distance(a: &InteractionTrace, b: &InteractionTrace) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let pos = |s: &crate::model::PoseSample| -> [Vec3; 3] { [s.head, s.left_hand, s.right_hand] };
    let sum: f64 = a
        .samples()
        .iter()
        .zip(b.samples())
        .flat_map(|(x, y)| pos(x).into_iter().zip(pos(y)))
        .map(|(p, q)| p.distance(q).powi(2))
        .sum();
    Some((sum / (3 * a.len()) as f64).sqrt())
}

/// Per-kind fingerprint window plus accepted-trace history.
#[derive(Debug)]
pub struct ReplayGuard {
    config: ReplayConfig,
    seen: HashSet<(ChallengeKind, Fingerprint)>,
    /// Fingerprints in insertion order, for expiry.
    seen_order: VecDeque<(f64, ChallengeKind, Fingerprint)>,
    accepted: BTreeMap<ChallengeKind, VecDeque<InteractionTrace>>,
}

impl ReplayGuard {
    pub fn new(config: ReplayConfig) -> Self {
        Self {
            config,
            seen: HashSet::new(),
            seen_order: VecDeque::new(),
            accepted: BTreeMap::new(),
        }
    }

    fn expire(&mut self, now: f64) {
        while let Some(&(t, kind, fp)) = self.seen_order.front() {
            if now - t <= self.config.window_s {
                break;
            }
            self.seen_order.pop_front();
            self.seen.remove(&(kind, fp));
        }
    }

    /// True when `trace` repeats a fingerprint seen within the window or is
    /// a near duplicate of an accepted trace. Otherwise its fingerprint is
    /// recorded and false is returned.
    pub fn check_and_record(&mut self, kind: ChallengeKind, trace: &InteractionTrace, now: f64) -> bool {
        self.expire(now);
        let fp = trace_fingerprint(trace);
        if self.seen.contains(&(kind, fp)) {
            return true;
        }
        self.seen.insert((kind, fp));
        self.seen_order.push_back((now, kind, fp));
        self.is_near_duplicate(kind, trace)
    }

    pub fn is_near_duplicate(&self, kind: ChallengeKind, trace: &InteractionTrace) -> bool {
        self.accepted.get(&kind).is_some_and(|history| {
            history.iter().any(|old| {
                rms_position_distance(old, trace).is_some_and(|d| d <= self.config.near_dup_rms_m)
            })
        })
    }

    /// Remembers an accepted trace for near-duplicate checks.
    pub fn record_accepted(&mut self, kind: ChallengeKind, trace: &InteractionTrace) {
        if self.config.near_dup_history == 0 {
            return;
        }
        let history = self.accepted.entry(kind).or_default();
        if history.len() == self.config.near_dup_history {
            history.pop_front();
        }
        history.push_back(trace.clone());
    }

    pub fn fingerprints_on_record(&self) -> usize {
        self.seen.len()
    }
}
