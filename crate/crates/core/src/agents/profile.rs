use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which population an agent profile simulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentKind {
    Human,
    NaiveBot,
    ReplayBot,
}

impl AgentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AgentKind::Human => "human",
            AgentKind::NaiveBot => "naive_bot",
            AgentKind::ReplayBot => "replay_bot",
        }
    }
}

impl fmt::Display for AgentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Closed interval `[lo, hi]`, written as a two-element list.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Range {
    lo: f64,
    hi: f64,
}

impl Range {
    pub const fn fixed(v: f64) -> Self {
        Range { lo: v, hi: v }
    }

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::malformed(format!("range [{lo}, {hi}] is not ordered and finite")));
        }
        Ok(Range { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Uniform draw; always consumes one value from `rng`.
    pub fn sample(&self, rng: &mut impl Rng) -> f64 {
        let u: f64 = rng.random();
        self.lo + (self.hi - self.lo) * u
    }
}

impl TryFrom<[f64; 2]> for Range {
    type Error = Error;
    fn try_from(v: [f64; 2]) -> Result<Self> {
        Range::new(v[0], v[1])
    }
}

impl From<Range> for [f64; 2] {
    fn from(r: Range) -> Self {
        [r.lo, r.hi]
    }
}

/// Parameters of a simulated agent. Defaults describe the shipped human
/// calibration population; bot kinds ignore the human-error fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AgentProfile {
    /// Label written to reports.
    pub name: String,
    pub kind: AgentKind,
    pub reaction_delay_s: Range,
    /// Endpoint scatter of reaches and releases, per axis.
    pub noise_sigma_m: f64,
    /// Movement duration multiplier; above 1 is slower.
    pub tempo_scale: Range,
    pub tremor_hz: f64,
    pub tremor_amp_m: f64,
    /// White tracking noise per sample and axis.
    pub sensor_noise_m: f64,
    pub sample_rate_hz: f64,
    /// Coefficient of variation of the sample intervals.
    pub dt_cv: f64,
    /// Delay when following an avatar.
    pub follow_lag_s: Range,
    /// Relative amplitude error when following an avatar, `±` this fraction.
    pub amplitude_jitter: f64,
    /// Per-keyframe pose error when following an avatar, per axis.
    pub pose_noise_m: f64,
    pub rotation_sigma_deg: f64,
    pub puzzle_sigma: f64,
    /// Chance of hitting a wrong key per character.
    pub typo_prob: f64,
    /// Chance of misjudging each selection tile.
    pub tile_slip_prob: f64,
    /// Per-axis jitter a replay bot adds to a recorded trace.
    pub replay_jitter_m: f64,
}

impl Default for AgentProfile {
    fn default() -> Self {
        Self {
            name: "human".into(),
            kind: AgentKind::Human,
            reaction_delay_s: Range { lo: 0.3, hi: 0.7 },
            noise_sigma_m: 0.01,
            tempo_scale: Range { lo: 0.9, hi: 1.2 },
            tremor_hz: 9.0,
            tremor_amp_m: 0.0004,
            sensor_noise_m: 0.0002,
            sample_rate_hz: 90.0,
            dt_cv: 0.05,
            follow_lag_s: Range { lo: 0.12, hi: 0.18 },
            amplitude_jitter: 0.05,
            pose_noise_m: 0.02,
            rotation_sigma_deg: 3.0,
            puzzle_sigma: 0.006,
            typo_prob: 0.004,
            tile_slip_prob: 0.003,
            replay_jitter_m: 0.001,
        }
    }
}

impl AgentProfile {
    pub fn human() -> Self {
        Self::default()
    }

    pub fn naive_bot() -> Self {
        Self { name: "naive_bot".into(), kind: AgentKind::NaiveBot, ..Self::default() }
    }

    pub fn replay_bot() -> Self {
        Self { name: "replay_bot".into(), kind: AgentKind::ReplayBot, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() || self.name.contains([',', '"', '\n', '\r']) {
            return Err(Error::malformed(format!("profile name {:?} is empty or not CSV-safe", self.name)));
        }
        let magnitudes = [
            ("noise_sigma_m", self.noise_sigma_m),
            ("tremor_hz", self.tremor_hz),
            ("tremor_amp_m", self.tremor_amp_m),
            ("sensor_noise_m", self.sensor_noise_m),
            ("amplitude_jitter", self.amplitude_jitter),
            ("pose_noise_m", self.pose_noise_m),
            ("rotation_sigma_deg", self.rotation_sigma_deg),
            ("puzzle_sigma", self.puzzle_sigma),
            ("replay_jitter_m", self.replay_jitter_m),
        ];
        for (name, v) in magnitudes {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::malformed(format!("{name} must be finite and >= 0")));
            }
        }
        for (name, r) in [
            ("reaction_delay_s", self.reaction_delay_s),
            ("follow_lag_s", self.follow_lag_s),
        ] {
            if r.lo < 0.0 {
                return Err(Error::malformed(format!("{name} must be >= 0")));
            }
        }
        if self.tempo_scale.lo <= 0.0 {
            return Err(Error::malformed("tempo_scale must be > 0"));
        }
        if !(10.0..=1000.0).contains(&self.sample_rate_hz) {
            return Err(Error::malformed("sample_rate_hz must lie in [10, 1000]"));
        }
        if !(0.0..=0.25).contains(&self.dt_cv) {
            return Err(Error::malformed("dt_cv must lie in [0, 0.25]"));
        }
        for (name, p) in [("typo_prob", self.typo_prob), ("tile_slip_prob", self.tile_slip_prob)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::malformed(format!("{name} must be a probability")));
            }
        }
        Ok(())
    }
}
