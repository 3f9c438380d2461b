//! Interaction traces: timestamped head/hand samples plus trigger states.
//!
//! The canonical wire form is a JSON list of records
//! `{"t", "head":[x,y,z], "lh":[..], "rh":[..], "tl":0|1, "tr":0|1}` with every
//! number written as a plain decimal with at most six fractional digits.

use std::fmt::Write as _;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::vec3::Vec3;
use crate::error::{Error, Result};

pub const MAX_TRACE_DURATION_S: f64 = 120.0;
pub const MAX_TRACE_SAMPLES: usize = 20_000;
pub const MIN_RESAMPLE_HZ: f64 = 10.0;
pub const MAX_RESAMPLE_HZ: f64 = 200.0;

/// Lower bound on the normalization scale, in meters.
pub const MIN_NORMALIZATION_SCALE_M: f64 = 0.2;

/// Grid points closer than this (seconds) to an original timestamp reuse
/// that sample verbatim.
const SNAP_EPS_S: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoseSample {
    /// Seconds since the challenge was presented.
    pub t: f64,
    pub head: Vec3,
    pub left_hand: Vec3,
    pub right_hand: Vec3,
    pub trigger_left: bool,
    pub trigger_right: bool,
}

impl PoseSample {
    pub fn is_finite(&self) -> bool {
        self.t.is_finite()
            && self.head.is_finite()
            && self.left_hand.is_finite()
            && self.right_hand.is_finite()
    }

    fn map_positions(&self, f: impl Fn(Vec3) -> Vec3) -> PoseSample {
        PoseSample {
            head: f(self.head),
            left_hand: f(self.left_hand),
            right_hand: f(self.right_hand),
            ..*self
        }
    }
}

/// A validated, time-ordered sequence of pose samples.
///
/// Construction enforces: at least two samples, at most
/// [`MAX_TRACE_SAMPLES`], finite values, `t >= 0`, strictly increasing
/// timestamps, and a total duration of at most [`MAX_TRACE_DURATION_S`].
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionTrace {
    samples: Vec<PoseSample>,
    declared_rate_hz: f64,
}

impl InteractionTrace {
    pub fn new(samples: Vec<PoseSample>, declared_rate_hz: f64) -> Result<Self> {
        if !(declared_rate_hz.is_finite() && declared_rate_hz > 0.0) {
            return Err(Error::malformed("declared rate must be positive and finite"));
        }
        validate_samples(&samples)?;
        Ok(Self { samples, declared_rate_hz })
    }

    /// Builds a trace whose declared rate is the mean sample rate.
    pub fn from_samples(samples: Vec<PoseSample>) -> Result<Self> {
        validate_samples(&samples)?;
        let span = samples[samples.len() - 1].t - samples[0].t;
        let rate = (samples.len() - 1) as f64 / span;
        Self::new(samples, rate)
    }

    pub fn samples(&self) -> &[PoseSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn declared_rate_hz(&self) -> f64 {
        self.declared_rate_hz
    }

    pub fn first(&self) -> &PoseSample {
        &self.samples[0]
    }

    pub fn last(&self) -> &PoseSample {
        &self.samples[self.samples.len() - 1]
    }

    pub fn duration(&self) -> f64 {
        self.last().t - self.first().t
    }

    pub fn into_samples(self) -> Vec<PoseSample> {
        self.samples
    }

    /// Resamples onto a uniform grid `t0 + k / rate`.
    ///
    /// Positions are linearly interpolated and triggers use zero-order hold.
    /// The first and last original samples are kept verbatim, and grid
    /// points that coincide with an original timestamp copy that sample.
    pub fn resample(&self, rate_hz: f64) -> Result<InteractionTrace> {
        if !(MIN_RESAMPLE_HZ..=MAX_RESAMPLE_HZ).contains(&rate_hz) {
            return Err(Error::malformed(format!(
                "resample rate {rate_hz} outside [{MIN_RESAMPLE_HZ}, {MAX_RESAMPLE_HZ}]"
            )));
        }
        let src = &self.samples;
        if src.len() < 2 {
            return Err(Error::malformed("trace shorter than 2 samples"));
        }
        let t0 = src[0].t;
        let t_end = src[src.len() - 1].t;

        let mut out = Vec::with_capacity(((t_end - t0) * rate_hz) as usize + 2);
        out.push(src[0]);
        let mut seg = 0usize;
        for k in 1.. {
            let t = t0 + k as f64 / rate_hz;
            if t >= t_end - SNAP_EPS_S {
                break;
            }
            while src[seg + 1].t <= t {
                seg += 1;
            }
            out.push(sample_between(&src[seg], &src[seg + 1], t));
        }
        out.push(src[src.len() - 1]);
        InteractionTrace::new(out, rate_hz)
    }

    /// Centers the mean head position at the origin and divides all
    /// positions by the largest head to right-hand distance (at least
    /// [`MIN_NORMALIZATION_SCALE_M`]).
    pub fn normalize(&self) -> InteractionTrace {
        let n = self.samples.len() as f64;
        let mut sum = Vec3::ZERO;
        for s in &self.samples {
            sum += s.head;
        }
        let center = sum / n;
        let scale = self
            .samples
            .iter()
            .map(|s| s.head.distance(s.right_hand))
            .fold(MIN_NORMALIZATION_SCALE_M, f64::max);
        let samples = self
            .samples
            .iter()
            .map(|s| s.map_positions(|p| (p - center) / scale))
            .collect();
        InteractionTrace { samples, declared_rate_hz: self.declared_rate_hz }
    }

    /// Applies `f` to every position; timing and triggers are unchanged.
    pub fn map_positions(&self, f: impl Fn(Vec3) -> Vec3) -> Result<InteractionTrace> {
        let samples = self.samples.iter().map(|s| s.map_positions(&f)).collect();
        InteractionTrace::new(samples, self.declared_rate_hz)
    }

    /// Canonical JSON wire form.
    pub fn to_canonical_json(&self) -> String {
        let mut out = String::with_capacity(self.samples.len() * 96);
        out.push('[');
        for (i, s) in self.samples.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str("{\"t\":");
            push_decimal(&mut out, s.t);
            for (key, p) in [("head", s.head), ("lh", s.left_hand), ("rh", s.right_hand)] {
                let _ = write!(out, ",\"{key}\":[");
                push_decimal(&mut out, p.x);
                out.push(',');
                push_decimal(&mut out, p.y);
                out.push(',');
                push_decimal(&mut out, p.z);
                out.push(']');
            }
            let _ = write!(
                out,
                ",\"tl\":{},\"tr\":{}}}",
                u8::from(s.trigger_left),
                u8::from(s.trigger_right)
            );
        }
        out.push(']');
        out
    }

    pub fn from_json(text: &str) -> Result<InteractionTrace> {
        Ok(serde_json::from_str(text)?)
    }
}

fn validate_samples(samples: &[PoseSample]) -> Result<()> {
    if samples.len() < 2 {
        return Err(Error::malformed("trace needs at least 2 samples"));
    }
    if samples.len() > MAX_TRACE_SAMPLES {
        return Err(Error::malformed(format!(
            "trace has {} samples, limit is {MAX_TRACE_SAMPLES}",
            samples.len()
        )));
    }
    for (i, s) in samples.iter().enumerate() {
        if !s.is_finite() {
            return Err(Error::malformed(format!("sample {i} has a non-finite value")));
        }
        if s.t < 0.0 {
            return Err(Error::malformed(format!("sample {i} has negative time")));
        }
        if i > 0 && s.t <= samples[i - 1].t {
            return Err(Error::malformed(format!("timestamps not strictly increasing at {i}")));
        }
    }
    let duration = samples[samples.len() - 1].t - samples[0].t;
    if duration > MAX_TRACE_DURATION_S {
        return Err(Error::malformed(format!(
            "trace lasts {duration:.3} s, limit is {MAX_TRACE_DURATION_S} s"
        )));
    }
    Ok(())
}

fn sample_between(a: &PoseSample, b: &PoseSample, t: f64) -> PoseSample {
    if (t - a.t).abs() <= SNAP_EPS_S {
        return *a;
    }
    if (b.t - t).abs() <= SNAP_EPS_S {
        return *b;
    }
    let alpha = (t - a.t) / (b.t - a.t);
    PoseSample {
        t,
        head: a.head.lerp(b.head, alpha),
        left_hand: a.left_hand.lerp(b.left_hand, alpha),
        right_hand: a.right_hand.lerp(b.right_hand, alpha),
        trigger_left: a.trigger_left,
        trigger_right: a.trigger_right,
    }
}

/// Writes `v` as a plain decimal with at most six fractional digits.
fn push_decimal(out: &mut String, v: f64) {
    let mut s = format!("{v:.6}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".to_owned();
    }
    out.push_str(&s);
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WireSample {
    t: f64,
    head: Vec3,
    lh: Vec3,
    rh: Vec3,
    #[serde(deserialize_with = "de_flag")]
    tl: bool,
    #[serde(deserialize_with = "de_flag")]
    tr: bool,
}

fn de_flag<'de, D: Deserializer<'de>>(d: D) -> Result<bool, D::Error> {
    match u8::deserialize(d)? {
        0 => Ok(false),
        1 => Ok(true),
        other => Err(D::Error::custom(format!("trigger flag must be 0 or 1, got {other}"))),
    }
}

impl<'de> Deserialize<'de> for InteractionTrace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let wire = Vec::<WireSample>::deserialize(d)?;
        if wire.len() > MAX_TRACE_SAMPLES {
            return Err(D::Error::custom("too many samples"));
        }
        let samples = wire
            .into_iter()
            .map(|w| PoseSample {
                t: w.t,
                head: w.head,
                left_hand: w.lh,
                right_hand: w.rh,
                trigger_left: w.tl,
                trigger_right: w.tr,
            })
            .collect();
        InteractionTrace::from_samples(samples).map_err(D::Error::custom)
    }
}

impl Serialize for InteractionTrace {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let raw = serde_json::value::RawValue::from_string(self.to_canonical_json())
            .map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}
