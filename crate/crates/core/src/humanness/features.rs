//! Kinematic features of a hand trajectory.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{InteractionTrace, Vec3};

/// Traces shorter than this carry too little motion to score.
pub const MIN_FEATURE_DURATION_S: f64 = 0.5;
/// Uniform grid on which derivatives are estimated.
pub const FEATURE_RATE_HZ: f64 = 50.0;
/// Hand speeds below this count as a pause.
pub const PAUSE_SPEED_M_S: f64 = 0.02;

/// Relative slack under which a path counts as perfectly straight.
const STRAIGHT_EPS: f64 = 1e-12;

/// Features of the more-traveled hand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HumannessFeatures {
    /// Chord length over path length, in [0, 1].
    pub path_efficiency: f64,
    /// Integrated squared jerk scaled by `duration⁵ / path_length²`.
    pub norm_jerk: f64,
    /// Pearson correlation of the speed profile with the minimum-jerk bell.
    pub vel_profile_corr: f64,
    /// Fraction of grid points slower than [`PAUSE_SPEED_M_S`].
    pub pause_ratio: f64,
    /// Coefficient of variation of the raw sample intervals.
    pub dt_cv: f64,
}

impl HumannessFeatures {
    pub const NAMES: [&'static str; 5] =
        ["path_efficiency", "norm_jerk", "vel_profile_corr", "pause_ratio", "dt_cv"];

    pub fn to_array(&self) -> [f64; 5] {
        [self.path_efficiency, self.norm_jerk, self.vel_profile_corr, self.pause_ratio, self.dt_cv]
    }
}

/// Extracts features from a trace lasting at least [`MIN_FEATURE_DURATION_S`].
///
/// Hand positions are linearly interpolated onto a uniform
/// [`FEATURE_RATE_HZ`] grid starting at the first sample (the grid does not
/// include a partial final step). Velocity and jerk use central differences
/// on that grid; the hand with the longer grid path is analysed.
pub fn extract_features(trace: &InteractionTrace) -> Result<HumannessFeatures> {
    if trace.duration() < MIN_FEATURE_DURATION_S {
        return Err(Error::malformed(format!(
            "trace lasts {:.3} s, features need {MIN_FEATURE_DURATION_S} s",
            trace.duration()
        )));
    }
    let grid = trace.resample(FEATURE_RATE_HZ)?;
    let mut samples = grid.samples();
    let h = 1.0 / FEATURE_RATE_HZ;
    let n = samples.len();
    if n >= 2 && samples[n - 1].t - samples[n - 2].t < h - 1e-9 {
        samples = &samples[..n - 1];
    }
    let left: Vec<Vec3> = samples.iter().map(|s| s.left_hand).collect();
    let right: Vec<Vec3> = samples.iter().map(|s| s.right_hand).collect();
    let (path, length) = {
        let (ll, rl) = (path_length(&left), path_length(&right));
        if ll > rl {
            (left, ll)
        } else {
            (right, rl)
        }
    };

    let speeds = central_speeds(&path, h);
    Ok(HumannessFeatures {
        path_efficiency: path_efficiency(&path, length),
        norm_jerk: norm_jerk(&path, length, h),
        vel_profile_corr: pearson_with_bell(&speeds),
        pause_ratio: speeds.iter().filter(|&&v| v < PAUSE_SPEED_M_S).count() as f64
            / speeds.len().max(1) as f64,
        dt_cv: interval_cv(trace),
    })
}

fn path_length(p: &[Vec3]) -> f64 {
    p.windows(2).map(|w| w[0].distance(w[1])).sum()
}

fn path_efficiency(p: &[Vec3], length: f64) -> f64 {
    if length <= 0.0 {
        return 1.0;
    }
    let chord = p[0].distance(p[p.len() - 1]);
    if length - chord <= STRAIGHT_EPS * length {
        1.0
    } else {
        (chord / length).min(1.0)
    }
}

/// Speeds at interior grid points `1..n-1`.
fn central_speeds(p: &[Vec3], h: f64) -> Vec<f64> {
    p.windows(3).map(|w| (w[2] - w[0]).norm() / (2.0 * h)).collect()
}

/// `∫|jerk|² dt · D⁵ / L²` with the five-point central third difference.
fn norm_jerk(p: &[Vec3], length: f64, h: f64) -> f64 {
    if length <= 0.0 || p.len() < 5 {
        return 0.0;
    }
    let h3 = h * h * h;
    let integral: f64 = p
        .windows(5)
        .map(|w| {
            let j = (w[4] - w[3] * 2.0 + w[1] * 2.0 - w[0]) / (2.0 * h3);
            j.norm_squared() * h
        })
        .sum();
    let duration = (p.len() - 1) as f64 * h;
    integral * duration.powi(5) / (length * length)
}

/// Correlation of interior speeds with `τ²(1 − τ)²`, τ = k / (n − 1).
fn pearson_with_bell(speeds: &[f64]) -> f64 {
    let n = speeds.len();
    if n < 2 {
        return 0.0;
    }
    let last = (n + 1) as f64;
    let bell: Vec<f64> = (1..=n)
        .map(|k| {
            let tau = k as f64 / last;
            let u = tau * (1.0 - tau);
            u * u
        })
        .collect();
    pearson(speeds, &bell)
}

/// Pearson correlation; 0 when either side has zero variance.
pub(crate) fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    // rounding noise on a constant series is not variance
    let (qa, qb) = (a.iter().map(|x| x * x).sum::<f64>(), b.iter().map(|x| x * x).sum::<f64>());
    if saa <= 1e-20 * qa || sbb <= 1e-20 * qb || saa == 0.0 || sbb == 0.0 {
        return 0.0;
    }
    (sab / (saa.sqrt() * sbb.sqrt())).clamp(-1.0, 1.0)
}

fn interval_cv(trace: &InteractionTrace) -> f64 {
    let dts: Vec<f64> = trace.samples().windows(2).map(|w| w[1].t - w[0].t).collect();
    let n = dts.len() as f64;
    let mean = dts.iter().sum::<f64>() / n;
    let var = dts.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / n;
    // exactly uniform timestamps can still differ in the last bits
    if var.sqrt() <= 1e-9 * mean {
        0.0
    } else {
        var.sqrt() / mean
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::min_jerk;
    use crate::model::PoseSample;
    use proptest::prelude::*;

    fn trace_from(f: impl Fn(f64) -> Vec3, duration: f64, rate: f64) -> InteractionTrace {
        let steps = (duration * rate).round() as usize;
        let samples = (0..=steps)
            .map(|k| {
                let t = k as f64 / rate;
                PoseSample {
                    t,
                    head: Vec3::new(0.0, 1.6, 0.0),
                    left_hand: Vec3::new(-0.2, 0.9, 0.1),
                    right_hand: f(t),
                    trigger_left: false,
                    trigger_right: false,
                }
            })
            .collect();
        InteractionTrace::from_samples(samples).unwrap()
    }

    #[test]
    fn constant_velocity_line_is_perfectly_efficient_and_jerk_free() {
        let a = Vec3::new(0.1, 0.9, 0.3);
        let v = Vec3::new(0.3, 0.1, -0.2);
        let tr = trace_from(|t| a + v * t, 1.5, 90.0);
        let f = extract_features(&tr).unwrap();
        assert_eq!(f.path_efficiency, 1.0);
        assert!(f.norm_jerk < 1e-9, "{}", f.norm_jerk);
        assert_eq!(f.vel_profile_corr, 0.0);
        assert_eq!(f.pause_ratio, 0.0);
        assert_eq!(f.dt_cv, 0.0);
    }

    #[test]
    fn min_jerk_reach_matches_bell_profile() {
        let (p0, p1) = (Vec3::new(0.2, 0.85, 0.05), Vec3::new(-0.1, 1.1, 0.5));
        let tr = trace_from(|t| min_jerk(p0, p1, 1.2, t).unwrap(), 1.2, 90.0);
        let f = extract_features(&tr).unwrap();
        assert!(f.vel_profile_corr >= 0.99, "{}", f.vel_profile_corr);
        // sampled on the feature grid itself, so only the stencil's error remains
        let f = extract_features(&trace_from(|t| min_jerk(p0, p1, 1.2, t).unwrap(), 1.2, 50.0))
            .unwrap();
        assert!(f.path_efficiency > 1.0 - 1e-9);

        // analytic jerk |Δ|·(60 − 360τ + 360τ²)/T³ summed over the same
        // interior grid points the stencil covers
        let (duration, h) = (1.2, 1.0 / FEATURE_RATE_HZ);
        let len = p0.distance(p1);
        let last = (duration / h).round() as usize;
        let integral: f64 = (2..=last - 2)
            .map(|k| {
                let tau = k as f64 * h / duration;
                let j = len * (60.0 - 360.0 * tau + 360.0 * tau * tau) / duration.powi(3);
                j * j * h
            })
            .sum();
        let expected = integral * duration.powi(5) / (len * len);
        assert!((f.norm_jerk - expected).abs() / expected < 0.01, "{} vs {expected}", f.norm_jerk);
    }

    #[test]
    fn resting_hand_is_all_pause() {
        let tr = trace_from(|_| Vec3::new(0.3, 1.0, 0.4), 1.0, 60.0);
        let f = extract_features(&tr).unwrap();
        assert_eq!(f.pause_ratio, 1.0);
        assert_eq!(f.path_efficiency, 1.0);
        assert_eq!(f.norm_jerk, 0.0);
    }

    #[test]
    fn short_trace_is_malformed() {
        let tr = trace_from(|t| Vec3::new(t, 1.0, 0.4), 0.4, 90.0);
        assert!(extract_features(&tr).unwrap_err().is_malformed());
    }

    #[test]
    fn interval_cv_matches_definition() {
        let ts = [0.0, 0.01, 0.03, 0.04, 0.06];
        let samples = ts
            .iter()
            .map(|&t| PoseSample {
                t,
                head: Vec3::ZERO,
                left_hand: Vec3::ZERO,
                right_hand: Vec3::ZERO,
                trigger_left: false,
                trigger_right: false,
            })
            .collect();
        let tr = InteractionTrace::from_samples(samples).unwrap();
        // intervals 0.01, 0.02, 0.01, 0.02: mean 0.015, std 0.005
        assert!((interval_cv(&tr) - 1.0 / 3.0).abs() < 1e-9);
    }

    fn arb_trace() -> impl Strategy<Value = InteractionTrace> {
        prop::collection::vec(
            (0.005f64..0.05, prop::array::uniform3(-1.0f64..1.0), prop::array::uniform3(-1.0f64..1.0)),
            20..120,
        )
        .prop_filter_map("too short", |steps| {
            let mut t = 0.0;
            let samples: Vec<PoseSample> = steps
                .into_iter()
                .map(|(dt, l, r)| {
                    t += dt;
                    PoseSample {
                        t,
                        head: Vec3::new(0.0, 1.6, 0.0),
                        left_hand: l.into(),
                        right_hand: r.into(),
                        trigger_left: false,
                        trigger_right: false,
                    }
                })
                .collect();
            let tr = InteractionTrace::from_samples(samples).ok()?;
            (tr.duration() >= MIN_FEATURE_DURATION_S).then_some(tr)
        })
    }

    fn with_rest(tr: &InteractionTrace, rest_s: f64) -> InteractionTrace {
        let mut samples = tr.samples().to_vec();
        let last = *tr.last();
        let steps = (rest_s * 90.0).ceil() as usize;
        for k in 1..=steps {
            samples.push(PoseSample { t: last.t + k as f64 / 90.0, ..last });
        }
        InteractionTrace::from_samples(samples).unwrap()
    }

    proptest! {
        #[test]
        fn ranges_hold_and_translation_is_invariant(
            tr in arb_trace(),
            shift in prop::array::uniform3(-5.0f64..5.0),
        ) {
            let f = extract_features(&tr).unwrap();
            prop_assert!(f.to_array().iter().all(|v| v.is_finite()));
            prop_assert!((0.0..=1.0).contains(&f.path_efficiency));
            prop_assert!(f.norm_jerk >= 0.0);
            prop_assert!((-1.0..=1.0).contains(&f.vel_profile_corr));
            prop_assert!((0.0..=1.0).contains(&f.pause_ratio));
            prop_assert!(f.dt_cv >= 0.0);

            let shift = Vec3::from(shift);
            let moved = extract_features(&tr.map_positions(|p| p + shift).unwrap()).unwrap();
            for (a, b) in f.to_array().iter().zip(moved.to_array()) {
                prop_assert!((a - b).abs() <= 1e-6 * a.abs().max(1.0), "{a} vs {b}");
            }
        }

        #[test]
        fn extending_a_final_rest_raises_pause_ratio(tr in arb_trace(), extra in 0.05f64..2.0) {
            // once the trace ends at rest, more of the same rest never lowers it
            let rested = with_rest(&tr, 0.1);
            let longer = with_rest(&rested, extra);
            let a = extract_features(&rested).unwrap().pause_ratio;
            let b = extract_features(&longer).unwrap().pause_ratio;
            prop_assert!(b >= a, "{a} -> {b}");
        }
    }
}
