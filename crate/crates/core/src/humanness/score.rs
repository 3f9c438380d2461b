//! Logistic combination of standardized features.

use serde::{Deserialize, Serialize};

use super::features::HumannessFeatures;
use super::roc::{calibrate_threshold, Labeled};
use crate::error::{Error, Result};

/// Default half-width, in standard deviations, of the penalty-free band.
pub const DEFAULT_DEAD_ZONE: f64 = 3.0;
/// Standard deviations below this are treated as this.
const MIN_STD: f64 = 1e-6;

/// How deviations of one standardized feature are penalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    /// Too low and too high are both suspicious.
    Band,
    /// Only values below the human range are suspicious.
    Upward,
    /// Only values above the human range are suspicious.
    Downward,
}

impl Shape {
    /// Penalty-only transfer: 0 inside `±dead_zone`, linear outside.
    pub fn phi(self, z: f64, dead_zone: f64) -> f64 {
        match self {
            Shape::Band => -(z.abs() - dead_zone).max(0.0),
            Shape::Upward => -(-z - dead_zone).max(0.0),
            Shape::Downward => -(z - dead_zone).max(0.0),
        }
    }
}

/// Standardization and weight of one feature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeatureModel {
    pub mean: f64,
    pub std: f64,
    pub weight: f64,
    pub shape: Shape,
}

impl FeatureModel {
    pub fn z(&self, value: f64) -> f64 {
        (value - self.mean) / self.std.max(MIN_STD)
    }
}

/// Weights and standardization for one challenge kind.
///
/// `norm_jerk` spans orders of magnitude, so it is standardized as
/// `ln(1 + norm_jerk)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HumannessModel {
    pub path_efficiency: FeatureModel,
    pub norm_jerk: FeatureModel,
    pub vel_profile_corr: FeatureModel,
    pub pause_ratio: FeatureModel,
    pub dt_cv: FeatureModel,
    pub bias: f64,
    pub dead_zone: f64,
    /// Gate threshold; a trace passes when `score >= threshold`.
    pub threshold: f64,
}

/// Weights and shapes used when fitting a model; means and stds come from data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScoringWeights {
    pub path_efficiency: f64,
    pub norm_jerk: f64,
    pub vel_profile_corr: f64,
    pub pause_ratio: f64,
    pub dt_cv: f64,
    pub bias: f64,
    pub dead_zone: f64,
}

impl Default for ScoringWeights {
    fn default() -> Self {
        Self {
            path_efficiency: 1.0,
            norm_jerk: 1.0,
            vel_profile_corr: 1.0,
            pause_ratio: 1.0,
            dt_cv: 1.0,
            bias: 0.0,
            dead_zone: DEFAULT_DEAD_ZONE,
        }
    }
}

/// Features plus the combined score in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HumannessScore {
    pub features: HumannessFeatures,
    pub score: f64,
}

pub fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Feature values in the domain the model standardizes.
fn model_inputs(f: &HumannessFeatures) -> [f64; 5] {
    [f.path_efficiency, f.norm_jerk.ln_1p(), f.vel_profile_corr, f.pause_ratio, f.dt_cv]
}

impl HumannessModel {
    fn features(&self) -> [&FeatureModel; 5] {
        [&self.path_efficiency, &self.norm_jerk, &self.vel_profile_corr, &self.pause_ratio, &self.dt_cv]
    }

    /// Standardized features, in [`HumannessFeatures::NAMES`] order.
    pub fn standardize(&self, f: &HumannessFeatures) -> [f64; 5] {
        let x = model_inputs(f);
        let m = self.features();
        std::array::from_fn(|i| m[i].z(x[i]))
    }

    /// `logistic(bias + Σ weight·φ(z))`.
    pub fn score(&self, f: &HumannessFeatures) -> HumannessScore {
        let z = self.standardize(f);
        let logit = self.bias
            + self
                .features()
                .iter()
                .zip(z)
                .map(|(m, z)| m.weight * m.shape.phi(z, self.dead_zone))
                .sum::<f64>();
        HumannessScore { features: *f, score: logistic(logit) }
    }

    pub fn accepts(&self, score: &HumannessScore) -> bool {
        score.score >= self.threshold
    }

    /// Fits means and stds on `humans`, then picks the Youden-optimal
    /// threshold on `humans` versus `bots`.
    pub fn fit(
        humans: &[HumannessFeatures],
        bots: &[HumannessFeatures],
        weights: &ScoringWeights,
    ) -> Result<HumannessModel> {
        if humans.len() < 2 || bots.is_empty() {
            return Err(Error::malformed("fitting needs at least two humans and one bot"));
        }
        let inputs: Vec<[f64; 5]> = humans.iter().map(model_inputs).collect();
        let stat = |i: usize, weight: f64, shape: Shape| {
            let n = inputs.len() as f64;
            let mean = inputs.iter().map(|x| x[i]).sum::<f64>() / n;
            let var = inputs.iter().map(|x| (x[i] - mean).powi(2)).sum::<f64>() / (n - 1.0);
            FeatureModel { mean, std: var.sqrt().max(MIN_STD), weight, shape }
        };
        let mut model = HumannessModel {
            path_efficiency: stat(0, weights.path_efficiency, Shape::Band),
            norm_jerk: stat(1, weights.norm_jerk, Shape::Band),
            vel_profile_corr: stat(2, weights.vel_profile_corr, Shape::Upward),
            pause_ratio: stat(3, weights.pause_ratio, Shape::Band),
            dt_cv: stat(4, weights.dt_cv, Shape::Band),
            bias: weights.bias,
            dead_zone: weights.dead_zone,
            threshold: 0.5,
        };
        model.validate()?;
        let labeled: Vec<Labeled> = humans
            .iter()
            .map(|f| (model.score(f).score, true))
            .chain(bots.iter().map(|f| (model.score(f).score, false)))
            .collect();
        model.threshold = calibrate_threshold(&labeled)?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = self
            .features()
            .iter()
            .all(|m| m.mean.is_finite() && m.std.is_finite() && m.weight.is_finite())
            && self.bias.is_finite()
            && self.dead_zone.is_finite()
            && self.threshold.is_finite();
        if !finite {
            return Err(Error::malformed("humanness model has non-finite parameters"));
        }
        if self.features().iter().any(|m| m.std <= 0.0 || m.weight < 0.0) || self.dead_zone < 0.0 {
            return Err(Error::malformed("humanness model needs std > 0, weight >= 0, dead_zone >= 0"));
        }
        Ok(())
    }
}

/// Free-function form of [`HumannessModel::score`].
pub fn humanness_score(features: &HumannessFeatures, model: &HumannessModel) -> HumannessScore {
    model.score(features)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn model() -> HumannessModel {
        let fm = |mean, std, shape| FeatureModel { mean, std, weight: 1.0, shape };
        HumannessModel {
            path_efficiency: fm(0.8, 0.05, Shape::Band),
            norm_jerk: fm(12.0, 0.8, Shape::Band),
            vel_profile_corr: fm(0.5, 0.1, Shape::Upward),
            pause_ratio: fm(0.2, 0.05, Shape::Band),
            dt_cv: fm(0.05, 0.003, Shape::Band),
            bias: 0.0,
            dead_zone: DEFAULT_DEAD_ZONE,
            threshold: 0.25,
        }
    }

    fn at_means(m: &HumannessModel) -> HumannessFeatures {
        HumannessFeatures {
            path_efficiency: m.path_efficiency.mean,
            norm_jerk: m.norm_jerk.mean.exp_m1(),
            vel_profile_corr: m.vel_profile_corr.mean,
            pause_ratio: m.pause_ratio.mean,
            dt_cv: m.dt_cv.mean,
        }
    }

    #[test]
    fn features_at_means_score_logistic_of_bias() {
        let m = model();
        assert!((m.score(&at_means(&m)).score - 0.5).abs() < 1e-12);
        let biased = HumannessModel { bias: 1.0, ..model() };
        assert!((biased.score(&at_means(&biased)).score - logistic(1.0)).abs() < 1e-12);
    }

    #[test]
    fn too_perfect_motion_scores_low() {
        let m = model();
        let bot = HumannessFeatures {
            path_efficiency: 1.0,
            norm_jerk: 0.0,
            vel_profile_corr: 0.0,
            pause_ratio: 0.0,
            dt_cv: 0.0,
        };
        assert!(m.score(&bot).score < 0.5);
        assert!(!m.accepts(&m.score(&bot)));
    }

    #[test]
    fn shapes_penalize_the_configured_side() {
        for z in [-10.0, -3.5, -1.0, 0.0, 2.0, 3.0, 7.0] {
            assert!(Shape::Band.phi(z, 3.0) <= 0.0);
            assert_eq!(Shape::Band.phi(z, 3.0), Shape::Band.phi(-z, 3.0));
        }
        assert_eq!(Shape::Upward.phi(9.0, 3.0), 0.0);
        assert_eq!(Shape::Upward.phi(-5.0, 3.0), -2.0);
        assert_eq!(Shape::Downward.phi(-9.0, 3.0), 0.0);
        assert_eq!(Shape::Downward.phi(5.0, 3.0), -2.0);
    }

    #[test]
    fn fit_recovers_means_and_separates_classes() {
        let human = |i: usize| {
            let d = (i % 7) as f64 - 3.0;
            HumannessFeatures {
                path_efficiency: 0.8 + 0.01 * d,
                norm_jerk: (12.0 + 0.1 * d).exp_m1(),
                vel_profile_corr: 0.5 + 0.02 * d,
                pause_ratio: 0.2 + 0.01 * d,
                dt_cv: 0.05 + 0.001 * d,
            }
        };
        let humans: Vec<_> = (0..70).map(human).collect();
        let bots = vec![
            HumannessFeatures {
                path_efficiency: 1.0,
                norm_jerk: 0.0,
                vel_profile_corr: 0.0,
                pause_ratio: 0.0,
                dt_cv: 0.0,
            };
            10
        ];
        let m = HumannessModel::fit(&humans, &bots, &ScoringWeights::default()).unwrap();
        assert!((m.path_efficiency.mean - 0.8).abs() < 1e-12);
        assert!(humans.iter().all(|h| m.accepts(&m.score(h))));
        assert!(bots.iter().all(|b| !m.accepts(&m.score(b))));
        assert!(HumannessModel::fit(&humans, &[], &ScoringWeights::default()).is_err());
    }

    proptest! {
        #[test]
        fn score_is_monotone_in_configured_direction(
            base in prop::array::uniform5(-8.0f64..8.0),
            idx in 0usize..5,
            a in -8.0f64..8.0,
            b in -8.0f64..8.0,
        ) {
            let m = model();
            let fm = m.features();
            let make = |zs: [f64; 5]| {
                let v: [f64; 5] = std::array::from_fn(|i| fm[i].mean + zs[i] * fm[i].std);
                HumannessFeatures {
                    path_efficiency: v[0],
                    norm_jerk: v[1].exp_m1(),
                    vel_profile_corr: v[2],
                    pause_ratio: v[3],
                    dt_cv: v[4],
                }
            };
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let mut za = base;
            let mut zb = base;
            let s = |zs| m.score(&make(zs)).score;
            match fm[idx].shape {
                Shape::Band => {
                    // closer to the mean never scores lower
                    za[idx] = lo.abs().min(hi.abs());
                    zb[idx] = lo.abs().max(hi.abs());
                    prop_assert!(s(za) >= s(zb) - 1e-12);
                    za[idx] = -za[idx];
                    zb[idx] = -zb[idx];
                    prop_assert!(s(za) >= s(zb) - 1e-12);
                }
                Shape::Upward => {
                    za[idx] = lo;
                    zb[idx] = hi;
                    prop_assert!(s(za) <= s(zb) + 1e-12);
                }
                Shape::Downward => {
                    za[idx] = lo;
                    zb[idx] = hi;
                    prop_assert!(s(za) >= s(zb) - 1e-12);
                }
            }
            prop_assert!((0.0..=1.0).contains(&s(base)));
        }
    }
}
