//! Fits the calibration artifact from a simulated corpus and checks it on a
//! fresh holdout corpus.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use vrcaptcha_core::agents::{solve, write_corpus, AgentKind, AgentProfile, CorpusRecord};
use vrcaptcha_core::challenge::{generate, Catalog, Challenge};
use vrcaptcha_core::humanness::{
    evaluate_roc, extract_features, CalibrationArtifact, HumannessFeatures, HumannessModel,
    ScoringWeights, ARTIFACT_VERSION,
};
use vrcaptcha_core::model::ChallengeKind;
use vrcaptcha_core::verify::motion_distance;

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};
use crate::run::percentile;
use crate::seed::derive_seed;

/// The kinds with a humanness model.
pub const TRACE_KINDS: [ChallengeKind; 2] = [ChallengeKind::TaskDriven, ChallengeKind::MotionBased];

/// Acceptance and rejection rates of a model on one corpus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rates {
    /// Humans accepted by the humanness gate.
    pub tpr: f64,
    /// Bots accepted by the humanness gate.
    pub fpr: f64,
    pub auc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KindHoldout {
    pub kind: ChallengeKind,
    pub train: Rates,
    pub holdout: Rates,
}

/// How the fitted artifact does on a fresh corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoldoutReport {
    pub kinds: Vec<KindHoldout>,
    /// Fraction of fresh human motion traces within the motion threshold.
    pub motion_theta_human_acceptance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationOutput {
    pub artifact: CalibrationArtifact,
    /// Training corpus, in the order it was fingerprinted.
    pub corpus: Vec<CorpusRecord>,
    pub holdout: HoldoutReport,
}

struct Sample {
    record: CorpusRecord,
    challenge: Challenge,
}

fn corpus(
    config: &ExperimentConfig,
    catalog: &Catalog,
    split: &str,
    kind: ChallengeKind,
    profile: &AgentProfile,
    n: usize,
) -> Result<Vec<Sample>> {
    let verify = &config.gateway.verify;
    (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let seed = derive_seed(config.seed, &["calibrate", split, kind.as_str(), &profile.name], i);
            let challenge = generate(kind, derive_seed(seed, &["challenge"], 0), catalog, &config.gateway.generation)?;
            let attempt = solve(&challenge, profile, &config.solve_time, verify, derive_seed(seed, &["agent"], 0));
            let trace = attempt.answer.trace().cloned().ok_or_else(|| {
                HarnessError::Config(format!("{kind} answers carry no trace"))
            })?;
            Ok(Sample { record: CorpusRecord { kind, profile: profile.name.clone(), seed, trace }, challenge })
        })
        .collect()
}

fn features(samples: &[Sample]) -> Result<Vec<HumannessFeatures>> {
    samples.iter().map(|s| Ok(extract_features(&s.record.trace)?)).collect()
}

fn motion_distances(config: &ExperimentConfig, samples: &[Sample]) -> Result<Vec<f64>> {
    samples
        .par_iter()
        .map(|s| match &s.challenge {
            Challenge::Motion(c) => {
                Ok(motion_distance(&c.secret.template_trace, &s.record.trace, &config.gateway.verify)?)
            }
            _ => Err(HarnessError::Config("expected a motion challenge".into())),
        })
        .collect()
}

fn rates(model: &HumannessModel, humans: &[HumannessFeatures], bots: &[HumannessFeatures]) -> Result<Rates> {
    let scores = |set: &[HumannessFeatures]| -> Vec<f64> { set.iter().map(|f| model.score(f).score).collect() };
    let (h, b) = (scores(humans), scores(bots));
    let accepted = |s: &[f64]| s.iter().filter(|&&x| x >= model.threshold).count() as f64 / s.len() as f64;
    let labeled: Vec<(f64, bool)> =
        h.iter().map(|&s| (s, true)).chain(b.iter().map(|&s| (s, false))).collect();
    Ok(Rates { tpr: accepted(&h), fpr: accepted(&b), auc: evaluate_roc(&labeled)?.auc })
}

/// Builds the corpus, fits one humanness model per trace kind and sets the
/// motion threshold to the configured quantile of human motion distances.
pub fn calibrate(config: &ExperimentConfig) -> Result<CalibrationOutput> {
    config.validate()?;
    let catalog = match &config.gateway.catalog_path {
        Some(p) => Catalog::load(p)?,
        None => Catalog::builtin(),
    };
    let human = config.profile_of(AgentKind::Human);
    let bot = config.profile_of(AgentKind::NaiveBot);
    let cal = &config.calibration;

    let mut records = Vec::new();
    let mut models = Vec::new();
    let mut kinds = Vec::new();
    let mut motion_theta = None;
    let mut motion_theta_human_acceptance = 0.0;
    for kind in TRACE_KINDS {
        let train_h = corpus(config, &catalog, "train", kind, &human, cal.corpus_per_class)?;
        let train_b = corpus(config, &catalog, "train", kind, &bot, cal.corpus_per_class)?;
        let test_h = corpus(config, &catalog, "holdout", kind, &human, cal.holdout_per_class)?;
        let test_b = corpus(config, &catalog, "holdout", kind, &bot, cal.holdout_per_class)?;

        let (fh, fb) = (features(&train_h)?, features(&train_b)?);
        let model = HumannessModel::fit(&fh, &fb, &ScoringWeights::default())?;
        let train = rates(&model, &fh, &fb)?;
        let holdout = rates(&model, &features(&test_h)?, &features(&test_b)?)?;
        kinds.push(KindHoldout { kind, train, holdout });

        if kind == ChallengeKind::MotionBased {
            let theta = percentile(&motion_distances(config, &train_h)?, cal.theta_quantile);
            let fresh = motion_distances(config, &test_h)?;
            motion_theta_human_acceptance =
                fresh.iter().filter(|&&d| d <= theta).count() as f64 / fresh.len() as f64;
            motion_theta = Some(theta);
        }
        records.extend(train_h.into_iter().chain(train_b).map(|s| s.record));
        models.push(model);
    }

    let corpus_fingerprint = write_corpus(std::io::sink(), &records)?;
    let [task, motion]: [HumannessModel; 2] = models.try_into().expect("one model per trace kind");
    let artifact = CalibrationArtifact {
        version: ARTIFACT_VERSION,
        seed: config.seed,
        corpus_per_class: cal.corpus_per_class,
        corpus_fingerprint,
        motion_theta: motion_theta.expect("motion is a trace kind"),
        task,
        motion,
    };
    artifact.validate()?;
    Ok(CalibrationOutput {
        artifact,
        corpus: records,
        holdout: HoldoutReport { kinds, motion_theta_human_acceptance },
    })
}

/// Pretty JSON with a trailing newline.
pub fn holdout_json(report: &HoldoutReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}
