//! The challenge gateway: issues single-use tokens bound to generated
//! challenges and turns submissions into verdicts.
//!
//! A submission is checked in a fixed order: unknown token, expiry,
//! consumption, trace replay, verification, humanness gate. The token is
//! consumed by the first submission that gets past the expiry check,
//! whatever the outcome, so every challenge allows exactly one try.
//!
//! Motion challenges ship their avatar keyframes to the client, which has
//! to animate them, so the pose path is not secret. What protects that kind
//! is the humanness gate plus replay detection, not secrecy.

mod clock;
mod config;
mod replay;
mod session;
pub mod wire;

use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub use clock::{Clock, ManualClock, SystemClock};
pub use config::{GatewayConfig, ReplayConfig, ENV_PREFIX};
pub use replay::{rms_position_distance, trace_fingerprint, Fingerprint, ReplayGuard};
pub use session::{SessionRecord, SessionState, SessionStore};

use crate::challenge::{generate, Catalog, Challenge};
use crate::error::{Error, Result};
use crate::humanness::{extract_features, CalibrationArtifact, HumannessScore};
use crate::model::ChallengeKind;
use crate::verify::{verify, Answer, VerifyConfig};
use crate::{Reason, Verdict};

/// Where the challenge seed of an issue comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeedSource {
    /// Drawn from the gateway's generator.
    #[default]
    Random,
    /// Fixed by the caller, for reproducible experiments.
    Fixed(u64),
}

/// A freshly issued session. `challenge` holds the secret and must not be
/// sent to clients; the wire layer serializes only its presentation.
#[derive(Debug, Clone)]
pub struct Issued {
    pub token: String,
    pub challenge_id: String,
    pub kind: ChallengeKind,
    pub challenge: Arc<Challenge>,
}

#[derive(Debug)]
struct IssueState {
    sessions: SessionStore,
    rng: ChaCha20Rng,
}

#[derive(Debug)]
pub struct Gateway {
    config: GatewayConfig,
    verify: VerifyConfig,
    catalog: Catalog,
    calibration: CalibrationArtifact,
    clock: Arc<dyn Clock>,
    state: Mutex<IssueState>,
    replay: Mutex<ReplayGuard>,
}

fn hex128(rng: &mut impl Rng) -> String {
    format!("{:032x}", rng.random::<u128>())
}

impl Gateway {
    /// A gateway on the system clock with an OS-seeded token generator.
    /// Catalog and calibration are loaded from the configured paths, or
    /// the built-in ones are used.
    pub fn new(config: GatewayConfig) -> Result<Self> {
        config.validate()?;
        let catalog = match &config.catalog_path {
            Some(p) => Catalog::load(p)?,
            None => Catalog::builtin(),
        };
        let calibration = match &config.calibration_path {
            Some(p) => CalibrationArtifact::load(p)?,
            None => CalibrationArtifact::builtin().clone(),
        };
        let mut verify = config.verify.clone();
        verify.motion_theta = calibration.motion_theta;
        // fail at startup, not on the first issue, if generation params are bad
        for kind in ChallengeKind::ALL {
            generate(kind, 0, &catalog, &config.generation)?;
        }
        let state = IssueState {
            sessions: SessionStore::new(config.max_sessions),
            rng: ChaCha20Rng::from_rng(&mut rand::rng()),
        };
        let replay = ReplayGuard::new(config.replay.clone());
        Ok(Self {
            config,
            verify,
            catalog,
            calibration,
            clock: Arc::new(SystemClock),
            state: Mutex::new(state),
            replay: Mutex::new(replay),
        })
    }

    pub fn with_clock(mut self, clock: Arc<dyn Clock>) -> Self {
        self.clock = clock;
        self
    }

    /// Makes tokens, ids and random kinds reproducible.
    pub fn with_seed(self, seed: u64) -> Self {
        self.state.lock().expect("state lock").rng = ChaCha20Rng::seed_from_u64(seed);
        self
    }

    /// Replaces the calibration artifact, including the motion threshold.
    pub fn with_calibration(mut self, calibration: CalibrationArtifact) -> Self {
        self.verify.motion_theta = calibration.motion_theta;
        self.calibration = calibration;
        self
    }

    pub fn config(&self) -> &GatewayConfig {
        &self.config
    }

    /// The verifier settings in force, with the calibrated motion threshold.
    pub fn verify_config(&self) -> &VerifyConfig {
        &self.verify
    }

    pub fn calibration(&self) -> &CalibrationArtifact {
        &self.calibration
    }

    pub fn now(&self) -> f64 {
        self.clock.now()
    }

    /// Generates a challenge and stores a pending session for it. Without a
    /// kind, one is drawn uniformly.
    pub fn issue(&self, kind: Option<ChallengeKind>, seed: SeedSource) -> Result<Issued> {
        let now = self.clock.now();
        let mut state = self.state.lock().expect("state lock");
        let kind = kind.unwrap_or_else(|| {
            ChallengeKind::ALL[state.rng.random_range(0..ChallengeKind::ALL.len())]
        });
        let seed = match seed {
            SeedSource::Random => state.rng.random(),
            SeedSource::Fixed(s) => s,
        };
        let challenge = Arc::new(generate(kind, seed, &self.catalog, &self.config.generation)?);
        let mut token = hex128(&mut state.rng);
        while state.sessions.contains(&token) {
            token = hex128(&mut state.rng);
        }
        let challenge_id = hex128(&mut state.rng);
        let record = SessionRecord {
            token: token.clone(),
            challenge_id: challenge_id.clone(),
            challenge: Arc::clone(&challenge),
            issued_at: now,
            ttl_s: self.config.ttl_s,
            state: SessionState::Pending,
        };
        state
            .sessions
            .insert(record, now)
            .map_err(|_| Error::Unavailable("session store is full".into()))?;
        Ok(Issued { token, challenge_id, kind, challenge })
    }

    /// Submits `answer` for the session behind `token`.
    pub fn submit(&self, token: &str, answer: &Answer) -> Verdict {
        self.submit_to(None, token, Some(answer))
    }

    /// Submission as received over the wire: the challenge id from the URL
    /// must match the token's session (a mismatch is malformed and leaves
    /// the token untouched), and `answer` is `None` when the answer body did
    /// not parse, which consumes the token and yields a malformed verdict.
    pub fn submit_to(&self, challenge_id: Option<&str>, token: &str, answer: Option<&Answer>) -> Verdict {
        let now = self.clock.now();
        let challenge = match self.redeem(challenge_id, token, now) {
            Ok(c) => c,
            Err(v) => return v,
        };
        let Some(answer) = answer else {
            return Verdict::reject(Reason::Malformed);
        };
        let kind = challenge.kind();
        if answer.kind() != kind {
            return Verdict::reject(Reason::Malformed);
        }
        // scored up front so replays are reported with their humanness too
        let score = self.score(kind, answer);
        let attach = |v: Verdict| match score {
            Some(s) => v.with_humanness(s),
            None => v,
        };
        if let Some(trace) = answer.trace() {
            if self.replay.lock().expect("replay lock").check_and_record(kind, trace, now) {
                return attach(Verdict::reject(Reason::Replay));
            }
        }

        let mut verdict = attach(verify(&challenge, answer, &self.verify));
        if verdict.is_pass() && self.config.gated(kind) {
            // kinds without a trace or a model cannot demonstrate humanness
            let human = match (score, self.calibration.model_for(kind)) {
                (Some(s), Some(model)) => model.accepts(&s),
                _ => false,
            };
            if !human {
                verdict = verdict.into_humanness_reject();
            }
        }
        if verdict.is_pass() {
            if let Some(trace) = answer.trace() {
                self.replay.lock().expect("replay lock").record_accepted(kind, trace);
            }
        }
        verdict
    }

    /// The unknown/expired/consumed checks and the atomic consume.
    fn redeem(&self, challenge_id: Option<&str>, token: &str, now: f64) -> Result<Arc<Challenge>, Verdict> {
        let mut state = self.state.lock().expect("state lock");
        let Some(session) = state.sessions.get_mut(token) else {
            return Err(Verdict::reject(Reason::Malformed));
        };
        if challenge_id.is_some_and(|id| id != session.challenge_id) {
            return Err(Verdict::reject(Reason::Malformed));
        }
        match session.state {
            SessionState::Expired => Err(Verdict::reject(Reason::Expired)),
            SessionState::Consumed => Err(Verdict::reject(Reason::Replay)),
            SessionState::Pending if session.is_stale(now) => {
                session.state = SessionState::Expired;
                Err(Verdict::reject(Reason::Expired))
            }
            SessionState::Pending => {
                session.state = SessionState::Consumed;
                Ok(Arc::clone(&session.challenge))
            }
        }
    }

    /// Humanness of a trace answer under the kind's model, if both exist
    /// and the trace is long enough to score.
    fn score(&self, kind: ChallengeKind, answer: &Answer) -> Option<HumannessScore> {
        let model = self.calibration.model_for(kind)?;
        let features = extract_features(answer.trace()?).ok()?;
        Some(model.score(&features))
    }

    /// Marks stale pending sessions expired; returns how many changed.
    /// Calling it again at the same time changes nothing.
    pub fn sweep_expired(&self, now: f64) -> usize {
        self.state.lock().expect("state lock").sessions.sweep_expired(now)
    }

    /// Pending, unexpired sessions right now.
    pub fn live_sessions(&self) -> usize {
        let now = self.clock.now();
        self.state.lock().expect("state lock").sessions.live_count(now)
    }

    /// The challenge behind `token`, secret included. For in-process audits
    /// such as leak checks; never exposed on the wire.
    pub fn session_challenge(&self, token: &str) -> Option<Arc<Challenge>> {
        self.state.lock().expect("state lock").sessions.get(token).map(|s| Arc::clone(&s.challenge))
    }

    /// State of the session behind `token`, if it is still stored.
    pub fn session_state(&self, token: &str) -> Option<SessionState> {
        self.state.lock().expect("state lock").sessions.get(token).map(|s| s.state)
    }
}

#[cfg(test)]
mod tests;
