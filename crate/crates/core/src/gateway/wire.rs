//! JSON wire protocol, independent of any HTTP framework.
//!
//! | method | path                               | body                     |
//! |--------|------------------------------------|--------------------------|
//! | POST   | `/v1/challenges`                   | `{"kind": optional}`     |
//! | POST   | `/v1/challenges/{id}/answer`       | `{"token", "answer"}`    |
//! | GET    | `/v1/health`                       |                          |
//!
//! Envelope errors are `400` with `{"error"}`. Once a request names a known
//! token it always gets a `200` verdict, malformed answers included.

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use serde_json::Value;

use super::{Gateway, SeedSource};
use crate::error::Error;
use crate::model::ChallengeKind;
use crate::verify::Answer;
use crate::{Reason, Verdict};

/// Correctness is reported in steps of 1/64 so a verdict cannot echo
/// secret-derived values at full precision.
pub const CORRECTNESS_STEPS: f64 = 64.0;

/// Largest accepted request body.
pub const MAX_BODY_BYTES: usize = 4 << 20;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IssueRequest {
    #[serde(default)]
    pub kind: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IssueResponse {
    pub token: String,
    pub challenge_id: String,
    pub kind: ChallengeKind,
    pub presentation: Value,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnswerRequest {
    pub token: String,
    /// Parsed separately so a bad answer still consumes a valid token.
    pub answer: Box<RawValue>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HumannessSummary {
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictResponse {
    pub pass: bool,
    pub reason: Reason,
    pub correctness: f64,
    pub humanness: Option<HumannessSummary>,
}

impl From<&Verdict> for VerdictResponse {
    fn from(v: &Verdict) -> Self {
        Self {
            pass: v.is_pass(),
            reason: v.reason(),
            correctness: (v.correctness() * CORRECTNESS_STEPS).round() / CORRECTNESS_STEPS,
            humanness: v.humanness().map(|h| HumannessSummary { score: h.score }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HealthResponse {
    pub status: String,
    pub live_sessions: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorResponse {
    pub error: String,
}

/// Status code plus JSON body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WireResponse {
    pub status: u16,
    pub body: String,
}

impl WireResponse {
    fn json(status: u16, value: &impl Serialize) -> Self {
        Self { status, body: serde_json::to_string(value).expect("response serializes") }
    }

    fn error(status: u16, msg: impl Into<String>) -> Self {
        Self::json(status, &ErrorResponse { error: msg.into() })
    }
}

/// `POST /v1/challenges`. An empty body issues a random kind.
pub fn handle_issue(gw: &Gateway, body: &[u8]) -> WireResponse {
    let req: IssueRequest = if body.iter().all(u8::is_ascii_whitespace) {
        IssueRequest::default()
    } else {
        match serde_json::from_slice(body) {
            Ok(r) => r,
            Err(e) => return WireResponse::error(400, format!("invalid request: {e}")),
        }
    };
    let kind = match req.kind.as_deref().map(str::parse::<ChallengeKind>).transpose() {
        Ok(k) => k,
        Err(e) => return WireResponse::error(400, e.to_string()),
    };
    match gw.issue(kind, SeedSource::Random) {
        Ok(issued) => WireResponse::json(
            200,
            &IssueResponse {
                token: issued.token,
                challenge_id: issued.challenge_id,
                kind: issued.kind,
                presentation: serde_json::to_value(issued.challenge.presentation())
                    .expect("presentation serializes"),
            },
        ),
        Err(Error::Unavailable(msg)) => WireResponse::error(503, msg),
        Err(e) => WireResponse::error(500, e.to_string()),
    }
}

/// `POST /v1/challenges/{challenge_id}/answer`.
pub fn handle_answer(gw: &Gateway, challenge_id: &str, body: &[u8]) -> WireResponse {
    let req: AnswerRequest = match serde_json::from_slice(body) {
        Ok(r) => r,
        Err(e) => return WireResponse::error(400, format!("invalid request: {e}")),
    };
    let answer: Option<Answer> = serde_json::from_str(req.answer.get()).ok();
    let verdict = gw.submit_to(Some(challenge_id), &req.token, answer.as_ref());
    WireResponse::json(200, &VerdictResponse::from(&verdict))
}

/// `GET /v1/health`.
pub fn handle_health(gw: &Gateway) -> WireResponse {
    WireResponse::json(200, &HealthResponse { status: "ok".into(), live_sessions: gw.live_sessions() })
}

/// Dispatches one request.
pub fn route(gw: &Gateway, method: &str, path: &str, body: &[u8]) -> WireResponse {
    if body.len() > MAX_BODY_BYTES {
        return WireResponse::error(413, "request body too large");
    }
    let path = path.split('?').next().unwrap_or_default().trim_end_matches('/');
    let segments: Vec<&str> = path.split('/').skip(1).collect();
    match (method, segments.as_slice()) {
        ("POST", ["v1", "challenges"]) => handle_issue(gw, body),
        ("POST", ["v1", "challenges", id, "answer"]) if !id.is_empty() => handle_answer(gw, id, body),
        ("GET", ["v1", "health"]) => handle_health(gw),
        (_, ["v1", "challenges"] | ["v1", "challenges", _, "answer"] | ["v1", "health"]) => {
            WireResponse::error(405, "method not allowed")
        }
        _ => WireResponse::error(404, "not found"),
    }
}
