//! Single-use session records and their bounded store.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::challenge::Challenge;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SessionState {
    Pending,
    Consumed,
    Expired,
}

/// Binds a token to a challenge and its secret.
#[derive(Debug, Clone)]
pub struct SessionRecord {
    /// 128-bit random value, lowercase hex.
    pub token: String,
    pub challenge_id: String,
    pub challenge: Arc<Challenge>,
    pub issued_at: f64,
    pub ttl_s: f64,
    pub state: SessionState,
}

impl SessionRecord {
    /// Past its TTL; expiry is strict, so `now == issued_at + ttl` is live.
    pub fn is_stale(&self, now: f64) -> bool {
        now - self.issued_at > self.ttl_s
    }

    /// Still redeemable at `now`.
    pub fn is_live(&self, now: f64) -> bool {
        self.state == SessionState::Pending && !self.is_stale(now)
    }
}

/// Sessions keyed by token, remembering issue order for eviction.
#[derive(Debug)]
pub struct SessionStore {
    sessions: HashMap<String, SessionRecord>,
    order: VecDeque<String>,
    capacity: usize,
}

impl SessionStore {
    pub fn new(capacity: usize) -> Self {
        Self { sessions: HashMap::new(), order: VecDeque::new(), capacity: capacity.max(1) }
    }

    pub fn len(&self) -> usize {
        self.sessions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sessions.is_empty()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.sessions.contains_key(token)
    }

    pub fn get(&self, token: &str) -> Option<&SessionRecord> {
        self.sessions.get(token)
    }

    pub fn get_mut(&mut self, token: &str) -> Option<&mut SessionRecord> {
        self.sessions.get_mut(token)
    }

    /// Stores `record`. When full, the oldest expired (or stale) session is
    /// evicted, else the oldest consumed one; if every session is still
    /// live the record is handed back.
    pub fn insert(&mut self, record: SessionRecord, now: f64) -> Result<(), SessionRecord> {
        if self.sessions.len() >= self.capacity {
            let victim = self
                .oldest_where(|s| s.state == SessionState::Expired || s.is_stale(now))
                .or_else(|| self.oldest_where(|s| s.state == SessionState::Consumed));
            match victim {
                Some(i) => {
                    let token = self.order.remove(i).expect("index from the order queue");
                    self.sessions.remove(&token);
                }
                None => return Err(record),
            }
        }
        self.order.push_back(record.token.clone());
        self.sessions.insert(record.token.clone(), record);
        Ok(())
    }

    fn oldest_where(&self, pred: impl Fn(&SessionRecord) -> bool) -> Option<usize> {
        self.order.iter().position(|t| pred(&self.sessions[t]))
    }

    /// Marks stale pending sessions expired and returns how many changed.
    pub fn sweep_expired(&mut self, now: f64) -> usize {
        let mut n = 0;
        for s in self.sessions.values_mut() {
            if s.state == SessionState::Pending && s.is_stale(now) {
                s.state = SessionState::Expired;
                n += 1;
            }
        }
        n
    }

    pub fn live_count(&self, now: f64) -> usize {
        self.sessions.values().filter(|s| s.is_live(now)).count()
    }
}
