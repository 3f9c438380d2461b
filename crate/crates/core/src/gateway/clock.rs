//! Time sources. The gateway reads time only through [`Clock`], so tests and
//! the harness can drive expiry deterministically.

use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

/// Seconds on an arbitrary but fixed epoch.
pub trait Clock: Send + Sync + std::fmt::Debug {
    fn now(&self) -> f64;
}

/// Wall-clock time in seconds since the Unix epoch.
#[derive(Debug, Default, Clone, Copy)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> f64 {
        SystemTime::now().duration_since(UNIX_EPOCH).map_or(0.0, |d| d.as_secs_f64())
    }
}

/// A clock that only moves when told to.
#[derive(Debug, Default)]
pub struct ManualClock {
    now: Mutex<f64>,
}

impl ManualClock {
    pub fn new(start: f64) -> Self {
        Self { now: Mutex::new(start) }
    }

    pub fn set(&self, t: f64) {
        *self.now.lock().expect("clock lock") = t;
    }

    pub fn advance(&self, dt: f64) {
        *self.now.lock().expect("clock lock") += dt;
    }
}

impl Clock for ManualClock {
    fn now(&self) -> f64 {
        *self.now.lock().expect("clock lock")
    }
}
