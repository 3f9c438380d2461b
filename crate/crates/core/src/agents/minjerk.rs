use crate::error::{Error, Result};
use crate::model::Vec3;

/// Normalized minimum-jerk position profile `10τ³ − 15τ⁴ + 6τ⁵`.
pub fn min_jerk_profile(tau: f64) -> f64 {
    let t3 = tau * tau * tau;
    t3 * (10.0 + tau * (-15.0 + 6.0 * tau))
}

/// Derivative of [`min_jerk_profile`] with respect to τ: `30τ²(1 − τ)²`.
pub fn min_jerk_velocity_profile(tau: f64) -> f64 {
    let u = tau * (1.0 - tau);
    30.0 * u * u
}

/// Minimum-jerk point-to-point position at time `t` of a move lasting `duration`.
pub fn min_jerk(p0: Vec3, p1: Vec3, duration: f64, t: f64) -> Result<Vec3> {
    if !(duration.is_finite() && duration > 0.0) {
        return Err(Error::malformed("min-jerk duration must be positive"));
    }
    if !(0.0..=duration).contains(&t) {
        return Err(Error::malformed(format!("t = {t} outside [0, {duration}]")));
    }
    Ok(p0 + (p1 - p0) * min_jerk_profile(t / duration))
}
