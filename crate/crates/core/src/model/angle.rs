use crate::error::{Error, Result};

/// Shortest angular separation between two headings in degrees, in `[0, 180]`.
///
/// Exactly symmetric in its arguments.
pub fn angular_distance(a: f64, b: f64) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::malformed("angle must be finite"));
    }
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let d = (hi - lo).rem_euclid(360.0);
    Ok(d.min(360.0 - d))
}
