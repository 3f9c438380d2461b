//! Dynamic time warping over two-hand pose sequences.

use crate::error::{Error, Result};
use crate::model::{InteractionTrace, Vec3};

/// Left and right hand positions at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HandPair {
    pub left: Vec3,
    pub right: Vec3,
}

impl HandPair {
    /// Euclidean distance over the concatenated 6-vector.
    pub fn distance(&self, other: &HandPair) -> f64 {
        ((self.left - other.left).norm_squared() + (self.right - other.right).norm_squared()).sqrt()
    }
}

pub fn hand_pairs(trace: &InteractionTrace) -> Vec<HandPair> {
    trace
        .samples()
        .iter()
        .map(|s| HandPair { left: s.left_hand, right: s.right_hand })
        .collect()
}

/// Exact DTW cost with steps (-1,0), (0,-1), (-1,-1); not length-normalized.
pub fn dtw_distance(a: &[HandPair], b: &[HandPair]) -> Result<f64> {
    dtw_banded(a, b, None)
}

/// DTW restricted to a Sakoe–Chiba band of half-width `window` around the
/// length-scaled diagonal. The band is widened to at least the length
/// difference so the end cell stays reachable. `None` computes exact DTW.
pub fn dtw_banded(a: &[HandPair], b: &[HandPair], window: Option<usize>) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::malformed("dtw needs non-empty sequences"));
    }
    let (n, m) = (a.len(), b.len());
    let w = window.map(|w| w.max(n.abs_diff(m)).max(1));
    let band = |i: usize| -> (usize, usize) {
        match w {
            None => (0, m - 1),
            Some(w) => {
                let center = if n == 1 { 0 } else { (i * (m - 1) + (n - 1) / 2) / (n - 1) };
                (center.saturating_sub(w), (center + w).min(m - 1))
            }
        }
    };

    let mut prev = vec![f64::INFINITY; m];
    let mut cur = vec![f64::INFINITY; m];
    for i in 0..n {
        let (lo, hi) = band(i);
        cur.fill(f64::INFINITY);
        for j in lo..=hi {
            let cost = a[i].distance(&b[j]);
            let best = if i == 0 && j == 0 {
                0.0
            } else {
                let up = if i > 0 { prev[j] } else { f64::INFINITY };
                let left = if j > 0 { cur[j - 1] } else { f64::INFINITY };
                let diag = if i > 0 && j > 0 { prev[j - 1] } else { f64::INFINITY };
                up.min(left).min(diag)
            };
            cur[j] = cost + best;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    let d = prev[m - 1];
    if d.is_finite() {
        Ok(d)
    } else {
        Err(Error::malformed("dtw band does not connect the sequence ends"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn xs(v: &[f64]) -> Vec<HandPair> {
        v.iter()
            .map(|&x| HandPair { left: Vec3::new(x, 0.0, 0.0), right: Vec3::ZERO })
            .collect()
    }

    /// Naive recursion over the three predecessor steps.
    fn oracle(a: &[HandPair], b: &[HandPair], i: usize, j: usize) -> f64 {
        let cost = a[i].distance(&b[j]);
        if i == 0 && j == 0 {
            return cost;
        }
        let mut best = f64::INFINITY;
        if i > 0 {
            best = best.min(oracle(a, b, i - 1, j));
        }
        if j > 0 {
            best = best.min(oracle(a, b, i, j - 1));
        }
        if i > 0 && j > 0 {
            best = best.min(oracle(a, b, i - 1, j - 1));
        }
        cost + best
    }

    #[test]
    fn worked_example_on_three_by_two_grid() {
        let d = dtw_distance(&xs(&[0.0, 1.0, 2.0]), &xs(&[0.0, 2.0])).unwrap();
        assert_eq!(d, 1.0);
    }

    #[test]
    fn identity_is_zero_and_empty_is_error() {
        let a = xs(&[0.3, -1.0, 2.5, 2.5, 0.0]);
        assert_eq!(dtw_distance(&a, &a).unwrap(), 0.0);
        assert!(dtw_distance(&a, &[]).unwrap_err().is_malformed());
        assert!(dtw_distance(&[], &a).is_err());
    }

    #[test]
    fn wide_band_equals_exact() {
        let a = xs(&(0..60).map(|i| (i as f64 * 0.2).sin()).collect::<Vec<_>>());
        let b = xs(&(0..45).map(|i| (i as f64 * 0.27).sin()).collect::<Vec<_>>());
        let exact = dtw_distance(&a, &b).unwrap();
        assert_eq!(dtw_banded(&a, &b, Some(60)).unwrap(), exact);
        assert!(dtw_banded(&a, &b, Some(3)).unwrap() >= exact);
    }

    fn arb_seq() -> impl Strategy<Value = Vec<HandPair>> {
        prop::collection::vec(
            (prop::array::uniform3(-2.0f64..2.0), prop::array::uniform3(-2.0f64..2.0)),
            1..=10,
        )
        .prop_map(|v| {
            v.into_iter().map(|(l, r)| HandPair { left: l.into(), right: r.into() }).collect()
        })
    }

    proptest! {
        #[test]
        fn matches_recursion_oracle_and_is_symmetric(a in arb_seq(), b in arb_seq()) {
            let d = dtw_distance(&a, &b).unwrap();
            prop_assert!(d >= 0.0);
            prop_assert_eq!(d, oracle(&a, &b, a.len() - 1, b.len() - 1));
            prop_assert_eq!(d, dtw_distance(&b, &a).unwrap());
        }
    }
}
