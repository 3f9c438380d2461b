//! Threshold selection and ROC evaluation for scored, labeled samples.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `(score, is_human)`; humans are the positive class.
pub type Labeled = (f64, bool);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Roc {
    pub auc: f64,
    /// `(fpr, tpr)` from `(0, 0)` to `(1, 1)`, one point per distinct score.
    pub curve: Vec<(f64, f64)>,
}

fn class_counts(labeled: &[Labeled]) -> Result<(usize, usize)> {
    if labeled.iter().any(|(s, _)| !s.is_finite()) {
        return Err(Error::malformed("scores must be finite"));
    }
    let pos = labeled.iter().filter(|(_, h)| *h).count();
    let neg = labeled.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::malformed("both classes must be present"));
    }
    Ok((pos, neg))
}

fn sorted(labeled: &[Labeled]) -> Vec<Labeled> {
    let mut v = labeled.to_vec();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    v
}

/// The cut-point maximizing Youden's J = TPR − FPR, where a sample is
/// accepted when `score >= threshold`.
///
/// Candidates are the lowest score and every midpoint between adjacent
/// distinct scores; among equal J the lowest candidate wins.
pub fn calibrate_threshold(labeled: &[Labeled]) -> Result<f64> {
    let (pos, neg) = class_counts(labeled)?;
    let v = sorted(labeled);
    // at the lowest candidate everything is accepted
    let (mut tp, mut fp) = (pos, neg);
    let j = |tp: usize, fp: usize| tp as f64 / pos as f64 - fp as f64 / neg as f64;
    let mut best = (j(tp, fp), v[0].0);
    let mut i = 0;
    while i < v.len() {
        let s = v[i].0;
        while i < v.len() && v[i].0 == s {
            if v[i].1 {
                tp -= 1;
            } else {
                fp -= 1;
            }
            i += 1;
        }
        if i == v.len() {
            break;
        }
        let cut = s + (v[i].0 - s) / 2.0;
        let jc = j(tp, fp);
        if jc > best.0 {
            best = (jc, cut);
        }
    }
    Ok(best.1)
}

/// AUC from the Mann–Whitney rank statistic (ties count one half) and the
/// empirical ROC curve.
pub fn evaluate_roc(labeled: &[Labeled]) -> Result<Roc> {
    let (pos, neg) = class_counts(labeled)?;
    let v = sorted(labeled);

    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < v.len() {
        let mut k = i;
        while k < v.len() && v[k].0 == v[i].0 {
            k += 1;
        }
        // ranks i+1..=k share their average
        let midrank = (i + 1 + k) as f64 / 2.0;
        rank_sum_pos += midrank * v[i..k].iter().filter(|(_, h)| *h).count() as f64;
        i = k;
    }
    let (p, n) = (pos as f64, neg as f64);
    let auc = (rank_sum_pos - p * (p + 1.0) / 2.0) / (p * n);

    let mut curve = vec![(0.0, 0.0)];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut k = v.len();
    while k > 0 {
        let s = v[k - 1].0;
        while k > 0 && v[k - 1].0 == s {
            if v[k - 1].1 {
                tp += 1;
            } else {
                fp += 1;
            }
            k -= 1;
        }
        curve.push((fp as f64 / n, tp as f64 / p));
    }
    Ok(Roc { auc, curve })
}
