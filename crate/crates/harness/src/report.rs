//! Ranking of challenge kinds by mean simulated solve time.

use std::collections::BTreeMap;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankEntry {
    pub kind: String,
    pub n: usize,
    pub mean_time_s: f64,
}

#[derive(Debug, Deserialize)]
struct TimeRow {
    kind: String,
    profile: String,
    simulated_solve_time_s: f64,
}

/// Kinds in a results CSV from fastest to slowest mean solve time, over
/// the rows of `profile` (all rows when `None`). Equal means order by kind
/// name. A CSV without matching rows is an error.
pub fn rank_report<R: Read>(csv: R, profile: Option<&str>) -> Result<Vec<RankEntry>> {
    let mut by_kind: BTreeMap<String, (usize, f64)> = BTreeMap::new();
    for row in csv::Reader::from_reader(csv).deserialize() {
        let row: TimeRow = row?;
        if profile.is_some_and(|p| p != row.profile) {
            continue;
        }
        let e = by_kind.entry(row.kind).or_default();
        e.0 += 1;
        e.1 += row.simulated_solve_time_s;
    }
    if by_kind.is_empty() {
        return Err(HarnessError::Empty(match profile {
            Some(p) => format!("no rows for profile {p:?}"),
            None => "no rows".into(),
        }));
    }
    let mut ranking: Vec<RankEntry> = by_kind
        .into_iter()
        .map(|(kind, (n, total))| RankEntry { kind, n, mean_time_s: total / n as f64 })
        .collect();
    // stable sort keeps the name order among equal means
    ranking.sort_by(|a, b| a.mean_time_s.total_cmp(&b.mean_time_s));
    Ok(ranking)
}
