//! Line-delimited corpus of labeled traces.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::model::{ChallengeKind, InteractionTrace};

/// One corpus line: a trace with its profile label and seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusRecord {
    pub kind: ChallengeKind,
    pub profile: String,
    pub seed: u64,
    pub trace: InteractionTrace,
}

/// Writes records as JSON lines and returns the SHA-256 of the bytes written.
pub fn write_corpus<'a, W: Write>(
    mut out: W,
    records: impl IntoIterator<Item = &'a CorpusRecord>,
) -> Result<String> {
    let mut hasher = Sha256::new();
    for r in records {
        let mut line = serde_json::to_string(r)?;
        line.push('\n');
        hasher.update(line.as_bytes());
        out.write_all(line.as_bytes())?;
    }
    out.flush()?;
    Ok(hex::encode(hasher.finalize()))
}

pub fn read_corpus<R: BufRead>(input: R) -> Result<Vec<CorpusRecord>> {
    let mut records = Vec::new();
    for line in input.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            records.push(serde_json::from_str(&line)?);
        }
    }
    Ok(records)
}
