//! Seed derivation. Every simulated attempt gets a seed that depends only on
//! the run seed and its coordinates, so results do not depend on scheduling.

use sha2::{Digest, Sha256};

/// First eight bytes of SHA-256 over the run seed and a labeled path.
pub fn derive_seed(seed: u64, path: &[&str], index: u64) -> u64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    for part in path {
        h.update((part.len() as u64).to_le_bytes());
        h.update(part.as_bytes());
    }
    h.update(index.to_le_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}
