use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// A–Z and 2–9 without the look-alikes O and I.
pub const TEXT_ALPHABET: &[u8; 32] = b"ABCDEFGHJKLMNPQRSTUVWXYZ23456789";
pub const TEXT_LENGTH_RANGE: (usize, usize) = (4, 8);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TextPresentation {
    /// Seed for the client's visual distortion.
    pub render_seed: u64,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextSecret {
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextChallenge {
    pub presentation: TextPresentation,
    pub secret: TextSecret,
}

pub fn gen_text(seed: u64, length: usize) -> Result<TextChallenge> {
    let (lo, hi) = TEXT_LENGTH_RANGE;
    if !(lo..=hi).contains(&length) {
        return Err(Error::malformed(format!("text length {length} outside [{lo}, {hi}]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let expected = (0..length)
        .map(|_| char::from(TEXT_ALPHABET[rng.random_range(0..TEXT_ALPHABET.len())]))
        .collect();
    let render_seed = rng.random();
    Ok(TextChallenge {
        presentation: TextPresentation { render_seed, length },
        secret: TextSecret { expected },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_in_alphabet() {
        let a = gen_text(42, 4).unwrap();
        assert_eq!(a, gen_text(42, 4).unwrap());
        assert_eq!(a.secret.expected.len(), 4);
        assert_eq!(a.presentation.length, 4);
        assert!(a.secret.expected.bytes().all(|b| TEXT_ALPHABET.contains(&b)));
    }

    #[test]
    fn alphabet_excludes_ambiguous_glyphs() {
        for c in [b'O', b'I', b'0', b'1'] {
            assert!(!TEXT_ALPHABET.contains(&c));
        }
        let unique: std::collections::BTreeSet<u8> = TEXT_ALPHABET.iter().copied().collect();
        assert_eq!(unique.len(), 32);
    }

    #[test]
    fn length_bounds() {
        assert!(gen_text(1, 9).unwrap_err().is_malformed());
        assert!(gen_text(1, 3).is_err());
        for len in 4..=8 {
            assert_eq!(gen_text(3, len).unwrap().secret.expected.len(), len);
        }
    }
}
