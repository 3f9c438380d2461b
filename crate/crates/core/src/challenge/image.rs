//! Rotation, puzzle and selection challenges over the image catalog.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::catalog::{group_by_category, ImageEntry};
use crate::error::{Error, Result};

/// Applied rotations stay at least this far from upright.
pub const MIN_ROTATION_DEG: f64 = 30.0;
pub const GAP_X_RANGE: (f64, f64) = (0.2, 0.9);
pub const PIECE_Y_RANGE: (f64, f64) = (0.1, 0.9);
pub const GRID_SIZE: usize = 9;
pub const TRUTH_SIZE_RANGE: (usize, usize) = (2, 5);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RotationPresentation {
    pub image_id: String,
    pub slider_min: f64,
    pub slider_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationSecret {
    /// Tilt applied to the upright image, degrees.
    pub applied_rotation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RotationChallenge {
    pub presentation: RotationPresentation,
    pub secret: RotationSecret,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PuzzlePresentation {
    pub image_id: String,
    pub piece_y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PuzzleSecret {
    pub gap_x: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PuzzleChallenge {
    pub presentation: PuzzlePresentation,
    pub secret: PuzzleSecret,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelectionPresentation {
    pub prompt_category: String,
    /// Image ids in row-major grid order.
    pub images: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionSecret {
    /// Sorted grid indices holding `prompt_category` images.
    pub truth: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionChallenge {
    pub presentation: SelectionPresentation,
    pub secret: SelectionSecret,
}

/// Applied rotation is uniform over `[-180, -30] ∪ [30, 180]`.
pub fn gen_rotation(seed: u64, catalog: &[ImageEntry]) -> Result<RotationChallenge> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let image = catalog.choose(&mut rng).ok_or_else(|| Error::malformed("empty image catalog"))?;
    let magnitude = rng.random_range(MIN_ROTATION_DEG..=180.0);
    let applied_rotation = if rng.random_bool(0.5) { magnitude } else { -magnitude };
    Ok(RotationChallenge {
        presentation: RotationPresentation {
            image_id: image.id.clone(),
            slider_min: -180.0,
            slider_max: 180.0,
        },
        secret: RotationSecret { applied_rotation },
    })
}

pub fn gen_puzzle(seed: u64, catalog: &[ImageEntry]) -> Result<PuzzleChallenge> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let image = catalog.choose(&mut rng).ok_or_else(|| Error::malformed("empty image catalog"))?;
    let gap_x = rng.random_range(GAP_X_RANGE.0..=GAP_X_RANGE.1);
    let piece_y = rng.random_range(PIECE_Y_RANGE.0..=PIECE_Y_RANGE.1);
    Ok(PuzzleChallenge {
        presentation: PuzzlePresentation { image_id: image.id.clone(), piece_y },
        secret: PuzzleSecret { gap_x },
    })
}

/// Feasible truth-set sizes when prompting for a category with
/// `in_category` images while `others` images exist in other categories.
fn feasible_truth_sizes(in_category: usize, others: usize) -> Vec<usize> {
    let (lo, hi) = TRUTH_SIZE_RANGE;
    (lo..=hi.min(in_category)).filter(|k| others >= GRID_SIZE - k).collect()
}

/// Builds a 3×3 grid of 2–5 prompt-category images among distractors.
///
/// A category is eligible as the prompt when some truth size in `[2, 5]`
/// can be filled from it while the rest of the grid can be filled from
/// other categories. The prompt category is chosen uniformly among eligible
/// ones, then the truth size uniformly among feasible sizes.
pub fn gen_selection(seed: u64, catalog: &[ImageEntry]) -> Result<SelectionChallenge> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let groups = group_by_category(catalog);
    let total = catalog.len();
    let eligible: Vec<(&str, Vec<usize>)> = groups
        .iter()
        .map(|(cat, imgs)| (*cat, feasible_truth_sizes(imgs.len(), total - imgs.len())))
        .filter(|(_, sizes)| !sizes.is_empty())
        .collect();
    let (prompt, sizes) = eligible
        .choose(&mut rng)
        .ok_or_else(|| Error::malformed("catalog lacks the category diversity for a 3x3 grid"))?;
    let k = *sizes.choose(&mut rng).expect("non-empty");

    let positives: Vec<&ImageEntry> = groups[prompt].choose_multiple(&mut rng, k).copied().collect();
    let distractor_pool: Vec<&ImageEntry> =
        catalog.iter().filter(|e| e.category != *prompt).collect();
    let negatives: Vec<&ImageEntry> =
        distractor_pool.choose_multiple(&mut rng, GRID_SIZE - k).copied().collect();

    let mut grid: Vec<&ImageEntry> = positives.into_iter().chain(negatives).collect();
    grid.shuffle(&mut rng);
    let truth = grid
        .iter()
        .enumerate()
        .filter(|(_, e)| e.category == *prompt)
        .map(|(i, _)| i as u8)
        .collect();
    Ok(SelectionChallenge {
        presentation: SelectionPresentation {
            prompt_category: (*prompt).to_owned(),
            images: grid.iter().map(|e| e.id.clone()).collect(),
        },
        secret: SelectionSecret { truth },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::challenge::Catalog;
    use crate::model::angular_distance;

    fn images(spec: &[(&str, usize)]) -> Vec<ImageEntry> {
        spec.iter()
            .flat_map(|(cat, n)| {
                (0..*n).map(move |i| ImageEntry { id: format!("{cat}-{i}"), category: cat.to_string() })
            })
            .collect()
    }

    #[test]
    fn rotation_never_near_upright() {
        let cat = Catalog::builtin();
        assert_eq!(gen_rotation(5, cat.images()).unwrap(), gen_rotation(5, cat.images()).unwrap());
        for seed in 0..1000 {
            let r = gen_rotation(seed, cat.images()).unwrap().secret.applied_rotation;
            let d = angular_distance(r, 0.0).unwrap();
            assert!((MIN_ROTATION_DEG..=180.0).contains(&d), "{r}");
        }
        assert!(gen_rotation(0, &[]).unwrap_err().is_malformed());
    }

    #[test]
    fn puzzle_gap_in_range() {
        let cat = Catalog::builtin();
        assert_eq!(gen_puzzle(9, cat.images()).unwrap(), gen_puzzle(9, cat.images()).unwrap());
        for seed in 0..1000 {
            let g = gen_puzzle(seed, cat.images()).unwrap().secret.gap_x;
            assert!((0.2..=0.9).contains(&g));
        }
        assert!(gen_puzzle(0, &[]).is_err());
    }

    #[test]
    fn selection_three_cats_six_dogs() {
        let cat = images(&[("cat", 3), ("dog", 6)]);
        let c = gen_selection(11, &cat).unwrap();
        assert_eq!(c.presentation.prompt_category, "cat");
        assert_eq!(c.secret.truth.len(), 3);
        for &i in &c.secret.truth {
            assert!(c.presentation.images[i as usize].starts_with("cat-"));
        }
        assert_eq!(c, gen_selection(11, &cat).unwrap());
    }

    #[test]
    fn selection_rejects_single_category() {
        let cat = images(&[("cat", 20)]);
        assert!(gen_selection(1, &cat).unwrap_err().is_malformed());
        assert!(gen_selection(1, &[]).is_err());
    }

    #[test]
    fn selection_truth_matches_catalog_lookup() {
        let cat = Catalog::builtin();
        for seed in 0..500 {
            let c = gen_selection(seed, cat.images()).unwrap();
            assert_eq!(c.presentation.images.len(), GRID_SIZE);
            let derived: Vec<u8> = c
                .presentation
                .images
                .iter()
                .enumerate()
                .filter(|(_, id)| cat.category_of(id) == Some(c.presentation.prompt_category.as_str()))
                .map(|(i, _)| i as u8)
                .collect();
            assert_eq!(derived, c.secret.truth);
            assert!((2..=5).contains(&c.secret.truth.len()));
            let unique: std::collections::BTreeSet<_> = c.presentation.images.iter().collect();
            assert_eq!(unique.len(), GRID_SIZE);
        }
    }
}
