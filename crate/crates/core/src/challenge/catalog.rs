//! Image and scene catalogs.
//!
//! A catalog file is TOML with `[[image]]` records (`id`, `category`) and
//! `[[scene]]` records (`object_id`, `target_id`, `object_spawn`,
//! `target_center`, `target_radius`, `prompt`).

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Vec3;

const BUILTIN_CATALOG: &str = include_str!("../../data/catalog.toml");

/// Center of the reach volume scenes are authored in.
pub const REACH_CENTER: Vec3 = Vec3::new(0.0, 1.1, 0.45);
/// Half-extent of the cubic reach volume (1 m on a side).
pub const REACH_HALF_EXTENT_M: f64 = 0.5;
pub const MIN_OBJECT_TARGET_DISTANCE_M: f64 = 0.3;
pub const TARGET_RADIUS_RANGE_M: (f64, f64) = (0.1, 0.3);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImageEntry {
    pub id: String,
    pub category: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneEntry {
    pub object_id: String,
    pub target_id: String,
    pub object_spawn: Vec3,
    pub target_center: Vec3,
    pub target_radius: f64,
    pub prompt: String,
}

impl SceneEntry {
    fn validate(&self) -> Result<()> {
        let (lo, hi) = TARGET_RADIUS_RANGE_M;
        if !(lo..=hi).contains(&self.target_radius) {
            return Err(Error::malformed(format!(
                "scene {:?}: target radius {} outside [{lo}, {hi}]",
                self.object_id, self.target_radius
            )));
        }
        if self.object_spawn.distance(self.target_center) < MIN_OBJECT_TARGET_DISTANCE_M {
            return Err(Error::malformed(format!(
                "scene {:?}: object and target closer than {MIN_OBJECT_TARGET_DISTANCE_M} m",
                self.object_id
            )));
        }
        for p in [self.object_spawn, self.target_center] {
            if !in_reach_volume(p) {
                return Err(Error::malformed(format!(
                    "scene {:?}: position {:?} outside the reach volume",
                    self.object_id,
                    p.to_array()
                )));
            }
        }
        Ok(())
    }
}

pub fn in_reach_volume(p: Vec3) -> bool {
    let d = p - REACH_CENTER;
    [d.x, d.y, d.z].iter().all(|c| c.abs() <= REACH_HALF_EXTENT_M)
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Catalog {
    #[serde(default, rename = "image")]
    images: Vec<ImageEntry>,
    #[serde(default, rename = "scene")]
    scenes: Vec<SceneEntry>,
}

impl Catalog {
    pub fn new(images: Vec<ImageEntry>, scenes: Vec<SceneEntry>) -> Result<Self> {
        let catalog = Catalog { images, scenes };
        catalog.validate()?;
        Ok(catalog)
    }

    /// The catalog shipped with the crate.
    pub fn builtin() -> Self {
        Self::from_toml_str(BUILTIN_CATALOG).expect("built-in catalog is valid")
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let catalog: Catalog = toml::from_str(text)?;
        catalog.validate()?;
        Ok(catalog)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn images(&self) -> &[ImageEntry] {
        &self.images
    }

    pub fn scenes(&self) -> &[SceneEntry] {
        &self.scenes
    }

    pub fn category_of(&self, image_id: &str) -> Option<&str> {
        self.images.iter().find(|e| e.id == image_id).map(|e| e.category.as_str())
    }

    /// Image ids grouped by category, in sorted category order.
    pub fn by_category(&self) -> BTreeMap<&str, Vec<&ImageEntry>> {
        group_by_category(&self.images)
    }

    fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for img in &self.images {
            if img.id.is_empty() || img.category.is_empty() {
                return Err(Error::malformed("image id and category must be non-empty"));
            }
            if !seen.insert(img.id.as_str()) {
                return Err(Error::malformed(format!("duplicate image id {:?}", img.id)));
            }
        }
        self.scenes.iter().try_for_each(SceneEntry::validate)
    }
}

pub(crate) fn group_by_category(images: &[ImageEntry]) -> BTreeMap<&str, Vec<&ImageEntry>> {
    let mut map: BTreeMap<&str, Vec<&ImageEntry>> = BTreeMap::new();
    for img in images {
        map.entry(img.category.as_str()).or_default().push(img);
    }
    map
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_catalog_loads() {
        let c = Catalog::builtin();
        assert!(c.images().len() >= 30);
        assert_eq!(c.scenes().len(), 3);
        assert_eq!(c.category_of("cat-03"), Some("cat"));
        let pairs: Vec<(&str, &str)> =
            c.scenes().iter().map(|s| (s.object_id.as_str(), s.target_id.as_str())).collect();
        assert!(pairs.contains(&("apple", "purple bowl")));
        assert!(pairs.contains(&("wine bottle", "trash can")));
        assert!(pairs.contains(&("knife and fork", "dinner plate")));
    }

    #[test]
    fn rejects_bad_scenes_and_duplicates() {
        let close = r#"
            [[scene]]
            object_id = "a"
            target_id = "b"
            object_spawn = [0.0, 1.0, 0.4]
            target_center = [0.1, 1.0, 0.4]
            target_radius = 0.15
            prompt = "p"
        "#;
        assert!(Catalog::from_toml_str(close).unwrap_err().is_malformed());

        let dup = r#"
            [[image]]
            id = "x"
            category = "cat"
            [[image]]
            id = "x"
            category = "dog"
        "#;
        assert!(Catalog::from_toml_str(dup).is_err());
        assert!(Catalog::from_toml_str("[[image]]\nid = 3").is_err());
    }
}
