use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::catalog::{in_reach_volume, SceneEntry, MIN_OBJECT_TARGET_DISTANCE_M};
use crate::error::{Error, Result};
use crate::model::Vec3;

pub const DEFAULT_GRAB_RADIUS_M: f64 = 0.10;
/// Per-axis seeded jitter applied to authored spawn and target positions.
pub const POSITION_JITTER_M: f64 = 0.03;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaskPresentation {
    pub object_id: String,
    pub object_spawn: Vec3,
    pub target_id: String,
    pub target_center: Vec3,
    pub target_radius: f64,
    pub prompt: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaskSecret {
    /// How close a hand must be to the object when the trigger is pressed.
    pub grab_radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaskChallenge {
    pub presentation: TaskPresentation,
    pub secret: TaskSecret,
}

fn jitter(rng: &mut ChaCha8Rng) -> Vec3 {
    let mut axis = || rng.random_range(-POSITION_JITTER_M..=POSITION_JITTER_M);
    Vec3::new(axis(), axis(), axis())
}

/// Picks a scene and perturbs its authored positions. Falls back to the
/// authored positions if the jittered ones break the layout invariants.
pub fn gen_task(seed: u64, scenes: &[SceneEntry], grab_radius: f64) -> Result<TaskChallenge> {
    if !(grab_radius.is_finite() && grab_radius > 0.0) {
        return Err(Error::malformed("grab radius must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scene = scenes.choose(&mut rng).ok_or_else(|| Error::malformed("empty scene catalog"))?;
    let mut spawn = scene.object_spawn + jitter(&mut rng);
    let mut target = scene.target_center + jitter(&mut rng);
    if spawn.distance(target) < MIN_OBJECT_TARGET_DISTANCE_M
        || !in_reach_volume(spawn)
        || !in_reach_volume(target)
    {
        spawn = scene.object_spawn;
        target = scene.target_center;
    }
    Ok(TaskChallenge {
        presentation: TaskPresentation {
            object_id: scene.object_id.clone(),
            object_spawn: spawn,
            target_id: scene.target_id.clone(),
            target_center: target,
            target_radius: scene.target_radius,
            prompt: scene.prompt.clone(),
        },
        secret: TaskSecret { grab_radius },
    })
}
