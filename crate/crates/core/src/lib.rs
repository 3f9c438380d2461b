//! Generation, verification and humanness scoring for 3D-interaction CAPTCHAs.
//!
//! Six challenge kinds are supported: four classic designs (text, rotated
//! image, puzzle slider, image selection) and two designs that only make
//! sense with tracked hands: picking up and placing a virtual object, and
//! mimicking an avatar's arm movement. Trace-bearing answers can be gated on
//! a kinematic humanness score.

pub mod agents;
pub mod challenge;
pub mod error;
pub mod gateway;
pub mod humanness;
pub mod model;
pub mod verify;

mod verdict;

pub use error::{Error, Result};
pub use verdict::{Reason, Verdict};
