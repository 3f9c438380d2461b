use serde::Serialize;

use crate::challenge::{TaskPresentation, TaskSecret};
use crate::model::{InteractionTrace, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Hand {
    Left,
    Right,
}

/// One pick-up and release of the task object.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrabEvent {
    pub grab_t: f64,
    pub release_t: f64,
    pub hand: Hand,
    /// Object position at the release sample.
    pub release_pos: Vec3,
    /// Highest object `y` while held, release sample included.
    pub max_carry_height: f64,
}

struct Held {
    hand: Hand,
    offset: Vec3,
    grab_t: f64,
    max_y: f64,
}

/// Replays the trace against a single rigid object.
///
/// The object starts at `object_spawn`. A grab opens on a trigger's
/// false→true edge when that hand is within `grab_radius` of the object;
/// the object then keeps its offset from the hand until the same trigger is
/// released. A grab still open at the end of the trace yields no event. The
/// first sample carries no edge since the prior trigger state is unknown.
pub fn extract_grab_events(
    task: &TaskPresentation,
    secret: &TaskSecret,
    trace: &InteractionTrace,
) -> Vec<GrabEvent> {
    let samples = trace.samples();
    let mut events = Vec::new();
    let mut object = task.object_spawn;
    let mut held: Option<Held> = None;

    for w in samples.windows(2) {
        let (prev, s) = (&w[0], &w[1]);
        let hand_pos = |h: Hand| match h {
            Hand::Left => s.left_hand,
            Hand::Right => s.right_hand,
        };
        let pressed = |h: Hand| match h {
            Hand::Left => s.trigger_left,
            Hand::Right => s.trigger_right,
        };
        let was_pressed = |h: Hand| match h {
            Hand::Left => prev.trigger_left,
            Hand::Right => prev.trigger_right,
        };

        if let Some(h) = held.as_mut() {
            object = hand_pos(h.hand) + h.offset;
            h.max_y = h.max_y.max(object.y);
            if !pressed(h.hand) {
                events.push(GrabEvent {
                    grab_t: h.grab_t,
                    release_t: s.t,
                    hand: h.hand,
                    release_pos: object,
                    max_carry_height: h.max_y,
                });
                held = None;
            }
            continue;
        }

        for h in [Hand::Right, Hand::Left] {
            if pressed(h) && !was_pressed(h) && hand_pos(h).distance(object) <= secret.grab_radius {
                held = Some(Held { hand: h, offset: object - hand_pos(h), grab_t: s.t, max_y: object.y });
                break;
            }
        }
    }
    events
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PoseSample;

    fn task() -> (TaskPresentation, TaskSecret) {
        (
            TaskPresentation {
                object_id: "apple".into(),
                object_spawn: Vec3::new(0.0, 0.8, 0.5),
                target_id: "bowl".into(),
                target_center: Vec3::new(0.4, 0.8, 0.5),
                target_radius: 0.15,
                prompt: String::new(),
            },
            TaskSecret { grab_radius: 0.10 },
        )
    }

    fn trace(points: &[(f64, Vec3, bool)]) -> InteractionTrace {
        let samples = points
            .iter()
            .map(|&(t, rh, tr)| PoseSample {
                t,
                head: Vec3::new(0.0, 1.6, 0.0),
                left_hand: Vec3::new(-0.2, 0.9, 0.1),
                right_hand: rh,
                trigger_left: false,
                trigger_right: tr,
            })
            .collect();
        InteractionTrace::from_samples(samples).unwrap()
    }

    #[test]
    fn no_presses_no_events() {
        let (p, s) = task();
        let tr = trace(&[(0.0, Vec3::new(0.0, 0.8, 0.5), false), (1.0, Vec3::new(0.4, 0.8, 0.5), false)]);
        assert!(extract_grab_events(&p, &s, &tr).is_empty());
    }

    #[test]
    fn press_near_object_then_release() {
        let (p, s) = task();
        let near = Vec3::new(0.05, 0.8, 0.5);
        let tr = trace(&[
            (0.0, near, false),
            (0.1, near, true),
            (0.6, Vec3::new(0.25, 1.0, 0.5), true),
            (1.1, Vec3::new(0.45, 0.8, 0.5), false),
        ]);
        let ev = extract_grab_events(&p, &s, &tr);
        assert_eq!(ev.len(), 1);
        assert!(ev[0].grab_t < ev[0].release_t);
        assert_eq!(ev[0].hand, Hand::Right);
        // object keeps its -5 cm x offset from the hand
        assert!(ev[0].release_pos.distance(Vec3::new(0.4, 0.8, 0.5)) < 1e-12);
        assert!((ev[0].max_carry_height - 1.0).abs() < 1e-12);
    }

    #[test]
    fn press_out_of_reach_is_ignored() {
        let (p, s) = task();
        let far = Vec3::new(0.5, 0.8, 0.5);
        let tr = trace(&[(0.0, far, false), (0.1, far, true), (1.1, far, false)]);
        assert!(extract_grab_events(&p, &s, &tr).is_empty());
    }

    #[test]
    fn trigger_held_from_first_sample_is_not_a_grab() {
        let (p, s) = task();
        let at = p.object_spawn;
        let tr = trace(&[(0.0, at, true), (0.5, at, true), (1.0, at, false)]);
        assert!(extract_grab_events(&p, &s, &tr).is_empty());
    }

    #[test]
    fn object_stays_where_released() {
        let (p, s) = task();
        let at = p.object_spawn;
        let moved = Vec3::new(0.3, 0.8, 0.5);
        let tr = trace(&[
            (0.0, at, false),
            (0.1, at, true),
            (0.5, moved, false),
            // pressing at the spawn again finds nothing there
            (0.6, at, true),
            (0.7, at, false),
            (0.8, moved, false),
            (0.9, moved, true),
            (1.0, at, false),
        ]);
        let ev = extract_grab_events(&p, &s, &tr);
        assert_eq!(ev.len(), 2);
        assert_eq!(ev[1].grab_t, 0.9);
        assert!(ev[0].release_t < ev[1].grab_t);
    }
}
