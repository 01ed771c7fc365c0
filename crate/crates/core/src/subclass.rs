//! Motion subclass labelling (static / linear / non-linear).
//!
//! A trajectory is static when its first and last boxes overlap. Otherwise
//! the first box is pushed forward at its initial velocity for the elapsed
//! time; if that target box overlaps the last box the trajectory is linear,
//! and non-linear if not. The same rule labels ground truth and unmatched
//! predictions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::geometry::bev_iou;
use crate::model::{BevBox, ForecastSet, Timeline, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MotionSubclass {
    Static,
    Linear,
    NonLinear,
}

impl MotionSubclass {
    pub const ALL: [MotionSubclass; 3] = [
        MotionSubclass::Static,
        MotionSubclass::Linear,
        MotionSubclass::NonLinear,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MotionSubclass::Static => "static",
            MotionSubclass::Linear => "linear",
            MotionSubclass::NonLinear => "non_linear",
        }
    }
}

impl fmt::Display for MotionSubclass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Applies the overlap rule. `elapsed` is the time in seconds between
/// `first` and `last`.
pub fn derive_subclass(first: &BevBox, last: &BevBox, velocity0: Vec2, elapsed: f64) -> MotionSubclass {
    if bev_iou(first, last) > 0.0 {
        return MotionSubclass::Static;
    }
    // The target keeps the first box's heading.
    let target = first.translated(velocity0 * elapsed);
    if bev_iou(&target, last) > 0.0 {
        MotionSubclass::Linear
    } else {
        MotionSubclass::NonLinear
    }
}

/// Velocity at offset 0: the annotation if present, else the offset 0→1
/// finite difference, else zero.
pub fn initial_velocity(boxes: &[(usize, BevBox)], velocity0: Option<Vec2>, timeline: &Timeline) -> Vec2 {
    if let Some(v) = velocity0 {
        return v;
    }
    match boxes {
        [(0, b0), (1, b1), ..] => (b1.center() - b0.center()) * (1.0 / timeline.dt()),
        _ => Vec2::ZERO,
    }
}

/// Subclass of a ground-truth box sequence starting at offset 0, judged at
/// its final available offset.
pub fn gt_subclass(boxes: &[(usize, BevBox)], velocity0: Option<Vec2>, timeline: &Timeline) -> MotionSubclass {
    let (_, first) = &boxes[0];
    let (last_offset, last) = &boxes[boxes.len() - 1];
    let v0 = initial_velocity(boxes, velocity0, timeline);
    derive_subclass(first, last, v0, timeline.seconds_at(*last_offset))
}

/// Subclass of one predicted candidate. The last box is the anchor's
/// footprint moved to the final waypoint; the initial velocity is the first
/// waypoint step.
pub fn derive_prediction_subclass(fs: &ForecastSet, candidate: usize, timeline: &Timeline) -> MotionSubclass {
    let cand = &fs.candidates[candidate];
    let anchor = &fs.anchor;
    let last = anchor.with_center(cand.final_waypoint());
    let v0 = (cand.waypoints[0] - anchor.center()) * (1.0 / timeline.dt());
    derive_subclass(anchor, &last, v0, timeline.horizon_seconds())
}
