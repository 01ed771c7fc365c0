//! Exact BEV geometry: center distance, convex clipping and rotated-box IoU.

use crate::model::{BevBox, Vec2};

/// Intersections with area at or below this (m²) count as empty.
pub const AREA_EPSILON: f64 = 1e-12;

/// Anything with a BEV center.
pub trait Centered {
    fn bev_center(&self) -> Vec2;
}

impl Centered for Vec2 {
    fn bev_center(&self) -> Vec2 {
        *self
    }
}

impl Centered for BevBox {
    fn bev_center(&self) -> Vec2 {
        self.center()
    }
}

impl<T: Centered> Centered for &T {
    fn bev_center(&self) -> Vec2 {
        (*self).bev_center()
    }
}

pub fn center_distance(a: impl Centered, b: impl Centered) -> f64 {
    a.bev_center().distance(b.bev_center())
}

/// Convex polygon with counter-clockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon2 {
    vertices: Vec<Vec2>,
}

impl Polygon2 {
    /// Accepts vertices in either winding; returns `None` for fewer than
    /// three vertices or (near-)zero area. Convexity is the caller's contract.
    pub fn new(mut vertices: Vec<Vec2>) -> Option<Self> {
        if vertices.len() < 3 {
            return None;
        }
        let signed = signed_area(&vertices);
        if signed.abs() <= AREA_EPSILON {
            return None;
        }
        if signed < 0.0 {
            vertices.reverse();
        }
        Some(Self { vertices })
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }
}

impl From<&BevBox> for Polygon2 {
    fn from(b: &BevBox) -> Self {
        Polygon2 {
            vertices: b.corners().to_vec(),
        }
    }
}

fn signed_area(vertices: &[Vec2]) -> f64 {
    let n = vertices.len();
    let twice: f64 = (0..n).map(|i| vertices[i].cross(vertices[(i + 1) % n])).sum();
    twice / 2.0
}

/// Sutherland–Hodgman intersection of two convex CCW polygons. Returns
/// `None` when the overlap is empty or degenerate (area ≤ [`AREA_EPSILON`]).
pub fn clip_convex(subject: &Polygon2, clip: &Polygon2) -> Option<Polygon2> {
    let mut output = subject.vertices.clone();
    let clip_v = &clip.vertices;
    for i in 0..clip_v.len() {
        if output.is_empty() {
            return None;
        }
        let edge_start = clip_v[i];
        let edge = clip_v[(i + 1) % clip_v.len()] - edge_start;
        // Positive on the inner (left) side of a CCW edge.
        let side = |p: Vec2| edge.cross(p - edge_start);
        let input = std::mem::take(&mut output);
        let mut prev = input[input.len() - 1];
        let mut prev_side = side(prev);
        for &cur in &input {
            let cur_side = side(cur);
            if cur_side >= 0.0 {
                if prev_side < 0.0 {
                    output.push(crossing(prev, prev_side, cur, cur_side));
                }
                output.push(cur);
            } else if prev_side >= 0.0 {
                output.push(crossing(prev, prev_side, cur, cur_side));
            }
            prev = cur;
            prev_side = cur_side;
        }
    }
    Polygon2::new(output)
}

fn crossing(a: Vec2, side_a: f64, b: Vec2, side_b: f64) -> Vec2 {
    let t = side_a / (side_a - side_b);
    a + (b - a) * t
}

pub fn intersection_area(a: &BevBox, b: &BevBox) -> f64 {
    // Cheap reject on circumscribed circles.
    let reach = (a.length().hypot(a.width()) + b.length().hypot(b.width())) / 2.0;
    if center_distance(a, b) >= reach {
        return 0.0;
    }
    clip_convex(&Polygon2::from(a), &Polygon2::from(b)).map_or(0.0, |p| p.area())
}

/// Rotated BEV intersection-over-union in `[0, 1]`.
pub fn bev_iou(a: &BevBox, b: &BevBox) -> f64 {
    let inter = intersection_area(a, b);
    if inter <= AREA_EPSILON {
        return 0.0;
    }
    let union = a.area() + b.area() - inter;
    (inter / union).clamp(0.0, 1.0)
}
