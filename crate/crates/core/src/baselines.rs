//! Geometric forecasters over detector output, and the backcast assembler
//! that attaches future detections to current ones.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{bev_iou, center_distance};
use crate::model::{BevBox, ForecastCandidate, ForecastSet, Timeline, Vec2};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BaselineError {
    #[error("detection {index}: expected {expected} step velocities, got {got}")]
    VelocityCount { index: usize, expected: usize, got: usize },
    #[error("{got} velocity sequences for {expected} detections")]
    SequenceCount { expected: usize, got: usize },
}

/// Current-frame detection with a velocity estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    #[serde(rename = "box")]
    pub bbox: BevBox,
    pub score: f64,
    pub velocity: Vec2,
}

/// Detection at the end of the horizon plus the per-step displacements that
/// walk it back to the current frame. `back_offsets[0]` moves offset `T` to
/// `T - 1`, the last entry moves offset 1 to 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FutureDetection {
    pub position: Vec2,
    pub score: f64,
    pub back_offsets: Vec<Vec2>,
}

impl FutureDetection {
    /// Positions at offsets `0..=T`, integrated backwards from `position`.
    pub fn backcast_chain(&self) -> Vec<Vec2> {
        let mut chain = Vec::with_capacity(self.back_offsets.len() + 1);
        let mut p = self.position;
        chain.push(p);
        for step in &self.back_offsets {
            p += *step;
            chain.push(p);
        }
        chain.reverse();
        chain
    }
}

fn single(det: &Detection, waypoints: Vec<Vec2>) -> ForecastSet {
    ForecastSet {
        anchor: det.bbox,
        det_score: det.score,
        candidates: vec![ForecastCandidate {
            waypoints,
            forecast_score: det.score,
        }],
    }
}

pub fn constant_position(dets: &[Detection], timeline: &Timeline) -> Vec<ForecastSet> {
    dets.iter()
        .map(|d| single(d, vec![d.bbox.center(); timeline.horizon_steps()]))
        .collect()
}

pub fn constant_velocity(dets: &[Detection], timeline: &Timeline) -> Vec<ForecastSet> {
    dets.iter()
        .map(|d| {
            let c = d.bbox.center();
            let wps = (1..=timeline.horizon_steps())
                .map(|t| c + d.velocity * timeline.seconds_at(t))
                .collect();
            single(d, wps)
        })
        .collect()
}

/// Integrates one velocity per step forward from the anchor.
pub fn forward_integrate(
    dets: &[Detection],
    per_step_velocities: &[Vec<Vec2>],
    timeline: &Timeline,
) -> Result<Vec<ForecastSet>, BaselineError> {
    if dets.len() != per_step_velocities.len() {
        return Err(BaselineError::SequenceCount {
            expected: dets.len(),
            got: per_step_velocities.len(),
        });
    }
    dets.iter()
        .zip(per_step_velocities)
        .enumerate()
        .map(|(index, (d, vs))| {
            if vs.len() != timeline.horizon_steps() {
                return Err(BaselineError::VelocityCount {
                    index,
                    expected: timeline.horizon_steps(),
                    got: vs.len(),
                });
            }
            let mut p = d.bbox.center();
            let wps = vs
                .iter()
                .map(|v| {
                    p += *v * timeline.dt();
                    p
                })
                .collect();
            Ok(single(d, wps))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BackcastOutput {
    pub forecasts: Vec<ForecastSet>,
    /// Future detections that found no anchor.
    pub discarded: usize,
}

/// Groups backcast future detections under their nearest current detection
/// (many-to-one). Anchors that attract nothing produce no forecast set.
/// `max_radius` gates the anchor distance; pass `f64::INFINITY` for none.
pub fn backcast_assemble(
    current: &[Detection],
    future: &[FutureDetection],
    timeline: &Timeline,
    max_radius: f64,
) -> BackcastOutput {
    let mut groups: Vec<Vec<(usize, Vec<Vec2>)>> = vec![Vec::new(); current.len()];
    let mut discarded = 0;
    for (fi, fd) in future.iter().enumerate() {
        if fd.back_offsets.len() != timeline.horizon_steps() {
            discarded += 1;
            continue;
        }
        let chain = fd.backcast_chain();
        let origin = chain[0];
        let nearest = current
            .iter()
            .enumerate()
            .map(|(j, d)| (center_distance(origin, d.bbox), j))
            .filter(|(dist, _)| *dist <= max_radius)
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        match nearest {
            Some((_, j)) => groups[j].push((fi, chain[1..].to_vec())),
            None => discarded += 1,
        }
    }
    let forecasts = groups
        .into_iter()
        .zip(current)
        .filter(|(g, _)| !g.is_empty())
        .map(|(mut g, det)| {
            g.sort_by(|a, b| future[b.0].score.total_cmp(&future[a.0].score).then(a.0.cmp(&b.0)));
            ForecastSet {
                anchor: det.bbox,
                det_score: det.score,
                candidates: g
                    .into_iter()
                    .map(|(fi, waypoints)| ForecastCandidate {
                        waypoints,
                        forecast_score: future[fi].score,
                    })
                    .collect(),
            }
        })
        .collect();
    BackcastOutput { forecasts, discarded }
}

/// Score transform that ranks detections which look stationary above all
/// moving ones. A detection looks stationary when its box, pushed forward
/// at its estimated velocity to the end of the horizon, still overlaps
/// itself. Stationary scores map to `0.5 + 0.5·s`, moving ones to
/// `moving_scale · 0.5 · s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationarityRerank {
    pub moving_scale: f64,
    /// Drop moving detections entirely instead of demoting them.
    pub drop_moving: bool,
}

impl Default for StationarityRerank {
    fn default() -> Self {
        Self {
            moving_scale: 1.0,
            drop_moving: false,
        }
    }
}

impl StationarityRerank {
    pub fn looks_stationary(det: &Detection, timeline: &Timeline) -> bool {
        let end: BevBox = det.bbox.translated(det.velocity * timeline.horizon_seconds());
        bev_iou(&det.bbox, &end) > 0.0
    }

    pub fn apply(&self, dets: &[Detection], timeline: &Timeline) -> Vec<Detection> {
        dets.iter()
            .filter_map(|d| {
                let stationary = Self::looks_stationary(d, timeline);
                if !stationary && self.drop_moving {
                    return None;
                }
                let score = if stationary {
                    0.5 + 0.5 * d.score
                } else {
                    self.moving_scale.clamp(0.0, 1.0) * 0.5 * d.score
                };
                Some(Detection { score, ..d.clone() })
            })
            .collect()
    }
}

/// Constant-position forecasts over stationarity-reranked detections.
pub fn constant_position_reranked(
    dets: &[Detection],
    timeline: &Timeline,
    rerank: &StationarityRerank,
) -> Vec<ForecastSet> {
    constant_position(&rerank.apply(dets, timeline), timeline)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn det(x: f64, y: f64, vx: f64, vy: f64, score: f64) -> Detection {
        Detection {
            bbox: BevBox::new(Vec2::new(x, y), 4.0, 2.0, 0.0).unwrap(),
            score,
            velocity: Vec2::new(vx, vy),
        }
    }

    #[test]
    fn constant_position_examples() {
        let tl = Timeline::default();
        let out = constant_position(&[det(3.0, 3.0, 1.0, 0.0, 0.7)], &tl);
        assert_eq!(out[0].candidates[0].waypoints, vec![Vec2::new(3.0, 3.0); 6]);
        assert_eq!(out[0].candidates[0].forecast_score, 0.7);
        assert!(constant_position(&[], &tl).is_empty());
        let two = constant_position(&[det(0.0, 0.0, 0.0, 0.0, 0.5), det(5.0, 0.0, 0.0, 0.0, 0.4)], &tl);
        assert_eq!(two.len(), 2);
        assert!(two.iter().all(|f| f.candidates.len() == 1));
    }

    #[test]
    fn constant_velocity_examples() {
        let tl = Timeline::default();
        let out = constant_velocity(&[det(0.0, 0.0, 2.0, 0.0, 0.5)], &tl);
        assert_eq!(out[0].candidates[0].final_waypoint(), Vec2::new(6.0, 0.0));
        let d = det(0.0, 0.0, 1.0, 1.0, 0.5);
        assert_eq!(
            constant_velocity(&[d], &tl)[0].candidates[0].waypoints[2],
            Vec2::new(1.5, 1.5)
        );
        let still = det(1.0, 2.0, 0.0, 0.0, 0.5);
        assert_eq!(
            constant_velocity(std::slice::from_ref(&still), &tl),
            constant_position(&[still], &tl)
        );
    }

    #[test]
    fn forward_integration_examples() {
        let tl = Timeline::new(0, 2, 0.5).unwrap();
        let d = det(0.0, 0.0, 0.0, 0.0, 0.5);
        let out = forward_integrate(
            std::slice::from_ref(&d),
            &[vec![Vec2::new(2.0, 0.0), Vec2::new(0.0, 2.0)]],
            &tl,
        )
        .unwrap();
        assert_eq!(
            out[0].candidates[0].waypoints,
            vec![Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0)]
        );

        let tl = Timeline::default();
        let zero = forward_integrate(std::slice::from_ref(&d), &[vec![Vec2::ZERO; 6]], &tl).unwrap();
        assert_eq!(zero, constant_position(std::slice::from_ref(&d), &tl));

        let moving = det(1.0, -1.0, 2.0, 0.5, 0.5);
        let fw = forward_integrate(std::slice::from_ref(&moving), &[vec![moving.velocity; 6]], &tl).unwrap();
        let cv = constant_velocity(&[moving], &tl);
        for (a, b) in fw[0].candidates[0].waypoints.iter().zip(&cv[0].candidates[0].waypoints) {
            assert!(a.distance(*b) < 1e-12);
        }

        assert_eq!(
            forward_integrate(&[d], &[vec![Vec2::ZERO; 5]], &tl),
            Err(BaselineError::VelocityCount {
                index: 0,
                expected: 6,
                got: 5
            })
        );
    }

    fn uniform_future(end: Vec2, step: Vec2, score: f64) -> FutureDetection {
        FutureDetection {
            position: end,
            score,
            back_offsets: vec![-step; 6],
        }
    }

    #[test]
    fn backcast_single_chain() {
        let tl = Timeline::default();
        let out = backcast_assemble(
            &[det(0.0, 0.0, 0.0, 0.0, 0.9)],
            &[uniform_future(Vec2::new(6.0, 0.0), Vec2::new(1.0, 0.0), 0.8)],
            &tl,
            f64::INFINITY,
        );
        assert_eq!(out.discarded, 0);
        assert_eq!(out.forecasts.len(), 1);
        let c = &out.forecasts[0].candidates[0];
        assert_eq!(c.final_waypoint(), Vec2::new(6.0, 0.0));
        assert_eq!(c.waypoints[0], Vec2::new(1.0, 0.0));
    }

    #[test]
    fn backcast_many_to_one_sorted_by_score() {
        let tl = Timeline::default();
        let out = backcast_assemble(
            &[det(0.0, 0.0, 0.0, 0.0, 0.9)],
            &[
                uniform_future(Vec2::new(6.0, 0.0), Vec2::new(1.0, 0.0), 0.3),
                uniform_future(Vec2::new(0.0, 6.0), Vec2::new(0.0, 1.0), 0.6),
            ],
            &tl,
            f64::INFINITY,
        );
        assert_eq!(out.forecasts.len(), 1);
        let scores: Vec<f64> = out.forecasts[0].candidates.iter().map(|c| c.forecast_score).collect();
        assert_eq!(scores, vec![0.6, 0.3]);
    }

    #[test]
    fn backcast_picks_nearest_anchor() {
        let tl = Timeline::default();
        // Chain origin at (9.4, 0).
        let fd = uniform_future(Vec2::new(15.4, 0.0), Vec2::new(1.0, 0.0), 0.5);
        assert_eq!(fd.backcast_chain()[0], Vec2::new(9.4, 0.0));
        let out = backcast_assemble(
            &[det(0.0, 0.0, 0.0, 0.0, 0.9), det(10.0, 0.0, 0.0, 0.0, 0.8)],
            &[fd],
            &tl,
            f64::INFINITY,
        );
        assert_eq!(out.forecasts.len(), 1);
        assert_eq!(out.forecasts[0].anchor.center(), Vec2::new(10.0, 0.0));
    }

    #[test]
    fn backcast_without_anchors_discards() {
        let tl = Timeline::default();
        let fds = vec![uniform_future(Vec2::ZERO, Vec2::ZERO, 0.5); 3];
        let out = backcast_assemble(&[], &fds, &tl, f64::INFINITY);
        assert!(out.forecasts.is_empty());
        assert_eq!(out.discarded, 3);
        let gated = backcast_assemble(&[det(100.0, 0.0, 0.0, 0.0, 0.5)], &fds, &tl, 10.0);
        assert_eq!(gated.discarded, 3);
    }

    #[test]
    fn rerank_puts_stationary_first() {
        let tl = Timeline::default();
        let dets = [det(0.0, 0.0, 5.0, 0.0, 0.99), det(20.0, 0.0, 0.1, 0.0, 0.1)];
        let r = StationarityRerank::default().apply(&dets, &tl);
        assert!(r[1].score > r[0].score);
        assert!(r.iter().all(|d| (0.0..=1.0).contains(&d.score)));
        let dropped = StationarityRerank {
            drop_moving: true,
            ..Default::default()
        }
        .apply(&dets, &tl);
        assert_eq!(dropped.len(), 1);
    }
}
