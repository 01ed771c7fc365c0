//! Domain types shared by every other module: boxes, timelines, ground-truth
//! trajectories, forecast sets and the evaluation configuration.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::subclass::{self, MotionSubclass};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("box extent must be positive and finite (length {length}, width {width})")]
    BadExtent { length: f64, width: f64 },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("timeline needs horizon_steps >= 1 and dt > 0 (got {steps}, {dt})")]
    BadTimeline { steps: usize, dt: f64 },
    #[error("trajectory {id}: {reason}")]
    BadTrajectory { id: String, reason: String },
    #[error("score {0} outside [0, 1]")]
    ScoreOutOfRange(f64),
    #[error("forecast set has no candidates")]
    NoCandidates,
    #[error("candidate {index} has {got} waypoints, horizon is {expected}")]
    WaypointCount { index: usize, got: usize, expected: usize },
}

/// A point or displacement in the bird's-eye-view plane, in meters (or m/s
/// when used as a velocity).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn distance(self, other: Vec2) -> f64 {
        (self - other).norm()
    }

    pub fn rotate(self, angle: f64) -> Vec2 {
        let (s, c) = angle.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Vec2 { x, y }
    }
}

impl From<Vec2> for [f64; 2] {
    fn from(v: Vec2) -> Self {
        [v.x, v.y]
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, rhs: Vec2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Wraps an angle into `(-π, π]`.
pub fn normalize_yaw(yaw: f64) -> f64 {
    let mut a = yaw.rem_euclid(2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    }
    a
}

/// Oriented bird's-eye-view box. `length` runs along the heading, `width`
/// across it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBox", into = "RawBox")]
pub struct BevBox {
    center: Vec2,
    length: f64,
    width: f64,
    yaw: f64,
}

#[derive(Serialize, Deserialize)]
struct RawBox {
    cx: f64,
    cy: f64,
    length: f64,
    width: f64,
    yaw: f64,
}

impl TryFrom<RawBox> for BevBox {
    type Error = ModelError;
    fn try_from(r: RawBox) -> Result<Self, Self::Error> {
        BevBox::new(Vec2::new(r.cx, r.cy), r.length, r.width, r.yaw)
    }
}

impl From<BevBox> for RawBox {
    fn from(b: BevBox) -> Self {
        RawBox {
            cx: b.center.x,
            cy: b.center.y,
            length: b.length,
            width: b.width,
            yaw: b.yaw,
        }
    }
}

impl BevBox {
    pub fn new(center: Vec2, length: f64, width: f64, yaw: f64) -> Result<Self, ModelError> {
        if !center.is_finite() {
            return Err(ModelError::NonFinite("box center"));
        }
        if !yaw.is_finite() {
            return Err(ModelError::NonFinite("box yaw"));
        }
        if !(length.is_finite() && width.is_finite() && length > 0.0 && width > 0.0) {
            return Err(ModelError::BadExtent { length, width });
        }
        Ok(Self {
            center,
            length,
            width,
            yaw: normalize_yaw(yaw),
        })
    }

    pub fn center(&self) -> Vec2 {
        self.center
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn yaw(&self) -> f64 {
        self.yaw
    }

    pub fn area(&self) -> f64 {
        self.length * self.width
    }

    /// Same footprint and heading, new center.
    pub fn with_center(&self, center: Vec2) -> BevBox {
        BevBox { center, ..*self }
    }

    pub fn translated(&self, delta: Vec2) -> BevBox {
        self.with_center(self.center + delta)
    }

    /// Corners in counter-clockwise order.
    pub fn corners(&self) -> [Vec2; 4] {
        let hl = self.length / 2.0;
        let hw = self.width / 2.0;
        [
            Vec2::new(hl, -hw),
            Vec2::new(hl, hw),
            Vec2::new(-hl, hw),
            Vec2::new(-hl, -hw),
        ]
        .map(|c| self.center + c.rotate(self.yaw))
    }
}

/// Current frame index, horizon length in steps, and step duration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTimeline", into = "RawTimeline")]
pub struct Timeline {
    t_obs_index: i64,
    horizon_steps: usize,
    dt: f64,
}

#[derive(Serialize, Deserialize)]
struct RawTimeline {
    #[serde(default)]
    t_obs: i64,
    horizon_steps: usize,
    dt: f64,
}

impl TryFrom<RawTimeline> for Timeline {
    type Error = ModelError;
    fn try_from(r: RawTimeline) -> Result<Self, Self::Error> {
        Timeline::new(r.t_obs, r.horizon_steps, r.dt)
    }
}

impl From<Timeline> for RawTimeline {
    fn from(t: Timeline) -> Self {
        RawTimeline {
            t_obs: t.t_obs_index,
            horizon_steps: t.horizon_steps,
            dt: t.dt,
        }
    }
}

impl Default for Timeline {
    /// Six 0.5 s steps: a 3 s horizon at 2 Hz.
    fn default() -> Self {
        Timeline {
            t_obs_index: 0,
            horizon_steps: 6,
            dt: 0.5,
        }
    }
}

impl Timeline {
    pub fn new(t_obs_index: i64, horizon_steps: usize, dt: f64) -> Result<Self, ModelError> {
        if horizon_steps < 1 || !(dt.is_finite() && dt > 0.0) {
            return Err(ModelError::BadTimeline {
                steps: horizon_steps,
                dt,
            });
        }
        Ok(Self {
            t_obs_index,
            horizon_steps,
            dt,
        })
    }

    pub fn t_obs_index(&self) -> i64 {
        self.t_obs_index
    }

    pub fn horizon_steps(&self) -> usize {
        self.horizon_steps
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn horizon_seconds(&self) -> f64 {
        self.horizon_steps as f64 * self.dt
    }

    /// Seconds elapsed at `offset` steps past the current frame.
    pub fn seconds_at(&self, offset: usize) -> f64 {
        offset as f64 * self.dt
    }
}

/// A ground-truth instance from the current frame to the end of the horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct GtTrajectory {
    instance_id: String,
    boxes: Vec<(usize, BevBox)>,
    velocity0: Option<Vec2>,
    subclass: MotionSubclass,
    complete: bool,
}

impl GtTrajectory {
    /// Validates offsets and derives the motion subclass and completeness.
    pub fn new(
        instance_id: impl Into<String>,
        boxes: Vec<(usize, BevBox)>,
        velocity0: Option<Vec2>,
        timeline: &Timeline,
    ) -> Result<Self, ModelError> {
        let instance_id = instance_id.into();
        let bad = |reason: String| ModelError::BadTrajectory {
            id: instance_id.clone(),
            reason,
        };
        match boxes.first() {
            Some((0, _)) => {}
            _ => return Err(bad("no box at offset 0".into())),
        }
        for pair in boxes.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(bad(format!(
                    "offsets not strictly increasing ({} then {})",
                    pair[0].0, pair[1].0
                )));
            }
        }
        let last_offset = boxes[boxes.len() - 1].0;
        if last_offset > timeline.horizon_steps() {
            return Err(bad(format!(
                "offset {last_offset} beyond horizon {}",
                timeline.horizon_steps()
            )));
        }
        if let Some(v) = velocity0 {
            if !v.is_finite() {
                return Err(bad("non-finite velocity".into()));
            }
        }
        let complete = boxes.len() == timeline.horizon_steps() + 1;
        let subclass = subclass::gt_subclass(&boxes, velocity0, timeline);
        Ok(Self {
            instance_id,
            boxes,
            velocity0,
            subclass,
            complete,
        })
    }

    pub fn instance_id(&self) -> &str {
        &self.instance_id
    }

    pub fn boxes(&self) -> &[(usize, BevBox)] {
        &self.boxes
    }

    pub fn velocity0(&self) -> Option<Vec2> {
        self.velocity0
    }

    pub fn subclass(&self) -> MotionSubclass {
        self.subclass
    }

    /// True iff there is an annotation at every offset `0..=T`.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn current(&self) -> &BevBox {
        &self.boxes[0].1
    }

    pub fn box_at(&self, offset: usize) -> Option<&BevBox> {
        self.boxes
            .binary_search_by_key(&offset, |(o, _)| *o)
            .ok()
            .map(|i| &self.boxes[i].1)
    }

    pub fn center_at(&self, offset: usize) -> Option<Vec2> {
        self.box_at(offset).map(BevBox::center)
    }
}

/// One hypothesised future path: centers at offsets `1..=T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastCandidate {
    pub waypoints: Vec<Vec2>,
    pub forecast_score: f64,
}

impl ForecastCandidate {
    pub fn final_waypoint(&self) -> Vec2 {
        *self.waypoints.last().expect("candidate has waypoints")
    }
}

/// A current-frame detection with one or more future candidates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastSet {
    pub anchor: BevBox,
    pub det_score: f64,
    pub candidates: Vec<ForecastCandidate>,
}

pub(crate) fn check_score(score: f64) -> Result<(), ModelError> {
    if (0.0..=1.0).contains(&score) {
        Ok(())
    } else {
        Err(ModelError::ScoreOutOfRange(score))
    }
}

impl ForecastSet {
    pub fn new(
        anchor: BevBox,
        det_score: f64,
        candidates: Vec<ForecastCandidate>,
        timeline: &Timeline,
    ) -> Result<Self, ModelError> {
        let set = ForecastSet {
            anchor,
            det_score,
            candidates,
        };
        set.validate(timeline)?;
        Ok(set)
    }

    pub fn validate(&self, timeline: &Timeline) -> Result<(), ModelError> {
        check_score(self.det_score)?;
        if self.candidates.is_empty() {
            return Err(ModelError::NoCandidates);
        }
        for (index, c) in self.candidates.iter().enumerate() {
            check_score(c.forecast_score)?;
            if c.waypoints.len() != timeline.horizon_steps() {
                return Err(ModelError::WaypointCount {
                    index,
                    got: c.waypoints.len(),
                    expected: timeline.horizon_steps(),
                });
            }
            if c.waypoints.iter().any(|w| !w.is_finite()) {
                return Err(ModelError::NonFinite("waypoint"));
            }
        }
        Ok(())
    }

    /// Candidate indices by descending forecast score; ties keep input order.
    pub fn ranked_candidates(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.candidates.len()).collect();
        order.sort_by(|&a, &b| {
            self.candidates[b]
                .forecast_score
                .total_cmp(&self.candidates[a].forecast_score)
                .then(a.cmp(&b))
        });
        order
    }

    pub fn top_candidate(&self) -> usize {
        self.ranked_candidates()[0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassProfile {
    Car,
    Pedestrian,
}

impl ClassProfile {
    /// Paired (current, final) center-distance thresholds in meters.
    pub fn default_thresholds(self) -> (Vec<f64>, Vec<f64>) {
        match self {
            ClassProfile::Car => (vec![0.5, 1.0, 2.0, 4.0], vec![1.0, 2.0, 4.0, 8.0]),
            ClassProfile::Pedestrian => (vec![0.125, 0.25, 0.5, 1.0], vec![0.25, 0.5, 1.0, 2.0]),
        }
    }
}

impl fmt::Display for ClassProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassProfile::Car => "car",
            ClassProfile::Pedestrian => "pedestrian",
        })
    }
}

/// Score used to order records when accumulating the forecasting PR curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankBy {
    /// Anchor detection score (shared with detection AP).
    #[default]
    DetScore,
    /// Forecast score of the selected candidate.
    ForecastScore,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("{current} current thresholds but {final_} final thresholds")]
    ThresholdLengthMismatch { current: usize, final_: usize },
    #[error("at least one threshold pair is required")]
    NoThresholds,
    #[error("threshold {0} must be positive and finite")]
    NonPositiveThreshold(f64),
    #[error("k must be at least 1")]
    ZeroK,
    #[error("recall level {0} outside (0, 1]")]
    BadRecallLevel(f64),
    #[error("recall_levels must not be empty")]
    NoRecallLevels,
    #[error("pr_points must be at least 2 (got {0})")]
    TooFewPrPoints(usize),
    #[error(transparent)]
    Timeline(#[from] ModelError),
}

fn default_pr_points() -> usize {
    101
}

fn default_two_meters() -> f64 {
    2.0
}

fn default_recall_levels() -> Vec<f64> {
    vec![0.6, 0.9]
}

/// Everything an evaluation run needs besides the data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub timeline: Timeline,
    pub current_thresholds: Vec<f64>,
    pub final_thresholds: Vec<f64>,
    pub k: usize,
    pub class_profile: ClassProfile,
    /// Recall levels at which legacy ADE/FDE are reported.
    #[serde(default = "default_recall_levels")]
    pub recall_levels: Vec<f64>,
    #[serde(default = "default_two_meters")]
    pub miss_fde_threshold: f64,
    /// Current-frame threshold deciding true positives for legacy metrics.
    #[serde(default = "default_two_meters")]
    pub legacy_match_threshold: f64,
    #[serde(default = "default_pr_points")]
    pub pr_points: usize,
    #[serde(default)]
    pub nuscenes_clip: bool,
    #[serde(default)]
    pub rank_by: RankBy,
}

impl EvalConfig {
    pub fn for_profile(profile: ClassProfile) -> Self {
        let (current_thresholds, final_thresholds) = profile.default_thresholds();
        EvalConfig {
            timeline: Timeline::default(),
            current_thresholds,
            final_thresholds,
            k: 1,
            class_profile: profile,
            recall_levels: default_recall_levels(),
            miss_fde_threshold: 2.0,
            legacy_match_threshold: 2.0,
            pr_points: 101,
            nuscenes_clip: false,
            rank_by: RankBy::DetScore,
        }
    }

    pub fn car() -> Self {
        Self::for_profile(ClassProfile::Car)
    }

    pub fn pedestrian() -> Self {
        Self::for_profile(ClassProfile::Pedestrian)
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k;
        self
    }

    pub fn with_timeline(mut self, timeline: Timeline) -> Self {
        self.timeline = timeline;
        self
    }

    /// Ordered (current, final) threshold pairs.
    pub fn threshold_pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.current_thresholds
            .iter()
            .copied()
            .zip(self.final_thresholds.iter().copied())
    }
}

pub fn validate_config(cfg: EvalConfig) -> Result<EvalConfig, ConfigError> {
    if cfg.current_thresholds.len() != cfg.final_thresholds.len() {
        return Err(ConfigError::ThresholdLengthMismatch {
            current: cfg.current_thresholds.len(),
            final_: cfg.final_thresholds.len(),
        });
    }
    if cfg.current_thresholds.is_empty() {
        return Err(ConfigError::NoThresholds);
    }
    let positive = |t: f64| t.is_finite() && t > 0.0;
    for &t in cfg
        .current_thresholds
        .iter()
        .chain(&cfg.final_thresholds)
        .chain([&cfg.miss_fde_threshold, &cfg.legacy_match_threshold])
    {
        if !positive(t) {
            return Err(ConfigError::NonPositiveThreshold(t));
        }
    }
    if cfg.k < 1 {
        return Err(ConfigError::ZeroK);
    }
    if cfg.recall_levels.is_empty() {
        return Err(ConfigError::NoRecallLevels);
    }
    if let Some(&r) = cfg.recall_levels.iter().find(|&&r| !(r > 0.0 && r <= 1.0)) {
        return Err(ConfigError::BadRecallLevel(r));
    }
    if cfg.pr_points < 2 {
        return Err(ConfigError::TooFewPrPoints(cfg.pr_points));
    }
    Timeline::new(
        cfg.timeline.t_obs_index(),
        cfg.timeline.horizon_steps(),
        cfg.timeline.dt(),
    )?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_box(x: f64, y: f64) -> BevBox {
        BevBox::new(Vec2::new(x, y), 4.0, 2.0, 0.0).unwrap()
    }

    #[test]
    fn car_defaults_validate() {
        let cfg = validate_config(EvalConfig::car()).unwrap();
        assert_eq!(cfg.current_thresholds, vec![0.5, 1.0, 2.0, 4.0]);
        assert_eq!(cfg.final_thresholds, vec![1.0, 2.0, 4.0, 8.0]);
    }

    #[test]
    fn pedestrian_defaults_validate() {
        let cfg = validate_config(EvalConfig::pedestrian()).unwrap();
        assert_eq!(cfg.current_thresholds, vec![0.125, 0.25, 0.5, 1.0]);
        assert_eq!(cfg.final_thresholds, vec![0.25, 0.5, 1.0, 2.0]);
    }

    #[test]
    fn threshold_length_mismatch_rejected() {
        let mut cfg = EvalConfig::car();
        cfg.current_thresholds = vec![1.0];
        cfg.final_thresholds = vec![2.0, 4.0];
        assert_eq!(
            validate_config(cfg),
            Err(ConfigError::ThresholdLengthMismatch { current: 1, final_: 2 })
        );
    }

    #[test]
    fn zero_k_rejected() {
        assert_eq!(validate_config(EvalConfig::car().with_k(0)), Err(ConfigError::ZeroK));
    }

    #[test]
    fn non_positive_threshold_rejected() {
        let mut cfg = EvalConfig::car();
        cfg.final_thresholds[2] = 0.0;
        assert_eq!(validate_config(cfg), Err(ConfigError::NonPositiveThreshold(0.0)));
    }

    #[test]
    fn yaw_is_wrapped() {
        let b = BevBox::new(Vec2::ZERO, 1.0, 1.0, 3.0 * PI).unwrap();
        assert!((b.yaw() - PI).abs() < 1e-12);
        let b = BevBox::new(Vec2::ZERO, 1.0, 1.0, -PI).unwrap();
        assert!((b.yaw() - PI).abs() < 1e-12);
        let b = BevBox::new(Vec2::ZERO, 1.0, 1.0, -0.5).unwrap();
        assert_eq!(b.yaw(), -0.5);
    }

    #[test]
    fn degenerate_box_rejected() {
        assert!(BevBox::new(Vec2::ZERO, 0.0, 1.0, 0.0).is_err());
        assert!(BevBox::new(Vec2::ZERO, 1.0, -1.0, 0.0).is_err());
        assert!(BevBox::new(Vec2::new(f64::NAN, 0.0), 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn trajectory_requires_offset_zero_and_increasing() {
        let tl = Timeline::default();
        assert!(GtTrajectory::new("a", vec![(1, unit_box(0.0, 0.0))], None, &tl).is_err());
        assert!(GtTrajectory::new(
            "a",
            vec![
                (0, unit_box(0.0, 0.0)),
                (2, unit_box(1.0, 0.0)),
                (2, unit_box(2.0, 0.0))
            ],
            None,
            &tl
        )
        .is_err());
        assert!(GtTrajectory::new("a", vec![(0, unit_box(0.0, 0.0)), (7, unit_box(1.0, 0.0))], None, &tl).is_err());
    }

    #[test]
    fn completeness_tracks_every_offset() {
        let tl = Timeline::default();
        let full: Vec<_> = (0..=6).map(|o| (o, unit_box(o as f64, 0.0))).collect();
        assert!(GtTrajectory::new("a", full, None, &tl).unwrap().is_complete());
        let partial: Vec<_> = (0..=3).map(|o| (o, unit_box(o as f64, 0.0))).collect();
        assert!(!GtTrajectory::new("b", partial, None, &tl).unwrap().is_complete());
    }

    #[test]
    fn forecast_set_checks() {
        let tl = Timeline::default();
        let cand = |n: usize, s: f64| ForecastCandidate {
            waypoints: vec![Vec2::ZERO; n],
            forecast_score: s,
        };
        assert!(ForecastSet::new(unit_box(0.0, 0.0), 0.5, vec![cand(6, 0.5)], &tl).is_ok());
        assert_eq!(
            ForecastSet::new(unit_box(0.0, 0.0), 1.2, vec![cand(6, 0.5)], &tl),
            Err(ModelError::ScoreOutOfRange(1.2))
        );
        assert_eq!(
            ForecastSet::new(unit_box(0.0, 0.0), 0.5, vec![], &tl),
            Err(ModelError::NoCandidates)
        );
        assert!(matches!(
            ForecastSet::new(unit_box(0.0, 0.0), 0.5, vec![cand(6, 0.5), cand(5, 0.1)], &tl),
            Err(ModelError::WaypointCount { index: 1, got: 5, .. })
        ));
    }

    #[test]
    fn candidates_rank_by_score_then_index() {
        let tl = Timeline::new(0, 1, 1.0).unwrap();
        let cand = |s: f64| ForecastCandidate {
            waypoints: vec![Vec2::ZERO],
            forecast_score: s,
        };
        let fs = ForecastSet::new(
            unit_box(0.0, 0.0),
            0.5,
            vec![cand(0.2), cand(0.9), cand(0.2), cand(0.5)],
            &tl,
        )
        .unwrap();
        assert_eq!(fs.ranked_candidates(), vec![1, 3, 0, 2]);
    }
}
