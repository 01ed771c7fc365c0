//! Deterministic synthetic world: closed-form agent trajectories, a noisy
//! detector, and the constant-position vs constant-velocity breakdown run.
//!
//! Every scene draws from its own ChaCha stream keyed by `(seed, scene
//! index)`, so results do not depend on how scenes are spread over threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::baselines::{constant_position_reranked, constant_velocity, Detection, FutureDetection, StationarityRerank};
use crate::metrics::{evaluate, EvalError, EvalScene};
use crate::model::{BevBox, EvalConfig, ForecastCandidate, ForecastSet, GtTrajectory, ModelError, Timeline, Vec2};
use crate::report::EvalReport;
use crate::subclass::MotionSubclass;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("agent {index}: {reason}")]
    BadSpec { index: usize, reason: String },
    #[error("agent {index}: intended {intended} but trajectory classifies as {derived}")]
    SubclassDisagreement {
        index: usize,
        intended: MotionSubclass,
        derived: MotionSubclass,
    },
    #[error("could not draw a {0} agent that classifies as intended")]
    RejectionExhausted(MotionSubclass),
    #[error("mixture proportions must be non-negative and sum to 1 (got {0:?})")]
    BadMixture([f64; 3]),
    #[error("bad noise model: {0}")]
    BadNoise(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Motion {
    Static,
    Linear {
        speed: f64,
    },
    /// Constant speed and turn rate; yaw follows the heading.
    Arc {
        speed: f64,
        turn_rate: f64,
    },
}

impl Motion {
    pub fn intended_subclass(&self) -> MotionSubclass {
        match self {
            Motion::Static => MotionSubclass::Static,
            Motion::Linear { .. } => MotionSubclass::Linear,
            Motion::Arc { .. } => MotionSubclass::NonLinear,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentSpec {
    pub motion: Motion,
    pub spawn: Vec2,
    /// Initial heading (and yaw), radians.
    pub heading: f64,
    /// `(length, width)` in meters.
    pub box_size: (f64, f64),
}

impl AgentSpec {
    fn check(&self, index: usize) -> Result<(), SynthError> {
        let bad = |reason: &str| SynthError::BadSpec {
            index,
            reason: reason.to_string(),
        };
        match self.motion {
            Motion::Static => {}
            Motion::Linear { speed } | Motion::Arc { speed, .. } if !(speed.is_finite() && speed > 0.0) => {
                return Err(bad("moving agent needs a positive speed"))
            }
            Motion::Arc { turn_rate, .. } if turn_rate == 0.0 || !turn_rate.is_finite() => {
                return Err(bad("arc needs a non-zero turn rate"))
            }
            _ => {}
        }
        if !(self.box_size.0 > 0.0 && self.box_size.1 > 0.0) {
            return Err(bad("box size must be positive"));
        }
        Ok(())
    }

    /// Pose `(center, yaw)` after `t` seconds.
    pub fn pose_at(&self, t: f64) -> (Vec2, f64) {
        let dir = |h: f64| Vec2::new(h.cos(), h.sin());
        match self.motion {
            Motion::Static => (self.spawn, self.heading),
            Motion::Linear { speed } => (self.spawn + dir(self.heading) * (speed * t), self.heading),
            Motion::Arc { speed, turn_rate } => {
                let h = self.heading + turn_rate * t;
                let r = speed / turn_rate;
                let offset = Vec2::new(h.sin() - self.heading.sin(), self.heading.cos() - h.cos()) * r;
                (self.spawn + offset, h)
            }
        }
    }

    pub fn initial_velocity(&self) -> Vec2 {
        match self.motion {
            Motion::Static => Vec2::ZERO,
            Motion::Linear { speed } | Motion::Arc { speed, .. } => {
                Vec2::new(self.heading.cos(), self.heading.sin()) * speed
            }
        }
    }

    pub fn trajectory(&self, id: String, timeline: &Timeline) -> Result<GtTrajectory, ModelError> {
        let boxes = (0..=timeline.horizon_steps())
            .map(|o| {
                let (c, yaw) = self.pose_at(timeline.seconds_at(o));
                BevBox::new(c, self.box_size.0, self.box_size.1, yaw).map(|b| (o, b))
            })
            .collect::<Result<Vec<_>, _>>()?;
        GtTrajectory::new(id, boxes, Some(self.initial_velocity()), timeline)
    }
}

/// Builds ground truth for explicit agent specs. Specs whose trajectory
/// does not classify as their intended subclass are rejected.
pub fn generate_scene(
    specs: &[AgentSpec],
    timeline: &Timeline,
    scene_id: &str,
) -> Result<Vec<GtTrajectory>, SynthError> {
    specs
        .iter()
        .enumerate()
        .map(|(index, spec)| {
            spec.check(index)?;
            let gt = spec.trajectory(format!("{scene_id}_a{index}"), timeline)?;
            let intended = spec.motion.intended_subclass();
            if gt.subclass() != intended {
                return Err(SynthError::SubclassDisagreement {
                    index,
                    intended,
                    derived: gt.subclass(),
                });
            }
            Ok(gt)
        })
        .collect()
}

fn default_mixture() -> [f64; 3] {
    [0.6, 0.25, 0.15]
}

/// Distribution the scene sampler draws agents from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Population {
    /// Static / linear / non-linear proportions.
    pub mixture: [f64; 3],
    pub min_agents: usize,
    pub max_agents: usize,
    /// Side of the square scene, meters, centered on the origin.
    pub extent: f64,
    pub linear_speed: (f64, f64),
    pub arc_speed: (f64, f64),
    /// Turn-rate magnitude range, rad/s; the sign is drawn uniformly.
    pub turn_rate: (f64, f64),
    pub box_size: (f64, f64),
}

impl Default for Population {
    fn default() -> Self {
        Population {
            mixture: default_mixture(),
            min_agents: 20,
            max_agents: 40,
            extent: 100.0,
            linear_speed: (4.5, 10.0),
            arc_speed: (5.5, 10.0),
            turn_rate: (0.3, 0.8),
            box_size: (4.5, 1.9),
        }
    }
}

const MAX_REJECTIONS: usize = 1000;

impl Population {
    fn check(&self) -> Result<(), SynthError> {
        let m = self.mixture;
        if m.iter().any(|p| p.is_nan() || *p < 0.0) || (m.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(SynthError::BadMixture(m));
        }
        Ok(())
    }

    fn uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
        if hi > lo {
            rng.random_range(lo..hi)
        } else {
            lo
        }
    }

    pub fn draw_subclass(&self, rng: &mut ChaCha8Rng) -> MotionSubclass {
        let u: f64 = rng.random();
        if u < self.mixture[0] {
            MotionSubclass::Static
        } else if u < self.mixture[0] + self.mixture[1] {
            MotionSubclass::Linear
        } else {
            MotionSubclass::NonLinear
        }
    }

    /// One draw of an agent meant to be `subclass`, without checking what
    /// the classifier makes of it.
    pub fn propose_agent(&self, rng: &mut ChaCha8Rng, subclass: MotionSubclass) -> AgentSpec {
        let half = self.extent / 2.0;
        let spawn = Vec2::new(rng.random_range(-half..half), rng.random_range(-half..half));
        let heading = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let motion = match subclass {
            MotionSubclass::Static => Motion::Static,
            MotionSubclass::Linear => Motion::Linear {
                speed: Self::uniform(rng, self.linear_speed),
            },
            MotionSubclass::NonLinear => {
                let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                Motion::Arc {
                    speed: Self::uniform(rng, self.arc_speed),
                    turn_rate: sign * Self::uniform(rng, self.turn_rate),
                }
            }
        };
        AgentSpec {
            motion,
            spawn,
            heading,
            box_size: self.box_size,
        }
    }

    /// Draws an agent of the given subclass, redrawing until the trajectory
    /// classifies as intended.
    pub fn sample_agent(
        &self,
        rng: &mut ChaCha8Rng,
        subclass: MotionSubclass,
        timeline: &Timeline,
    ) -> Result<AgentSpec, SynthError> {
        for _ in 0..MAX_REJECTIONS {
            let spec = self.propose_agent(rng, subclass);
            if spec.check(0).is_err() {
                continue;
            }
            if spec.trajectory(String::new(), timeline)?.subclass() == subclass {
                return Ok(spec);
            }
        }
        Err(SynthError::RejectionExhausted(subclass))
    }

    pub fn sample_scene(&self, rng: &mut ChaCha8Rng, timeline: &Timeline) -> Result<Vec<AgentSpec>, SynthError> {
        self.check()?;
        let n = if self.max_agents > self.min_agents {
            rng.random_range(self.min_agents..=self.max_agents)
        } else {
            self.min_agents
        };
        (0..n)
            .map(|_| {
                let s = self.draw_subclass(rng);
                self.sample_agent(rng, s, timeline)
            })
            .collect()
    }
}

/// Maps positional error to a detection score.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScoreModel {
    /// Uniform jitter half-width added before clamping.
    pub jitter: f64,
    pub floor: f64,
    /// Clutter scores are uniform in `[floor, clutter_max]`.
    pub clutter_max: f64,
}

impl Default for ScoreModel {
    fn default() -> Self {
        ScoreModel {
            jitter: 0.05,
            floor: 0.05,
            clutter_max: 0.3,
        }
    }
}

impl ScoreModel {
    /// `clamp(1 − error/(3σ) + jitter, floor, 1)`; with `σ = 0` the error
    /// term vanishes.
    pub fn score(&self, rng: &mut ChaCha8Rng, error: f64, pos_sigma: f64) -> f64 {
        let base = if pos_sigma > 0.0 {
            1.0 - error / (3.0 * pos_sigma)
        } else {
            1.0
        };
        let jitter = if self.jitter > 0.0 {
            rng.random_range(-self.jitter..self.jitter)
        } else {
            0.0
        };
        (base + jitter).clamp(self.floor.min(1.0), 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NoiseModel {
    /// Isotropic per-axis position noise, meters.
    pub pos_sigma: f64,
    /// Per-axis velocity noise, m/s.
    pub vel_sigma: f64,
    pub drop_prob: f64,
    /// Expected clutter detections per scene (current and future each).
    pub clutter_rate: f64,
    /// Per-axis velocity spread of clutter, m/s.
    pub clutter_speed_sigma: f64,
    pub score_model: ScoreModel,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel {
            pos_sigma: 0.1,
            vel_sigma: 0.5,
            drop_prob: 0.02,
            clutter_rate: 2.0,
            clutter_speed_sigma: 2.0,
            score_model: ScoreModel::default(),
        }
    }
}

impl NoiseModel {
    /// Perfect detector: no noise, drops, clutter or score jitter.
    pub fn zero() -> Self {
        NoiseModel {
            pos_sigma: 0.0,
            vel_sigma: 0.0,
            drop_prob: 0.0,
            clutter_rate: 0.0,
            clutter_speed_sigma: 0.0,
            score_model: ScoreModel {
                jitter: 0.0,
                ..ScoreModel::default()
            },
        }
    }

    fn check(&self) -> Result<(), SynthError> {
        let ok = self.pos_sigma >= 0.0
            && self.vel_sigma >= 0.0
            && self.clutter_rate >= 0.0
            && self.clutter_speed_sigma >= 0.0
            && (0.0..=1.0).contains(&self.drop_prob)
            && self.score_model.jitter >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(SynthError::BadNoise(format!("{self:?}")))
        }
    }
}

/// Detector output for one scene.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DetectorOutput {
    pub detections: Vec<Detection>,
    /// Per-step velocity estimates, parallel to `detections`.
    pub step_velocities: Vec<Vec<Vec2>>,
    pub future_detections: Vec<FutureDetection>,
}

fn gauss2(rng: &mut ChaCha8Rng, sigma: f64) -> Vec2 {
    let x: f64 = rng.sample(StandardNormal);
    let y: f64 = rng.sample(StandardNormal);
    Vec2::new(x * sigma, y * sigma)
}

fn poisson(rng: &mut ChaCha8Rng, rate: f64) -> usize {
    if rate <= 0.0 {
        return 0;
    }
    let n: f64 = Poisson::new(rate).expect("positive rate").sample(rng);
    n as usize
}

/// Noisy current and future detections of `gts` plus clutter. Only complete
/// trajectories produce future detections.
pub fn simulate_detector(
    gts: &[GtTrajectory],
    noise: &NoiseModel,
    timeline: &Timeline,
    extent: f64,
    rng: &mut ChaCha8Rng,
) -> Result<DetectorOutput, SynthError> {
    noise.check()?;
    let mut out = DetectorOutput::default();
    let steps = timeline.horizon_steps();
    let inv_dt = 1.0 / timeline.dt();
    for gt in gts {
        let centers: Vec<Option<Vec2>> = (0..=steps).map(|o| gt.center_at(o)).collect();
        let current = gt.current();
        let v0 = gt
            .velocity0()
            .unwrap_or_else(|| crate::subclass::initial_velocity(gt.boxes(), None, timeline));

        let drop_now = rng.random::<f64>() < noise.drop_prob;
        let err = gauss2(rng, noise.pos_sigma);
        let vel_err = gauss2(rng, noise.vel_sigma);
        let step_errs: Vec<Vec2> = (0..steps).map(|_| gauss2(rng, noise.vel_sigma)).collect();
        let score = noise.score_model.score(rng, err.norm(), noise.pos_sigma);
        if !drop_now {
            out.detections.push(Detection {
                bbox: current.translated(err),
                score,
                velocity: v0 + vel_err,
            });
            let mut last = current.center();
            let steps_v = (1..=steps)
                .zip(&step_errs)
                .map(|(o, e)| {
                    let next = centers[o].unwrap_or(last);
                    let v = (next - last) * inv_dt;
                    last = next;
                    v + *e
                })
                .collect();
            out.step_velocities.push(steps_v);
        }

        let drop_future = rng.random::<f64>() < noise.drop_prob;
        let ferr = gauss2(rng, noise.pos_sigma);
        let back_errs: Vec<Vec2> = (0..steps).map(|_| gauss2(rng, noise.pos_sigma)).collect();
        let fscore = noise.score_model.score(rng, ferr.norm(), noise.pos_sigma);
        if !drop_future && gt.is_complete() {
            let path: Vec<Vec2> = centers.iter().map(|c| c.expect("complete")).collect();
            let back_offsets = (0..steps)
                .map(|j| {
                    let t = steps - j;
                    path[t - 1] - path[t] + back_errs[j]
                })
                .collect();
            out.future_detections.push(FutureDetection {
                position: path[steps] + ferr,
                score: fscore,
                back_offsets,
            });
        }
    }

    let half = extent / 2.0;
    let sm = &noise.score_model;
    let clutter_score = |rng: &mut ChaCha8Rng| {
        if sm.clutter_max > sm.floor {
            rng.random_range(sm.floor..sm.clutter_max)
        } else {
            sm.floor
        }
    };
    for _ in 0..poisson(rng, noise.clutter_rate) {
        let c = Vec2::new(rng.random_range(-half..half), rng.random_range(-half..half));
        let yaw = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let v = gauss2(rng, noise.clutter_speed_sigma);
        let score = clutter_score(rng);
        out.detections.push(Detection {
            bbox: BevBox::new(c, 4.5, 1.9, yaw)?,
            score,
            velocity: v,
        });
        out.step_velocities.push(vec![v; steps]);
    }
    for _ in 0..poisson(rng, noise.clutter_rate) {
        let p = Vec2::new(rng.random_range(-half..half), rng.random_range(-half..half));
        let v = gauss2(rng, noise.clutter_speed_sigma);
        let score = clutter_score(rng);
        out.future_detections.push(FutureDetection {
            position: p,
            score,
            back_offsets: vec![-(v * timeline.dt()); steps],
        });
    }
    Ok(out)
}

/// Configuration shared by the synthetic world and the breakdown run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub timeline: Timeline,
    pub scenes: usize,
    pub population: Population,
    pub noise: NoiseModel,
    pub rerank: StationarityRerank,
    pub eval: EvalConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            timeline: Timeline::default(),
            scenes: 200,
            population: Population::default(),
            noise: NoiseModel::default(),
            rerank: StationarityRerank::default(),
            eval: EvalConfig::car(),
        }
    }
}

/// Ground truth and detector output for one synthetic scene.
#[derive(Debug, Clone, PartialEq)]
pub struct SimScene {
    pub scene_id: String,
    pub gts: Vec<GtTrajectory>,
    pub detector: DetectorOutput,
}

pub fn scene_rng(seed: u64, scene_index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(scene_index as u64);
    rng
}

pub fn simulate_scene(cfg: &ExperimentConfig, seed: u64, scene_index: usize) -> Result<SimScene, SynthError> {
    let mut rng = scene_rng(seed, scene_index);
    let scene_id = format!("scene_{scene_index:05}");
    let specs = cfg.population.sample_scene(&mut rng, &cfg.timeline)?;
    let gts = generate_scene(&specs, &cfg.timeline, &scene_id)?;
    let detector = simulate_detector(&gts, &cfg.noise, &cfg.timeline, cfg.population.extent, &mut rng)?;
    Ok(SimScene {
        scene_id,
        gts,
        detector,
    })
}

/// All scenes of a world, in scene-index order.
pub fn simulate_world(cfg: &ExperimentConfig, seed: u64) -> Result<Vec<SimScene>, SynthError> {
    (0..cfg.scenes)
        .into_par_iter()
        .map(|i| simulate_scene(cfg, seed, i))
        .collect()
}

/// Forecasts that reproduce the ground truth exactly, scored 1.
pub fn oracle_forecasts(gts: &[GtTrajectory], timeline: &Timeline) -> Vec<ForecastSet> {
    gts.iter()
        .map(|gt| {
            let mut last = gt.current().center();
            let waypoints = (1..=timeline.horizon_steps())
                .map(|o| {
                    if let Some(c) = gt.center_at(o) {
                        last = c;
                    }
                    last
                })
                .collect();
            ForecastSet {
                anchor: *gt.current(),
                det_score: 1.0,
                candidates: vec![ForecastCandidate {
                    waypoints,
                    forecast_score: 1.0,
                }],
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Forecaster {
    Oracle,
    /// Constant position over stationarity-reranked detections.
    ConstantPosition,
    ConstantVelocity,
}

impl Forecaster {
    pub const ALL: [Forecaster; 3] = [
        Forecaster::Oracle,
        Forecaster::ConstantPosition,
        Forecaster::ConstantVelocity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Forecaster::Oracle => "oracle",
            Forecaster::ConstantPosition => "const-pos (reranked)",
            Forecaster::ConstantVelocity => "const-vel",
        }
    }

    pub fn forecast(self, scene: &SimScene, cfg: &ExperimentConfig) -> Vec<ForecastSet> {
        match self {
            Forecaster::Oracle => oracle_forecasts(&scene.gts, &cfg.timeline),
            Forecaster::ConstantPosition => {
                constant_position_reranked(&scene.detector.detections, &cfg.timeline, &cfg.rerank)
            }
            Forecaster::ConstantVelocity => constant_velocity(&scene.detector.detections, &cfg.timeline),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreakdownRow {
    pub method: Forecaster,
    pub report: EvalReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreakdownTable {
    pub seed: u64,
    pub rows: Vec<BreakdownRow>,
}

impl BreakdownTable {
    pub fn row(&self, method: Forecaster) -> &EvalReport {
        &self
            .rows
            .iter()
            .find(|r| r.method == method)
            .expect("row present")
            .report
    }

    pub fn to_table(&self) -> String {
        let f = |v: Option<f64>| v.map_or("n/a".to_string(), |x| format!("{x:.3}"));
        let mut out = format!(
            "{:<22}{:>9}{:>9}{:>9}{:>9}{:>9}{:>9}{:>8}{:>8}{:>8}{:>8}{:>8}\n",
            "method",
            "ADE@60",
            "FDE@60",
            "ADE@90",
            "FDE@90",
            "ADEavg",
            "FDEavg",
            "MR",
            "APstat",
            "APlin",
            "APnl",
            "mAP_f"
        );
        for row in &self.rows {
            let r = &row.report;
            let at = |level: f64| r.legacy.at_recall.iter().find(|p| (p.recall - level).abs() < 1e-12);
            let (a60, f60) = at(0.6).map_or((None, None), |p| (p.ade, p.fde));
            let (a90, f90) = at(0.9).map_or((None, None), |p| (p.ade, p.fde));
            out.push_str(&format!(
                "{:<22}{:>9}{:>9}{:>9}{:>9}{:>9}{:>9}{:>8}{:>8}{:>8}{:>8}{:>8.3}\n",
                row.method.name(),
                f(a60),
                f(f60),
                f(a90),
                f(f90),
                f(r.legacy.ade_avg_recall),
                f(r.legacy.fde_avg_recall),
                f(r.legacy.miss_rate),
                f(r.ap_f(MotionSubclass::Static)),
                f(r.ap_f(MotionSubclass::Linear)),
                f(r.ap_f(MotionSubclass::NonLinear)),
                r.map_f
            ));
        }
        out
    }
}

pub fn eval_scenes(world: &[SimScene], forecaster: Forecaster, cfg: &ExperimentConfig) -> Vec<EvalScene> {
    world
        .par_iter()
        .map(|s| EvalScene {
            scene_id: s.scene_id.clone(),
            gts: s.gts.clone(),
            preds: forecaster.forecast(s, cfg),
        })
        .collect()
}

/// Runs every forecaster over one seeded world and evaluates each.
pub fn run_breakdown_experiment(cfg: &ExperimentConfig, seed: u64) -> Result<BreakdownTable, SynthError> {
    let eval = cfg.eval.clone().with_timeline(cfg.timeline);
    let world = simulate_world(cfg, seed)?;
    let rows = Forecaster::ALL
        .iter()
        .map(|&method| {
            let scenes = eval_scenes(&world, method, cfg);
            Ok(BreakdownRow {
                method,
                report: evaluate(&scenes, &eval)?,
            })
        })
        .collect::<Result<Vec<_>, SynthError>>()?;
    Ok(BreakdownTable { seed, rows })
}
