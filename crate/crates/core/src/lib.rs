//! Evaluation toolkit for joint object detection and trajectory forecasting.
//!
//! Predictions are anchored forecast sets: a current-frame detection plus one
//! or more candidate future paths. A prediction is a true positive for
//! forecasting AP only when its anchor matches a ground-truth object at the
//! current frame *and* its best top-K candidate ends near that object's
//! final position. Scores are broken down by motion subclass (static,
//! linear, non-linear) so that trivial forecasters cannot hide behind the
//! majority of parked objects.
//!
//! Modules:
//!
//! - [`model`]: boxes, timelines, trajectories, forecast sets, configuration
//! - [`geometry`]: center distance and rotated-box IoU
//! - [`subclass`]: motion subclass rule
//! - [`matching`]: greedy matching, top-K selection, ignore rules
//! - [`metrics`]: PR curves, AP / AP_f / mAP_f, legacy ADE / FDE / miss rate
//! - [`baselines`]: constant position / velocity, forward integration, backcasting
//! - [`synth`]: seeded synthetic world and detector, breakdown experiment
//! - [`io`]: JSON schemas and report writers
//! - [`cli`]: the `forecast-ap` command line

pub mod baselines;
pub mod cli;
pub mod geometry;
pub mod io;
pub mod matching;
pub mod metrics;
pub mod model;
pub mod report;
pub mod subclass;
pub mod synth;

pub use metrics::{evaluate, EvalError, EvalScene};
pub use model::{BevBox, ClassProfile, EvalConfig, ForecastCandidate, ForecastSet, GtTrajectory, Timeline, Vec2};
pub use report::EvalReport;
pub use subclass::MotionSubclass;
