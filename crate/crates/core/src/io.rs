//! JSON file schemas (ground truth, predictions, detections), validation
//! with path-precise messages, and report / PR-curve writers.
//!
//! Files are parsed into plain records first, so syntax and type errors
//! carry serde's line and column, and semantic errors name the offending
//! element (`scenes[2].forecasts[5].candidates[0]`).

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::baselines::{Detection, FutureDetection};
use crate::metrics::EvalScene;
use crate::model::{check_score, BevBox, ForecastCandidate, ForecastSet, GtTrajectory, Timeline, Vec2};
use crate::report::{EvalReport, InputDigests};
use crate::synth::SimScene;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: unsupported format version {found} (expected {FORMAT_VERSION})")]
    Version { path: PathBuf, found: u32 },
    #[error("{path}: {at}: {reason}")]
    Invalid { path: PathBuf, at: String, reason: String },
}

fn invalid(path: &Path, at: impl Into<String>, reason: impl ToString) -> IoError {
    IoError::Invalid {
        path: path.to_path_buf(),
        at: at.into(),
        reason: reason.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxRecord {
    pub cx: f64,
    pub cy: f64,
    pub length: f64,
    pub width: f64,
    pub yaw: f64,
}

impl From<&BevBox> for BoxRecord {
    fn from(b: &BevBox) -> Self {
        BoxRecord {
            cx: b.center().x,
            cy: b.center().y,
            length: b.length(),
            width: b.width(),
            yaw: b.yaw(),
        }
    }
}

impl BoxRecord {
    fn to_box(self) -> Result<BevBox, crate::model::ModelError> {
        BevBox::new(Vec2::new(self.cx, self.cy), self.length, self.width, self.yaw)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OffsetBoxRecord {
    pub offset: usize,
    #[serde(flatten)]
    pub bbox: BoxRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub instance_id: String,
    pub boxes: Vec<OffsetBoxRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub velocity0: Option<[f64; 2]>,
}

impl From<&GtTrajectory> for TrajectoryRecord {
    fn from(gt: &GtTrajectory) -> Self {
        TrajectoryRecord {
            instance_id: gt.instance_id().to_string(),
            boxes: gt
                .boxes()
                .iter()
                .map(|(o, b)| OffsetBoxRecord {
                    offset: *o,
                    bbox: b.into(),
                })
                .collect(),
            velocity0: gt.velocity0().map(Into::into),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GtSceneRecord {
    pub scene_id: String,
    pub trajectories: Vec<TrajectoryRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GtFile {
    pub version: u32,
    pub timeline: Timeline,
    pub scenes: Vec<GtSceneRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub waypoints: Vec<[f64; 2]>,
    pub forecast_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastRecord {
    pub anchor: BoxRecord,
    pub det_score: f64,
    pub candidates: Vec<CandidateRecord>,
}

impl From<&ForecastSet> for ForecastRecord {
    fn from(fs: &ForecastSet) -> Self {
        ForecastRecord {
            anchor: (&fs.anchor).into(),
            det_score: fs.det_score,
            candidates: fs
                .candidates
                .iter()
                .map(|c| CandidateRecord {
                    waypoints: c.waypoints.iter().map(|&w| w.into()).collect(),
                    forecast_score: c.forecast_score,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredSceneRecord {
    pub scene_id: String,
    pub forecasts: Vec<ForecastRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredFile {
    pub version: u32,
    pub scenes: Vec<PredSceneRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionRecord {
    #[serde(rename = "box")]
    pub bbox: BoxRecord,
    pub score: f64,
    pub velocity: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step_velocities: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FutureDetectionRecord {
    pub position: [f64; 2],
    pub score: f64,
    pub back_offsets: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetSceneRecord {
    pub scene_id: String,
    pub detections: Vec<DetectionRecord>,
    #[serde(default)]
    pub future_detections: Vec<FutureDetectionRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetsFile {
    pub version: u32,
    pub timeline: Timeline,
    pub scenes: Vec<DetSceneRecord>,
}

/// Validated ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct GtDataset {
    pub timeline: Timeline,
    pub scenes: Vec<(String, Vec<GtTrajectory>)>,
}

/// Validated predictions.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PredDataset {
    pub scenes: Vec<(String, Vec<ForecastSet>)>,
}

/// Validated detector output for one scene.
#[derive(Debug, Clone, PartialEq)]
pub struct DetScene {
    pub scene_id: String,
    pub detections: Vec<Detection>,
    /// Present only when every detection in the scene carries them.
    pub step_velocities: Option<Vec<Vec<Vec2>>>,
    pub future_detections: Vec<FutureDetection>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetDataset {
    pub timeline: Timeline,
    pub scenes: Vec<DetScene>,
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, IoError> {
    serde_json::from_str(text).map_err(|source| IoError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn check_version(path: &Path, found: u32) -> Result<(), IoError> {
    if found == FORMAT_VERSION {
        Ok(())
    } else {
        Err(IoError::Version {
            path: path.to_path_buf(),
            found,
        })
    }
}

fn check_unique_ids<'a>(path: &Path, ids: impl Iterator<Item = &'a str>) -> Result<(), IoError> {
    let mut seen = HashSet::new();
    for (i, id) in ids.enumerate() {
        if !seen.insert(id) {
            return Err(invalid(
                path,
                format!("scenes[{i}]"),
                format!("duplicate scene_id {id:?}"),
            ));
        }
    }
    Ok(())
}

pub fn parse_gt(path: &Path, text: &str) -> Result<GtDataset, IoError> {
    let file: GtFile = parse(path, text)?;
    check_version(path, file.version)?;
    check_unique_ids(path, file.scenes.iter().map(|s| s.scene_id.as_str()))?;
    let timeline = file.timeline;
    let scenes = file
        .scenes
        .into_iter()
        .enumerate()
        .map(|(si, scene)| {
            let trajectories = scene
                .trajectories
                .into_iter()
                .enumerate()
                .map(|(ti, t)| {
                    let at = format!("scenes[{si}].trajectories[{ti}]");
                    let boxes = t
                        .boxes
                        .iter()
                        .enumerate()
                        .map(|(bi, b)| {
                            b.bbox
                                .to_box()
                                .map(|bx| (b.offset, bx))
                                .map_err(|e| invalid(path, format!("{at}.boxes[{bi}]"), e))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    GtTrajectory::new(t.instance_id, boxes, t.velocity0.map(Vec2::from), &timeline)
                        .map_err(|e| invalid(path, at, e))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok((scene.scene_id, trajectories))
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    Ok(GtDataset { timeline, scenes })
}

pub fn load_gt(path: impl AsRef<Path>) -> Result<GtDataset, IoError> {
    let path = path.as_ref();
    parse_gt(path, &read(path)?)
}

/// Parses predictions; waypoint counts are checked against `timeline`.
pub fn parse_pred(path: &Path, text: &str, timeline: &Timeline) -> Result<PredDataset, IoError> {
    let file: PredFile = parse(path, text)?;
    check_version(path, file.version)?;
    check_unique_ids(path, file.scenes.iter().map(|s| s.scene_id.as_str()))?;
    let scenes = file
        .scenes
        .into_iter()
        .enumerate()
        .map(|(si, scene)| {
            let forecasts = scene
                .forecasts
                .into_iter()
                .enumerate()
                .map(|(fi, f)| {
                    let at = format!("scenes[{si}].forecasts[{fi}]");
                    let anchor = f
                        .anchor
                        .to_box()
                        .map_err(|e| invalid(path, format!("{at}.anchor"), e))?;
                    check_score(f.det_score).map_err(|e| invalid(path, format!("{at}.det_score"), e))?;
                    let candidates = f
                        .candidates
                        .into_iter()
                        .map(|c| ForecastCandidate {
                            waypoints: c.waypoints.into_iter().map(Vec2::from).collect(),
                            forecast_score: c.forecast_score,
                        })
                        .collect();
                    ForecastSet::new(anchor, f.det_score, candidates, timeline).map_err(|e| invalid(path, at, e))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok((scene.scene_id, forecasts))
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    Ok(PredDataset { scenes })
}

pub fn load_pred(path: impl AsRef<Path>, timeline: &Timeline) -> Result<PredDataset, IoError> {
    let path = path.as_ref();
    parse_pred(path, &read(path)?, timeline)
}

pub fn parse_dets(path: &Path, text: &str) -> Result<DetDataset, IoError> {
    let file: DetsFile = parse(path, text)?;
    check_version(path, file.version)?;
    check_unique_ids(path, file.scenes.iter().map(|s| s.scene_id.as_str()))?;
    let timeline = file.timeline;
    let steps = timeline.horizon_steps();
    let scenes = file
        .scenes
        .into_iter()
        .enumerate()
        .map(|(si, scene)| {
            let mut detections = Vec::with_capacity(scene.detections.len());
            let mut step_velocities = Some(Vec::with_capacity(scene.detections.len()));
            for (di, d) in scene.detections.into_iter().enumerate() {
                let at = format!("scenes[{si}].detections[{di}]");
                let bbox = d.bbox.to_box().map_err(|e| invalid(path, format!("{at}.box"), e))?;
                check_score(d.score).map_err(|e| invalid(path, format!("{at}.score"), e))?;
                match d.step_velocities {
                    Some(vs) if vs.len() != steps => {
                        return Err(invalid(
                            path,
                            format!("{at}.step_velocities"),
                            format!("{} entries, horizon is {steps}", vs.len()),
                        ))
                    }
                    Some(vs) => {
                        if let Some(all) = step_velocities.as_mut() {
                            all.push(vs.into_iter().map(Vec2::from).collect());
                        }
                    }
                    None => step_velocities = None,
                }
                detections.push(Detection {
                    bbox,
                    score: d.score,
                    velocity: d.velocity.into(),
                });
            }
            let future_detections = scene
                .future_detections
                .into_iter()
                .enumerate()
                .map(|(fi, f)| {
                    let at = format!("scenes[{si}].future_detections[{fi}]");
                    check_score(f.score).map_err(|e| invalid(path, format!("{at}.score"), e))?;
                    if f.back_offsets.len() != steps {
                        return Err(invalid(
                            path,
                            format!("{at}.back_offsets"),
                            format!("{} entries, horizon is {steps}", f.back_offsets.len()),
                        ));
                    }
                    Ok(FutureDetection {
                        position: f.position.into(),
                        score: f.score,
                        back_offsets: f.back_offsets.into_iter().map(Vec2::from).collect(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(DetScene {
                scene_id: scene.scene_id,
                detections,
                step_velocities,
                future_detections,
            })
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    Ok(DetDataset { timeline, scenes })
}

pub fn load_dets(path: impl AsRef<Path>) -> Result<DetDataset, IoError> {
    let path = path.as_ref();
    parse_dets(path, &read(path)?)
}

/// Joins predictions onto ground truth by scene id. Ground-truth scenes
/// without predictions evaluate with none; unknown prediction scenes are an
/// error.
pub fn pair_scenes(gt: GtDataset, pred: PredDataset, pred_path: &Path) -> Result<Vec<EvalScene>, IoError> {
    let index: HashMap<&str, usize> = gt
        .scenes
        .iter()
        .enumerate()
        .map(|(i, (id, _))| (id.as_str(), i))
        .collect();
    let mut preds: Vec<Vec<ForecastSet>> = vec![Vec::new(); gt.scenes.len()];
    for (si, (id, forecasts)) in pred.scenes.into_iter().enumerate() {
        let &i = index.get(id.as_str()).ok_or_else(|| {
            invalid(
                pred_path,
                format!("scenes[{si}]"),
                format!("scene_id {id:?} not in ground truth"),
            )
        })?;
        preds[i] = forecasts;
    }
    Ok(gt
        .scenes
        .into_iter()
        .zip(preds)
        .map(|((scene_id, gts), preds)| EvalScene { scene_id, gts, preds })
        .collect())
}

pub fn gt_file(timeline: Timeline, scenes: &[(String, Vec<GtTrajectory>)]) -> GtFile {
    GtFile {
        version: FORMAT_VERSION,
        timeline,
        scenes: scenes
            .iter()
            .map(|(id, gts)| GtSceneRecord {
                scene_id: id.clone(),
                trajectories: gts.iter().map(Into::into).collect(),
            })
            .collect(),
    }
}

pub fn pred_file(scenes: &[(String, Vec<ForecastSet>)]) -> PredFile {
    PredFile {
        version: FORMAT_VERSION,
        scenes: scenes
            .iter()
            .map(|(id, fs)| PredSceneRecord {
                scene_id: id.clone(),
                forecasts: fs.iter().map(Into::into).collect(),
            })
            .collect(),
    }
}

pub fn dets_file(timeline: Timeline, world: &[SimScene]) -> DetsFile {
    DetsFile {
        version: FORMAT_VERSION,
        timeline,
        scenes: world
            .iter()
            .map(|s| DetSceneRecord {
                scene_id: s.scene_id.clone(),
                detections: s
                    .detector
                    .detections
                    .iter()
                    .zip(&s.detector.step_velocities)
                    .map(|(d, vs)| DetectionRecord {
                        bbox: (&d.bbox).into(),
                        score: d.score,
                        velocity: d.velocity.into(),
                        step_velocities: Some(vs.iter().map(|&v| v.into()).collect()),
                    })
                    .collect(),
                future_detections: s
                    .detector
                    .future_detections
                    .iter()
                    .map(|f| FutureDetectionRecord {
                        position: f.position.into(),
                        score: f.score,
                        back_offsets: f.back_offsets.iter().map(|&v| v.into()).collect(),
                    })
                    .collect(),
            })
            .collect(),
    }
}

/// Pretty JSON with a trailing newline. Field order follows the struct
/// definitions; floats use the shortest representation that round-trips.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("in-memory values serialize");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<(), IoError> {
    let path = path.as_ref();
    fs::write(path, to_json(value)).map_err(|source| IoError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// One `recall,precision` CSV per (subclass, threshold pair). Returns the
/// files written.
pub fn write_pr_csv(dir: impl AsRef<Path>, report: &EvalReport) -> Result<Vec<PathBuf>, IoError> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|source| IoError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    report
        .pr_curves
        .iter()
        .map(|c| {
            let path = dir.join(format!("{}.csv", c.file_stem()));
            fs::write(&path, c.to_csv()).map_err(|source| IoError::Io {
                path: path.clone(),
                source,
            })?;
            Ok(path)
        })
        .collect()
}

pub fn parse_report(text: &str) -> Result<EvalReport, serde_json::Error> {
    serde_json::from_str(text)
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl InputDigests {
    /// SHA-256 of the canonical JSON encoding of the ground truth and of the
    /// predictions.
    pub fn of_scenes(scenes: &[EvalScene]) -> Self {
        let gt: Vec<GtSceneRecord> = scenes
            .iter()
            .map(|s| GtSceneRecord {
                scene_id: s.scene_id.clone(),
                trajectories: s.gts.iter().map(Into::into).collect(),
            })
            .collect();
        let pred: Vec<PredSceneRecord> = scenes
            .iter()
            .map(|s| PredSceneRecord {
                scene_id: s.scene_id.clone(),
                forecasts: s.preds.iter().map(Into::into).collect(),
            })
            .collect();
        InputDigests {
            gt_sha256: sha256_hex(&serde_json::to_vec(&gt).expect("serializable")),
            pred_sha256: sha256_hex(&serde_json::to_vec(&pred).expect("serializable")),
        }
    }
}
