//! Precision-recall accumulation, forecasting AP and the legacy displacement
//! metrics, assembled into an [`EvalReport`].

use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::center_distance;
use crate::matching::{gt_counts, match_scene, rank_order, MatchRecord};
use crate::model::{validate_config, ConfigError, EvalConfig, ForecastCandidate, ForecastSet, GtTrajectory};
use crate::report::{EvalReport, InputDigests, LegacyMetrics, PrCurveDump, RecallPoint, SubclassScores};
use crate::subclass::MotionSubclass;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("no subclass has ground truth; {0} is undefined")]
    AllUndefined(&'static str),
}

/// Ground truth and predictions for one scene.
#[derive(Debug, Clone, Default)]
pub struct EvalScene {
    pub scene_id: String,
    pub gts: Vec<GtTrajectory>,
    pub preds: Vec<ForecastSet>,
}

/// Which hit flag counts as a true positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HitField {
    Current,
    Forecast,
}

impl HitField {
    fn hit(self, r: &MatchRecord) -> bool {
        match self {
            HitField::Current => r.current_hit,
            HitField::Forecast => r.forecast_hit,
        }
    }

    fn score(self, r: &MatchRecord) -> f64 {
        match self {
            HitField::Current => r.det_score,
            HitField::Forecast => r.rank_score,
        }
    }
}

/// Raw and max-interpolated precision/recall.
#[derive(Debug, Clone, PartialEq)]
pub struct PrCurve {
    pub points: Vec<(f64, f64)>,
    /// Interpolated precision at `i / (n - 1)` recall for `i in 0..n`.
    pub interpolated: Vec<f64>,
}

const CLIP_MIN_RECALL: f64 = 0.1;
const CLIP_MIN_PRECISION: f64 = 0.1;

impl PrCurve {
    /// `hits` must already be in rank order. `None` when there is no ground
    /// truth.
    pub fn from_ranked_hits(hits: impl IntoIterator<Item = bool>, gt_count: usize, pr_points: usize) -> Option<Self> {
        if gt_count == 0 {
            return None;
        }
        let mut tp = 0usize;
        let points: Vec<(f64, f64)> = hits
            .into_iter()
            .enumerate()
            .map(|(i, hit)| {
                tp += usize::from(hit);
                (tp as f64 / gt_count as f64, tp as f64 / (i + 1) as f64)
            })
            .collect();
        // Running max from the right: best precision at recall >= r.
        let mut envelope = vec![0.0; points.len()];
        let mut best = 0.0f64;
        for i in (0..points.len()).rev() {
            best = best.max(points[i].1);
            envelope[i] = best;
        }
        let steps = (pr_points - 1) as f64;
        let mut j = 0;
        let interpolated = (0..pr_points)
            .map(|i| {
                let r = i as f64 / steps;
                while j < points.len() && points[j].0 < r {
                    j += 1;
                }
                if j < points.len() {
                    envelope[j]
                } else {
                    0.0
                }
            })
            .collect();
        Some(PrCurve { points, interpolated })
    }

    /// Mean interpolated precision. With `clip`, recall below 0.1 is dropped
    /// and precision is rescaled from `[0.1, 1]` to `[0, 1]`.
    pub fn average_precision(&self, clip: bool) -> f64 {
        let n = self.interpolated.len();
        if !clip {
            return self.interpolated.iter().sum::<f64>() / n as f64;
        }
        let first = ((n - 1) as f64 * CLIP_MIN_RECALL).round() as usize + 1;
        let tail = &self.interpolated[first.min(n)..];
        if tail.is_empty() {
            return 0.0;
        }
        let mean = tail.iter().map(|p| (p - CLIP_MIN_PRECISION).max(0.0)).sum::<f64>() / tail.len() as f64;
        (mean / (1.0 - CLIP_MIN_PRECISION)).min(1.0)
    }
}

fn ranked<'a>(records: impl IntoIterator<Item = &'a MatchRecord>, hit: HitField) -> Vec<&'a MatchRecord> {
    let mut v: Vec<&MatchRecord> = records.into_iter().filter(|r| !r.ignored).collect();
    v.sort_by(|a, b| {
        rank_order(
            hit.score(a),
            (a.scene_index, a.pred_index),
            hit.score(b),
            (b.scene_index, b.pred_index),
        )
    });
    v
}

fn curve_for(records: &[MatchRecord], gt_count: usize, hit: HitField, pr_points: usize) -> Option<PrCurve> {
    let order = ranked(records, hit);
    PrCurve::from_ranked_hits(order.iter().map(|r| hit.hit(r)), gt_count, pr_points)
}

/// AP over already-filtered records; ignored records are dropped and the
/// rest ordered by the score that goes with `hit`. `None` when `gt_count`
/// is zero.
pub fn ap_from_records(records: &[MatchRecord], gt_count: usize, hit: HitField, cfg: &EvalConfig) -> Option<f64> {
    curve_for(records, gt_count, hit, cfg.pr_points).map(|c| c.average_precision(cfg.nuscenes_clip))
}

/// Mean L2 error over offsets `1..=T`; `None` if the ground truth misses a
/// future offset.
pub fn ade(candidate: &ForecastCandidate, gt: &GtTrajectory) -> Option<f64> {
    let mut total = 0.0;
    for (i, w) in candidate.waypoints.iter().enumerate() {
        total += center_distance(*w, gt.center_at(i + 1)?);
    }
    Some(total / candidate.waypoints.len() as f64)
}

/// L2 error at the final offset.
pub fn fde(candidate: &ForecastCandidate, gt: &GtTrajectory) -> Option<f64> {
    let t = candidate.waypoints.len();
    Some(center_distance(candidate.final_waypoint(), gt.center_at(t)?))
}

struct PairRecords {
    current_threshold: f64,
    final_threshold: f64,
    records: Vec<MatchRecord>,
}

fn match_all(scenes: &[EvalScene], cfg: &EvalConfig, tau_cur: f64, tau_fin: f64) -> Vec<MatchRecord> {
    scenes
        .par_iter()
        .enumerate()
        .map(|(i, s)| match_scene(i, &s.preds, &s.gts, tau_cur, tau_fin, cfg.k, cfg.rank_by, &cfg.timeline))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn total_gt_counts(scenes: &[EvalScene]) -> [usize; 3] {
    scenes.iter().fold([0; 3], |mut acc, s| {
        for (a, c) in acc.iter_mut().zip(gt_counts(&s.gts)) {
            *a += c;
        }
        acc
    })
}

fn pair_records(scenes: &[EvalScene], cfg: &EvalConfig) -> Vec<PairRecords> {
    cfg.threshold_pairs()
        .map(|(c, f)| PairRecords {
            current_threshold: c,
            final_threshold: f,
            records: match_all(scenes, cfg, c, f),
        })
        .collect()
}

fn subclass_records(records: &[MatchRecord], s: MotionSubclass) -> Vec<MatchRecord> {
    records.iter().filter(|r| r.subclass == s).cloned().collect()
}

fn mean_over_pairs(
    pairs: &[PairRecords],
    s: MotionSubclass,
    gt: usize,
    hit: HitField,
    cfg: &EvalConfig,
) -> Option<f64> {
    let aps: Option<Vec<f64>> = pairs
        .iter()
        .map(|p| ap_from_records(&subclass_records(&p.records, s), gt, hit, cfg))
        .collect();
    aps.map(|v| v.iter().sum::<f64>() / v.len() as f64)
}

/// Forecasting AP for one subclass, averaged over the threshold pairs.
pub fn forecast_ap(scenes: &[EvalScene], cfg: &EvalConfig, subclass: MotionSubclass) -> Result<Option<f64>, EvalError> {
    let cfg = validate_config(cfg.clone())?;
    let gt = total_gt_counts(scenes)[subclass.index()];
    Ok(mean_over_pairs(
        &pair_records(scenes, &cfg),
        subclass,
        gt,
        HitField::Forecast,
        &cfg,
    ))
}

/// Mean of the defined per-subclass values, plus a warning per undefined one.
fn subclass_mean(per: &[Option<f64>; 3], what: &'static str) -> Result<(f64, Vec<String>), EvalError> {
    let defined: Vec<f64> = per.iter().flatten().copied().collect();
    if defined.is_empty() {
        return Err(EvalError::AllUndefined(what));
    }
    let warnings = MotionSubclass::ALL
        .iter()
        .zip(per)
        .filter(|(_, v)| v.is_none())
        .map(|(s, _)| format!("no {s} ground truth: {s} excluded from {what}"))
        .collect();
    Ok((defined.iter().sum::<f64>() / defined.len() as f64, warnings))
}

fn per_subclass(pairs: &[PairRecords], counts: [usize; 3], hit: HitField, cfg: &EvalConfig) -> [Option<f64>; 3] {
    MotionSubclass::ALL.map(|s| mean_over_pairs(pairs, s, counts[s.index()], hit, cfg))
}

/// Mean forecasting AP over the subclasses with ground truth.
pub fn map_f(scenes: &[EvalScene], cfg: &EvalConfig) -> Result<(f64, [Option<f64>; 3]), EvalError> {
    let cfg = validate_config(cfg.clone())?;
    let per = per_subclass(
        &pair_records(scenes, &cfg),
        total_gt_counts(scenes),
        HitField::Forecast,
        &cfg,
    );
    Ok((subclass_mean(&per, "mAP_f")?.0, per))
}

/// Mean detection AP over the subclasses with ground truth, averaged over
/// the current-frame thresholds.
pub fn detection_map(scenes: &[EvalScene], cfg: &EvalConfig) -> Result<(f64, [Option<f64>; 3]), EvalError> {
    let cfg = validate_config(cfg.clone())?;
    let per = per_subclass(
        &pair_records(scenes, &cfg),
        total_gt_counts(scenes),
        HitField::Current,
        &cfg,
    );
    Ok((subclass_mean(&per, "mAP_det")?.0, per))
}

struct LegacyRecord {
    score: f64,
    key: (usize, usize),
    tp: bool,
    min_ade: f64,
    min_fde: f64,
}

fn legacy_records(scenes: &[EvalScene], cfg: &EvalConfig) -> Vec<LegacyRecord> {
    let tau = cfg.legacy_match_threshold;
    let mut out: Vec<LegacyRecord> = scenes
        .par_iter()
        .enumerate()
        .map(|(si, s)| {
            match_scene(
                si,
                &s.preds,
                &s.gts,
                tau,
                f64::INFINITY,
                cfg.k,
                cfg.rank_by,
                &cfg.timeline,
            )
            .into_iter()
            .filter(|r| !r.ignored)
            .map(|r| {
                let fs = &s.preds[r.pred_index];
                let (min_ade, min_fde) = match r.matched_gt {
                    Some(g) => fs.ranked_candidates().into_iter().take(cfg.k).fold(
                        (f64::INFINITY, f64::INFINITY),
                        |(a, f), c| {
                            let cand = &fs.candidates[c];
                            let gt = &s.gts[g];
                            (
                                a.min(ade(cand, gt).unwrap_or(f64::INFINITY)),
                                f.min(fde(cand, gt).unwrap_or(f64::INFINITY)),
                            )
                        },
                    ),
                    None => (f64::NAN, f64::NAN),
                };
                LegacyRecord {
                    score: r.det_score,
                    key: (r.scene_index, r.pred_index),
                    tp: r.current_hit,
                    min_ade,
                    min_fde,
                }
            })
            .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    out.sort_by(|a, b| rank_order(a.score, a.key, b.score, b.key));
    out
}

/// Recall levels averaged by the recall-averaged legacy variant.
pub fn averaging_recall_grid() -> Vec<f64> {
    (1..=10).map(|i| i as f64 / 10.0).collect()
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

fn recall_point(records: &[LegacyRecord], gt_count: usize, recall: f64) -> RecallPoint {
    let needed = recall * gt_count as f64 - 1e-9;
    let mut tp = 0usize;
    let mut end = records.len();
    let mut attained = false;
    for (i, r) in records.iter().enumerate() {
        tp += usize::from(r.tp);
        if gt_count > 0 && tp as f64 >= needed {
            end = i + 1;
            attained = true;
            break;
        }
    }
    let prefix = &records[..end];
    let tps = || prefix.iter().filter(|r| r.tp);
    let achieved = if gt_count == 0 {
        0.0
    } else {
        tps().count() as f64 / gt_count as f64
    };
    RecallPoint {
        recall,
        ade: mean(tps().map(|r| r.min_ade)),
        fde: mean(tps().map(|r| r.min_fde)),
        attained,
        achieved_recall: achieved,
    }
}

/// ADE/FDE at fixed recall, their recall-averaged variants and the miss
/// rate, all over true positives of a single current-frame match.
pub fn legacy_displacement(scenes: &[EvalScene], cfg: &EvalConfig) -> Result<LegacyMetrics, EvalError> {
    let cfg = validate_config(cfg.clone())?;
    let gt_count: usize = total_gt_counts(scenes).iter().sum();
    let records = legacy_records(scenes, &cfg);
    let at_recall = cfg
        .recall_levels
        .iter()
        .map(|&r| recall_point(&records, gt_count, r))
        .collect();
    let grid: Vec<RecallPoint> = averaging_recall_grid()
        .into_iter()
        .map(|r| recall_point(&records, gt_count, r))
        .collect();
    let averaged = |f: fn(&RecallPoint) -> Option<f64>| {
        let vals: Option<Vec<f64>> = grid.iter().map(f).collect();
        vals.and_then(|v| mean(v.into_iter()))
    };
    let tps: Vec<&LegacyRecord> = records.iter().filter(|r| r.tp).collect();
    let misses = tps.iter().filter(|r| r.min_fde > cfg.miss_fde_threshold).count();
    Ok(LegacyMetrics {
        match_threshold: cfg.legacy_match_threshold,
        at_recall,
        ade_avg_recall: averaged(|p| p.ade),
        fde_avg_recall: averaged(|p| p.fde),
        miss_rate: (!tps.is_empty()).then(|| misses as f64 / tps.len() as f64),
        max_recall: if gt_count == 0 {
            0.0
        } else {
            tps.len() as f64 / gt_count as f64
        },
    })
}

/// Runs the full evaluation and assembles the report.
pub fn evaluate(scenes: &[EvalScene], cfg: &EvalConfig) -> Result<EvalReport, EvalError> {
    let cfg = validate_config(cfg.clone())?;
    let counts = total_gt_counts(scenes);
    let pairs = pair_records(scenes, &cfg);
    let ap_det = per_subclass(&pairs, counts, HitField::Current, &cfg);
    let ap_f = per_subclass(&pairs, counts, HitField::Forecast, &cfg);
    let (map_det, _) = subclass_mean(&ap_det, "mAP_det")?;
    let (map_f, mut warnings) = subclass_mean(&ap_f, "mAP_f")?;

    let mut pr_curves = Vec::new();
    for s in MotionSubclass::ALL {
        for p in &pairs {
            let recs = subclass_records(&p.records, s);
            if let Some(curve) = curve_for(&recs, counts[s.index()], HitField::Forecast, cfg.pr_points) {
                pr_curves.push(PrCurveDump {
                    subclass: s,
                    current_threshold: p.current_threshold,
                    final_threshold: p.final_threshold,
                    points: curve.points.iter().map(|&(r, p)| [r, p]).collect(),
                });
            }
        }
    }

    let legacy = legacy_displacement(scenes, &cfg)?;
    for p in legacy.at_recall.iter().filter(|p| !p.attained) {
        warnings.push(format!(
            "legacy recall {} not attained; reported at recall {:.4}",
            p.recall, p.achieved_recall
        ));
    }

    let subclasses = MotionSubclass::ALL
        .iter()
        .map(|&s| SubclassScores {
            subclass: s,
            gt_count: counts[s.index()],
            ap_det: ap_det[s.index()],
            ap_f: ap_f[s.index()],
        })
        .collect();

    Ok(EvalReport {
        inputs: InputDigests::of_scenes(scenes),
        config: cfg,
        subclasses,
        map_det,
        map_f,
        legacy,
        pr_curves,
        warnings,
    })
}
