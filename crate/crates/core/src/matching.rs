//! Greedy, confidence-ordered matching of forecast sets to ground truth and
//! the joint current/final true-positive decision.

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::geometry::center_distance;
use crate::model::{ForecastSet, GtTrajectory, RankBy, Timeline};
use crate::subclass::{derive_prediction_subclass, MotionSubclass};

/// Outcome of matching one prediction under one threshold pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchRecord {
    pub scene_index: usize,
    pub pred_index: usize,
    pub det_score: f64,
    /// Score that orders this record on the forecasting PR curve.
    pub rank_score: f64,
    /// Index into the scene's ground-truth list.
    pub matched_gt: Option<usize>,
    pub current_hit: bool,
    pub selected_candidate: Option<usize>,
    pub fde_of_selected: Option<f64>,
    pub forecast_hit: bool,
    pub subclass: MotionSubclass,
    pub ignored: bool,
}

impl MatchRecord {
    fn unmatched(scene_index: usize, pred_index: usize, det_score: f64) -> Self {
        MatchRecord {
            scene_index,
            pred_index,
            det_score,
            rank_score: det_score,
            matched_gt: None,
            current_hit: false,
            selected_candidate: None,
            fde_of_selected: None,
            forecast_hit: false,
            subclass: MotionSubclass::Static,
            ignored: false,
        }
    }
}

/// Descending score, then scene, then prediction index.
pub fn rank_order(a_score: f64, a: (usize, usize), b_score: f64, b: (usize, usize)) -> Ordering {
    b_score.total_cmp(&a_score).then(a.cmp(&b))
}

/// Prediction indices in processing order.
pub fn confidence_order(preds: &[ForecastSet]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..preds.len()).collect();
    order.sort_by(|&a, &b| preds[b].det_score.total_cmp(&preds[a].det_score).then(a.cmp(&b)));
    order
}

/// Scenes with more ground truth than this use the spatial grid.
const GRID_MIN_GTS: usize = 64;

/// Uniform hash grid over ground-truth centers with cell size `tau`.
struct CenterGrid {
    cell: f64,
    cells: HashMap<(i64, i64), Vec<usize>>,
}

impl CenterGrid {
    fn new(gts: &[GtTrajectory], cell: f64) -> Self {
        let mut cells: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, gt) in gts.iter().enumerate() {
            let c = gt.current().center();
            cells
                .entry(((c.x / cell).floor() as i64, (c.y / cell).floor() as i64))
                .or_default()
                .push(i);
        }
        Self { cell, cells }
    }

    fn near(&self, x: f64, y: f64) -> impl Iterator<Item = usize> + '_ {
        let cx = (x / self.cell).floor() as i64;
        let cy = (y / self.cell).floor() as i64;
        (cx - 1..=cx + 1)
            .flat_map(move |i| (cy - 1..=cy + 1).map(move |j| (i, j)))
            .filter_map(|key| self.cells.get(&key))
            .flatten()
            .copied()
    }
}

/// One-to-one greedy matching at the current frame. Records are returned in
/// processing order (descending detection score, ties by input order); each
/// prediction takes the nearest still-unmatched ground truth within
/// `tau_cur`, ties going to the lower ground-truth index.
pub fn greedy_match_current(
    scene_index: usize,
    preds: &[ForecastSet],
    gts: &[GtTrajectory],
    tau_cur: f64,
) -> Vec<MatchRecord> {
    let grid = (gts.len() > GRID_MIN_GTS).then(|| CenterGrid::new(gts, tau_cur));
    let mut taken = vec![false; gts.len()];
    confidence_order(preds)
        .into_iter()
        .map(|p| {
            let fs = &preds[p];
            let mut rec = MatchRecord::unmatched(scene_index, p, fs.det_score);
            let anchor = fs.anchor.center();
            let consider = |best: Option<(f64, usize)>, g: usize| {
                if taken[g] {
                    return best;
                }
                let d = center_distance(anchor, gts[g].current());
                if d > tau_cur {
                    return best;
                }
                match best {
                    Some((bd, bg)) if (bd, bg) <= (d, g) => best,
                    _ => Some((d, g)),
                }
            };
            let best = match &grid {
                Some(grid) => grid.near(anchor.x, anchor.y).fold(None, consider),
                None => (0..gts.len()).fold(None, consider),
            };
            if let Some((_, g)) = best {
                taken[g] = true;
                rec.matched_gt = Some(g);
                rec.current_hit = true;
            }
            rec
        })
        .collect()
}

/// Among the `k` highest-scored candidates, the one closest to the ground
/// truth's final center. Returns `None` when the ground truth has no box at
/// the final offset.
pub fn select_candidate(fs: &ForecastSet, gt: &GtTrajectory, k: usize, timeline: &Timeline) -> Option<(usize, f64)> {
    let target = gt.center_at(timeline.horizon_steps())?;
    fs.ranked_candidates()
        .into_iter()
        .take(k.max(1))
        .map(|c| (c, center_distance(fs.candidates[c].final_waypoint(), target)))
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
}

/// Matched records inherit the ground-truth subclass; unmatched ones are
/// labelled from their top-ranked candidate.
pub fn assign_subclasses(
    records: &mut [MatchRecord],
    preds: &[ForecastSet],
    gts: &[GtTrajectory],
    timeline: &Timeline,
) {
    for rec in records.iter_mut() {
        rec.subclass = match rec.matched_gt {
            Some(g) => gts[g].subclass(),
            None => {
                let fs = &preds[rec.pred_index];
                derive_prediction_subclass(fs, fs.top_candidate(), timeline)
            }
        };
    }
}

/// Predictions matched to partial-horizon ground truth are ignored.
pub fn apply_ignore_rules(records: &mut [MatchRecord], gts: &[GtTrajectory]) {
    for rec in records.iter_mut() {
        rec.ignored = rec.matched_gt.is_some_and(|g| !gts[g].is_complete());
    }
}

/// Complete ground truth per subclass, indexed by [`MotionSubclass::index`].
pub fn gt_counts(gts: &[GtTrajectory]) -> [usize; 3] {
    let mut counts = [0; 3];
    for gt in gts.iter().filter(|g| g.is_complete()) {
        counts[gt.subclass().index()] += 1;
    }
    counts
}

/// Full matching pass for one scene and one threshold pair.
#[allow(clippy::too_many_arguments)]
pub fn match_scene(
    scene_index: usize,
    preds: &[ForecastSet],
    gts: &[GtTrajectory],
    tau_cur: f64,
    tau_fin: f64,
    k: usize,
    rank_by: RankBy,
    timeline: &Timeline,
) -> Vec<MatchRecord> {
    let mut records = greedy_match_current(scene_index, preds, gts, tau_cur);
    for rec in records.iter_mut() {
        let fs = &preds[rec.pred_index];
        if let Some(g) = rec.matched_gt {
            if let Some((c, fde)) = select_candidate(fs, &gts[g], k, timeline) {
                rec.selected_candidate = Some(c);
                rec.fde_of_selected = Some(fde);
                rec.forecast_hit = fde <= tau_fin;
            }
        }
        if rank_by == RankBy::ForecastScore {
            let c = rec.selected_candidate.unwrap_or_else(|| fs.top_candidate());
            rec.rank_score = fs.candidates[c].forecast_score;
        }
    }
    assign_subclasses(&mut records, preds, gts, timeline);
    apply_ignore_rules(&mut records, gts);
    records
}
