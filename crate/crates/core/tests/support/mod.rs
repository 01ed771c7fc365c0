//! Reference implementations used as test oracles. They share no code with
//! the library's matching, PR or clipping paths.

#![allow(dead_code)]

use forecast_ap::model::RankBy;
use forecast_ap::subclass::derive_prediction_subclass;
use forecast_ap::{
    BevBox, EvalConfig, EvalScene, ForecastCandidate, ForecastSet, GtTrajectory, MotionSubclass, Timeline, Vec2,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub fn point_in_box(p: Vec2, b: &BevBox) -> bool {
    let d = p - b.center();
    let (s, c) = (-b.yaw()).sin_cos();
    let x = d.x * c - d.y * s;
    let y = d.x * s + d.y * c;
    x.abs() <= b.length() / 2.0 && y.abs() <= b.width() / 2.0
}

fn aabb(b: &BevBox) -> (f64, f64, f64, f64) {
    let cs = b.corners();
    let xs = cs.iter().map(|c| c.x);
    let ys = cs.iter().map(|c| c.y);
    (
        xs.clone().fold(f64::INFINITY, f64::min),
        xs.fold(f64::NEG_INFINITY, f64::max),
        ys.clone().fold(f64::INFINITY, f64::min),
        ys.fold(f64::NEG_INFINITY, f64::max),
    )
}

/// Monte Carlo IoU: `(estimate, points in the union)`.
pub fn mc_iou(a: &BevBox, b: &BevBox, samples: u64, seed: u64) -> (f64, u64) {
    let (ax0, ax1, ay0, ay1) = aabb(a);
    let (bx0, bx1, by0, by1) = aabb(b);
    let (x0, x1, y0, y1) = (ax0.min(bx0), ax1.max(bx1), ay0.min(by0), ay1.max(by1));
    const CHUNKS: u64 = 64;
    let per = samples / CHUNKS;
    let (both, either) = (0..CHUNKS)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            let (mut both, mut either) = (0u64, 0u64);
            for _ in 0..per {
                let p = Vec2::new(rng.random_range(x0..x1), rng.random_range(y0..y1));
                let (ia, ib) = (point_in_box(p, a), point_in_box(p, b));
                both += u64::from(ia && ib);
                either += u64::from(ia || ib);
            }
            (both, either)
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
    (both as f64 / either as f64, either)
}

/// Separating-axis test on the four edge normals.
pub fn boxes_disjoint(a: &BevBox, b: &BevBox) -> bool {
    let axes = [
        a.yaw(),
        a.yaw() + std::f64::consts::FRAC_PI_2,
        b.yaw(),
        b.yaw() + std::f64::consts::FRAC_PI_2,
    ];
    axes.iter().any(|&t| {
        let n = Vec2::new(t.cos(), t.sin());
        let proj = |bx: &BevBox| {
            let v: Vec<f64> = bx.corners().iter().map(|c| c.x * n.x + c.y * n.y).collect();
            (
                v.iter().cloned().fold(f64::INFINITY, f64::min),
                v.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            )
        };
        let (a0, a1) = proj(a);
        let (b0, b1) = proj(b);
        a1 < b0 || b1 < a0
    })
}

#[derive(Debug, Clone)]
pub struct RefRecord {
    pub det_score: f64,
    /// Orders the forecasting curve.
    pub score: f64,
    pub key: (usize, usize),
    pub current_hit: bool,
    pub forecast_hit: bool,
    pub subclass: MotionSubclass,
    pub ignored: bool,
}

fn dist(a: Vec2, b: Vec2) -> f64 {
    ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt()
}

fn candidate_order(fs: &ForecastSet) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..fs.candidates.len()).collect();
    idx.sort_by(|&i, &j| {
        fs.candidates[j]
            .forecast_score
            .partial_cmp(&fs.candidates[i].forecast_score)
            .unwrap()
            .then(i.cmp(&j))
    });
    idx
}

/// Plain O(n·m) greedy matching for one scene and one threshold pair.
#[allow(clippy::too_many_arguments)]
pub fn reference_match(
    scene: usize,
    preds: &[ForecastSet],
    gts: &[GtTrajectory],
    tau_cur: f64,
    tau_fin: f64,
    k: usize,
    rank_by: RankBy,
    tl: &Timeline,
) -> Vec<RefRecord> {
    let mut order: Vec<usize> = (0..preds.len()).collect();
    order.sort_by(|&i, &j| {
        preds[j]
            .det_score
            .partial_cmp(&preds[i].det_score)
            .unwrap()
            .then(i.cmp(&j))
    });
    let mut taken = vec![false; gts.len()];
    let mut out = Vec::new();
    for p in order {
        let fs = &preds[p];
        let mut best: Option<(usize, f64)> = None;
        for (g, gt) in gts.iter().enumerate() {
            if taken[g] {
                continue;
            }
            let d = dist(fs.anchor.center(), gt.current().center());
            if d <= tau_cur && best.is_none_or(|(_, bd)| d < bd) {
                best = Some((g, d));
            }
        }
        let ranked = candidate_order(fs);
        let mut rec = RefRecord {
            det_score: fs.det_score,
            score: fs.det_score,
            key: (scene, p),
            current_hit: false,
            forecast_hit: false,
            subclass: MotionSubclass::Static,
            ignored: false,
        };
        let mut chosen = ranked[0];
        match best {
            Some((g, _)) => {
                taken[g] = true;
                let gt = &gts[g];
                rec.current_hit = true;
                rec.subclass = gt.subclass();
                rec.ignored = !gt.is_complete();
                if let Some(target) = gt.center_at(tl.horizon_steps()) {
                    let mut best_c: Option<(usize, f64)> = None;
                    for &c in ranked.iter().take(k) {
                        let d = dist(fs.candidates[c].final_waypoint(), target);
                        if best_c.is_none_or(|(_, bd)| d < bd) {
                            best_c = Some((c, d));
                        }
                    }
                    let (c, d) = best_c.unwrap();
                    chosen = c;
                    rec.forecast_hit = d <= tau_fin;
                }
            }
            None => rec.subclass = derive_prediction_subclass(fs, ranked[0], tl),
        }
        if rank_by == RankBy::ForecastScore {
            rec.score = fs.candidates[chosen].forecast_score;
        }
        out.push(rec);
    }
    out
}

/// 101-point interpolated AP by direct enumeration of every cut-off of the
/// ranked list.
pub fn staircase_ap(records: &[&RefRecord], gt_count: usize, forecast: bool, pr_points: usize) -> Option<f64> {
    if gt_count == 0 {
        return None;
    }
    let mut ranked: Vec<&RefRecord> = records.iter().copied().filter(|r| !r.ignored).collect();
    let score = |r: &RefRecord| if forecast { r.score } else { r.det_score };
    ranked.sort_by(|a, b| score(b).partial_cmp(&score(a)).unwrap().then(a.key.cmp(&b.key)));
    let hit = |r: &RefRecord| if forecast { r.forecast_hit } else { r.current_hit };
    let pr: Vec<(f64, f64)> = (1..=ranked.len())
        .map(|n| {
            let tp = ranked[..n].iter().filter(|r| hit(r)).count();
            (tp as f64 / gt_count as f64, tp as f64 / n as f64)
        })
        .collect();
    let steps = (pr_points - 1) as f64;
    let total: f64 = (0..pr_points)
        .map(|i| {
            let r = i as f64 / steps;
            pr.iter()
                .filter(|(rc, _)| *rc >= r)
                .map(|(_, p)| *p)
                .fold(0.0, f64::max)
        })
        .sum();
    Some(total / pr_points as f64)
}

/// Per-subclass `(AP_det, AP_f)` averaged over threshold pairs.
pub fn reference_aps(scenes: &[EvalScene], cfg: &EvalConfig) -> [(Option<f64>, Option<f64>); 3] {
    let mut counts = [0usize; 3];
    for s in scenes {
        for g in s.gts.iter().filter(|g| g.is_complete()) {
            counts[g.subclass().index()] += 1;
        }
    }
    let pairs: Vec<Vec<RefRecord>> = cfg
        .current_thresholds
        .iter()
        .zip(&cfg.final_thresholds)
        .map(|(&c, &f)| {
            scenes
                .iter()
                .enumerate()
                .flat_map(|(i, s)| reference_match(i, &s.preds, &s.gts, c, f, cfg.k, cfg.rank_by, &cfg.timeline))
                .collect()
        })
        .collect();
    let mut out = [(None, None); 3];
    for s in MotionSubclass::ALL {
        let ap = |forecast: bool| {
            let vals: Option<Vec<f64>> = pairs
                .iter()
                .map(|recs| {
                    let sub: Vec<&RefRecord> = recs.iter().filter(|r| r.subclass == s).collect();
                    staircase_ap(&sub, counts[s.index()], forecast, cfg.pr_points)
                })
                .collect();
            vals.map(|v| v.iter().sum::<f64>() / v.len() as f64)
        };
        out[s.index()] = (ap(false), ap(true));
    }
    out
}

pub fn car_box(center: Vec2, yaw: f64) -> BevBox {
    BevBox::new(center, 4.0, 2.0, yaw).unwrap()
}

/// Ground truth moving along a straight line or a turn, optionally cut
/// short before the horizon.
pub fn random_gt(rng: &mut ChaCha8Rng, id: usize, origin: Vec2, tl: &Timeline) -> GtTrajectory {
    let t = tl.horizon_steps();
    let kind = rng.random_range(0..3);
    let v = Vec2::new(rng.random_range(-6.0..6.0), rng.random_range(-6.0..6.0));
    let turn = rng.random_range(-0.6..0.6);
    let keep = if rng.random_bool(0.2) {
        rng.random_range(1..t)
    } else {
        t
    };
    let boxes = (0..=keep)
        .map(|o| {
            let s = tl.seconds_at(o);
            let c = match kind {
                0 => origin,
                1 => origin + v * s,
                _ => origin + v.rotate(turn * s) * s,
            };
            (o, car_box(c, 0.0))
        })
        .collect();
    let v0 = if kind == 0 { Vec2::ZERO } else { v };
    GtTrajectory::new(format!("gt{id}"), boxes, Some(v0), tl).unwrap()
}

/// A forecast set near `target` with `n` straight-line candidates.
pub fn random_forecast(
    rng: &mut ChaCha8Rng,
    anchor: Vec2,
    end_near: Vec2,
    spread: f64,
    n: usize,
    tl: &Timeline,
) -> ForecastSet {
    let t = tl.horizon_steps();
    let candidates = (0..n)
        .map(|_| {
            let end = end_near + Vec2::new(rng.random_range(-spread..spread), rng.random_range(-spread..spread));
            ForecastCandidate {
                waypoints: (1..=t)
                    .map(|o| anchor + (end - anchor) * (o as f64 / t as f64))
                    .collect(),
                forecast_score: (rng.random_range(1..=10) as f64) / 10.0,
            }
        })
        .collect();
    ForecastSet {
        anchor: car_box(anchor, 0.0),
        det_score: (rng.random_range(1..=8) as f64) / 8.0,
        candidates,
    }
}

/// Micro-instance: at most `max_gt` ground truths and `max_pred` predictions
/// packed into a few meters so that every threshold pair matters.
pub fn micro_scene(rng: &mut ChaCha8Rng, max_gt: usize, max_pred: usize, tl: &Timeline) -> EvalScene {
    let n_gt = rng.random_range(0..=max_gt);
    let n_pred = rng.random_range(0..=max_pred);
    let gts: Vec<GtTrajectory> = (0..n_gt)
        .map(|i| {
            let o = Vec2::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            random_gt(rng, i, o, tl)
        })
        .collect();
    let preds = (0..n_pred)
        .map(|_| {
            let (anchor, end) = match gts.is_empty() || rng.random_bool(0.2) {
                true => {
                    let a = Vec2::new(rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0));
                    (a, a)
                }
                false => {
                    let g = &gts[rng.random_range(0..gts.len())];
                    let jitter = rng.random_range(0.0..3.0);
                    let a = g.current().center()
                        + Vec2::new(rng.random_range(-jitter..=jitter), rng.random_range(-jitter..=jitter));
                    let end = g.boxes().last().unwrap().1.center();
                    (a, end)
                }
            };
            let n = rng.random_range(1..=3);
            random_forecast(rng, anchor, end, 6.0, n, tl)
        })
        .collect();
    EvalScene {
        scene_id: "micro".into(),
        gts,
        preds,
    }
}
