//! Synthetic world to JSON files and back, evaluated from disk with PR
//! curves dumped as CSV.

use forecast_ap::baselines::constant_velocity;
use forecast_ap::io;
use forecast_ap::synth::{simulate_world, ExperimentConfig};
use forecast_ap::{evaluate, EvalConfig, ForecastSet};

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig {
        scenes: 20,
        ..ExperimentConfig::default()
    };
    let world = simulate_world(&cfg, 5).unwrap();
    let gt: Vec<_> = world.iter().map(|s| (s.scene_id.clone(), s.gts.clone())).collect();
    let preds: Vec<(String, Vec<ForecastSet>)> = world
        .iter()
        .map(|s| {
            (
                s.scene_id.clone(),
                constant_velocity(&s.detector.detections, &cfg.timeline),
            )
        })
        .collect();
    let gt_path = dir.path().join("gt.json");
    let pred_path = dir.path().join("pred.json");
    io::write_json(&gt_path, &io::gt_file(cfg.timeline, &gt)).unwrap();
    io::write_json(&pred_path, &io::pred_file(&preds)).unwrap();

    let gt_data = io::load_gt(&gt_path).unwrap();
    let timeline = gt_data.timeline;
    let pred_data = io::load_pred(&pred_path, &timeline).unwrap();
    let scenes = io::pair_scenes(gt_data, pred_data, &pred_path).unwrap();
    let report = evaluate(&scenes, &EvalConfig::car().with_timeline(timeline)).unwrap();
    print!("{}", report.to_table());

    let written = io::write_pr_csv(dir.path().join("pr"), &report).unwrap();
    println!(
        "{} PR curves, e.g. {}",
        written.len(),
        written[0].file_name().unwrap().to_string_lossy()
    );
    println!("gt sha256 {}", report.inputs.gt_sha256);
}
