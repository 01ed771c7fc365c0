//! ADE/FDE at fixed recall reward ranking parked cars first; forecasting AP
//! does not.

use forecast_ap::baselines::{constant_position, constant_position_reranked, StationarityRerank};
use forecast_ap::synth::{simulate_world, ExperimentConfig, NoiseModel};
use forecast_ap::{evaluate, EvalConfig, EvalScene};

fn main() {
    let cfg = ExperimentConfig {
        scenes: 100,
        noise: NoiseModel {
            vel_sigma: 0.2,
            ..NoiseModel::default()
        },
        ..ExperimentConfig::default()
    };
    let world = simulate_world(&cfg, 9).unwrap();
    let tl = cfg.timeline;
    for (name, rerank) in [("plain", false), ("stationary first", true)] {
        let scenes: Vec<EvalScene> = world
            .iter()
            .map(|s| EvalScene {
                scene_id: s.scene_id.clone(),
                gts: s.gts.clone(),
                preds: if rerank {
                    constant_position_reranked(&s.detector.detections, &tl, &StationarityRerank::default())
                } else {
                    constant_position(&s.detector.detections, &tl)
                },
            })
            .collect();
        let r = evaluate(&scenes, &EvalConfig::car()).unwrap();
        let fde: Vec<String> = r
            .legacy
            .at_recall
            .iter()
            .map(|p| format!("FDE@{:.0}% {:.2}", p.recall * 100.0, p.fde.unwrap_or(f64::NAN)))
            .collect();
        println!(
            "constant position, {name:<17} {}  miss rate {:.3}  mAP_f {:.3}",
            fde.join("  "),
            r.legacy.miss_rate.unwrap_or(f64::NAN),
            r.map_f
        );
    }
}
