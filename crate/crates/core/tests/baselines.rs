mod support;

use forecast_ap::baselines::{
    backcast_assemble, constant_position, constant_velocity, forward_integrate, Detection, FutureDetection,
};
use forecast_ap::metrics::forecast_ap;
use forecast_ap::synth::{simulate_world, ExperimentConfig, NoiseModel};
use forecast_ap::{EvalConfig, EvalScene, GtTrajectory, MotionSubclass, Timeline, Vec2};
use proptest::prelude::*;
use support::car_box;

fn det(p: Vec2, v: Vec2, score: f64) -> Detection {
    Detection {
        bbox: car_box(p, 0.0),
        score,
        velocity: v,
    }
}

fn gt_as_detections(gts: &[GtTrajectory], tl: &Timeline) -> (Vec<Detection>, Vec<FutureDetection>) {
    let t = tl.horizon_steps();
    let current = gts
        .iter()
        .map(|g| Detection {
            bbox: *g.current(),
            score: 1.0,
            velocity: Vec2::ZERO,
        })
        .collect();
    let future = gts
        .iter()
        .map(|g| FutureDetection {
            position: g.center_at(t).unwrap(),
            score: 1.0,
            back_offsets: (0..t)
                .map(|i| g.center_at(t - i - 1).unwrap() - g.center_at(t - i).unwrap())
                .collect(),
        })
        .collect();
    (current, future)
}

#[test]
fn backcast_of_ground_truth_scores_perfectly() {
    let cfg = ExperimentConfig {
        scenes: 20,
        noise: NoiseModel::zero(),
        ..ExperimentConfig::default()
    };
    let tl = cfg.timeline;
    let scenes: Vec<EvalScene> = simulate_world(&cfg, 3)
        .unwrap()
        .into_iter()
        .map(|s| {
            let (current, future) = gt_as_detections(&s.gts, &tl);
            let out = backcast_assemble(&current, &future, &tl, f64::INFINITY);
            assert_eq!(out.discarded, 0);
            EvalScene {
                scene_id: s.scene_id,
                gts: s.gts,
                preds: out.forecasts,
            }
        })
        .collect();
    for s in MotionSubclass::ALL {
        assert_eq!(forecast_ap(&scenes, &EvalConfig::car(), s).unwrap(), Some(1.0), "{s}");
    }
}

#[test]
fn backcast_radius_gate_discards_far_chains() {
    let tl = Timeline::default();
    let current = [det(Vec2::ZERO, Vec2::ZERO, 0.9)];
    let future = [FutureDetection {
        position: Vec2::new(30.0, 0.0),
        score: 0.5,
        back_offsets: vec![Vec2::new(-1.0, 0.0); 6],
    }];
    let gated = backcast_assemble(&current, &future, &tl, 10.0);
    assert!(gated.forecasts.is_empty());
    assert_eq!(gated.discarded, 1);
    let open = backcast_assemble(&current, &future, &tl, f64::INFINITY);
    assert_eq!(open.forecasts.len(), 1);
}

fn vec2() -> impl Strategy<Value = Vec2> {
    (-50.0..50.0f64, -50.0..50.0f64).prop_map(|(x, y)| Vec2::new(x, y))
}

fn velocity() -> impl Strategy<Value = Vec2> {
    (-15.0..15.0f64, -15.0..15.0f64).prop_map(|(x, y)| Vec2::new(x, y))
}

proptest! {
    #[test]
    fn zero_velocity_is_constant_position(ps in prop::collection::vec((vec2(), 0.0..=1.0f64), 0..6)) {
        let tl = Timeline::default();
        let dets: Vec<Detection> = ps.iter().map(|&(p, s)| det(p, Vec2::ZERO, s)).collect();
        prop_assert_eq!(constant_velocity(&dets, &tl), constant_position(&dets, &tl));
    }

    #[test]
    fn constant_steps_reproduce_constant_velocity(ps in prop::collection::vec((vec2(), velocity()), 1..6)) {
        let tl = Timeline::default();
        let dets: Vec<Detection> = ps.iter().map(|&(p, v)| det(p, v, 0.5)).collect();
        let steps: Vec<Vec<Vec2>> = ps.iter().map(|&(_, v)| vec![v; tl.horizon_steps()]).collect();
        let fwd = forward_integrate(&dets, &steps, &tl).unwrap();
        let cv = constant_velocity(&dets, &tl);
        for (a, b) in fwd.iter().zip(&cv) {
            for (wa, wb) in a.candidates[0].waypoints.iter().zip(&b.candidates[0].waypoints) {
                prop_assert!(wa.distance(*wb) < 1e-9);
            }
        }
    }

    #[test]
    fn backcast_conserves_candidates(
        anchors in prop::collection::vec(vec2(), 0..5),
        futures in prop::collection::vec((vec2(), velocity(), 0.0..=1.0f64), 0..8),
        radius in prop_oneof![Just(f64::INFINITY), 1.0..40.0f64],
    ) {
        let tl = Timeline::default();
        let current: Vec<Detection> = anchors.iter().map(|&p| det(p, Vec2::ZERO, 0.8)).collect();
        let future: Vec<FutureDetection> = futures
            .iter()
            .map(|&(p, v, s)| FutureDetection { position: p, score: s, back_offsets: vec![v * -tl.dt(); tl.horizon_steps()] })
            .collect();
        let out = backcast_assemble(&current, &future, &tl, radius);
        let candidates: usize = out.forecasts.iter().map(|f| f.candidates.len()).sum();
        prop_assert_eq!(candidates, future.len() - out.discarded);
        for fs in &out.forecasts {
            let scores: Vec<f64> = fs.candidates.iter().map(|c| c.forecast_score).collect();
            prop_assert!(scores.windows(2).all(|w| w[0] >= w[1]));
        }
    }
}
