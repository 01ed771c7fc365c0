//! Constant-position, constant-velocity and forward-integration forecasts
//! for a pair of detections.

use forecast_ap::baselines::{constant_position, constant_velocity, forward_integrate, Detection, StationarityRerank};
use forecast_ap::{BevBox, ForecastSet, Timeline, Vec2};

fn show(name: &str, sets: &[ForecastSet]) {
    for (i, fs) in sets.iter().enumerate() {
        let wps: Vec<String> = fs.candidates[0]
            .waypoints
            .iter()
            .map(|w| format!("({:.1},{:.1})", w.x, w.y))
            .collect();
        println!("{name:<8} det {i} score {:.2}: {}", fs.det_score, wps.join(" "));
    }
}

fn main() {
    let tl = Timeline::default();
    let dets = vec![
        Detection {
            bbox: BevBox::new(Vec2::new(0.0, 0.0), 4.5, 1.9, 0.0).unwrap(),
            score: 0.9,
            velocity: Vec2::new(2.0, 0.0),
        },
        Detection {
            bbox: BevBox::new(Vec2::new(10.0, 3.0), 4.5, 1.9, 0.0).unwrap(),
            score: 0.6,
            velocity: Vec2::new(0.1, 0.0),
        },
    ];
    show("cp", &constant_position(&dets, &tl));
    show("cv", &constant_velocity(&dets, &tl));
    let turning: Vec<Vec2> = (0..6).map(|t| Vec2::new(2.0, 0.0).rotate(0.2 * t as f64)).collect();
    show(
        "forward",
        &forward_integrate(&dets, &[turning, vec![Vec2::ZERO; 6]], &tl).unwrap(),
    );

    let reranked = StationarityRerank::default().apply(&dets, &tl);
    for (d, r) in dets.iter().zip(&reranked) {
        println!(
            "rerank: score {:.2} -> {:.2} (stationary: {})",
            d.score,
            r.score,
            StationarityRerank::looks_stationary(d, &tl)
        );
    }
}
