//! Static / linear / non-linear labels for ground truth and for forecasts.

use forecast_ap::subclass::{derive_prediction_subclass, derive_subclass};
use forecast_ap::synth::{AgentSpec, Motion};
use forecast_ap::{BevBox, ForecastCandidate, ForecastSet, Timeline, Vec2};

fn main() {
    let tl = Timeline::default();
    let first = BevBox::new(Vec2::ZERO, 4.0, 2.0, 0.0).unwrap();
    let v = Vec2::new(2.0, 0.0);
    let ends = [
        ("parked", first),
        ("straight", BevBox::new(Vec2::new(6.0, 0.0), 4.0, 2.0, 0.0).unwrap()),
        (
            "left turn",
            BevBox::new(Vec2::new(6.0, 6.0), 4.0, 2.0, std::f64::consts::FRAC_PI_2).unwrap(),
        ),
    ];
    for (name, last) in ends {
        println!(
            "{name:<10} -> {}",
            derive_subclass(&first, &last, v, tl.horizon_seconds())
        );
    }

    for motion in [
        Motion::Static,
        Motion::Linear { speed: 8.0 },
        Motion::Arc {
            speed: 7.0,
            turn_rate: 0.6,
        },
    ] {
        let spec = AgentSpec {
            motion,
            spawn: Vec2::new(10.0, -5.0),
            heading: 0.4,
            box_size: (4.5, 1.9),
        };
        let gt = spec.trajectory("agent".into(), &tl).unwrap();
        println!("{motion:?} -> {}", gt.subclass());
    }

    // An unmatched forecast is labelled from its own path.
    let r = 8.0;
    let arc = (1..=6)
        .map(|o| {
            let a = std::f64::consts::FRAC_PI_2 * o as f64 / 6.0;
            Vec2::new(r * a.sin(), r * (1.0 - a.cos()))
        })
        .collect();
    let fs = ForecastSet::new(
        first,
        0.7,
        vec![ForecastCandidate {
            waypoints: arc,
            forecast_score: 0.7,
        }],
        &tl,
    )
    .unwrap();
    println!("quarter-arc forecast -> {}", derive_prediction_subclass(&fs, 0, &tl));
}
