//! Attaching future detections to current ones by walking them back in time.

use forecast_ap::baselines::{backcast_assemble, Detection, FutureDetection};
use forecast_ap::{BevBox, Timeline, Vec2};

fn main() {
    let tl = Timeline::default();
    let current: Vec<Detection> = [Vec2::new(0.0, 0.0), Vec2::new(10.0, 0.0)]
        .iter()
        .map(|&c| Detection {
            bbox: BevBox::new(c, 4.5, 1.9, 0.0).unwrap(),
            score: 0.8,
            velocity: Vec2::ZERO,
        })
        .collect();
    let future = vec![
        // Straight ahead from the first anchor.
        FutureDetection {
            position: Vec2::new(6.0, 0.0),
            score: 0.7,
            back_offsets: vec![Vec2::new(-1.0, 0.0); 6],
        },
        // Veering left from the first anchor.
        FutureDetection {
            position: Vec2::new(5.0, 3.0),
            score: 0.4,
            back_offsets: (0..6)
                .map(|i| Vec2::new(-5.0 / 6.0, if i < 3 { -1.0 } else { 0.0 }))
                .collect(),
        },
        // Ends near the second anchor's backcast start.
        FutureDetection {
            position: Vec2::new(15.4, 0.0),
            score: 0.9,
            back_offsets: vec![Vec2::new(-1.0, 0.0); 6],
        },
    ];
    let out = backcast_assemble(&current, &future, &tl, f64::INFINITY);
    for fs in &out.forecasts {
        println!("anchor ({:.1}, {:.1})", fs.anchor.center().x, fs.anchor.center().y);
        for c in &fs.candidates {
            let end = c.final_waypoint();
            println!(
                "  candidate score {:.1} ends at ({:.1}, {:.1})",
                c.forecast_score, end.x, end.y
            );
        }
    }
    println!("discarded {}", out.discarded);
}
