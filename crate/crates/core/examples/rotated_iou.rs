//! Rotated bird's-eye-view IoU for a few box pairs.

use forecast_ap::geometry::{bev_iou, intersection_area};
use forecast_ap::{BevBox, Vec2};

fn main() {
    let square = BevBox::new(Vec2::ZERO, 2.0, 2.0, 0.0).unwrap();
    let pairs = [
        ("identical", square),
        ("shifted 1 m", BevBox::new(Vec2::new(1.0, 0.0), 2.0, 2.0, 0.0).unwrap()),
        (
            "rotated 45 deg",
            BevBox::new(Vec2::ZERO, 2.0, 2.0, std::f64::consts::FRAC_PI_4).unwrap(),
        ),
        (
            "edge touching",
            BevBox::new(Vec2::new(2.0, 0.0), 2.0, 2.0, 0.0).unwrap(),
        ),
        ("car across", BevBox::new(Vec2::new(0.5, 0.5), 4.5, 1.9, 1.2).unwrap()),
    ];
    for (name, other) in pairs {
        println!(
            "{name:<16} intersection {:>7.4}  iou {:>7.4}",
            intersection_area(&square, &other),
            bev_iou(&square, &other)
        );
    }
}
