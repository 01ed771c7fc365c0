//! Oracle, constant-position and constant-velocity side by side.
//!
//! `cargo run --example breakdown -- [seed] [vel_sigma]`

use forecast_ap::synth::{run_breakdown_experiment, ExperimentConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().map_or(0, |s| s.parse().expect("seed"));
    let mut cfg = ExperimentConfig::default();
    if let Some(v) = args.next() {
        cfg.noise.vel_sigma = v.parse().expect("vel_sigma");
    }
    println!(
        "seed {seed}, vel_sigma {} m/s, {} scenes",
        cfg.noise.vel_sigma, cfg.scenes
    );
    print!("{}", run_breakdown_experiment(&cfg, seed).unwrap().to_table());
}
