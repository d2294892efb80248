//! Noise strength at which localized entanglement disappears.
use std::f64::consts::{FRAC_PI_2, PI};

use noise_localize::optimize::{sudden_death_threshold, Objective, ThresholdOutcome};

fn main() -> noise_localize::Result<()> {
    for (obj, theta) in [
        (Objective::NPlus, FRAC_PI_2),
        (Objective::NPlus, 2.0 * PI / 3.0),
        (Objective::NMinus, PI / 3.0),
        (Objective::DepolarizedN, FRAC_PI_2),
        (Objective::FPlus, FRAC_PI_2),
    ] {
        match sudden_death_threshold(theta, obj)? {
            ThresholdOutcome::Found(r) => println!("{:>5} at theta = {theta:.4}: d* = {:.10}", obj.label(), r.d_star),
            ThresholdOutcome::NoThreshold { value_at_one, .. } => {
                println!(
                    "{:>5} at theta = {theta:.4}: never vanishes (value at d = 1: {value_at_one:.4})",
                    obj.label()
                )
            }
        }
    }
    Ok(())
}
