//! Best measurement angle for each objective, and the split of the N_ave maximizer.
use noise_localize::channels::DecoherenceParams;
use noise_localize::optimize::{
    nave_argmax_split, nave_split_critical_d, optimize_theta, Objective, DEFAULT_RESOLUTION,
};

fn main() -> noise_localize::Result<()> {
    let p = DecoherenceParams::symmetric(0.3)?;
    for obj in Objective::ALL {
        let r = optimize_theta(obj, &p, DEFAULT_RESOLUTION)?;
        println!(
            "{:>5}: theta* = {:.9}  value = {:.9}{}",
            obj.label(),
            r.best_theta,
            r.best_value,
            if r.flat { "  (flat)" } else { "" }
        );
    }

    for d in [0.60, 0.62] {
        println!("d = {d}: {:?}", nave_argmax_split(d)?);
    }
    let crit = nave_split_critical_d(0.58, 0.62, 1e-8)?;
    println!("maximizer leaves pi/2 at d = {:.8}", crit.d_star);
    Ok(())
}
