//! Kraus channels: completeness and their action on a single qubit.
use noise_localize::channels::{amplitude_damping, depolarizing};
use noise_localize::qmat::ComplexMatrix;

fn main() -> noise_localize::Result<()> {
    // |1><1| relaxes towards |0> under damping, and towards I/2 under depolarizing noise.
    let excited = ComplexMatrix::diag(&[0.0, 1.0])?;
    for d in [0.0, 0.25, 0.5, 1.0] {
        let amp = amplitude_damping(d)?;
        let dep = depolarizing(d)?;
        let a = amp.apply(&excited);
        let b = dep.apply(&excited);
        println!(
            "d = {d:.2}  damping: p1 = {:.3} (residual {:.1e})  depolarizing: p1 = {:.3} (residual {:.1e})",
            a.get(1, 1).re,
            amp.completeness_residual(),
            b.get(1, 1).re,
            dep.completeness_residual()
        );
    }
    Ok(())
}
