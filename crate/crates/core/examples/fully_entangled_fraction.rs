//! Negativity and fully entangled fraction of Werner-like states.
use noise_localize::measures::{entanglement_report, fef};
use noise_localize::qmat::DensityMatrix;
use noise_localize::states::bell_plus;

fn main() -> noise_localize::Result<()> {
    let bell = bell_plus().projector();
    let noise = DensityMatrix::maximally_mixed(2)?;
    for w in [1.0, 0.75, 1.0 / 3.0, 0.2, 0.0] {
        let mixed = bell.matrix().scale(w.into());
        let rest = noise.matrix().scale((1.0 - w).into());
        let mut m = mixed.clone();
        for i in 0..4 {
            for j in 0..4 {
                m.set(i, j, mixed.get(i, j) + rest.get(i, j));
            }
        }
        let rho = DensityMatrix::new(m)?;
        let report = entanglement_report(&rho)?;
        let (_, parts) = fef(&rho)?;
        println!(
            "w = {w:.3}  N = {:.4}  F = {:.4}  singular values = {:.3?}",
            report.negativity, report.fef, parts.singular_values
        );
    }
    Ok(())
}
