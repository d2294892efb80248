//! Damp a GHZ state, measure qubit 3 and inspect both collapsed pairs.
use noise_localize::channels::DecoherenceParams;
use noise_localize::localize::{amplitude_damped_ghz, measure_qubit3};
use noise_localize::measures::entanglement_report;
use noise_localize::states::MeasurementBasis;

fn main() -> noise_localize::Result<()> {
    let p = DecoherenceParams::new(0.3, 0.3, 0.1)?;
    let rho = amplitude_damped_ghz(&p)?;
    let basis = MeasurementBasis::new(1.2, 0.0)?;

    for branch in measure_qubit3(&rho, &basis)? {
        match branch.collapsed {
            Some(pair) => {
                let r = entanglement_report(&pair)?;
                println!(
                    "{}: P = {:.6}  N = {:.6}  F = {:.6}  teleportation-useful = {}",
                    branch.label.symbol(),
                    branch.probability,
                    r.negativity,
                    r.fef,
                    r.useful_for_teleportation
                );
            }
            None => println!(
                "{}: P = {:.3e} (branch never occurs)",
                branch.label.symbol(),
                branch.probability
            ),
        }
    }
    Ok(())
}
