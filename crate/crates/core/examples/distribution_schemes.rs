//! Direct distribution of a Bell pair versus localizing it from a GHZ state.
use noise_localize::distribute::{compare_scan, Axis, ComparisonPoint, ScanGrid, ThirdAxis};

fn main() -> noise_localize::Result<()> {
    let pt = ComparisonPoint::new(0.3, 1.5, 0.05)?;
    println!(
        "d = 0.3, theta = 1.5, d3 = 0.05: dN = {:+.6}  dF = {:+.6}  P+ = {:.4}",
        pt.delta_n, pt.delta_f, pt.p_plus
    );

    let grid = ScanGrid {
        d: Axis::new(0.05, 1.0, 20),
        theta: Axis::fixed(1.5),
        third: ThirdAxis::Ratio(Axis::new(0.0, 0.1, 11)),
    };
    let points = compare_scan(&grid)?;
    let wins = points.iter().filter(|p| p.delta_n > 0.0).count();
    println!("GHZ route wins on negativity at {wins} of {} grid points", points.len());
    Ok(())
}
