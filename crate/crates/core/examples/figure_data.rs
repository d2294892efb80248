//! Generate a figure's data table in memory and print it as CSV.
use noise_localize::cli::{figure_report, FigureConfig};

fn main() -> noise_localize::Result<()> {
    let id = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let cfg = FigureConfig {
        grid_points: 11,
        ..FigureConfig::default()
    };
    let report = figure_report(id, &cfg)?;
    print!("{}", report.to_csv(6));
    Ok(())
}
