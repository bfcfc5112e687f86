//! A small pivot-count experiment with a log-log exponent fit.

use randpoly::harness::{fit_exponent, render_report, run_experiment, ExperimentConfig, ExperimentKind, ReportFormat};
use randpoly::Dimension;

pub fn run_example() -> randpoly::Result<String> {
    let cfg = ExperimentConfig::new(ExperimentKind::ShadowPivots, Dimension::new(3)?, vec![100, 200, 400, 800], 40, 1);
    let records = run_experiment(&cfg)?;
    let fit = fit_exponent(&records)?;
    let mut out = render_report(&records, Some(&fit), ReportFormat::Csv)?;
    out += &format!("exponent {:.3} (r^2 = {:.3})\n", fit.exponent, fit.r_squared);
    Ok(out)
}

#[allow(dead_code)]
fn main() -> randpoly::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
