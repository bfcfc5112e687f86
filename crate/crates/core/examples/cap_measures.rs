//! Cap and belt measures, their small-height asymptotics, and `delta(n, m)`.

use randpoly::analysis::threshold_constant;
use randpoly::geometry::*;

pub fn run_example() -> randpoly::Result<String> {
    let mut out = String::from("n,h,cap_volume,cap_surface,asymptotic_ratio\n");
    for n in [2, 3, 5, 8] {
        let d = Dimension::new(n)?;
        for h in [1e-6, 1e-3, 0.1, 0.5, 1.0] {
            out += &format!(
                "{n},{h},{:.10e},{:.10e},{:.6}\n",
                cap_volume(d, h)?,
                cap_surface(d, h)?,
                cap_volume_asymptotic_ratio(d, h)?
            );
        }
    }
    let d = Dimension::new(4)?;
    out += &format!("belt_surface(4, 0.5) = {:.10}\n", belt_surface(d, 0.5)?);
    for m in [100, 1000, 10_000] {
        out += &format!("delta(4, {m}) = {:.6}\n", solve_delta(d, m, threshold_constant(d))?);
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> randpoly::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
