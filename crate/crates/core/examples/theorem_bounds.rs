//! Facet constants and the analytic bounds next to a measured facet count.

use randpoly::analysis::{borgwardt_bound, facet_constant, facet_upper_bound};
use randpoly::{beneath_beyond, sample_polytope, Dimension, Seed};

pub fn run_example() -> randpoly::Result<String> {
    let mut out = String::new();
    for n in 2..=8 {
        out += &format!("F_{n} = {:.12}\n", facet_constant(Dimension::new(n)?)?.value);
    }
    let d = Dimension::new(4)?;
    for m in [100, 400, 1600] {
        let facets = beneath_beyond(&sample_polytope(d, m, Seed::new(m as u64))?, false)?.0.facet_count();
        out += &format!(
            "m={m}: facets {facets}, F_4 m = {:.1}, upper bound {:.3e}, pivot bound {:.1}\n",
            facet_constant(d)?.value * m as f64,
            facet_upper_bound(d, m)?.value,
            borgwardt_bound(d, m)?.value
        );
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> randpoly::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
