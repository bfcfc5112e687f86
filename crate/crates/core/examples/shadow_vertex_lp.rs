//! Solve `max <v, x>` subject to `<a_i, x> <= 1` with the shadow-vertex walk.

use randpoly::sampler::random_direction;
use randpoly::shadow::{solve_shadow_vertex, LpInstance};
use randpoly::{sample_polytope, Dimension, Seed};

pub fn run_example() -> randpoly::Result<String> {
    let n = Dimension::new(5)?;
    let cloud = sample_polytope(n, 200, Seed::new(11))?;
    let v = random_direction(n, Seed::new(11).with_stream(1)).into_inner();
    let sol = solve_shadow_vertex(&LpInstance::new(cloud, v.clone())?)?;
    let mut out = format!("pivots per stage {:?}, total {}\n", sol.pivots_by_dim, sol.total_pivots);
    match (&sol.optimal_facet, &sol.primal) {
        (Some(facet), Some(x)) => {
            let value: f64 = x.iter().zip(&v).map(|(a, b)| a * b).sum();
            out += &format!("optimal basis {facet:?}\nx* = {x:?}\nobjective {value}\n");
        }
        _ => out += "unbounded\n",
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> randpoly::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
