//! Draw a seeded cloud on the sphere and print it as CSV.
//!
//! ```text
//! cargo run --example sample_sphere
//! ```

use randpoly::{sample_polytope, Dimension, Seed};

pub fn run_example() -> randpoly::Result<String> {
    let cloud = sample_polytope(Dimension::new(3)?, 8, Seed::new(2024))?;
    let norms: Vec<f64> = cloud.points().map(|p| p.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    assert!(norms.iter().all(|r| (r - 1.0).abs() < 1e-12));
    Ok(cloud.to_csv())
}

#[allow(dead_code)]
fn main() -> randpoly::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
