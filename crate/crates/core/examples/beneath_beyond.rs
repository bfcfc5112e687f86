//! Build a hull point by point and compare it with the brute-force oracle.

use randpoly::hull::BeneathBeyond;
use randpoly::{brute_force_facets, sample_polytope, Dimension, Seed};

pub fn run_example() -> randpoly::Result<String> {
    let cloud = sample_polytope(Dimension::new(4)?, 40, Seed::new(7))?;
    let mut bb = BeneathBeyond::new(&cloud, false)?;
    let mut out = String::from("inserted,facets,sidedness_tests\n");
    while bb.step()? {
        if bb.inserted() % 5 == 0 {
            out += &format!("{},{},{}\n", bb.inserted(), bb.facet_count(), bb.stats().sidedness_tests);
        }
    }
    let (poly, stats) = bb.finish();
    assert_eq!(poly.facet_sets(), brute_force_facets(&cloud, false)?.facet_sets());
    out += &format!("final: {} facets, {} created, {} deleted\n", poly.facet_count(), stats.facets_created, stats.facets_deleted);
    Ok(out)
}

#[allow(dead_code)]
fn main() -> randpoly::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
