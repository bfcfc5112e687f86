//! Random polytopes from uniform points on the unit sphere.
//!
//! * [`sampler`]: seeded draws of the model `P(n, m)`.
//! * [`hull`]: Beneath-Beyond facet enumeration with a brute-force oracle.
//! * [`shadow`]: the dimension-by-dimension shadow-vertex LP solver on
//!   `Y = conv(0, a_1, ..., a_m)` and plane-section edge counting.
//! * [`geometry`]: ball, cap and belt measures; the `delta(n, m)` threshold.
//! * [`analysis`]: facet constants, survival probabilities and pivot bounds.
//! * [`harness`]: Monte Carlo scaling experiments and CSV/JSON reports.

pub mod analysis;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod hull;
pub mod linalg;
pub mod sampler;
pub mod shadow;

pub use error::{Error, Result};
pub use geometry::Dimension;
pub use hull::{beneath_beyond, brute_force_facets, FacetRecord, HullStats, Polytope};
pub use sampler::{sample_polytope, PointCloud, Seed, UnitPoint};
