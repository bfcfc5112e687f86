//! Seeded sampling of `m` i.i.d. uniform points on the unit sphere `S^{n-1}`.
//!
//! Streams: a [`Seed`] is a `(value, stream)` pair. The generator for a pair
//! is `Xoshiro256PlusPlus` seeded (via SplitMix64) with
//! `splitmix(value ^ splitmix(stream + GOLDEN))`, so distinct stream ids give
//! independent, reproducible sequences that can be consumed in parallel.
//! Normal variates come from the ziggurat sampler in `rand_distr`.

use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Dimension;
use crate::harness::format_sig;
use crate::linalg::dot;

/// Generator type behind every stream.
pub type StreamRng = Xoshiro256PlusPlus;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes several integers into one stream id.
pub fn stream_id(parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(0x005E_ED0F_5EED_u64, |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed {
    pub value: u64,
    pub stream: u64,
}

impl Seed {
    pub fn new(value: u64) -> Self {
        Seed { value, stream: 0 }
    }

    /// The same base seed on another stream.
    pub fn with_stream(self, stream: u64) -> Self {
        Seed {
            value: self.value,
            stream,
        }
    }

    pub fn rng(self) -> StreamRng {
        let mixed = splitmix64(self.value ^ splitmix64(self.stream.wrapping_add(GOLDEN)));
        Xoshiro256PlusPlus::seed_from_u64(mixed)
    }
}

/// A point of the unit sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitPoint(Vec<f64>);

impl UnitPoint {
    /// Normalizes `coords`; fails on (near) zero vectors.
    pub fn normalized(mut coords: Vec<f64>) -> Result<Self> {
        let len = dot(&coords, &coords).sqrt();
        if !(len > 1e-100) || !len.is_finite() {
            return Err(Error::invalid("cannot normalize a zero or non-finite vector"));
        }
        coords.iter_mut().for_each(|c| *c /= len);
        Ok(UnitPoint(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

/// Draws one uniform point on `S^{n-1}`: `n` standard normals, normalized.
pub fn sample_sphere_point<R: Rng + ?Sized>(n: Dimension, rng: &mut R) -> UnitPoint {
    loop {
        let coords: Vec<f64> = (0..n.get()).map(|_| rng.sample(StandardNormal)).collect();
        if let Ok(p) = UnitPoint::normalized(coords) {
            return p;
        }
    }
}

/// An ordered set of points in `R^n`, stored row-major.
///
/// Clouds produced by [`sample_polytope`] lie on the unit sphere; clouds read
/// from user input only need to be finite and pairwise distinct.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    n: Dimension,
    coords: Vec<f64>,
    seed: Option<Seed>,
}

impl PointCloud {
    /// Builds a cloud from explicit rows.
    pub fn from_rows(n: Dimension, rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::invalid("a point cloud needs at least one point"));
        }
        let mut coords = Vec::with_capacity(rows.len() * n.get());
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n.get() {
                return Err(Error::invalid(format!(
                    "point {i} has {} coordinates, expected {n}",
                    r.len()
                )));
            }
            if r.iter().any(|c| !c.is_finite()) {
                return Err(Error::invalid(format!("point {i} has a non-finite coordinate")));
            }
            coords.extend_from_slice(r);
        }
        let cloud = PointCloud {
            n,
            coords,
            seed: None,
        };
        if let Some((i, j)) = cloud.duplicate_pair() {
            return Err(Error::invalid(format!("points {i} and {j} coincide")));
        }
        Ok(cloud)
    }

    #[inline]
    pub fn dim(&self) -> Dimension {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.coords.len() / self.n.get()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        let n = self.n.get();
        &self.coords[i * n..(i + 1) * n]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.n.get())
    }

    pub fn seed(&self) -> Option<Seed> {
        self.seed
    }

    /// Finds two identical points, if any (lexicographic sort, then neighbours).
    pub fn duplicate_pair(&self) -> Option<(usize, usize)> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| {
            self.point(a)
                .iter()
                .zip(self.point(b))
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        idx.windows(2)
            .find(|w| self.point(w[0]) == self.point(w[1]))
            .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
    }
}

impl PointCloud {
    /// CSV with header `x1,...,xn` and 17 significant digits per coordinate.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header: Vec<String> = (1..=self.n.get()).map(|i| format!("x{i}")).collect();
        w.write_record(&header).expect("in-memory csv");
        for p in self.points() {
            let row: Vec<String> = p.iter().map(|c| format_sig(*c, 17)).collect();
            w.write_record(&row).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
    }

    /// Parses the format written by [`PointCloud::to_csv`]; the dimension is the column count.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        let n = rd
            .headers()
            .map_err(|e| Error::invalid(format!("cloud csv header: {e}")))?
            .len();
        let mut rows = Vec::new();
        for (i, rec) in rd.records().enumerate() {
            let rec = rec.map_err(|e| Error::invalid(format!("cloud csv row {}: {e}", i + 1)))?;
            let row = rec
                .iter()
                .map(|c| {
                    c.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::invalid(format!("cloud csv row {}: {c:?}: {e}", i + 1)))
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        PointCloud::from_rows(Dimension::new(n)?, &rows)
    }
}

/// Samples `m` points of the model `P(n, m)` in deterministic order.
pub fn sample_polytope(n: Dimension, m: usize, seed: Seed) -> Result<PointCloud> {
    if m == 0 {
        return Err(Error::invalid("m must be at least 1"));
    }
    let mut rng = seed.rng();
    let mut coords = Vec::with_capacity(m * n.get());
    for _ in 0..m {
        coords.extend(sample_sphere_point(n, &mut rng).into_inner());
    }
    let cloud = PointCloud {
        n,
        coords,
        seed: Some(seed),
    };
    assert!(
        cloud.duplicate_pair().is_none(),
        "sphere sample produced coincident points"
    );
    Ok(cloud)
}

/// A uniformly random unit direction drawn from its own stream.
pub fn random_direction(n: Dimension, seed: Seed) -> UnitPoint {
    sample_sphere_point(n, &mut seed.rng())
}
