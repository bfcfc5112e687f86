//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use randpoly::hull::brute_force_facets;
use randpoly::{Dimension, PointCloud, Polytope, Seed};

pub fn dim(n: usize) -> Dimension {
    Dimension::new(n).unwrap()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Coefficients `mu` with `sum mu_i p_i = x`, via a column-pivoted QR-free LU.
pub fn cone_coords(points: &[&[f64]], x: &[f64]) -> Option<Vec<f64>> {
    let k = points.len();
    let a = DMatrix::from_fn(k, k, |i, j| points[j][i]);
    a.lu()
        .solve(&DVector::from_column_slice(x))
        .map(|v| v.iter().copied().collect())
}

/// The facet of `Y = conv(0, cloud)` not containing the origin whose cone
/// contains `v`, by scanning every brute-force facet. `None` when the ray
/// leaves `Y` through a facet at the origin.
pub fn pierced_facet(cloud: &PointCloud, v: &[f64]) -> Option<Vec<usize>> {
    let y = brute_force_facets(cloud, true).expect("oracle hull");
    let origin = cloud.len();
    let mut hits = Vec::new();
    for f in y.facets() {
        if f.vertices.contains(&origin) {
            continue;
        }
        let pts: Vec<&[f64]> = f.vertices.iter().map(|&id| y.vertex(id)).collect();
        if let Some(mu) = cone_coords(&pts, v) {
            if mu.iter().all(|&c| c >= 0.0) {
                hits.push(f.vertices.clone());
            }
        }
    }
    assert!(hits.len() <= 1, "ray pierces several facets: {hits:?}");
    hits.pop()
}

/// Vertex ids of the 2D convex hull of `pts` (monotone chain, strict turns).
pub fn hull2d(pts: &[[f64; 2]]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| {
        pts[a][0]
            .total_cmp(&pts[b][0])
            .then(pts[a][1].total_cmp(&pts[b][1]))
    });
    let cross = |o: usize, a: usize, b: usize| {
        (pts[a][0] - pts[o][0]) * (pts[b][1] - pts[o][1])
            - (pts[a][1] - pts[o][1]) * (pts[b][0] - pts[o][0])
    };
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], i) <= 0.0 {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], i) <= 0.0 {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Index of the facet through which the ray `R+ dir` leaves `poly`.
pub fn exit_facet(poly: &Polytope, dir: &[f64]) -> usize {
    let mut best = usize::MAX;
    let mut best_t = f64::INFINITY;
    for (i, f) in poly.facets().iter().enumerate() {
        let d = dot(&f.normal, dir);
        if d > 0.0 {
            let s = f.offset / d;
            if s < best_t {
                best_t = s;
                best = i;
            }
        }
    }
    best
}

/// Counts the facets crossed by an angular sweep of rays in the plane with
/// orthonormal basis `(u1, u2)`. Neighbouring rays that leave through
/// different facets are bisected until every facet in between is found.
pub fn sweep_section_facets(poly: &Polytope, u1: &[f64], u2: &[f64], rays: usize) -> usize {
    let at = |t: f64| -> usize {
        let dir: Vec<f64> = u1.iter().zip(u2).map(|(a, b)| t.cos() * a + t.sin() * b).collect();
        exit_facet(poly, &dir)
    };
    fn refine(
        at: &dyn Fn(f64) -> usize,
        seen: &mut std::collections::BTreeSet<usize>,
        (t0, f0): (f64, usize),
        (t1, f1): (f64, usize),
    ) {
        if f0 == f1 || t1 - t0 < 1e-13 {
            return;
        }
        let tm = 0.5 * (t0 + t1);
        let fm = at(tm);
        seen.insert(fm);
        refine(at, seen, (t0, f0), (tm, fm));
        refine(at, seen, (tm, fm), (t1, f1));
    }
    let mut seen = std::collections::BTreeSet::new();
    let step = 2.0 * std::f64::consts::PI / rays as f64;
    let samples: Vec<(f64, usize)> = (0..=rays).map(|r| (r as f64 * step, at(r as f64 * step))).collect();
    for w in samples.windows(2) {
        seen.insert(w[0].1);
        refine(&at, &mut seen, w[0], w[1]);
    }
    seen.len()
}

pub fn seed(value: u64) -> Seed {
    Seed::new(value)
}
