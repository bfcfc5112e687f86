//! Facet enumeration for simplicial hulls of points in general position.
//!
//! [`BeneathBeyond`] is the incremental double-description construction:
//! points are inserted in cloud order, every current facet is tested against
//! the new point, facets that see it are deleted and each horizon ridge is
//! coned to the new point. [`brute_force_facets`] tests every `n`-subset
//! directly and serves as the correctness oracle.
//!
//! Facets are stored as `(vertex ids, outward unit normal, offset)`. The
//! offset is the signed distance of the facet hyperplane from the origin,
//! so it is zero for facets through the origin and negative when the
//! origin lies beyond the facet.
//!
//! When the origin is part of the input (`Y = conv(0, a_1, ..., a_m)`) it
//! gets vertex id `m`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Dimension;
use crate::linalg::{dot, hyperplane_through, simplex_det, Hyperplane};
use crate::sampler::PointCloud;

/// Relative sidedness tolerance: a point is beyond a facet iff
/// `<b, a> - h > SIDE_TOL * max(1, |h|)`.
pub const SIDE_TOL: f64 = 1e-12;

/// Minimum spanning-determinant magnitude of a facet simplex.
pub const MIN_SPANNING_DET: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FacetRecord {
    /// Sorted vertex ids.
    pub vertices: Vec<usize>,
    /// Outward unit normal.
    pub normal: Vec<f64>,
    /// Signed distance of the facet hyperplane from the origin.
    pub offset: f64,
}

impl FacetRecord {
    /// `<normal, x> - offset`; positive means beyond the facet.
    #[inline]
    pub fn side(&self, x: &[f64]) -> f64 {
        dot(&self.normal, x) - self.offset
    }
}

/// Operation counters for one Beneath-Beyond run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct HullStats {
    /// Point-versus-facet sidedness evaluations.
    pub sidedness_tests: u64,
    pub facets_created: u64,
    pub facets_deleted: u64,
    /// Inserted points that were already inside the current hull.
    pub skipped_interior: u64,
    /// Facet count after the initial simplex and after every insertion.
    pub facet_counts: Vec<usize>,
}

/// A closed simplicial hull with its ridge adjacency.
#[derive(Debug, Clone)]
pub struct Polytope {
    cloud: PointCloud,
    includes_origin: bool,
    origin: Vec<f64>,
    facets: Vec<FacetRecord>,
    ridges: BTreeMap<Vec<usize>, Vec<usize>>,
}

impl Polytope {
    fn assemble(cloud: PointCloud, includes_origin: bool, mut facets: Vec<FacetRecord>) -> Self {
        facets.sort_by(|a, b| a.vertices.cmp(&b.vertices));
        let mut ridges: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (fi, f) in facets.iter().enumerate() {
            for skip in 0..f.vertices.len() {
                let ridge = ridge_of(&f.vertices, skip);
                ridges.entry(ridge).or_default().push(fi);
            }
        }
        let origin = vec![0.0; cloud.dim().get()];
        Polytope {
            cloud,
            includes_origin,
            origin,
            facets,
            ridges,
        }
    }

    /// Builds a polytope from known simplicial facets (vertex id lists).
    ///
    /// Normals are oriented away from the centroid of all vertices used, so
    /// this is meant for hand-made fixtures whose facets are already known
    /// (e.g. the cross-polytope, which is not in general position).
    pub fn from_facets(cloud: PointCloud, includes_origin: bool, facets: &[Vec<usize>]) -> Result<Self> {
        let n = cloud.dim().get();
        let m = cloud.len();
        let zero = vec![0.0; n];
        let coord = |id: usize| -> Result<&[f64]> {
            if id < m {
                Ok(cloud.point(id))
            } else if includes_origin && id == m {
                Ok(&zero)
            } else {
                Err(Error::invalid(format!("vertex id {id} out of range")))
            }
        };
        let used: BTreeSet<usize> = facets.iter().flatten().copied().collect();
        let mut centroid = vec![0.0; n];
        for &id in &used {
            for (c, x) in centroid.iter_mut().zip(coord(id)?) {
                *c += x / used.len() as f64;
            }
        }
        let mut records = Vec::with_capacity(facets.len());
        for f in facets {
            if f.len() != n {
                return Err(Error::invalid(format!("facet {f:?} needs {n} vertices")));
            }
            let pts: Vec<&[f64]> = f.iter().map(|&id| coord(id)).collect::<Result<_>>()?;
            let mut hp = hyperplane_through(&pts);
            if hp.spanning_det <= MIN_SPANNING_DET {
                return Err(Error::DegenerateInput(format!("facet {f:?} is flat")));
            }
            if hp.eval(&centroid) > 0.0 {
                hp.flip();
            }
            let mut vertices = f.clone();
            vertices.sort_unstable();
            records.push(FacetRecord {
                vertices,
                normal: hp.normal,
                offset: hp.offset,
            });
        }
        Ok(Polytope::assemble(cloud, includes_origin, records))
    }

    pub fn cloud(&self) -> &PointCloud {
        &self.cloud
    }

    pub fn dim(&self) -> Dimension {
        self.cloud.dim()
    }

    pub fn includes_origin(&self) -> bool {
        self.includes_origin
    }

    /// Vertex id of the origin when it is part of the input.
    pub fn origin_id(&self) -> Option<usize> {
        self.includes_origin.then_some(self.cloud.len())
    }

    /// Coordinates of a vertex id (the origin id maps to the zero vector).
    pub fn vertex(&self, id: usize) -> &[f64] {
        if id == self.cloud.len() {
            &self.origin
        } else {
            self.cloud.point(id)
        }
    }

    pub fn facets(&self) -> &[FacetRecord] {
        &self.facets
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    /// Ridge (sorted `(n-1)`-subset of vertex ids) to the indices of the facets containing it.
    pub fn ridges(&self) -> &BTreeMap<Vec<usize>, Vec<usize>> {
        &self.ridges
    }

    /// Facets as sets of vertex ids.
    pub fn facet_sets(&self) -> BTreeSet<Vec<usize>> {
        self.facets.iter().map(|f| f.vertices.clone()).collect()
    }

    /// True when every ridge lies in exactly two facets.
    pub fn is_closed(&self) -> bool {
        self.ridges.values().all(|fs| fs.len() == 2)
    }

    /// Pairs of vertex ids sharing a facet (the edges of a simplicial polytope).
    pub fn edges(&self) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for f in &self.facets {
            for (i, &a) in f.vertices.iter().enumerate() {
                for &b in &f.vertices[i + 1..] {
                    out.insert((a, b));
                }
            }
        }
        out
    }

    /// Largest `<b, a> - h` over every point and facet.
    pub fn max_violation(&self) -> f64 {
        let m = self.cloud.len() + usize::from(self.includes_origin);
        let mut worst = f64::NEG_INFINITY;
        for f in &self.facets {
            for id in 0..m {
                worst = worst.max(f.side(self.vertex(id)));
            }
        }
        worst
    }
}

fn ridge_of(vertices: &[usize], skip: usize) -> Vec<usize> {
    vertices
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != skip)
        .map(|(_, &v)| v)
        .collect()
}

const EMPTY: usize = usize::MAX;

/// Incremental Beneath-Beyond state after some prefix of insertions.
#[derive(Debug, Clone)]
pub struct BeneathBeyond<'a> {
    cloud: &'a PointCloud,
    includes_origin: bool,
    origin: Vec<f64>,
    order: Vec<usize>,
    next: usize,
    interior: Vec<f64>,
    n: usize,
    verts: Vec<usize>,
    normals: Vec<f64>,
    offsets: Vec<f64>,
    alive: Vec<bool>,
    free: Vec<usize>,
    live: usize,
    ridges: HashMap<Box<[usize]>, [usize; 2]>,
    stats: HullStats,
}

impl<'a> BeneathBeyond<'a> {
    /// Builds the initial simplex: the first `n + 1` points, or the origin
    /// followed by the first `n` points when `includes_origin` is set.
    pub fn new(cloud: &'a PointCloud, includes_origin: bool) -> Result<Self> {
        let n = cloud.dim().get();
        let m = cloud.len();
        let needed = if includes_origin { n } else { n + 1 };
        if m < needed {
            return Err(Error::invalid(format!(
                "need at least {needed} points in dimension {n}, got {m}"
            )));
        }
        let mut order = Vec::with_capacity(m + 1);
        if includes_origin {
            order.push(m);
        }
        order.extend(0..m);

        let mut bb = BeneathBeyond {
            cloud,
            includes_origin,
            origin: vec![0.0; n],
            order,
            next: n + 1,
            interior: vec![0.0; n],
            n,
            verts: Vec::new(),
            normals: Vec::new(),
            offsets: Vec::new(),
            alive: Vec::new(),
            free: Vec::new(),
            live: 0,
            ridges: HashMap::new(),
            stats: HullStats::default(),
        };

        let simplex: Vec<usize> = bb.order[..=n].to_vec();
        let pts: Vec<&[f64]> = simplex.iter().map(|&id| bb.coord(id)).collect();
        let det = simplex_det(&pts);
        if det.abs() <= MIN_SPANNING_DET {
            return Err(Error::DegenerateInput(format!(
                "initial simplex {simplex:?} is flat (det {det:e})"
            )));
        }
        let mut interior = vec![0.0; n];
        for p in &pts {
            for (c, x) in interior.iter_mut().zip(p.iter()) {
                *c += x / (n + 1) as f64;
            }
        }
        bb.interior = interior;
        for skip in 0..=n {
            let facet = ridge_of(&simplex, skip);
            bb.add_facet(facet)?;
        }
        bb.stats.facet_counts.push(bb.live);
        Ok(bb)
    }

    #[inline]
    fn coord(&self, id: usize) -> &[f64] {
        if id == self.cloud.len() {
            &self.origin
        } else {
            self.cloud.point(id)
        }
    }

    /// Number of points inserted so far (the origin counts when present).
    pub fn inserted(&self) -> usize {
        self.next
    }

    pub fn is_done(&self) -> bool {
        self.next >= self.order.len()
    }

    pub fn facet_count(&self) -> usize {
        self.live
    }

    pub fn stats(&self) -> &HullStats {
        &self.stats
    }

    fn add_facet(&mut self, mut vertices: Vec<usize>) -> Result<()> {
        vertices.sort_unstable();
        let pts: Vec<&[f64]> = vertices.iter().map(|&id| self.coord(id)).collect();
        let mut hp: Hyperplane = hyperplane_through(&pts);
        if hp.spanning_det <= MIN_SPANNING_DET {
            return Err(Error::DegenerateInput(format!(
                "facet simplex {vertices:?} is flat (spanning det {:e})",
                hp.spanning_det
            )));
        }
        let inner = hp.eval(&self.interior);
        if inner.abs() <= f64::EPSILON {
            return Err(Error::DegenerateInput(format!(
                "interior reference point lies on facet {vertices:?}"
            )));
        }
        if inner > 0.0 {
            hp.flip();
        }
        let slot = match self.free.pop() {
            Some(s) => {
                self.verts[s * self.n..(s + 1) * self.n].copy_from_slice(&vertices);
                self.normals[s * self.n..(s + 1) * self.n].copy_from_slice(&hp.normal);
                self.offsets[s] = hp.offset;
                self.alive[s] = true;
                s
            }
            None => {
                self.verts.extend_from_slice(&vertices);
                self.normals.extend_from_slice(&hp.normal);
                self.offsets.push(hp.offset);
                self.alive.push(true);
                self.alive.len() - 1
            }
        };
        for skip in 0..self.n {
            let key: Box<[usize]> = ridge_of(&vertices, skip).into_boxed_slice();
            let entry = self.ridges.entry(key).or_insert([EMPTY, EMPTY]);
            if entry[0] == EMPTY {
                entry[0] = slot;
            } else if entry[1] == EMPTY {
                entry[1] = slot;
            } else {
                return Err(Error::DegenerateInput(format!(
                    "ridge of facet {vertices:?} already has two cofacets"
                )));
            }
        }
        self.live += 1;
        self.stats.facets_created += 1;
        Ok(())
    }

    fn remove_facet(&mut self, slot: usize) {
        let vertices: Vec<usize> = self.verts[slot * self.n..(slot + 1) * self.n].to_vec();
        for skip in 0..self.n {
            let key = ridge_of(&vertices, skip);
            if let Some(entry) = self.ridges.get_mut(key.as_slice()) {
                if entry[0] == slot {
                    entry[0] = entry[1];
                    entry[1] = EMPTY;
                } else if entry[1] == slot {
                    entry[1] = EMPTY;
                }
                if entry[0] == EMPTY {
                    self.ridges.remove(key.as_slice());
                }
            }
        }
        self.alive[slot] = false;
        self.free.push(slot);
        self.live -= 1;
        self.stats.facets_deleted += 1;
    }

    /// Inserts the next point. Returns `Ok(false)` once every point is in.
    pub fn step(&mut self) -> Result<bool> {
        if self.is_done() {
            return Ok(false);
        }
        let id = self.order[self.next];
        self.next += 1;
        let n = self.n;
        let p: Vec<f64> = self.coord(id).to_vec();

        let mut visible = Vec::new();
        for slot in 0..self.alive.len() {
            if !self.alive[slot] {
                continue;
            }
            self.stats.sidedness_tests += 1;
            let h = self.offsets[slot];
            let s = dot(&self.normals[slot * n..(slot + 1) * n], &p) - h;
            let tol = SIDE_TOL * h.abs().max(1.0);
            if s > tol {
                visible.push(slot);
            } else if s.abs() <= tol {
                return Err(Error::DegenerateInput(format!(
                    "point {id} lies on the hyperplane of facet {:?} (gap {s:e})",
                    &self.verts[slot * n..(slot + 1) * n]
                )));
            }
        }

        if visible.is_empty() {
            self.stats.skipped_interior += 1;
            self.stats.facet_counts.push(self.live);
            return Ok(true);
        }

        let mut is_visible = vec![false; self.alive.len()];
        for &s in &visible {
            is_visible[s] = true;
        }
        let mut horizon: Vec<Vec<usize>> = Vec::new();
        for &slot in &visible {
            let vertices = &self.verts[slot * n..(slot + 1) * n];
            for skip in 0..n {
                let key = ridge_of(vertices, skip);
                let entry = self.ridges.get(key.as_slice()).ok_or_else(|| {
                    Error::DegenerateInput(format!("ridge {key:?} missing from adjacency"))
                })?;
                let other = if entry[0] == slot { entry[1] } else { entry[0] };
                if other == EMPTY {
                    return Err(Error::DegenerateInput(format!("ridge {key:?} is open")));
                }
                if !is_visible[other] {
                    horizon.push(key);
                }
            }
        }

        for &slot in &visible {
            self.remove_facet(slot);
        }
        for mut ridge in horizon {
            ridge.push(id);
            self.add_facet(ridge)?;
        }
        self.stats.facet_counts.push(self.live);
        Ok(true)
    }

    /// Inserts every remaining point.
    pub fn run(&mut self) -> Result<()> {
        while self.step()? {}
        Ok(())
    }

    /// Facet records of the current hull, sorted by vertex ids.
    pub fn facet_records(&self) -> Vec<FacetRecord> {
        let n = self.n;
        let mut out: Vec<FacetRecord> = (0..self.alive.len())
            .filter(|&s| self.alive[s])
            .map(|s| FacetRecord {
                vertices: self.verts[s * n..(s + 1) * n].to_vec(),
                normal: self.normals[s * n..(s + 1) * n].to_vec(),
                offset: self.offsets[s],
            })
            .collect();
        out.sort_by(|a, b| a.vertices.cmp(&b.vertices));
        out
    }

    /// True when every stored ridge currently has two cofacets.
    pub fn ridges_closed(&self) -> bool {
        self.ridges.values().all(|e| e[0] != EMPTY && e[1] != EMPTY)
    }

    /// Snapshot of the current hull as a [`Polytope`].
    pub fn polytope(&self) -> Polytope {
        Polytope::assemble(self.cloud.clone(), self.includes_origin, self.facet_records())
    }

    pub fn finish(self) -> (Polytope, HullStats) {
        let poly = self.polytope();
        (poly, self.stats)
    }
}

/// Runs Beneath-Beyond over the whole cloud.
pub fn beneath_beyond(cloud: &PointCloud, includes_origin: bool) -> Result<(Polytope, HullStats)> {
    let mut bb = BeneathBeyond::new(cloud, includes_origin)?;
    bb.run()?;
    Ok(bb.finish())
}

/// Visits every `k`-subset of `0..m` in lexicographic order.
fn for_each_combination(m: usize, k: usize, mut f: impl FnMut(&[usize]) -> Result<()>) -> Result<()> {
    if k > m {
        return Ok(());
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx)?;
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if idx[i] < m - k + i {
                break;
            }
            if i == 0 {
                return Ok(());
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Tests every `n`-subset of the points (and the origin, when included):
/// a subset spans a facet iff all remaining points lie strictly on one side
/// of its hyperplane. `O(m^{n+1})`.
pub fn brute_force_facets(cloud: &PointCloud, includes_origin: bool) -> Result<Polytope> {
    let n = cloud.dim().get();
    let m = cloud.len();
    let total = m + usize::from(includes_origin);
    if total < n + 1 {
        return Err(Error::invalid(format!(
            "need at least {} points in dimension {n}, got {total}",
            n + 1
        )));
    }
    let origin = vec![0.0; n];
    let coord = |id: usize| -> &[f64] {
        if id == m {
            &origin
        } else {
            cloud.point(id)
        }
    };
    let mut facets = Vec::new();
    for_each_combination(total, n, |subset| {
        let pts: Vec<&[f64]> = subset.iter().map(|&id| coord(id)).collect();
        let mut hp = hyperplane_through(&pts);
        if hp.spanning_det <= MIN_SPANNING_DET {
            return Err(Error::DegenerateInput(format!("subset {subset:?} is flat")));
        }
        if hp.offset < 0.0 {
            hp.flip();
        }
        let tol = SIDE_TOL * hp.offset.abs().max(1.0);
        let (mut below, mut above) = (false, false);
        for id in (0..total).filter(|id| !subset.contains(id)) {
            let s = hp.eval(coord(id));
            if s.abs() <= tol {
                return Err(Error::DegenerateInput(format!(
                    "point {id} lies on the hyperplane of {subset:?}"
                )));
            }
            if s < 0.0 {
                below = true;
            } else {
                above = true;
            }
            if below && above {
                return Ok(());
            }
        }
        if above {
            hp.flip();
        }
        facets.push(FacetRecord {
            vertices: subset.to_vec(),
            normal: hp.normal,
            offset: hp.offset,
        });
        Ok(())
    })?;
    Ok(Polytope::assemble(cloud.clone(), includes_origin, facets))
}

/// `1 - min offset`: the width of the spherical shell containing the boundary.
pub fn hausdorff_to_sphere(poly: &Polytope) -> Result<f64> {
    let min = poly
        .facets
        .iter()
        .map(|f| f.offset)
        .fold(f64::INFINITY, f64::min);
    if !(min > 0.0) {
        return Err(Error::OriginNotInterior);
    }
    Ok(1.0 - min)
}

/// Number of facets containing each vertex, sorted by vertex id.
pub fn vertex_degrees(poly: &Polytope) -> Vec<(usize, usize)> {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for f in &poly.facets {
        for &v in &f.vertices {
            *counts.entry(v).or_default() += 1;
        }
    }
    counts.into_iter().collect()
}

/// True iff every facet offset is strictly positive.
pub fn contains_origin(poly: &Polytope) -> bool {
    poly.facets.iter().all(|f| f.offset > 0.0)
}
