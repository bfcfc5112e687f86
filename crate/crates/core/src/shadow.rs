//! Shadow-vertex linear programming in its dual description.
//!
//! The problem `max <v, x>  s.t.  <a_i, x> <= 1` is solved on the dual
//! polytope `Y = conv(0, a_1, ..., a_m)`: the optimum corresponds to the
//! facet of `Y` pierced by the ray `R+ v`. The solver works dimension by
//! dimension on the coordinate projections `Pi_k` (keep the first `k`
//! coordinates):
//!
//! 1. In the plane, walk the boundary of `Pi_2(Y)` from the vertex extreme
//!    in direction `Pi_2(v)` toward the ray until the crossed edge is found.
//! 2. For `k = 3..n`, the previous optimal simplex is a `(k-2)`-face of
//!    `Pi_k(Y)`. One gift-wrapping rotation about it gives a facet, and the
//!    walk continues across adjacent facets of `Pi_k(Y)`, restricted to the
//!    polygon `C_k = Pi_k(Y) ∩ span(e_k, Pi_k(v))`, until the facet whose
//!    section edge is crossed by `R+ Pi_k(v)` is reached.
//!
//! The polygon `C_k` is never built; each pivot only touches the current
//! facet and one `O(m)` ratio test.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hull::{contains_origin, Polytope};
use crate::linalg::{cross2, dot, hyperplane_through, linear_span_normal, norm, solve_columns, solve_rows};
use crate::sampler::PointCloud;

/// Absolute tolerance for sidedness and ratio tests on unit-scale input.
pub const GEOM_TOL: f64 = 1e-9;

/// Largest accepted condition estimate in [`recover_primal`].
pub const MAX_CONDITION: f64 = 1e12;

/// `max <v, x>` subject to `<a_i, x> <= 1` for every point `a_i` of the cloud.
#[derive(Debug, Clone)]
pub struct LpInstance {
    cloud: PointCloud,
    objective: Vec<f64>,
}

impl LpInstance {
    /// The objective is normalized; it must be nonzero and match the cloud dimension.
    pub fn new(cloud: PointCloud, objective: Vec<f64>) -> Result<Self> {
        let n = cloud.dim().get();
        if objective.len() != n {
            return Err(Error::invalid(format!(
                "objective has {} coordinates, cloud dimension is {n}",
                objective.len()
            )));
        }
        let len = norm(&objective);
        if !(len > 0.0) || !len.is_finite() {
            return Err(Error::invalid("objective must be a nonzero finite vector"));
        }
        let objective = objective.into_iter().map(|c| c / len).collect();
        Ok(LpInstance { cloud, objective })
    }

    pub fn cloud(&self) -> &PointCloud {
        &self.cloud
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }
}

/// The walk through one shadow polygon, in plane coordinates.
///
/// For `k = 2` the plane is the `(x_1, x_2)` plane and `path` lists the
/// visited vertices of `Pi_2(Y)`. For `k >= 3` the plane has basis
/// `((Pi_{k-1}(v), 0) / |Pi_{k-1}(v)|, e_k)` and `path` lists the vertices of
/// `C_k` visited, starting at the section point of the lifted face.
#[derive(Debug, Clone, Serialize)]
pub struct ShadowWalk {
    pub k: usize,
    pub ray: [f64; 2],
    pub path: Vec<[f64; 2]>,
    /// Vertex ids of the facet of `Pi_k(Y)` behind each path edge.
    pub facets: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LpSolution {
    /// Sorted ids of the optimal facet, or `None` when the ray leaves `Y`
    /// through a face containing the origin (the primal is unbounded).
    pub optimal_facet: Option<Vec<usize>>,
    /// Solution of `<a_i, x> = 1` over the optimal facet.
    pub primal: Option<Vec<f64>>,
    /// Pivot counts for `k = 2, ..., n` (shorter when the solve stopped early).
    pub pivots_by_dim: Vec<usize>,
    pub total_pivots: usize,
    pub walks: Vec<ShadowWalk>,
}

impl LpSolution {
    pub fn is_unbounded(&self) -> bool {
        self.optimal_facet.is_none()
    }
}

/// Projected point `Pi_k(a_id)`; the id `m` is the origin.
struct Projector<'a> {
    cloud: &'a PointCloud,
    zero: Vec<f64>,
}

impl<'a> Projector<'a> {
    fn new(cloud: &'a PointCloud) -> Self {
        Projector {
            cloud,
            zero: vec![0.0; cloud.dim().get()],
        }
    }

    #[inline]
    fn origin_id(&self) -> usize {
        self.cloud.len()
    }

    #[inline]
    fn get(&self, id: usize, k: usize) -> &[f64] {
        if id == self.cloud.len() {
            &self.zero[..k]
        } else {
            &self.cloud.point(id)[..k]
        }
    }
}

enum Step<T> {
    Found(T),
    Unbounded,
}

/// Runs the shadow-vertex method on `Y = conv(0, a_1, ..., a_m)`.
pub fn solve_shadow_vertex(inst: &LpInstance) -> Result<LpSolution> {
    let cloud = &inst.cloud;
    let n = cloud.dim().get();
    let m = cloud.len();
    if m < n {
        return Err(Error::invalid(format!("need at least {n} constraints, got {m}")));
    }
    let v = &inst.objective;
    let proj = Projector::new(cloud);
    let mut solution = LpSolution {
        optimal_facet: None,
        primal: None,
        pivots_by_dim: Vec::with_capacity(n - 1),
        total_pivots: 0,
        walks: Vec::with_capacity(n - 1),
    };

    let (edge, walk) = match planar_walk(&proj, v)? {
        (Step::Found(e), walk) => (e, walk),
        (Step::Unbounded, walk) => {
            solution.pivots_by_dim.push(walk.path.len().saturating_sub(2));
            solution.walks.push(walk);
            solution.total_pivots = solution.pivots_by_dim.iter().sum();
            return Ok(solution);
        }
    };
    solution.pivots_by_dim.push(walk.path.len() - 2);
    solution.walks.push(walk);
    let mut face: Vec<usize> = vec![edge.0, edge.1];

    for k in 3..=n {
        let (step, walk, pivots) = lift_and_walk(&proj, v, k, &face)?;
        solution.pivots_by_dim.push(pivots);
        solution.walks.push(walk);
        match step {
            Step::Found(f) => face = f,
            Step::Unbounded => {
                solution.total_pivots = solution.pivots_by_dim.iter().sum();
                return Ok(solution);
            }
        }
    }

    face.sort_unstable();
    let rows: Vec<&[f64]> = face.iter().map(|&id| cloud.point(id)).collect();
    solution.primal = Some(recover_primal(&rows)?);
    solution.optimal_facet = Some(face);
    solution.total_pivots = solution.pivots_by_dim.iter().sum();
    Ok(solution)
}

#[inline]
fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Boundary walk on `Pi_2(Y)`. Returns the crossed edge `(cur, next)`.
fn planar_walk(proj: &Projector<'_>, v: &[f64]) -> Result<(Step<(usize, usize)>, ShadowWalk)> {
    let m = proj.cloud.len();
    let r = [v[0], v[1]];
    let rlen = r[0].hypot(r[1]);
    if rlen <= GEOM_TOL {
        return Err(Error::DegenerateGeometry(
            "objective is orthogonal to the (x1, x2) plane".into(),
        ));
    }
    let mut walk = ShadowWalk {
        k: 2,
        ray: r,
        path: Vec::new(),
        facets: Vec::new(),
    };
    let at = |id: usize| -> [f64; 2] {
        let p = proj.get(id, 2);
        [p[0], p[1]]
    };

    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for id in 0..m {
        let val = dot(&r, proj.get(id, 2));
        if val > best_val {
            best_val = val;
            best = id;
        }
    }
    if best_val <= GEOM_TOL * rlen {
        // the origin is extreme in direction Pi_2(v)
        return Ok((Step::Unbounded, walk));
    }
    let start = at(best);
    walk.path.push(start);
    let turn = cross2(start, r);
    if turn.abs() <= GEOM_TOL * rlen {
        return Err(Error::DegenerateGeometry(format!(
            "ray passes through projected vertex {best}"
        )));
    }
    let s0 = sign(turn);

    let mut cur = best;
    for _ in 0..=m + 1 {
        let next = wrap_planar(proj, cur, s0)?;
        walk.path.push(at(next));
        walk.facets.push(sorted_pair(cur, next));
        if next == proj.origin_id() {
            return Ok((Step::Unbounded, walk));
        }
        let c = s0 * cross2(r, at(next));
        if c > GEOM_TOL * rlen {
            return Ok((Step::Found((cur, next)), walk));
        }
        if c.abs() <= GEOM_TOL * rlen {
            return Err(Error::DegenerateGeometry(format!(
                "ray passes through projected vertex {next}"
            )));
        }
        cur = next;
    }
    Err(Error::DegenerateGeometry("planar walk did not terminate".into()))
}

fn sorted_pair(a: usize, b: usize) -> Vec<usize> {
    vec![a.min(b), a.max(b)]
}

/// Next vertex of `Pi_2(Y)` after `cur`, counter-clockwise when `s0 > 0`.
fn wrap_planar(proj: &Projector<'_>, cur: usize, s0: f64) -> Result<usize> {
    let m = proj.cloud.len();
    let p = proj.get(cur, 2);
    let rel = |id: usize| -> [f64; 2] {
        let q = proj.get(id, 2);
        [q[0] - p[0], q[1] - p[1]]
    };
    let mut cand = usize::MAX;
    for id in (0..=m).filter(|&id| id != cur) {
        if cand == usize::MAX || s0 * cross2(rel(cand), rel(id)) < 0.0 {
            cand = id;
        }
    }
    let dc = rel(cand);
    let dc_len = dc[0].hypot(dc[1]);
    for id in (0..=m).filter(|&id| id != cur && id != cand) {
        let dx = rel(id);
        let c = s0 * cross2(dc, dx);
        if c.abs() <= GEOM_TOL * dc_len * dx[0].hypot(dx[1]) {
            return Err(Error::DegenerateGeometry(format!(
                "projected points {cur}, {cand}, {id} are collinear"
            )));
        }
    }
    Ok(cand)
}

/// Segment of `aff(facet) ∩ plane` inside the facet simplex.
#[derive(Debug, Clone, Copy)]
struct Section {
    /// Endpoints in plane coordinates.
    ends: [[f64; 2]; 2],
    /// Local index of the vertex whose barycentric coordinate vanishes at each end.
    zero_at: [usize; 2],
}

/// Intersects the simplex `verts` (k points in `R^k`, hyperplane `<b, x> = h`
/// with `h > 0`) with the plane spanned by orthonormal `u1, u2`.
///
/// The plane meets the hyperplane in the line `alpha s1 + beta s2 = 1`,
/// `s = (<b,u1>, <b,u2>) / h`; barycentric coordinates are affine along that
/// line and the section is the parameter interval where all are >= 0.
fn plane_section(
    verts: &[&[f64]],
    normal: &[f64],
    offset: f64,
    u1: &[f64],
    u2: &[f64],
) -> Result<Option<Section>> {
    let b1 = dot(normal, u1);
    let b2 = dot(normal, u2);
    let proj_len = b1.hypot(b2);
    if proj_len <= GEOM_TOL {
        return Err(Error::DegenerateSection(
            "plane is parallel to a facet hyperplane".into(),
        ));
    }
    let s = [b1 / offset, b2 / offset];
    let s2 = s[0] * s[0] + s[1] * s[1];
    let p0 = [s[0] / s2, s[1] / s2];
    let slen = s2.sqrt();
    let d = [-s[1] / slen, s[0] / slen];

    let l1 = solve_columns(verts, u1)
        .ok_or_else(|| Error::DegenerateGeometry("facet simplex is singular".into()))?;
    let l2 = solve_columns(verts, u2)
        .ok_or_else(|| Error::DegenerateGeometry("facet simplex is singular".into()))?;
    let k = verts.len();
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    let (mut lo_idx, mut hi_idx) = (usize::MAX, usize::MAX);
    let lam0: Vec<f64> = (0..k).map(|i| p0[0] * l1[i] + p0[1] * l2[i]).collect();
    let lamd: Vec<f64> = (0..k).map(|i| d[0] * l1[i] + d[1] * l2[i]).collect();
    let scale = lamd.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    for i in 0..k {
        if lamd[i].abs() <= 1e-15 * scale {
            if lam0[i] < 0.0 {
                return Ok(None);
            }
            continue;
        }
        let t = -lam0[i] / lamd[i];
        if lamd[i] > 0.0 {
            if t > lo {
                lo = t;
                lo_idx = i;
            }
        } else if t < hi {
            hi = t;
            hi_idx = i;
        }
    }
    if !(lo < hi) || lo_idx == usize::MAX || hi_idx == usize::MAX {
        return Ok(None);
    }
    let at = |t: f64| [p0[0] + t * d[0], p0[1] + t * d[1]];
    Ok(Some(Section {
        ends: [at(lo), at(hi)],
        zero_at: [lo_idx, hi_idx],
    }))
}

/// Outward hyperplane (offset > 0) of a simplex of `Pi_k(Y)` not containing the origin.
fn outward_hyperplane(pts: &[&[f64]]) -> Result<(Vec<f64>, f64)> {
    let mut hp = hyperplane_through(pts);
    if hp.spanning_det <= GEOM_TOL * GEOM_TOL {
        return Err(Error::DegenerateGeometry("projected facet simplex is flat".into()));
    }
    if hp.offset < 0.0 {
        hp.flip();
    }
    if hp.offset <= GEOM_TOL {
        return Err(Error::DegenerateGeometry(
            "projected facet passes through the origin".into(),
        ));
    }
    Ok((hp.normal, hp.offset))
}

/// One gift-wrapping rotation of the supporting hyperplane `<b, x> = h`
/// about the `(k-2)`-face `hinge`, in the direction in which `<g, x>`
/// increases. Returns the first point touched, or the origin id when the
/// rotation reaches the linear hyperplane `<g, x> = 0` first.
fn rotate_about(
    proj: &Projector<'_>,
    k: usize,
    hinge: &[usize],
    skip: &[usize],
    normal: &[f64],
    offset: f64,
    g: &[f64],
) -> Result<usize> {
    let m = proj.cloud.len();
    let gnorm = norm(g);
    let mut best = usize::MAX;
    let mut best_ratio = f64::INFINITY;
    let mut second = f64::INFINITY;
    for id in (0..m).filter(|id| !hinge.contains(id) && !skip.contains(id)) {
        let p = proj.get(id, k);
        let gp = dot(g, p) / gnorm;
        if gp <= GEOM_TOL {
            continue;
        }
        let f0 = dot(normal, p) - offset;
        if f0 > GEOM_TOL {
            return Err(Error::DegenerateGeometry(format!(
                "point {id} lies beyond a supporting hyperplane of Pi_{k}(Y)"
            )));
        }
        let ratio = -f0 / gp;
        if ratio < best_ratio {
            second = best_ratio;
            best_ratio = ratio;
            best = id;
        } else if ratio < second {
            second = ratio;
        }
    }
    if best == usize::MAX {
        return Ok(proj.origin_id());
    }
    if second - best_ratio <= GEOM_TOL * best_ratio.max(1.0) {
        return Err(Error::DegenerateGeometry(format!(
            "gift-wrapping tie while rotating about {hinge:?} in dimension {k}"
        )));
    }
    Ok(best)
}

/// Lifts the optimal face of `Pi_{k-1}(Y)` to a facet of `Pi_k(Y)` and walks
/// the section polygon `C_k` to the facet crossed by `R+ Pi_k(v)`.
fn lift_and_walk(
    proj: &Projector<'_>,
    v: &[f64],
    k: usize,
    face: &[usize],
) -> Result<(Step<Vec<usize>>, ShadowWalk, usize)> {
    let m = proj.cloud.len();
    let origin = proj.origin_id();

    let w = &v[..k - 1];
    let wlen = norm(w);
    if wlen <= GEOM_TOL {
        return Err(Error::DegenerateGeometry(format!(
            "Pi_{}(v) vanishes",
            k - 1
        )));
    }
    let mut u1 = vec![0.0; k];
    for (a, b) in u1.iter_mut().zip(w) {
        *a = b / wlen;
    }
    let mut u2 = vec![0.0; k];
    u2[k - 1] = 1.0;
    let r = [wlen, v[k - 1]];
    let mut walk = ShadowWalk {
        k,
        ray: r,
        path: Vec::new(),
        facets: Vec::new(),
    };

    // supporting hyperplane of the face inside Pi_k(Y): (c, 0) . x = d
    let low: Vec<&[f64]> = face.iter().map(|&id| proj.get(id, k - 1)).collect();
    let (c_low, d_low) = outward_hyperplane(&low)?;
    let mut normal0 = c_low.clone();
    normal0.push(0.0);
    let lifted: Vec<&[f64]> = face.iter().map(|&id| proj.get(id, k)).collect();
    let g = linear_span_normal(&lifted);
    let neg_g: Vec<f64> = g.iter().map(|x| -x).collect();

    let up = rotate_about(proj, k, face, &[], &normal0, d_low, &g)?;
    let down = rotate_about(proj, k, face, &[], &normal0, d_low, &neg_g)?;

    // the face meets the plane in one point V0; choose the neighbouring
    // facet whose section edge turns from V0 toward the ray
    let mut chosen: Option<(Vec<usize>, Section, usize)> = None;
    let mut s0 = 0.0;
    for cand in [up, down] {
        if cand == origin {
            continue;
        }
        let mut facet = face.to_vec();
        facet.push(cand);
        let (sec, entry_end) = facet_section(proj, k, &facet, cand, &u1, &u2)?;
        let v0 = sec.ends[entry_end];
        let v1 = sec.ends[1 - entry_end];
        let turn = cross2(v0, r);
        if turn.abs() <= GEOM_TOL * r[0].hypot(r[1]) {
            return Err(Error::DegenerateGeometry(format!(
                "ray passes through the lifted face in dimension {k}"
            )));
        }
        s0 = sign(turn);
        if walk.path.is_empty() {
            walk.path.push(v0);
        }
        if sign(cross2(v0, v1)) == s0 {
            chosen = Some((facet, sec, 1 - entry_end));
            break;
        }
    }
    let Some((mut facet, sec, exit_end)) = chosen else {
        // only the facet through the origin turns toward the ray
        return Ok((Step::Unbounded, walk, 0));
    };
    let mut exit = sec.ends[exit_end];
    let mut exit_vertex = facet[sec.zero_at[exit_end]];
    walk.path.push(exit);
    walk.facets.push(sorted(&facet));

    let rlen = r[0].hypot(r[1]);
    let max_pivots = 4 * (m + 1) * (m + 1) + 16;
    let mut pivots = 0;
    loop {
        let c = s0 * cross2(r, exit);
        if c > GEOM_TOL * rlen {
            return Ok((Step::Found(facet), walk, pivots));
        }
        if c.abs() <= GEOM_TOL * rlen {
            return Err(Error::DegenerateGeometry(format!(
                "ray passes through a vertex of C_{k}"
            )));
        }
        if pivots >= max_pivots {
            return Err(Error::DegenerateGeometry(format!(
                "shadow walk in dimension {k} did not terminate"
            )));
        }
        pivots += 1;

        // pivot across the ridge facet \ {exit_vertex}
        let ridge: Vec<usize> = facet.iter().copied().filter(|&id| id != exit_vertex).collect();
        let pts: Vec<&[f64]> = facet.iter().map(|&id| proj.get(id, k)).collect();
        let (normal, offset) = outward_hyperplane(&pts)?;
        let ridge_pts: Vec<&[f64]> = ridge.iter().map(|&id| proj.get(id, k)).collect();
        let mut g = linear_span_normal(&ridge_pts);
        if dot(&g, proj.get(exit_vertex, k)) > 0.0 {
            g.iter_mut().for_each(|x| *x = -*x);
        }
        let next = rotate_about(proj, k, &ridge, &[exit_vertex], &normal, offset, &g)?;
        if next == origin {
            walk.facets.push(sorted(&[ridge.as_slice(), &[origin]].concat()));
            return Ok((Step::Unbounded, walk, pivots));
        }
        let mut new_facet = ridge;
        new_facet.push(next);
        let (sec, entry_end) = facet_section(proj, k, &new_facet, next, &u1, &u2)?;
        exit = sec.ends[1 - entry_end];
        exit_vertex = new_facet[sec.zero_at[1 - entry_end]];
        facet = new_facet;
        walk.path.push(exit);
        walk.facets.push(sorted(&facet));
    }
}

fn sorted(ids: &[usize]) -> Vec<usize> {
    let mut v = ids.to_vec();
    v.sort_unstable();
    v
}

/// Section of a facet of `Pi_k(Y)` with the walk plane; also returns which
/// end is the entry point (where the barycentric coordinate of `entered`
/// vanishes).
fn facet_section(
    proj: &Projector<'_>,
    k: usize,
    facet: &[usize],
    entered: usize,
    u1: &[f64],
    u2: &[f64],
) -> Result<(Section, usize)> {
    let pts: Vec<&[f64]> = facet.iter().map(|&id| proj.get(id, k)).collect();
    let (normal, offset) = outward_hyperplane(&pts)?;
    let sec = plane_section(&pts, &normal, offset, u1, u2)?.ok_or_else(|| {
        Error::DegenerateGeometry(format!("facet {facet:?} misses the shadow plane"))
    })?;
    let local = facet.iter().position(|&id| id == entered).expect("entered vertex in facet");
    let entry_end = if sec.zero_at[0] == local {
        0
    } else if sec.zero_at[1] == local {
        1
    } else {
        return Err(Error::DegenerateGeometry(format!(
            "section of {facet:?} does not start on the shared ridge"
        )));
    };
    Ok((sec, entry_end))
}

/// Solves `<a_i, x> = 1` for the `n` facet vectors `a_i`.
pub fn recover_primal(rows: &[&[f64]]) -> Result<Vec<f64>> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::invalid("recover_primal needs n vectors of length n"));
    }
    let ones = vec![1.0; n];
    let x = solve_rows(rows, &ones, MAX_CONDITION)?;
    let residual = rows
        .iter()
        .map(|r| (dot(r, &x) - 1.0).abs())
        .fold(0.0_f64, f64::max);
    if residual > GEOM_TOL {
        return Err(Error::SingularSystem(residual / f64::EPSILON));
    }
    Ok(x)
}

/// One edge of a plane section of a polytope.
#[derive(Debug, Clone, Serialize)]
pub struct SectionEdge {
    /// Index into [`Polytope::facets`].
    pub facet: usize,
    /// Endpoints in the plane's orthonormal coordinates.
    pub ends: [[f64; 2]; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct SectionCount {
    /// Orthonormal basis of the plane (Gram–Schmidt of the inputs).
    pub basis: [Vec<f64>; 2],
    pub edge_count: usize,
    pub edges: Vec<SectionEdge>,
}

/// Orthonormalizes `(u, v)`.
pub fn plane_basis(u: &[f64], v: &[f64]) -> Result<[Vec<f64>; 2]> {
    let ul = norm(u);
    if !(ul > 0.0) {
        return Err(Error::invalid("plane vector u is zero"));
    }
    let u1: Vec<f64> = u.iter().map(|x| x / ul).collect();
    let along = dot(v, &u1);
    let mut u2: Vec<f64> = v.iter().zip(&u1).map(|(a, b)| a - along * b).collect();
    let l2 = norm(&u2);
    if !(l2 > 1e-12 * norm(v).max(1.0)) {
        return Err(Error::invalid("plane vectors are linearly dependent"));
    }
    u2.iter_mut().for_each(|x| *x /= l2);
    Ok([u1, u2])
}

const SEGMENT_TOL: f64 = 1e-12;

fn close(a: [f64; 2], b: [f64; 2]) -> bool {
    (a[0] - b[0]).hypot(a[1] - b[1]) <= GEOM_TOL
}

/// Counts the edges of the section polygon `poly ∩ span(u, v)`.
///
/// For a generic plane each facet met by the plane contributes exactly one
/// edge. Segments shared by several facets (plane through a ridge) count once
/// and facets touched in a single point do not count.
pub fn section_edge_count(poly: &Polytope, u: &[f64], v: &[f64]) -> Result<SectionCount> {
    let n = poly.dim().get();
    if u.len() != n || v.len() != n {
        return Err(Error::invalid("plane vectors must match the polytope dimension"));
    }
    if !contains_origin(poly) {
        return Err(Error::OriginNotInterior);
    }
    let basis = plane_basis(u, v)?;
    let reach = (0..poly.cloud().len())
        .map(|i| norm(poly.vertex(i)))
        .fold(0.0_f64, f64::max);
    let mut edges = Vec::new();
    for (fi, f) in poly.facets().iter().enumerate() {
        let b1 = dot(&f.normal, &basis[0]);
        let b2 = dot(&f.normal, &basis[1]);
        let pl = b1.hypot(b2);
        if pl <= GEOM_TOL {
            return Err(Error::DegenerateSection(format!(
                "plane is parallel to facet {:?}",
                f.vertices
            )));
        }
        // the line aff(facet) ∩ plane is at distance offset / pl from the origin
        if f.offset > pl * reach * (1.0 + 1e-12) {
            continue;
        }
        let pts: Vec<&[f64]> = f.vertices.iter().map(|&id| poly.vertex(id)).collect();
        let Some(sec) = plane_section(&pts, &f.normal, f.offset, &basis[0], &basis[1])? else {
            continue;
        };
        let [p, q] = sec.ends;
        if (p[0] - q[0]).hypot(p[1] - q[1]) <= SEGMENT_TOL {
            // the plane only touches this facet
            continue;
        }
        // a plane through a lower-dimensional face meets both facets around it
        // in the same segment
        let seen = edges.iter().any(|e: &SectionEdge| {
            let [a, b] = e.ends;
            (close(a, p) && close(b, q)) || (close(a, q) && close(b, p))
        });
        if !seen {
            edges.push(SectionEdge {
                facet: fi,
                ends: sec.ends,
            });
        }
    }
    Ok(SectionCount {
        basis,
        edge_count: edges.len(),
        edges,
    })
}

/// Orthogonal projection of `x` onto the plane with orthonormal basis `(u1, u2)`.
pub fn project_to_plane(x: &[f64], u1: &[f64], u2: &[f64]) -> [f64; 2] {
    [dot(x, u1), dot(x, u2)]
}
