//! Small dense helpers shared by the hull, shadow and section code.
//!
//! Dimensions here are tiny (n rarely above 8), so everything works on
//! plain slices and falls back to `nalgebra` for determinants and solves.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// 2D cross product `p.x * q.y - p.y * q.x`.
#[inline]
pub fn cross2(p: [f64; 2], q: [f64; 2]) -> f64 {
    p[0] * q[1] - p[1] * q[0]
}

/// Generalized cross product of `k - 1` vectors in `R^k`.
///
/// The result `c` satisfies `det[w_1; ...; w_{k-1}; x] = <c, x>`, so it is
/// orthogonal to every input and its length is the `(k-1)`-volume of the
/// parallelotope they span.
pub fn generalized_cross(rows: &[Vec<f64>]) -> Vec<f64> {
    let k = rows.len() + 1;
    debug_assert!(rows.iter().all(|r| r.len() == k));
    if k == 1 {
        return vec![1.0];
    }
    let mut out = vec![0.0; k];
    for (col, slot) in out.iter_mut().enumerate() {
        let minor = DMatrix::from_fn(k - 1, k - 1, |i, j| {
            let jj = if j < col { j } else { j + 1 };
            rows[i][jj]
        });
        let sign = if (k - 1 + col).is_multiple_of(2) { 1.0 } else { -1.0 };
        *slot = sign * minor.determinant();
    }
    out
}

/// Affine hyperplane through `k` points of `R^k`.
#[derive(Debug, Clone)]
pub struct Hyperplane {
    /// Unit normal (orientation not yet fixed).
    pub normal: Vec<f64>,
    pub offset: f64,
    /// Norm of the unnormalized generalized cross product of edge vectors.
    pub spanning_det: f64,
}

impl Hyperplane {
    /// Signed distance-like value `<normal, x> - offset`.
    #[inline]
    pub fn eval(&self, x: &[f64]) -> f64 {
        dot(&self.normal, x) - self.offset
    }

    pub fn flip(&mut self) {
        self.normal.iter_mut().for_each(|c| *c = -*c);
        self.offset = -self.offset;
    }
}

/// Hyperplane through the given points; `points.len()` must equal the dimension.
pub fn hyperplane_through(points: &[&[f64]]) -> Hyperplane {
    let k = points.len();
    let base = points[0];
    let rows: Vec<Vec<f64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    let mut normal = generalized_cross(&rows);
    let spanning_det = norm(&normal);
    if spanning_det > 0.0 {
        normal.iter_mut().for_each(|c| *c /= spanning_det);
    }
    let offset = points.iter().map(|p| dot(&normal, p)).sum::<f64>() / k as f64;
    Hyperplane {
        normal,
        offset,
        spanning_det,
    }
}

/// Normal of the linear hyperplane spanned by `k - 1` vectors of `R^k`,
/// unnormalized.
pub fn linear_span_normal(vectors: &[&[f64]]) -> Vec<f64> {
    let rows: Vec<Vec<f64>> = vectors.iter().map(|v| v.to_vec()).collect();
    generalized_cross(&rows)
}

/// Determinant of the simplex `[p_1 - p_0, ..., p_k - p_0]` for `k + 1` points in `R^k`.
pub fn simplex_det(points: &[&[f64]]) -> f64 {
    let k = points.len() - 1;
    let base = points[0];
    DMatrix::from_fn(k, k, |i, j| points[i + 1][j] - base[j]).determinant()
}

/// Solves the square system whose rows are `rows` against `rhs`.
///
/// Fails with [`Error::SingularSystem`] when the 2-norm condition estimate
/// exceeds `max_condition`.
pub fn solve_rows(rows: &[&[f64]], rhs: &[f64], max_condition: f64) -> Result<Vec<f64>> {
    let k = rows.len();
    let a = DMatrix::from_fn(k, k, |i, j| rows[i][j]);
    let cond = condition_estimate(&a);
    if !(cond <= max_condition) {
        return Err(Error::SingularSystem(cond));
    }
    let b = DVector::from_column_slice(rhs);
    a.lu()
        .solve(&b)
        .map(|x| x.iter().copied().collect())
        .ok_or(Error::SingularSystem(f64::INFINITY))
}

/// Ratio of extreme singular values.
pub fn condition_estimate(a: &DMatrix<f64>) -> f64 {
    let sv = a.singular_values();
    let max = sv.iter().cloned().fold(0.0_f64, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Solves `A x = b` where the columns of `A` are `columns`.
pub fn solve_columns(columns: &[&[f64]], rhs: &[f64]) -> Option<Vec<f64>> {
    let k = columns.len();
    let a = DMatrix::from_fn(k, k, |i, j| columns[j][i]);
    a.lu()
        .solve(&DVector::from_column_slice(rhs))
        .map(|x| x.iter().copied().collect())
}
