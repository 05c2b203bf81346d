//! Small dense linear algebra: rank-revealing least squares and projections.
//!
//! Every solve goes through a singular value decomposition so that rank
//! decisions use a single relative cutoff `rank_tol * sigma_max`.

use nalgebra::{DMatrix, DVector};

use crate::geometry::Vector;

/// Result of [`solve_linear`].
#[derive(Debug, Clone, PartialEq)]
pub enum LinearSolution {
    /// Full column rank and consistent; the solution is unique.
    Unique { x: DVector<f64>, residual: f64 },
    /// Consistent but rank deficient; `x` is the minimum-norm solution.
    FreeVariables {
        x: DVector<f64>,
        residual: f64,
        rank: usize,
    },
    /// Inconsistent; `x` is the minimum-norm least-squares solution.
    Inconsistent { x: DVector<f64>, residual: f64 },
}

impl LinearSolution {
    /// The (least-squares) solution vector.
    pub fn x(&self) -> &DVector<f64> {
        match self {
            Self::Unique { x, .. }
            | Self::FreeVariables { x, .. }
            | Self::Inconsistent { x, .. } => x,
        }
    }

    /// Max-norm residual `||A x - b||_inf`.
    pub fn residual(&self) -> f64 {
        match self {
            Self::Unique { residual, .. }
            | Self::FreeVariables { residual, .. }
            | Self::Inconsistent { residual, .. } => *residual,
        }
    }

    /// Whether the system was found consistent.
    pub fn is_consistent(&self) -> bool {
        !matches!(self, Self::Inconsistent { .. })
    }
}

/// Default relative rank cutoff.
pub const RANK_TOL: f64 = 1e-10;
/// Default residual cutoff, relative to `1 + ||b||_inf`.
pub const RESIDUAL_TOL: f64 = 1e-9;

/// Solves `A x = b` in the least-squares sense with the default tolerances.
pub fn solve_linear(a: &DMatrix<f64>, b: &DVector<f64>) -> LinearSolution {
    solve_linear_with(a, b, RANK_TOL, RESIDUAL_TOL)
}

/// Solves `A x = b` with explicit rank and residual cutoffs.
///
/// Singular values below `rank_tol * sigma_max` are treated as zero. The system is
/// consistent when `||A x - b||_inf <= residual_tol * (1 + ||b||_inf)`.
pub fn solve_linear_with(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    rank_tol: f64,
    residual_tol: f64,
) -> LinearSolution {
    let cols = a.ncols();
    if cols == 0 {
        let residual = b.amax();
        return classify(DVector::zeros(0), residual, 0, 0, b, residual_tol);
    }
    let svd = a.clone().svd(true, true);
    let sigma_max = svd.singular_values.max();
    let cutoff = rank_tol * sigma_max;
    let rank = svd.singular_values.iter().filter(|&&s| s > cutoff).count();
    let u = svd.u.as_ref().expect("left singular vectors requested");
    let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
    let mut x = DVector::zeros(cols);
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > cutoff {
            let coef = u.column(k).dot(b) / s;
            x.axpy(coef, &v_t.row(k).transpose(), 1.0);
        }
    }
    let residual = (a * &x - b).amax();
    classify(x, residual, rank, cols, b, residual_tol)
}

fn classify(
    x: DVector<f64>,
    residual: f64,
    rank: usize,
    cols: usize,
    b: &DVector<f64>,
    residual_tol: f64,
) -> LinearSolution {
    if residual > residual_tol * (1.0 + b.amax()) {
        LinearSolution::Inconsistent { x, residual }
    } else if rank < cols {
        LinearSolution::FreeVariables { x, residual, rank }
    } else {
        LinearSolution::Unique { x, residual }
    }
}

/// Numerical rank of `a` with relative cutoff `rank_tol`.
pub fn rank(a: &DMatrix<f64>, rank_tol: f64) -> usize {
    if a.ncols() == 0 || a.nrows() == 0 {
        return 0;
    }
    let sv = a.singular_values();
    let cutoff = rank_tol * sv.max();
    sv.iter().filter(|&&s| s > cutoff).count()
}

/// Orthonormal basis of `span(basis)`, ordered by decreasing singular value.
pub fn orthonormal_basis(basis: &[Vector], rank_tol: f64) -> Vec<Vector> {
    if basis.is_empty() {
        return Vec::new();
    }
    let m = DMatrix::from_columns(basis);
    let svd = m.svd(true, false);
    let cutoff = rank_tol * svd.singular_values.max();
    let u = svd.u.expect("left singular vectors requested");
    let mut pairs: Vec<(f64, usize)> = svd
        .singular_values
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, s)| s > cutoff)
        .map(|(k, s)| (s, k))
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    pairs
        .into_iter()
        .map(|(_, k)| u.column(k).into_owned())
        .collect()
}

/// Orthogonal projection of `w` onto `span(basis)`; an empty basis projects to zero.
pub fn project_onto_span(w: &Vector, basis: &[Vector]) -> Vector {
    let q = orthonormal_basis(basis, RANK_TOL);
    project_onto_orthonormal(w, &q)
}

/// Projection onto the span of already orthonormal vectors.
pub fn project_onto_orthonormal(w: &Vector, q: &[Vector]) -> Vector {
    let mut p = Vector::zeros(w.len());
    for qi in q {
        p.axpy(qi.dot(w), qi, 1.0);
    }
    p
}

/// Component of `w` orthogonal to the span of orthonormal vectors `q`,
/// with one re-orthogonalization pass.
pub fn orthogonal_complement(w: &Vector, q: &[Vector]) -> Vector {
    let mut r = w.clone();
    for _ in 0..2 {
        for qi in q {
            let c = qi.dot(&r);
            r.axpy(-c, qi, 1.0);
        }
    }
    r
}

/// Whether the points are affinely independent.
///
/// Uses the rank of the `(n+1) x s` matrix with columns `[1; p_i - centroid]`.
pub fn affinely_independent(points: &[&Vector], rank_tol: f64) -> bool {
    if points.len() <= 1 {
        return true;
    }
    let n = points[0].len();
    if points.len() > n + 1 {
        return false;
    }
    rank(&homogeneous_matrix(points), rank_tol) == points.len()
}

fn homogeneous_matrix(points: &[&Vector]) -> DMatrix<f64> {
    let n = points[0].len();
    let s = points.len();
    let mut centroid = Vector::zeros(n);
    for p in points {
        centroid += *p;
    }
    centroid /= s as f64;
    let scale = points
        .iter()
        .map(|p| (*p - &centroid).norm())
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);
    DMatrix::from_fn(n + 1, s, |r, c| {
        if r == 0 {
            1.0
        } else {
            (points[c][r - 1] - centroid[r - 1]) / scale
        }
    })
}

/// Barycentric coordinates of `x` with respect to `points` (least squares).
pub fn barycentric(
    x: &Vector,
    points: &[&Vector],
    rank_tol: f64,
    residual_tol: f64,
) -> LinearSolution {
    let n = x.len();
    let s = points.len();
    let a = DMatrix::from_fn(n + 1, s, |r, c| {
        if r == 0 {
            1.0
        } else {
            x[r - 1] - points[c][r - 1]
        }
    });
    let mut b = DVector::zeros(n + 1);
    b[0] = 1.0;
    solve_linear_with(&a, &b, rank_tol, residual_tol)
}

/// Nonnegative least squares `min ||A x - b||` subject to `x >= 0` (Lawson-Hanson).
///
/// Returns the solution and the Euclidean residual norm.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> (DVector<f64>, f64) {
    let cols = a.ncols();
    let mut x = DVector::zeros(cols);
    let mut passive = vec![false; cols];
    let tol = 1e-12 * (1.0 + a.amax() * b.amax()) * (a.nrows().max(cols) as f64);
    for _ in 0..(3 * cols + 3) {
        let w = a.transpose() * (b - a * &x);
        let next = (0..cols)
            .filter(|&j| !passive[j] && w[j] > tol)
            .max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(j) = next else { break };
        passive[j] = true;
        for _ in 0..(3 * cols + 3) {
            let idx: Vec<usize> = (0..cols).filter(|&k| passive[k]).collect();
            let sub = DMatrix::from_fn(a.nrows(), idx.len(), |r, c| a[(r, idx[c])]);
            let sol = solve_linear(&sub, b);
            let mut s = DVector::zeros(cols);
            for (c, &k) in idx.iter().enumerate() {
                s[k] = sol.x()[c];
            }
            if idx.iter().all(|&k| s[k] > 0.0) {
                x = s;
                break;
            }
            let mut step = 1.0_f64;
            for &k in &idx {
                if s[k] <= 0.0 {
                    let den = x[k] - s[k];
                    if den > 0.0 {
                        step = step.min(x[k] / den);
                    }
                }
            }
            x += (s - &x) * step;
            for &k in &idx {
                if x[k] <= 1e-15 {
                    x[k] = 0.0;
                    passive[k] = false;
                }
            }
        }
    }
    let residual = (a * &x - b).norm();
    (x, residual)
}
