//! Optimality conditions of the covering problem restricted to an active set.
//!
//! At a center `x` where the balls of `S` are active, the ball `[x, z]` is optimal
//! exactly when there are multipliers `lambda >= 0` with `sum lambda = 1` and
//! `sum lambda_i (x - p_i)/||x - p_i|| = 0`. The same condition written with
//! `pi_i` proportional to `lambda_i / ||x - p_i||` says that `x` is a convex
//! combination of the active centers.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::{ActiveSet, Instance, Tolerances, Vector};
use crate::linalg::solve_linear_with;

/// Classification of a multiplier solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KktStatus {
    /// Multipliers exist and are all nonnegative.
    Optimal,
    /// Multipliers exist; the member with the most negative one is reported.
    NegativeMultiplier(usize),
    /// The system is inconsistent, i.e. `x` is not in the affine hull of `S`.
    NoSolution,
}

/// Multipliers, convex weights and status returned by [`kkt_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct KktSolution {
    /// `lambda_i` in the order of `S`.
    pub lambda: DVector<f64>,
    /// `pi_i` in the order of `S`.
    pub pi: DVector<f64>,
    pub status: KktStatus,
    /// Max-norm residual of the multiplier system.
    pub residual: f64,
}

/// Solves the multiplier system for the members of `s` at `x`.
///
/// `z` is accepted for interface symmetry; activity of `s` at `(x, z)` is a
/// precondition and is not re-verified here.
pub fn kkt_check(
    instance: &Instance,
    s: &ActiveSet,
    x: &Vector,
    _z: f64,
    tol: &Tolerances,
) -> Result<KktSolution> {
    let n = instance.dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.len(),
        });
    }
    let idx = s.indices();
    let mut dist = Vec::with_capacity(idx.len());
    let mut a = DMatrix::zeros(n + 1, idx.len());
    for (c, &i) in idx.iter().enumerate() {
        let diff = x - &instance.ball(i).center;
        let d = diff.norm();
        if d <= 1e-14 * (1.0 + x.norm()) {
            return Err(Error::CenterAtPoint(i));
        }
        dist.push(d);
        a[(0, c)] = 1.0;
        for r in 0..n {
            a[(r + 1, c)] = diff[r] / d;
        }
    }
    let mut b = DVector::zeros(n + 1);
    b[0] = 1.0;
    let sol = solve_linear_with(&a, &b, tol.rank, tol.residual);
    let lambda = sol.x().clone();
    let pi = lambda_to_pi(&lambda, &dist);
    let status = if !sol.is_consistent() {
        KktStatus::NoSolution
    } else {
        let (min_pos, min_val) =
            lambda
                .iter()
                .enumerate()
                .fold(
                    (0, f64::INFINITY),
                    |acc, (k, &v)| if v < acc.1 { (k, v) } else { acc },
                );
        if min_val >= -tol.multiplier {
            KktStatus::Optimal
        } else {
            KktStatus::NegativeMultiplier(idx[min_pos])
        }
    };
    Ok(KktSolution {
        lambda,
        pi,
        status,
        residual: sol.residual(),
    })
}

/// Converts multipliers to convex weights: `pi_i = (lambda_i/d_i) / sum_j (lambda_j/d_j)`.
pub fn lambda_to_pi(lambda: &DVector<f64>, dist: &[f64]) -> DVector<f64> {
    let w = DVector::from_iterator(lambda.len(), lambda.iter().zip(dist).map(|(l, d)| l / d));
    let total = w.sum();
    if total.abs() > 0.0 {
        w / total
    } else {
        w
    }
}

/// Converts convex weights back to multipliers: `lambda_i = d_i pi_i / sum_j d_j pi_j`.
pub fn pi_to_lambda(pi: &DVector<f64>, dist: &[f64]) -> DVector<f64> {
    let w = DVector::from_iterator(pi.len(), pi.iter().zip(dist).map(|(p, d)| p * d));
    let total = w.sum();
    if total.abs() > 0.0 {
        w / total
    } else {
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Ball;
    use approx::assert_relative_eq;

    fn inst(balls: &[(&[f64], f64)]) -> Instance {
        let n = balls[0].0.len();
        Instance::new(n, balls.iter().map(|(c, r)| Ball::new(c, *r)).collect()).unwrap()
    }

    #[test]
    fn symmetric_pair_is_optimal() {
        let i = inst(&[(&[-1.0, 0.0], 0.0), (&[1.0, 0.0], 0.0)]);
        let s = ActiveSet::new(vec![0, 1]).unwrap();
        let k = kkt_check(&i, &s, &Vector::zeros(2), 1.0, &Tolerances::default()).unwrap();
        assert_eq!(k.status, KktStatus::Optimal);
        assert_relative_eq!(k.lambda[0], 0.5, epsilon = 1e-12);
        assert_relative_eq!(k.lambda[1], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn off_hull_has_no_solution() {
        let i = inst(&[(&[0.0, 0.0], 0.0), (&[5.0, 5.0], 0.0)]);
        let s = ActiveSet::new(vec![0]).unwrap();
        let x = Vector::from_vec(vec![1.0, 0.0]);
        let k = kkt_check(&i, &s, &x, 1.0, &Tolerances::default()).unwrap();
        assert_eq!(k.status, KktStatus::NoSolution);
    }

    #[test]
    fn outside_triangle_reports_negative_multiplier() {
        let i = inst(&[(&[0.0, 0.0], 0.0), (&[4.0, 0.0], 0.0), (&[0.0, 1.0], 0.0)]);
        let s = ActiveSet::new(vec![0, 1, 2]).unwrap();
        let x = Vector::from_vec(vec![2.0, -1.5]);
        let k = kkt_check(&i, &s, &x, 2.5, &Tolerances::default()).unwrap();
        // Barycentric oracle: x = a p0 + b p1 + c p2 with c = -1.5 < 0.
        assert!(matches!(k.status, KktStatus::NegativeMultiplier(2)));
    }

    #[test]
    fn center_at_point_is_error() {
        let i = inst(&[(&[0.0, 0.0], 1.0), (&[3.0, 0.0], 0.0)]);
        let s = ActiveSet::new(vec![0, 1]).unwrap();
        assert!(kkt_check(&i, &s, &Vector::zeros(2), 1.0, &Tolerances::default()).is_err());
    }
}
