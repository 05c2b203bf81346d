//! Reference solutions and certificates independent of the active-set solvers.
//!
//! * [`oracle_subgradient`] runs restarted subgradient descent on
//!   `f(x) = max_i ||x - p_i|| + r_i`.
//! * [`oracle_enumerate`] tries every candidate support of at most `n + 1` balls,
//!   computes the equal-coverage point in its affine hull in closed form and keeps
//!   the smallest feasible radius.
//! * [`validate`] checks feasibility and the optimality conditions of a claimed
//!   solution.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{coverage, ActiveSet, CoveringBall, Instance, Vector};
use crate::linalg::{barycentric, nnls, solve_linear, LinearSolution};
use crate::scalar::quadratic_roots;

/// Outcome of [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    /// `min_i (z - ||x - p_i|| - r_i)`.
    pub feasibility_margin: f64,
    /// Largest violation of the stationarity and activity conditions.
    pub kkt_residual: f64,
    /// Support the conditions were checked on.
    pub support: ActiveSet,
    /// Nonnegative weights `pi_i` over the support (sum one).
    pub barycentric: DVector<f64>,
    pub accepted: bool,
}

/// Feasibility threshold of an accepted certificate, relative to `1 + z`.
pub const MARGIN_TOL: f64 = 1e-7;
/// Optimality residual threshold of an accepted certificate.
pub const RESIDUAL_TOL: f64 = 1e-6;

/// Number of restarts of the subgradient method.
const EPOCHS: usize = 20;

/// Minimizes the covering radius by subgradient steps `x <- x - (c / sqrt(t)) g`.
///
/// `g` is the unit subgradient of the smallest-index maximizing term. The budget
/// is split into restarts; each starts from the best point so far with half the
/// previous step constant, beginning at the instance diameter. The seed jitters
/// the starting centroid.
pub fn oracle_subgradient(instance: &Instance, iters: usize, seed: u64) -> CoveringBall {
    let n = instance.dim();
    let m = instance.len();
    let centers: Vec<f64> = instance
        .balls()
        .iter()
        .flat_map(|b| b.center.iter().copied())
        .collect();
    let radii: Vec<f64> = instance.balls().iter().map(|b| b.radius).collect();
    let eval = |x: &[f64]| -> (f64, usize, f64) {
        let mut best = (f64::NEG_INFINITY, 0, 0.0);
        for i in 0..m {
            let p = &centers[i * n..(i + 1) * n];
            let d = x
                .iter()
                .zip(p)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            if d + radii[i] > best.0 {
                best = (d + radii[i], i, d);
            }
        }
        best
    };
    let diameter = instance.diameter().max(f64::MIN_POSITIVE);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<f64> = instance
        .centroid()
        .iter()
        .map(|c| c + 1e-3 * diameter * rng.random_range(-1.0..1.0))
        .collect();
    let mut best_x = x.clone();
    let mut best_z = eval(&x).0;
    let per_epoch = (iters / EPOCHS).max(1);
    let mut scale = diameter;
    let mut done = 0;
    while done < iters {
        x.clone_from(&best_x);
        let steps = per_epoch.min(iters - done);
        for t in 1..=steps {
            let (z, i, d) = eval(&x);
            if z < best_z {
                best_z = z;
                best_x.clone_from(&x);
            }
            if d <= 0.0 {
                break;
            }
            let step = scale / (t as f64).sqrt() / d;
            let p = &centers[i * n..(i + 1) * n];
            for (xk, pk) in x.iter_mut().zip(p) {
                *xk -= step * (*xk - pk);
            }
        }
        let z = eval(&x).0;
        if z < best_z {
            best_z = z;
            best_x.clone_from(&x);
        }
        done += steps;
        scale *= 0.5;
    }
    CoveringBall {
        center: Vector::from_vec(best_x),
        radius: best_z,
    }
}

/// Largest number of candidate supports [`oracle_enumerate`] accepts.
pub const ENUMERATION_LIMIT: u128 = 5_000_000;

/// Exhaustive search over supports of size `1..=n+1`.
///
/// For a support `T` with largest-radius member `p_1`, write `x = p_1 + M t` with
/// `M` the columns `p_j - p_1` and `D = ||x - p_1||`. Equal coverage gives the
/// linear system `G t = (|q|^2 - delta^2)/2 - D delta` with `G = M^T M`, so `t` is
/// affine in `D`, and `||M t(D)||^2 = D^2` is a quadratic in `D`. Each root is
/// refined by Newton's method on the square system and kept when feasible with
/// nonnegative weights.
pub fn oracle_enumerate(instance: &Instance) -> Result<CoveringBall> {
    let n = instance.dim();
    let m = instance.len();
    let kmax = (n + 1).min(m);
    let total: u128 = (1..=kmax).map(|k| binomial(m as u128, k as u128)).sum();
    if total > ENUMERATION_LIMIT {
        return Err(Error::Degenerate(format!(
            "{total} candidate supports exceed the enumeration limit"
        )));
    }
    let mut best: Option<CoveringBall> = None;
    let mut subset = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        subset.clear();
        subset.extend(0..k);
        loop {
            for cand in support_candidates(instance, &subset) {
                let z = instance.max_coverage(&cand.center).0;
                let feasible = z <= cand.radius + 1e-9 * (1.0 + cand.radius);
                if feasible && best.as_ref().is_none_or(|b| cand.radius < b.radius) {
                    best = Some(CoveringBall {
                        center: cand.center,
                        radius: z.max(cand.radius),
                    });
                }
            }
            if !next_combination(&mut subset, m) {
                break;
            }
        }
    }
    best.ok_or_else(|| Error::Degenerate("no support produced a feasible ball".into()))
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

fn next_combination(c: &mut [usize], m: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < m - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Equal-coverage points of a support with nonnegative weights.
fn support_candidates(instance: &Instance, subset: &[usize]) -> Vec<CoveringBall> {
    let mut order = subset.to_vec();
    order.sort_by(|&a, &b| {
        instance
            .ball(b)
            .radius
            .total_cmp(&instance.ball(a).radius)
            .then(a.cmp(&b))
    });
    let lead = instance.ball(order[0]);
    if order.len() == 1 {
        return vec![CoveringBall {
            center: lead.center.clone(),
            radius: lead.radius,
        }];
    }
    let k = order.len() - 1;
    let n = instance.dim();
    let m_mat = DMatrix::from_fn(n, k, |r, c| {
        instance.ball(order[c + 1]).center[r] - lead.center[r]
    });
    let g = m_mat.transpose() * &m_mat;
    let mut h = DVector::zeros(k);
    let mut q = DVector::zeros(k);
    for c in 0..k {
        let b = instance.ball(order[c + 1]);
        let delta = lead.radius - b.radius;
        h[c] = 0.5 * ((&b.center - &lead.center).norm_squared() - delta * delta);
        q[c] = -delta;
    }
    let (t0, t1) = match (solve_linear(&g, &h), solve_linear(&g, &q)) {
        (LinearSolution::Unique { x: a, .. }, LinearSolution::Unique { x: b, .. }) => (a, b),
        _ => return Vec::new(),
    };
    let u0 = &m_mat * &t0;
    let u1 = &m_mat * &t1;
    let roots = quadratic_roots(
        u1.norm_squared() - 1.0,
        2.0 * u0.dot(&u1),
        u0.norm_squared(),
    );
    let mut out = Vec::new();
    for d in roots {
        if d < 0.0
            || order[1..]
                .iter()
                .any(|&j| d + lead.radius - instance.ball(j).radius < 0.0)
        {
            continue;
        }
        let t = &t0 + &t1 * d;
        let mut x = &lead.center + &m_mat * t;
        newton_equalize(instance, &order, &m_mat, &mut x);
        let centers: Vec<&Vector> = order.iter().map(|&i| &instance.ball(i).center).collect();
        let pi = barycentric(&x, &centers, 1e-10, 1e-7);
        if !pi.is_consistent() || pi.x().iter().any(|&p| p < -1e-9) {
            continue;
        }
        let radius = order
            .iter()
            .map(|&i| coverage(&x, instance.ball(i)))
            .fold(f64::NEG_INFINITY, f64::max);
        out.push(CoveringBall { center: x, radius });
    }
    out
}

/// Newton iterations on `f_j(p_1 + M t) - z = 0` for all members, unknowns `(t, z)`.
fn newton_equalize(instance: &Instance, order: &[usize], m_mat: &DMatrix<f64>, x: &mut Vector) {
    let s = order.len();
    let k = s - 1;
    let lead = &instance.ball(order[0]).center;
    let mut t = {
        let sol = solve_linear(m_mat, &(&*x - lead));
        sol.x().clone()
    };
    let mut z = coverage(x, instance.ball(order[0]));
    for _ in 0..8 {
        let xc = lead + m_mat * &t;
        let mut jac = DMatrix::zeros(s, s);
        let mut res = DVector::zeros(s);
        for (r, &i) in order.iter().enumerate() {
            let b = instance.ball(i);
            let diff = &xc - &b.center;
            let d = diff.norm();
            res[r] = d + b.radius - z;
            if d > 0.0 {
                let grad = m_mat.transpose() * (diff / d);
                for c in 0..k {
                    jac[(r, c)] = grad[c];
                }
            }
            jac[(r, k)] = -1.0;
        }
        if res.amax() <= 1e-15 * (1.0 + z.abs()) {
            *x = xc;
            return;
        }
        let step = solve_linear(&jac, &res);
        if !step.is_consistent() {
            *x = xc;
            return;
        }
        let dx = step.x();
        for c in 0..k {
            t[c] -= dx[c];
        }
        z -= dx[k];
    }
    *x = lead + m_mat * &t;
}

/// Computes the certificate of `candidate` on `support`.
///
/// With an empty `support` the balls active within `1e-7 (1 + z)` are used. The
/// residual is the larger of the relative activity error over the support and the
/// nonnegative least-squares residual of `sum lambda_i [1; g_i] = [1; 0]` with
/// `g_i = (x - p_i)/||x - p_i||` (zero when `x = p_i`).
pub fn validate(
    instance: &Instance,
    candidate: &CoveringBall,
    support: &ActiveSet,
) -> Result<Certificate> {
    let n = instance.dim();
    if candidate.center.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: candidate.center.len(),
        });
    }
    if let Some(&bad) = support.indices().iter().find(|&&i| i >= instance.len()) {
        return Err(Error::InvalidBall {
            index: bad,
            reason: "support index outside the instance".into(),
        });
    }
    let x = &candidate.center;
    let z = candidate.radius;
    let values: Vec<f64> = instance.balls().iter().map(|b| coverage(x, b)).collect();
    let feasibility_margin = values.iter().map(|v| z - v).fold(f64::INFINITY, f64::min);
    let support = if support.is_empty() {
        let slack = MARGIN_TOL * (1.0 + z.abs());
        ActiveSet::new(
            (0..instance.len())
                .filter(|&i| (z - values[i]).abs() <= slack)
                .collect(),
        )?
    } else {
        support.clone()
    };
    let idx = support.indices();
    let activity = idx
        .iter()
        .map(|&i| (z - values[i]).abs() / (1.0 + z.abs()))
        .fold(0.0, f64::max);
    let mut dist = Vec::with_capacity(idx.len());
    let a = DMatrix::from_fn(n + 1, idx.len(), |r, c| {
        let diff = x - &instance.ball(idx[c]).center;
        let d = diff.norm();
        if r == 0 {
            1.0
        } else if d > 0.0 {
            diff[r - 1] / d
        } else {
            0.0
        }
    });
    for &i in idx {
        dist.push((x - &instance.ball(i).center).norm());
    }
    let mut b = DVector::zeros(n + 1);
    b[0] = 1.0;
    let (lambda, stationarity) = if idx.is_empty() {
        (DVector::zeros(0), 1.0)
    } else {
        nnls(&a, &b)
    };
    let kkt_residual = activity.max(stationarity);
    let barycentric = if dist.contains(&0.0) {
        DVector::from_iterator(
            dist.len(),
            dist.iter().map(|&d| if d == 0.0 { 1.0 } else { 0.0 }),
        )
    } else {
        crate::kkt::lambda_to_pi(&lambda, &dist)
    };
    let accepted =
        feasibility_margin >= -MARGIN_TOL * (1.0 + z.abs()) && kkt_residual <= RESIDUAL_TOL;
    Ok(Certificate {
        feasibility_margin,
        kkt_residual,
        support,
        barycentric,
        accepted,
    })
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
    fn enumerate_examples() {
        let one = inst(&[(&[1.0, 1.0], 2.0)]);
        assert_eq!(oracle_enumerate(&one).unwrap().radius, 2.0);
        let two = inst(&[(&[0.0, 0.0], 1.0), (&[4.0, 0.0], 0.0)]);
        let b = oracle_enumerate(&two).unwrap();
        assert_relative_eq!(b.radius, 2.5, epsilon = 1e-14);
        assert_relative_eq!(b.center, Vector::from_vec(vec![1.5, 0.0]), epsilon = 1e-14);
    }

    #[test]
    fn subgradient_triangle() {
        let h = 3.0_f64.sqrt();
        let tri = inst(&[(&[0.0, 0.0], 0.0), (&[2.0, 0.0], 0.0), (&[1.0, h], 0.0)]);
        let b = oracle_subgradient(&tri, 200_000, 7);
        assert!((b.radius - 2.0 / h).abs() <= 1e-4);
    }

    #[test]
    fn validate_examples() {
        let two = inst(&[(&[0.0, 0.0], 1.0), (&[4.0, 0.0], 0.0)]);
        let s = ActiveSet::new(vec![0, 1]).unwrap();
        let opt = CoveringBall {
            center: Vector::from_vec(vec![1.5, 0.0]),
            radius: 2.5,
        };
        let c = validate(&two, &opt, &s).unwrap();
        assert!(c.accepted);
        assert!(c.feasibility_margin >= -1e-12 && c.kkt_residual <= 1e-10);
        let moved = CoveringBall {
            center: Vector::from_vec(vec![1.501, 0.0]),
            radius: 2.5,
        };
        assert!(validate(&two, &moved, &s).unwrap().kkt_residual > 1e-4);
        let small = CoveringBall {
            center: opt.center.clone(),
            radius: 2.4,
        };
        let c = validate(&two, &small, &s).unwrap();
        assert!(c.feasibility_margin < 0.0 && !c.accepted);
    }
}
