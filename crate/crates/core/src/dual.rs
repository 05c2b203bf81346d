//! Dual active-set method.
//!
//! The dual method keeps an active set `S` with `x` in `conv(S)`, so `[x, z]` is
//! the optimal ball of `S` and `z` is a lower bound on the optimum. While some
//! ball `e` is not covered, `x` walks along the path of `S` toward `p_e`, raising
//! `z`, until `e` becomes tangent. The barycentric coordinates of `x(alpha)` with
//! respect to `S + e` are tracked in closed form; when one of them would turn
//! negative first, the path leaves the simplex through a facet, the corresponding
//! ball is dropped and the walk toward `e` continues.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::conic::ConicKind;
use crate::error::{Error, Result};
use crate::geometry::{
    coverage, preprocess_instance, ActiveSet, CoveringBall, Instance, Tolerances, Vector,
};
use crate::linalg::{affinely_independent, barycentric, solve_linear_with};
use crate::path::{
    bisect, build_path, crossings, restore_activity, scan_crossings, Orientation, PathKind,
    SearchPath, Step, ALPHA_SLACK,
};
use crate::scalar::{solve_cos_sin, solve_parabola_quadratic, solve_sec_tan};
use crate::solve::{trivial_result, IndexMap, SolveOptions, SolveResult, StepKind, TraceRecord};

/// State of the dual method on a preprocessed instance.
#[derive(Debug, Clone, PartialEq)]
pub struct DualState {
    pub active: ActiveSet,
    pub x: Vector,
    pub z: f64,
    /// Ball being walked toward, kept across facet exits.
    pub entering: Option<usize>,
    pub iteration: usize,
    /// Kind of the last path walked.
    pub path: Option<PathKind>,
    /// Length of the last step.
    pub step: f64,
    pub safeguard_hits: usize,
}

/// Result of [`dual_optimality_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualCheck {
    Optimal,
    /// Most violated ball, smallest index on ties.
    Entering(usize),
}

/// Outcome of one dual iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualEvent {
    /// Every ball is covered.
    Optimal,
    /// The entering ball became tangent and joined `S`.
    Entered {
        entering: usize,
        dropped: Option<usize>,
    },
    /// The path left the simplex; `leaving` was dropped and the walk continues.
    Exited {
        entering: usize,
        leaving: usize,
        dropped: Option<usize>,
    },
}

/// Decision of [`dual_facet_exit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FacetOutcome {
    /// `x(alpha')` lies in the simplex: the entering ball joins `S`.
    Accepted(f64),
    /// The first facet is reached at `alpha`; `leaving` vanishes there.
    Exit { alpha: f64, leaving: usize },
}

/// Linear systems giving the barycentric coordinates of `x(alpha)` with respect
/// to `S + e` as `pi = gamma - P delta - Q xi`, where `(P, Q)` are the path
/// coordinates along the axis and the plane vector (ray: `P = alpha`, `Q = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct FacetExitSystem {
    /// Columns `[1; o - p_i]` over `members`, with `o` the curve center (ray: `x_S`).
    pub t: DMatrix<f64>,
    pub gamma: DVector<f64>,
    pub delta: DVector<f64>,
    pub xi: Option<DVector<f64>>,
    /// `S` in stored order followed by the entering ball.
    pub members: Vec<usize>,
}

impl FacetExitSystem {
    /// Builds and solves the systems for `path`.
    pub fn new(
        instance: &Instance,
        s: &ActiveSet,
        e: usize,
        path: &SearchPath,
        tol: &Tolerances,
    ) -> Result<Self> {
        let mut members = s.indices().to_vec();
        members.push(e);
        let n = instance.dim();
        let (origin, dir, plane) = match &path.curve {
            Some(c) => (
                c.conic.center.clone(),
                c.conic.axis.clone(),
                Some(c.u.clone()),
            ),
            None => (path.base.clone(), path.direction.clone(), None),
        };
        let t = DMatrix::from_fn(n + 1, members.len(), |r, c| {
            if r == 0 {
                1.0
            } else {
                origin[r - 1] - instance.ball(members[c]).center[r - 1]
            }
        });
        let lift = |v: &Vector| {
            let mut out = DVector::zeros(n + 1);
            out.rows_mut(1, n).copy_from(v);
            out
        };
        let mut e1 = DVector::zeros(n + 1);
        e1[0] = 1.0;
        let solve = |rhs: &DVector<f64>| -> Result<DVector<f64>> {
            let sol = solve_linear_with(&t, rhs, tol.rank, 1e-7);
            match sol {
                crate::linalg::LinearSolution::Unique { x, .. } => Ok(x),
                _ => Err(Error::Degenerate(
                    "facet-exit system is singular or inconsistent".into(),
                )),
            }
        };
        let gamma = solve(&e1)?;
        let delta = solve(&lift(&dir))?;
        let xi = plane.as_ref().map(|u| solve(&lift(u))).transpose()?;
        Ok(Self {
            t,
            gamma,
            delta,
            xi,
            members,
        })
    }

    /// Barycentric coordinates at path coordinates `(p, q)`.
    fn at_coordinates(&self, p: f64, q: f64) -> DVector<f64> {
        let mut pi = &self.gamma - &self.delta * p;
        if let Some(xi) = &self.xi {
            pi -= xi * q;
        }
        pi
    }

    /// Barycentric coordinates of `x(alpha)`.
    pub fn pi(&self, path: &SearchPath, alpha: f64) -> DVector<f64> {
        match &path.curve {
            Some(c) => {
                let (p, q) = c.coefficients(path.beta_s + alpha);
                self.at_coordinates(p, q)
            }
            None => self.at_coordinates(alpha, 0.0),
        }
    }

    /// Parameters in `[0, limit]` where coordinate `j` crosses zero while decreasing.
    fn exits(&self, path: &SearchPath, j: usize, limit: f64) -> Vec<f64> {
        let (g, d) = (self.gamma[j], self.delta[j]);
        let x = self.xi.as_ref().map_or(0.0, |xi| xi[j]);
        let raw: Vec<f64> = match &path.curve {
            None => {
                if d.abs() <= 1e-300 {
                    Vec::new()
                } else {
                    vec![g / d]
                }
            }
            Some(c) => {
                let k = &c.conic;
                let betas: Vec<f64> = match k.kind {
                    ConicKind::Hyperboloid => solve_sec_tan(k.a * d, k.b * x, g)
                        .valid()
                        .iter()
                        .map(|r| r.beta)
                        .collect(),
                    ConicKind::Ellipsoid => solve_cos_sin(k.a * d, k.b * x, g)
                        .to_vec()
                        .iter()
                        .flat_map(|r| [r.beta - 2.0 * PI, r.beta, r.beta + 2.0 * PI])
                        .collect(),
                    ConicKind::Paraboloid => {
                        solve_parabola_quadratic(k.c_tilde * d, 2.0 * k.c_tilde * x, g)
                    }
                };
                betas.into_iter().map(|b| b - path.beta_s).collect()
            }
        };
        let h = 1e-7 * (1.0 + limit.abs());
        raw.into_iter()
            .filter(|a| {
                a.is_finite() && *a >= -ALPHA_SLACK && *a <= limit + ALPHA_SLACK * (1.0 + limit)
            })
            .filter(|&a| {
                let before = self.pi(path, (a - h).max(0.0))[j];
                let after = self.pi(path, a + h)[j];
                after < before
            })
            .map(|a| a.max(0.0))
            .collect()
    }
}

/// Initial pair `(j, k)` with `r_j >= r_k` and the tangent point of their two balls.
///
/// Without an explicit pair the pair maximizing `||p_j - p_k|| + r_j + r_k` is
/// used (exhaustively up to 2000 balls, by a double sweep above that).
pub fn dual_initialize(instance: &Instance, pair: Option<(usize, usize)>) -> Result<DualState> {
    let m = instance.len();
    if m == 1 {
        let b = instance.ball(0);
        return Ok(DualState {
            active: ActiveSet::new(vec![0])?,
            x: b.center.clone(),
            z: b.radius,
            entering: None,
            iteration: 0,
            path: None,
            step: 0.0,
            safeguard_hits: 0,
        });
    }
    let (j, k) = match pair {
        Some((j, k)) if j < m && k < m && j != k => (j, k),
        Some(_) => {
            return Err(Error::Degenerate(
                "initial pair must be two distinct ball indices".into(),
            ))
        }
        None => farthest_pair(instance),
    };
    let (bj, bk) = (instance.ball(j), instance.ball(k));
    let (j, k) = if bk.radius > bj.radius || (bk.radius == bj.radius && k < j) {
        (k, j)
    } else {
        (j, k)
    };
    let (bj, bk) = (instance.ball(j), instance.ball(k));
    let diff = &bj.center - &bk.center;
    let dist = diff.norm();
    let mid = (&bj.center + &bk.center) * 0.5;
    let a = 0.5 * (bj.radius - bk.radius);
    let x = mid + diff * (a / dist);
    let z = 0.5 * (dist + bj.radius + bk.radius);
    Ok(DualState {
        active: ActiveSet::new(vec![j, k])?,
        x,
        z,
        entering: None,
        iteration: 0,
        path: None,
        step: 0.0,
        safeguard_hits: 0,
    })
}

fn farthest_pair(instance: &Instance) -> (usize, usize) {
    let m = instance.len();
    let span = |i: usize, j: usize| {
        let (a, b) = (instance.ball(i), instance.ball(j));
        (&a.center - &b.center).norm() + a.radius + b.radius
    };
    let mut best = (0, 1, span(0, 1));
    if m <= 2000 {
        for i in 0..m {
            for j in i + 1..m {
                let v = span(i, j);
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
    } else {
        let far = |i: usize| {
            (0..m).filter(|&j| j != i).map(|j| (j, span(i, j))).fold(
                (i, f64::NEG_INFINITY),
                |acc, c| if c.1 > acc.1 { c } else { acc },
            )
        };
        let (j, _) = far(0);
        let (k, v) = far(j);
        best = (j.min(k), j.max(k), v);
    }
    (best.0, best.1)
}

/// Optimal when every ball is covered within the activity slack; otherwise the
/// most violated ball.
pub fn dual_optimality_check(
    state: &DualState,
    instance: &Instance,
    tol: &Tolerances,
) -> DualCheck {
    let (worst, arg) = instance.max_coverage(&state.x);
    if worst - state.z > tol.active_slack(state.z) {
        DualCheck::Entering(arg)
    } else {
        DualCheck::Optimal
    }
}

/// Makes `S + e` affinely independent by the minimum ratio rule.
///
/// Returns the dropped ball, if any. `x` stays in the convex hull of the reduced
/// set together with `p_e`.
pub fn dual_affine_update(
    state: &mut DualState,
    instance: &Instance,
    e: usize,
    tol: &Tolerances,
) -> Result<Option<usize>> {
    let members = state.active.indices().to_vec();
    let mut centers: Vec<&Vector> = members.iter().map(|&i| &instance.ball(i).center).collect();
    centers.push(&instance.ball(e).center);
    if affinely_independent(&centers, tol.rank) {
        return Ok(None);
    }
    centers.pop();
    let n = instance.dim();
    let x = &state.x;
    let a = DMatrix::from_fn(n + 1, members.len(), |r, c| {
        if r == 0 {
            1.0
        } else {
            x[r - 1] - instance.ball(members[c]).center[r - 1]
        }
    });
    let mut rhs = DVector::zeros(n + 1);
    rhs[0] = -1.0;
    for r in 0..n {
        rhs[r + 1] = -(x[r] - instance.ball(e).center[r]);
    }
    let lambda = solve_linear_with(&a, &rhs, tol.rank, 1e-7).x().clone();
    let pi = barycentric(x, &centers, tol.rank, 1e-7).x().clone();
    let mut best: Option<(usize, f64)> = None;
    for (c, &i) in members.iter().enumerate() {
        if lambda[c] < -1e-12 {
            let ratio = pi[c].max(0.0) / -lambda[c];
            let better = match best {
                None => true,
                Some((b, r)) => {
                    ratio < r - 1e-12 * (1.0 + r) || (ratio <= r + 1e-12 * (1.0 + r) && i < b)
                }
            };
            if better {
                best = Some((i, ratio));
            }
        }
    }
    let (l, _) = best
        .ok_or_else(|| Error::Degenerate("dependent set without a negative coefficient".into()))?;
    state.active.remove(l);
    Ok(Some(l))
}

/// Search path of `S` toward `e` and the step `alpha'` at which `e` becomes tangent.
///
/// Returns `Step::Unbounded` when `e` is not reached inside the path domain.
pub fn dual_path_and_step(
    state: &DualState,
    instance: &Instance,
    e: usize,
    tol: &Tolerances,
) -> Result<(SearchPath, Step)> {
    let path = build_path(
        instance,
        &state.active,
        &state.x,
        Orientation::Ascent,
        Some(e),
        tol,
    )?
    .ok_or_else(|| Error::Degenerate("ascent path of zero length".into()))?;
    let step = crossings(&path, instance, e, path.bound, tol)
        .into_iter()
        .next()
        .map_or(Step::Unbounded, |c| Step::Finite(c.alpha.max(0.0)));
    Ok((path, step))
}

/// Ray-path variant of [`dual_path_and_step`].
pub fn dual_ray_path_and_step(
    state: &DualState,
    instance: &Instance,
    e: usize,
    tol: &Tolerances,
) -> Result<(SearchPath, Step)> {
    dual_path_and_step(state, instance, e, tol)
}

/// Conic-path variant of [`dual_path_and_step`].
pub fn dual_conic_path_and_step(
    state: &DualState,
    instance: &Instance,
    e: usize,
    tol: &Tolerances,
) -> Result<(SearchPath, Step)> {
    dual_path_and_step(state, instance, e, tol)
}

/// Accepts `alpha'` when `x(alpha')` lies in `conv(S + e)`, otherwise returns the
/// first facet the path crosses and the ball spanning the opposite vertex.
pub fn dual_facet_exit(
    state: &DualState,
    instance: &Instance,
    path: &SearchPath,
    e: usize,
    alpha: Step,
    tol: &Tolerances,
) -> Result<FacetOutcome> {
    let system = FacetExitSystem::new(instance, &state.active, e, path, tol)?;
    if let Step::Finite(a) = alpha {
        let pi = system.pi(path, a);
        if pi.iter().all(|&p| p >= -tol.barycentric) {
            return Ok(FacetOutcome::Accepted(a));
        }
    }
    let limit = match alpha {
        Step::Finite(a) => a,
        Step::Unbounded => path.bound.finite().ok_or_else(|| {
            Error::Degenerate("entering ball unreachable on an unbounded path".into())
        })?,
    };
    let s = state.active.len();
    let mut best: Option<(usize, f64)> = None;
    for j in 0..s {
        let mut roots = system.exits(path, j, limit);
        if roots.is_empty() && system.pi(path, limit)[j] < -tol.barycentric {
            let f = |a: f64| system.pi(path, a)[j];
            roots.push(if f(0.0) < 0.0 {
                0.0
            } else {
                bisect(f, 0.0, limit)
            });
        }
        let Some(first) = roots.into_iter().reduce(f64::min) else {
            continue;
        };
        let i = system.members[j];
        let better = match best {
            None => true,
            Some((b, a)) => {
                first < a - 1e-12 * (1.0 + a) || (first <= a + 1e-12 * (1.0 + a) && i < b)
            }
        };
        if better {
            best = Some((i, first));
        }
    }
    match best {
        Some((leaving, a)) => Ok(FacetOutcome::Exit { alpha: a, leaving }),
        None => match alpha {
            Step::Finite(a) => Ok(FacetOutcome::Accepted(a)),
            Step::Unbounded => Err(Error::Degenerate(
                "no facet exit before the end of the path".into(),
            )),
        },
    }
}

/// Runs one dual iteration: pick or keep the entering ball, then walk.
pub fn dual_iterate(
    state: &mut DualState,
    instance: &Instance,
    tol: &Tolerances,
) -> Result<DualEvent> {
    state.iteration += 1;
    state.step = 0.0;
    state.path = None;
    let mut dropped = None;
    let e = match state.entering {
        Some(e) => e,
        None => match dual_optimality_check(state, instance, tol) {
            DualCheck::Optimal => return Ok(DualEvent::Optimal),
            DualCheck::Entering(e) => {
                dropped = dual_affine_update(state, instance, e, tol)?;
                state.entering = Some(e);
                e
            }
        },
    };
    let (path, mut alpha) = dual_path_and_step(state, instance, e, tol)?;
    if alpha == Step::Unbounded {
        if let Some(c) = scan_crossings(&path, instance, e, path.bound).first() {
            state.safeguard_hits += 1;
            alpha = Step::Finite(c.alpha);
        }
    }
    state.path = Some(path.kind);
    let outcome = dual_facet_exit(state, instance, &path, e, alpha, tol)?;
    let (a, event) = match outcome {
        FacetOutcome::Accepted(a) => {
            state.active.insert(e);
            state.entering = None;
            (
                a,
                DualEvent::Entered {
                    entering: e,
                    dropped,
                },
            )
        }
        FacetOutcome::Exit { alpha, leaving } => {
            state.active.remove(leaving);
            (
                alpha,
                DualEvent::Exited {
                    entering: e,
                    leaving,
                    dropped,
                },
            )
        }
    };
    if a > 1e-14 {
        state.x = path.point(a);
    }
    state.step = a.max(0.0);
    restore_activity(instance, state.active.indices(), &mut state.x);
    let z = state
        .active
        .indices()
        .iter()
        .map(|&i| coverage(&state.x, instance.ball(i)))
        .fold(f64::NEG_INFINITY, f64::max);
    state.z = z.max(state.z);
    Ok(event)
}

/// Solves an instance with the dual method.
pub fn dual_solve(instance: &Instance, options: &SolveOptions) -> Result<SolveResult> {
    let pre = preprocess_instance(instance);
    if let Some(winner) = pre.trivial {
        return Ok(trivial_result(&pre, winner));
    }
    let map = IndexMap::new(&pre);
    let inst = &pre.instance;
    let tol = options.tolerances;
    let pair = match options.initial_pair {
        Some((j, k)) => Some((
            map.local(j).ok_or_else(|| {
                Error::Degenerate(format!("initial ball {j} is contained in another ball"))
            })?,
            map.local(k).ok_or_else(|| {
                Error::Degenerate(format!("initial ball {k} is contained in another ball"))
            })?,
        )),
        None => None,
    };
    let mut state = dual_initialize(inst, pair)?;
    let cap = options.iteration_cap(instance.len());
    let mut trace = Vec::new();
    if options.trace {
        trace.push(TraceRecord {
            iteration: 0,
            z: state.z,
            active: state.active.len(),
            kind: StepKind::Init,
            step: 0.0,
            entering: None,
            leaving: None,
        });
    }
    loop {
        if state.iteration >= cap {
            return Err(Error::IterationLimit {
                limit: cap,
                best: CoveringBall {
                    center: state.x.clone(),
                    radius: state.z,
                },
            });
        }
        let event = dual_iterate(&mut state, inst, &tol)?;
        if options.trace {
            let (entering, leaving) = match event {
                DualEvent::Optimal => (None, None),
                DualEvent::Entered { entering, dropped } => (Some(entering), dropped),
                DualEvent::Exited { leaving, .. } => (None, Some(leaving)),
            };
            trace.push(TraceRecord {
                iteration: state.iteration,
                z: state.z,
                active: state.active.len(),
                kind: state.path.map_or(StepKind::Update, StepKind::Search),
                step: state.step,
                entering: entering.map(|i| map.original(i)),
                leaving: leaving.map(|i| map.original(i)),
            });
        }
        if event == DualEvent::Optimal {
            break;
        }
    }
    let z = inst.max_coverage(&state.x).0.max(state.z);
    Ok(SolveResult {
        ball: CoveringBall {
            center: state.x,
            radius: z,
        },
        support: map.active_set(&state.active),
        iterations: state.iteration,
        trace,
        safeguard_hits: state.safeguard_hits,
        removed: pre.removed,
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
    fn initialize_examples() {
        let i = inst(&[(&[0.0, 0.0], 1.0), (&[4.0, 0.0], 0.0)]);
        let s = dual_initialize(&i, None).unwrap();
        assert_relative_eq!(s.x, Vector::from_vec(vec![1.5, 0.0]), epsilon = 1e-15);
        assert_relative_eq!(s.z, 2.5, epsilon = 1e-15);
        assert_eq!(
            dual_optimality_check(&s, &i, &Tolerances::default()),
            DualCheck::Optimal
        );
        let i = inst(&[(&[-1.0, 0.0], 0.0), (&[1.0, 0.0], 0.0)]);
        let s = dual_initialize(&i, None).unwrap();
        assert_relative_eq!(s.x, Vector::zeros(2), epsilon = 1e-15);
        assert_relative_eq!(s.z, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn planted_far_ball_enters() {
        let i = inst(&[(&[-1.0, 0.0], 0.0), (&[1.0, 0.0], 0.0), (&[0.0, 9.0], 0.0)]);
        let s = dual_initialize(&i, Some((0, 1))).unwrap();
        assert_eq!(
            dual_optimality_check(&s, &i, &Tolerances::default()),
            DualCheck::Entering(2)
        );
    }

    #[test]
    fn min_ratio_drop() {
        // Three collinear points: adding the third makes the set dependent.
        let i = inst(&[(&[0.0, 0.0], 0.0), (&[2.0, 0.0], 0.0), (&[5.0, 0.0], 0.0)]);
        let mut s = dual_initialize(&i, Some((0, 1))).unwrap();
        let dropped = dual_affine_update(&mut s, &i, 2, &Tolerances::default()).unwrap();
        assert_eq!(dropped, Some(1));
        assert_eq!(s.active.indices(), &[0]);
    }

    #[test]
    fn equilateral_triangle() {
        let h = 3.0_f64.sqrt();
        let i = inst(&[(&[0.0, 0.0], 0.0), (&[2.0, 0.0], 0.0), (&[1.0, h], 0.0)]);
        let r = dual_solve(&i, &SolveOptions::default()).unwrap();
        assert_relative_eq!(r.ball.radius, 2.0 / h, epsilon = 1e-12);
        assert_relative_eq!(
            r.ball.center,
            Vector::from_vec(vec![1.0, 1.0 / h]),
            epsilon = 1e-12
        );
    }

    #[test]
    fn obtuse_triangle_drops_once() {
        let i = inst(&[
            (&[0.0, 0.0], 0.0),
            (&[4.0, 0.0], 0.0),
            (&[2.0, 0.5], 0.0),
            (&[2.0, -0.2], 0.0),
        ]);
        let r = dual_solve(
            &i,
            &SolveOptions {
                initial_pair: Some((2, 3)),
                trace: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_relative_eq!(r.ball.radius, 2.0, epsilon = 1e-12);
        let mut support = r.support.indices().to_vec();
        support.sort_unstable();
        assert_eq!(support, vec![0, 1]);
    }
}
