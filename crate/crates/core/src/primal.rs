//! Primal active-set method.
//!
//! The primal method keeps a covering ball `[x, z]` whose active set `S` holds
//! every ball tangent to it from inside. A search step moves `x` along the path
//! of `S` toward `aff(S)`, so `z` decreases while the members of `S` stay active,
//! and stops early when another ball becomes tangent; that ball enters `S`.
//! An update step solves the multiplier system at `x`: nonnegative multipliers
//! certify optimality, a negative multiplier names a ball to drop, and an
//! inconsistent system sends the method back to searching.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::{
    coverage, preprocess_instance, ActiveSet, CoveringBall, Instance, Tolerances, Vector,
};
use crate::kkt::{kkt_check, KktStatus};
use crate::linalg::{affinely_independent, nnls};
use crate::path::{
    build_path, conic_path, coverage_gradient, crossings, descent_ray, first_violation,
    restore_activity, Orientation, PathKind, SearchPath, Step, ALPHA_SLACK,
};
use crate::solve::{trivial_result, IndexMap, SolveOptions, SolveResult, StepKind, TraceRecord};

/// Which phase the next iteration runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimalPhase {
    Search,
    Update,
}

/// State of the primal method on a preprocessed instance.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimalState {
    pub active: ActiveSet,
    pub x: Vector,
    pub z: f64,
    pub iteration: usize,
    pub phase: PrimalPhase,
    /// Kind of the last path walked.
    pub path: Option<PathKind>,
    /// Length of the last step.
    pub step: f64,
    /// Consecutive search steps of zero length.
    pub zero_steps: usize,
    pub safeguard_hits: usize,
}

/// Outcome of one primal iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimalEvent {
    /// A ball became tangent and joined `S`.
    Entered(usize),
    /// The path ended in `aff(S)`.
    ReachedAffineHull,
    /// The multipliers are nonnegative.
    Optimal,
    /// A ball with a negative multiplier left `S`.
    Left(usize),
}

/// Starts at `x0` (the centroid of the centers when absent) with the covering
/// radius and the smallest index attaining it.
pub fn primal_initialize(instance: &Instance, x0: Option<&Vector>) -> Result<PrimalState> {
    let x = match x0 {
        Some(x) if x.len() != instance.dim() => {
            return Err(Error::DimensionMismatch {
                expected: instance.dim(),
                found: x.len(),
            })
        }
        Some(x) => x.clone(),
        None => instance.centroid(),
    };
    let (z, arg) = instance.max_coverage(&x);
    Ok(PrimalState {
        active: ActiveSet::new(vec![arg])?,
        x,
        z,
        iteration: 0,
        phase: if instance.len() == 1 {
            PrimalPhase::Update
        } else {
            PrimalPhase::Search
        },
        path: None,
        step: 0.0,
        zero_steps: 0,
        safeguard_hits: 0,
    })
}

/// Ray path of an active set with equal radii; `None` when `x` is in `aff(S)`.
pub fn primal_ray_path(
    instance: &Instance,
    state: &PrimalState,
    tol: &Tolerances,
) -> Result<Option<SearchPath>> {
    let order = state.active.by_radius(instance);
    let (r1, rs) = (
        instance.ball(order[0]).radius,
        instance.ball(order[order.len() - 1]).radius,
    );
    if !tol.radii_equal(r1, rs) {
        return Err(Error::Degenerate(
            "ray path requested for unequal radii".into(),
        ));
    }
    Ok(descent_ray(instance, &state.active, &state.x))
}

/// Conic path of an active set with unequal radii, walking toward the vertex.
pub fn primal_conic_path(
    instance: &Instance,
    state: &PrimalState,
    tol: &Tolerances,
) -> Result<SearchPath> {
    conic_path(
        instance,
        &state.active,
        &state.x,
        Orientation::Descent,
        None,
        tol,
    )
}

/// Search path of the current active set; `None` when `x` is already in `aff(S)`.
pub fn primal_path(
    instance: &Instance,
    state: &PrimalState,
    tol: &Tolerances,
) -> Result<Option<SearchPath>> {
    build_path(
        instance,
        &state.active,
        &state.x,
        Orientation::Descent,
        None,
        tol,
    )
}

/// First admissible crossing of ball `k` along `path`.
///
/// A crossing counts only when the ball is about to be violated, i.e.
/// `f_k - f_top` increases there; at the start of the path it must increase
/// strictly.
pub fn primal_entering_step(
    instance: &Instance,
    path: &SearchPath,
    k: usize,
    tol: &Tolerances,
) -> Step {
    crossings(path, instance, k, path.bound, tol)
        .into_iter()
        .find(|c| c.slope > 1e-12 || (c.alpha > ALPHA_SLACK && c.slope > -1e-8))
        .map_or(Step::Unbounded, |c| Step::Finite(c.alpha.max(0.0)))
}

/// Ray-path variant of [`primal_entering_step`].
pub fn primal_ray_entering_step(
    instance: &Instance,
    path: &SearchPath,
    k: usize,
    tol: &Tolerances,
) -> Step {
    primal_entering_step(instance, path, k, tol)
}

/// Conic-path variant of [`primal_entering_step`].
pub fn primal_conic_entering_step(
    instance: &Instance,
    path: &SearchPath,
    k: usize,
    tol: &Tolerances,
) -> Step {
    primal_entering_step(instance, path, k, tol)
}

/// Runs one phase of the primal method.
pub fn primal_iterate(
    instance: &Instance,
    state: &mut PrimalState,
    tol: &Tolerances,
) -> Result<PrimalEvent> {
    state.iteration += 1;
    match state.phase {
        PrimalPhase::Search => search(instance, state, tol),
        PrimalPhase::Update => update(instance, state, tol),
    }
}

fn search(instance: &Instance, state: &mut PrimalState, tol: &Tolerances) -> Result<PrimalEvent> {
    state.phase = PrimalPhase::Update;
    let Some(path) = primal_path(instance, state, tol)? else {
        state.step = 0.0;
        state.zero_steps += 1;
        return Ok(PrimalEvent::ReachedAffineHull);
    };
    let bound = path.bound.finite().unwrap_or(f64::INFINITY);
    let outside: Vec<usize> = (0..instance.len())
        .filter(|&k| !state.active.contains(k))
        .collect();
    let steps: Vec<(usize, f64)> = outside
        .iter()
        .filter_map(|&k| {
            primal_entering_step(instance, &path, k, tol)
                .finite()
                .map(|a| (k, a))
        })
        .collect();
    let shortest = steps.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    let tie = 1e-10 * (1.0 + shortest.abs());
    let mut entering = steps.iter().find(|s| s.1 <= shortest + tie).copied();
    if shortest >= bound - 1e-10 * (1.0 + bound) {
        entering = None;
    }
    let mut alpha = entering.map_or(bound, |e| e.1.min(bound));
    if let Some((k, a)) = first_violation(&path, instance, &outside, alpha, tol) {
        if a < alpha - 1e-12 * (1.0 + alpha) {
            state.safeguard_hits += 1;
            entering = Some((k, a));
            alpha = a;
        }
    }
    if alpha > 1e-14 {
        state.x = path.point(alpha);
        state.zero_steps = 0;
    } else {
        state.zero_steps += 1;
    }
    state.step = alpha.max(0.0);
    state.path = Some(path.kind);
    let event = match entering {
        Some((e, _)) => {
            state.active.insert(e);
            PrimalEvent::Entered(e)
        }
        None => PrimalEvent::ReachedAffineHull,
    };
    restore_activity(instance, state.active.indices(), &mut state.x);
    state.z = instance.max_coverage(&state.x).0;
    Ok(event)
}

fn update(instance: &Instance, state: &mut PrimalState, tol: &Tolerances) -> Result<PrimalEvent> {
    state.step = 0.0;
    state.path = None;
    if instance.len() == 1 {
        return Ok(PrimalEvent::Optimal);
    }
    let centers: Vec<&Vector> = state
        .active
        .indices()
        .iter()
        .map(|&i| &instance.ball(i).center)
        .collect();
    let independent = affinely_independent(&centers, tol.rank);
    if !independent {
        return dependent_update(instance, state, tol);
    }
    let kkt = kkt_check(instance, &state.active, &state.x, state.z, tol)?;
    let status = match kkt.status {
        KktStatus::NoSolution => {
            if primal_path(instance, state, tol)?.is_some() {
                state.phase = PrimalPhase::Search;
                return search(instance, state, tol);
            }
            classify(&kkt.lambda, state.active.indices(), tol)
        }
        other => other,
    };
    match status {
        KktStatus::Optimal => Ok(PrimalEvent::Optimal),
        KktStatus::NegativeMultiplier(l) => {
            state.active.remove(l);
            Ok(PrimalEvent::Left(l))
        }
        KktStatus::NoSolution => {
            unreachable!("classification never reports an inconsistent system")
        }
    }
}

fn classify(lambda: &DVector<f64>, members: &[usize], tol: &Tolerances) -> KktStatus {
    let (pos, min) =
        lambda.iter().enumerate().fold(
            (0, f64::INFINITY),
            |acc, (k, &v)| if v < acc.1 { (k, v) } else { acc },
        );
    if min >= -tol.multiplier {
        KktStatus::Optimal
    } else {
        KktStatus::NegativeMultiplier(members[pos])
    }
}

/// Update for an affinely dependent active set: optimality by nonnegative least
/// squares, otherwise drop a ball whose removal leaves an independent set and
/// that stays covered along the reduced path.
fn dependent_update(
    instance: &Instance,
    state: &mut PrimalState,
    tol: &Tolerances,
) -> Result<PrimalEvent> {
    let members = state.active.indices().to_vec();
    let n = instance.dim();
    let a = DMatrix::from_fn(n + 1, members.len(), |r, c| {
        if r == 0 {
            1.0
        } else {
            coverage_gradient(instance, members[c], &state.x)[r - 1]
        }
    });
    let mut b = DVector::zeros(n + 1);
    b[0] = 1.0;
    let (_, residual) = nnls(&a, &b);
    if residual <= 1e-9 {
        return Ok(PrimalEvent::Optimal);
    }
    let mut sorted = members.clone();
    sorted.sort_unstable();
    let mut fallback = None;
    for &l in &sorted {
        let rest: Vec<usize> = members.iter().copied().filter(|&j| j != l).collect();
        let centers: Vec<&Vector> = rest.iter().map(|&i| &instance.ball(i).center).collect();
        if !affinely_independent(&centers, tol.rank) {
            continue;
        }
        fallback.get_or_insert(l);
        let reduced = PrimalState {
            active: ActiveSet::new(rest)?,
            ..state.clone()
        };
        let safe = match primal_path(instance, &reduced, tol) {
            Ok(Some(path)) => {
                let x0 = path.point(0.0);
                let t = path.tangent(0.0);
                let slope = (coverage_gradient(instance, l, &x0)
                    - coverage_gradient(instance, path.top, &x0))
                .dot(&t);
                slope <= 1e-12 * t.norm()
            }
            Ok(None) => true,
            Err(_) => false,
        };
        if safe {
            state.active.remove(l);
            return Ok(PrimalEvent::Left(l));
        }
    }
    let l = fallback.ok_or(Error::AffinelyDependent)?;
    state.active.remove(l);
    Ok(PrimalEvent::Left(l))
}

/// Solves an instance with the primal method.
pub fn primal_solve(instance: &Instance, options: &SolveOptions) -> Result<SolveResult> {
    let pre = preprocess_instance(instance);
    if let Some(winner) = pre.trivial {
        return Ok(trivial_result(&pre, winner));
    }
    let map = IndexMap::new(&pre);
    let inst = &pre.instance;
    let tol = options.tolerances;
    let mut state = primal_initialize(inst, options.initial_point.as_ref())?;
    let cap = options.iteration_cap(instance.len());
    let mut trace = Vec::new();
    if options.trace {
        trace.push(TraceRecord {
            iteration: 0,
            z: state.z,
            active: state.active.len(),
            kind: StepKind::Init,
            step: 0.0,
            entering: Some(map.original(state.active.indices()[0])),
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
        if state.zero_steps > inst.len() {
            return Err(Error::Degenerate(format!(
                "{} consecutive zero steps at z = {}",
                state.zero_steps, state.z
            )));
        }
        let event = primal_iterate(inst, &mut state, &tol)?;
        if options.trace {
            let (entering, leaving) = match event {
                PrimalEvent::Entered(e) => (Some(map.original(e)), None),
                PrimalEvent::Left(l) => (None, Some(map.original(l))),
                _ => (None, None),
            };
            let kind = match (event, state.path) {
                (PrimalEvent::Entered(_) | PrimalEvent::ReachedAffineHull, Some(k)) => {
                    StepKind::Search(k)
                }
                (PrimalEvent::ReachedAffineHull, None) => StepKind::Search(PathKind::Ray),
                _ => StepKind::Update,
            };
            trace.push(TraceRecord {
                iteration: state.iteration,
                z: state.z,
                active: state.active.len(),
                kind,
                step: state.step,
                entering,
                leaving,
            });
        }
        if event == PrimalEvent::Optimal {
            break;
        }
    }
    let z = state
        .active
        .indices()
        .iter()
        .map(|&i| coverage(&state.x, inst.ball(i)))
        .fold(state.z, f64::max);
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
    fn initialize_picks_farthest() {
        let i = inst(&[(&[0.0, 0.0], 1.0), (&[4.0, 0.0], 0.0)]);
        let s = primal_initialize(&i, Some(&Vector::zeros(2))).unwrap();
        assert_eq!(s.z, 4.0);
        assert_eq!(s.active.indices(), &[1]);
    }

    #[test]
    fn single_ball_is_trivial() {
        let i = inst(&[(&[1.0, 2.0], 3.0)]);
        let r = primal_solve(&i, &SolveOptions::default()).unwrap();
        assert_eq!(r.ball.radius, 3.0);
        assert_eq!(r.ball.center, Vector::from_vec(vec![1.0, 2.0]));
    }

    #[test]
    fn two_balls_reach_tangent_point() {
        let i = inst(&[(&[0.0, 0.0], 1.0), (&[4.0, 0.0], 0.0)]);
        let r = primal_solve(&i, &SolveOptions::default()).unwrap();
        assert_relative_eq!(r.ball.radius, 2.5, epsilon = 1e-12);
        assert_relative_eq!(
            r.ball.center,
            Vector::from_vec(vec![1.5, 0.0]),
            epsilon = 1e-12
        );
    }

    #[test]
    fn equilateral_triangle() {
        let h = 3.0_f64.sqrt();
        let i = inst(&[(&[0.0, 0.0], 0.0), (&[2.0, 0.0], 0.0), (&[1.0, h], 0.0)]);
        let r = primal_solve(&i, &SolveOptions::default()).unwrap();
        assert_relative_eq!(r.ball.radius, 2.0 / h, epsilon = 1e-12);
        assert_relative_eq!(
            r.ball.center,
            Vector::from_vec(vec![1.0, 1.0 / h]),
            epsilon = 1e-12
        );
    }
}
