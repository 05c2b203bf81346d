//! Search paths shared by the primal and dual methods.
//!
//! With the active set ordered `r_1 >= ... >= r_s`, a path keeps every member of
//! `S` active while the covering radius moves monotonically:
//!
//! * equal radii give a ray `x(alpha) = x_S + alpha d_S`;
//! * unequal radii give a planar slice `y(beta)` of the conic section `B_S`,
//!   walked as `x(alpha) = y(beta_S + alpha)`.
//!
//! The primal walks toward the affine hull of `S` (radius decreasing), the dual
//! walks toward an entering ball (radius increasing). Crossings with the bisector
//! of a further ball are located with the scalar solvers, polished by Newton's
//! method on the coverage difference and kept only when that difference vanishes.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::conic::{
    build_pair_hyperplane, intersect_sequence, parametrize_2d, ConicKind, ConicSection, Curve,
};
use crate::error::{Error, Result};
use crate::geometry::{coverage, ActiveSet, Instance, Tolerances, Vector};
use crate::linalg::{orthonormal_basis, project_onto_orthonormal, solve_linear, RANK_TOL};
use crate::scalar::{quadratic_roots, solve_cos_sin, solve_parabola_quadratic, solve_sec_tan};

/// A step length that may be unbounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step {
    Finite(f64),
    Unbounded,
}

impl Step {
    /// The finite value, if any.
    pub fn finite(self) -> Option<f64> {
        match self {
            Self::Finite(v) => Some(v),
            Self::Unbounded => None,
        }
    }

    /// Whether `alpha` does not exceed this bound.
    pub fn admits(self, alpha: f64) -> bool {
        match self {
            Self::Finite(v) => alpha <= v,
            Self::Unbounded => true,
        }
    }

    /// The smaller of two steps.
    pub fn min(self, other: Self) -> Self {
        match (self, other) {
            (Self::Finite(a), Self::Finite(b)) => Self::Finite(a.min(b)),
            (Self::Finite(a), Self::Unbounded) | (Self::Unbounded, Self::Finite(a)) => {
                Self::Finite(a)
            }
            (Self::Unbounded, Self::Unbounded) => Self::Unbounded,
        }
    }
}

/// Geometric kind of a search path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PathKind {
    Ray,
    Hyperbola,
    Ellipse,
    Parabola,
}

impl PathKind {
    /// Lower-case name used in traces.
    pub fn name(self) -> &'static str {
        match self {
            Self::Ray => "ray",
            Self::Hyperbola => "hyperbola",
            Self::Ellipse => "ellipse",
            Self::Parabola => "parabola",
        }
    }
}

/// Which way a path moves the covering radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Toward the affine hull of `S`, radius decreasing.
    Descent,
    /// Toward an entering ball, radius increasing.
    Ascent,
}

/// A parametrized search path `x(alpha)`, `0 <= alpha <= bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchPath {
    pub kind: PathKind,
    /// Starting point `x(0)`.
    pub base: Vector,
    /// Ray direction `d_S` (zero for conic paths).
    pub direction: Vector,
    /// Planar conic for conic paths.
    pub curve: Option<Curve>,
    /// Curve parameter of `x(0)`.
    pub beta_s: f64,
    /// Largest admissible step.
    pub bound: Step,
    /// Member of `S` with the largest radius.
    pub top: usize,
    /// Member of `S` with the smallest radius.
    pub last: usize,
}

impl SearchPath {
    /// The point `x(alpha)`.
    pub fn point(&self, alpha: f64) -> Vector {
        match &self.curve {
            Some(c) => c.point(self.beta_s + alpha),
            None => &self.base + &self.direction * alpha,
        }
    }

    /// The derivative `x'(alpha)`.
    pub fn tangent(&self, alpha: f64) -> Vector {
        match &self.curve {
            Some(c) => c.tangent(self.beta_s + alpha),
            None => self.direction.clone(),
        }
    }

    /// Covering radius `z(alpha)` of the members of `S`.
    pub fn radius(&self, instance: &Instance, alpha: f64) -> f64 {
        coverage(&self.point(alpha), instance.ball(self.top))
    }

    /// The underlying conic section, for conic paths.
    pub fn conic(&self) -> Option<&ConicSection> {
        self.curve.as_ref().map(|c| &c.conic)
    }
}

/// Gradient `(x - p)/||x - p||` of a coverage function; zero at the center.
pub(crate) fn coverage_gradient(instance: &Instance, i: usize, x: &Vector) -> Vector {
    let diff = x - &instance.ball(i).center;
    let d = diff.norm();
    if d > 0.0 {
        diff / d
    } else {
        Vector::zeros(x.len())
    }
}

/// Coverage difference `f_k - f_top` along the path and its derivative.
pub(crate) fn gap(path: &SearchPath, instance: &Instance, k: usize, alpha: f64) -> (f64, f64) {
    let x = path.point(alpha);
    let t = path.tangent(alpha);
    let value = coverage(&x, instance.ball(k)) - coverage(&x, instance.ball(path.top));
    let slope =
        (coverage_gradient(instance, k, &x) - coverage_gradient(instance, path.top, &x)).dot(&t);
    (value, slope)
}

/// Orthonormal basis of `sub(S) = span{p_top - p_j}`.
pub(crate) fn subspace_basis(instance: &Instance, members: &[usize]) -> Vec<Vector> {
    let top = &instance.ball(members[0]).center;
    let diffs: Vec<Vector> = members[1..]
        .iter()
        .map(|&j| top - &instance.ball(j).center)
        .collect();
    orthonormal_basis(&diffs, RANK_TOL)
}

/// Primal ray: `d_S = (p_1 - x_S) - Proj_sub(S)(p_1 - x_S)`, bound `alpha_hat = 1`.
///
/// Returns `None` when `d_S` vanishes, i.e. `x_S` already lies in `aff(S)`.
pub fn descent_ray(instance: &Instance, s: &ActiveSet, x: &Vector) -> Option<SearchPath> {
    let order = s.by_radius(instance);
    let top = order[0];
    let w = &instance.ball(top).center - x;
    let q = subspace_basis(instance, &order);
    let d = &w - project_onto_orthonormal(&w, &q);
    let scale = 1.0 + x.norm() + instance.ball(top).center.norm();
    if d.norm() <= 1e-13 * scale {
        return None;
    }
    let alpha_hat = w.dot(&d) / d.norm_squared();
    Some(SearchPath {
        kind: PathKind::Ray,
        base: x.clone(),
        direction: d,
        curve: None,
        beta_s: 0.0,
        bound: Step::Finite(alpha_hat),
        top,
        last: *order.last().expect("nonempty active set"),
    })
}

/// Dual ray: `d_S = (p_e - p_1) - Proj_sub(S)(p_e - p_1)`, unbounded.
pub fn ascent_ray(
    instance: &Instance,
    s: &ActiveSet,
    x: &Vector,
    entering: usize,
) -> Result<SearchPath> {
    let order = s.by_radius(instance);
    let top = order[0];
    let w = &instance.ball(entering).center - &instance.ball(top).center;
    let q = subspace_basis(instance, &order);
    let d = &w - project_onto_orthonormal(&w, &q);
    if d.norm() <= 1e-12 * (1.0 + w.norm()) {
        return Err(Error::AffinelyDependent);
    }
    Ok(SearchPath {
        kind: PathKind::Ray,
        base: x.clone(),
        direction: d,
        curve: None,
        beta_s: 0.0,
        bound: Step::Unbounded,
        top,
        last: *order.last().expect("nonempty active set"),
    })
}

/// Conic path through `x` on `B_S` for an active set with unequal radii.
///
/// Ellipses are oriented so that `c + a v` is the vertex of smallest covering
/// radius. For [`Orientation::Descent`] the plane vector points from `x` toward
/// the axis and `beta_S <= 0`; for [`Orientation::Ascent`] it points toward the
/// entering center and `beta_S >= 0`.
pub fn conic_path(
    instance: &Instance,
    s: &ActiveSet,
    x: &Vector,
    orientation: Orientation,
    entering: Option<usize>,
    tol: &Tolerances,
) -> Result<SearchPath> {
    let order = s.by_radius(instance);
    let balls: Vec<_> = order.iter().map(|&i| instance.ball(i)).collect();
    let mut conic = intersect_sequence(&balls, tol)?;
    let top = order[0];
    let last = *order.last().expect("nonempty active set");
    if conic.kind == ConicKind::Ellipsoid {
        let plus = coverage(&(&conic.center + &conic.axis * conic.a), instance.ball(top));
        let minus = coverage(&(&conic.center - &conic.axis * conic.a), instance.ball(top));
        if minus < plus {
            conic = conic.flipped();
        }
    }
    let w = x - &conic.center;
    let raw = match orientation {
        Orientation::Descent => -conic.in_plane_component(&w),
        Orientation::Ascent => {
            let e = entering
                .ok_or_else(|| Error::Degenerate("ascent path needs an entering ball".into()))?;
            conic.in_plane_component(&(&instance.ball(e).center - &conic.center))
        }
    };
    let scale = 1.0 + w.norm();
    let u = if raw.norm() > 1e-12 * scale {
        raw.normalize()
    } else if orientation == Orientation::Ascent {
        return Err(Error::AffinelyDependent);
    } else {
        conic.fallback_plane_vector().ok_or_else(|| {
            Error::Degenerate("no plane vector orthogonal to the conic axis".into())
        })?
    };
    let xi = w.dot(&conic.axis);
    let eta = w.dot(&u);
    let (kind, mut beta_s) = match conic.kind {
        ConicKind::Hyperboloid => (PathKind::Hyperbola, (eta / conic.b).atan()),
        ConicKind::Ellipsoid => (PathKind::Ellipse, (eta / conic.b).atan2(xi / conic.a)),
        ConicKind::Paraboloid => (PathKind::Parabola, eta / (2.0 * conic.c_tilde)),
    };
    if !beta_s.is_finite() {
        beta_s = 0.0;
    }
    let bound = match (orientation, kind) {
        (Orientation::Descent, PathKind::Ellipse) => {
            if beta_s > 0.0 {
                beta_s -= 2.0 * PI;
            }
            Step::Finite(-beta_s)
        }
        (Orientation::Descent, _) => {
            beta_s = beta_s.min(0.0);
            Step::Finite(-beta_s)
        }
        (Orientation::Ascent, PathKind::Hyperbola) => {
            beta_s = beta_s.max(0.0);
            Step::Finite(FRAC_PI_2 - beta_s)
        }
        (Orientation::Ascent, PathKind::Ellipse) => {
            if beta_s < 0.0 {
                beta_s += 2.0 * PI;
            }
            Step::Finite(PI - beta_s)
        }
        (Orientation::Ascent, _) => {
            beta_s = beta_s.max(0.0);
            Step::Unbounded
        }
    };
    let curve = parametrize_2d(&conic, &u)?;
    let base = curve.point(beta_s);
    Ok(SearchPath {
        kind,
        base,
        direction: Vector::zeros(x.len()),
        curve: Some(curve),
        beta_s,
        bound,
        top,
        last,
    })
}

/// Builds the path of `S` through `x`: a ray when all radii of `S` are equal,
/// a conic otherwise. `None` means a descent path of zero length.
pub fn build_path(
    instance: &Instance,
    s: &ActiveSet,
    x: &Vector,
    orientation: Orientation,
    entering: Option<usize>,
    tol: &Tolerances,
) -> Result<Option<SearchPath>> {
    let order = s.by_radius(instance);
    let (r1, rs) = (
        instance.ball(order[0]).radius,
        instance
            .ball(*order.last().expect("nonempty active set"))
            .radius,
    );
    let ray = order.len() == 1 || tol.radii_equal(r1, rs);
    match (orientation, ray) {
        (Orientation::Descent, true) => Ok(descent_ray(instance, s, x)),
        (Orientation::Ascent, true) => {
            let e = entering
                .ok_or_else(|| Error::Degenerate("ascent path needs an entering ball".into()))?;
            ascent_ray(instance, s, x, e).map(Some)
        }
        (_, false) => {
            let path = conic_path(instance, s, x, orientation, entering, tol)?;
            let zero = path.bound.finite().is_some_and(|b| b <= 1e-14);
            Ok((!(orientation == Orientation::Descent && zero)).then_some(path))
        }
    }
}

/// Unvalidated crossing parameters of ball `k` with the path, from closed forms.
///
/// `None` means the closed form is unavailable (degenerate triple or a path lying
/// inside the pair hyperplane) and the caller should scan instead.
pub fn crossing_candidates(
    path: &SearchPath,
    instance: &Instance,
    k: usize,
    tol: &Tolerances,
) -> Option<Vec<f64>> {
    let bk = instance.ball(k);
    let bt = instance.ball(path.top);
    match &path.curve {
        None => {
            let d = &path.direction;
            let x = &path.base;
            let diff = &bt.center - &bk.center;
            if tol.radii_equal(bt.radius, bk.radius) {
                let den = diff.dot(d);
                if den.abs() <= 1e-14 * diff.norm() * d.norm() {
                    return Some(Vec::new());
                }
                let rhs = 0.5 * (bt.center.norm_squared() - bk.center.norm_squared()) - diff.dot(x);
                return Some(vec![rhs / den]);
            }
            let delta = bt.radius - bk.radius;
            let w = x - &bt.center;
            let l0 = 2.0 * x.dot(&diff) + bk.center.norm_squared()
                - bt.center.norm_squared()
                - delta * delta;
            let l1 = 2.0 * d.dot(&diff);
            let four = 4.0 * delta * delta;
            Some(quadratic_roots(
                l1 * l1 - four * d.norm_squared(),
                2.0 * l0 * l1 - 2.0 * four * w.dot(d),
                l0 * l0 - four * w.norm_squared(),
            ))
        }
        Some(curve) => {
            let plane = build_pair_hyperplane([bt, instance.ball(path.last), bk], tol).ok()?;
            let conic = &curve.conic;
            let hv = plane.normal.dot(&conic.axis);
            let hu = plane.normal.dot(&curve.u);
            let rhs = plane.normal.dot(&(&plane.point - &conic.center));
            let betas: Vec<f64> = match conic.kind {
                ConicKind::Hyperboloid => {
                    let (a, b) = (conic.a * hv, conic.b * hu);
                    if a.abs() + b.abs() <= 1e-14 * (conic.a + conic.b) {
                        return None;
                    }
                    solve_sec_tan(a, b, rhs)
                        .valid()
                        .iter()
                        .map(|r| r.beta)
                        .collect()
                }
                ConicKind::Ellipsoid => {
                    let (a, b) = (conic.a * hv, conic.b * hu);
                    if a.abs() + b.abs() <= 1e-14 * (conic.a + conic.b) {
                        return None;
                    }
                    solve_cos_sin(a, b, rhs)
                        .to_vec()
                        .iter()
                        .flat_map(|r| [r.beta - 2.0 * PI, r.beta, r.beta + 2.0 * PI])
                        .collect()
                }
                ConicKind::Paraboloid => {
                    let (a, b) = (conic.c_tilde * hv, 2.0 * conic.c_tilde * hu);
                    if a.abs() + b.abs() <= 1e-14 * conic.c_tilde {
                        return None;
                    }
                    solve_parabola_quadratic(a, b, rhs)
                }
            };
            Some(betas.into_iter().map(|b| b - path.beta_s).collect())
        }
    }
}

/// A validated crossing with the slope of `f_k - f_top` there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub alpha: f64,
    pub slope: f64,
}

/// Slack allowed in `alpha` around the ends of the admissible interval.
pub(crate) const ALPHA_SLACK: f64 = 1e-10;

/// Validated crossings of ball `k` with the path inside `[0, limit]`, ascending.
///
/// Every closed-form candidate is polished by Newton's method on `f_k - f_top`
/// and kept when that difference is below `1e-8 (1 + z)`. Without a closed form
/// the interval is scanned for sign changes.
pub fn crossings(
    path: &SearchPath,
    instance: &Instance,
    k: usize,
    limit: Step,
    tol: &Tolerances,
) -> Vec<Crossing> {
    let hi = limit.finite();
    let in_range =
        |a: f64| a >= -ALPHA_SLACK && hi.is_none_or(|h| a <= h + ALPHA_SLACK * (1.0 + h.abs()));
    let candidates = match crossing_candidates(path, instance, k, tol) {
        Some(c) => c,
        None => return scan_crossings(path, instance, k, limit),
    };
    let mut out: Vec<Crossing> = Vec::new();
    for alpha in candidates {
        if !alpha.is_finite() || !in_range(alpha) {
            continue;
        }
        let Some(c) = polish(path, instance, k, alpha) else {
            continue;
        };
        if in_range(c.alpha) {
            out.push(c);
        }
    }
    out.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));
    out.dedup_by(|a, b| (a.alpha - b.alpha).abs() <= 1e-12 * (1.0 + b.alpha.abs()));
    out
}

/// Newton refinement of a crossing; `None` when the coverage gap does not vanish.
pub(crate) fn polish(
    path: &SearchPath,
    instance: &Instance,
    k: usize,
    alpha: f64,
) -> Option<Crossing> {
    let mut best = alpha;
    let (mut best_val, mut slope) = gap(path, instance, k, alpha);
    let mut a = alpha;
    for _ in 0..4 {
        let (val, der) = gap(path, instance, k, a);
        if val.abs() < best_val.abs() {
            best = a;
            best_val = val;
            slope = der;
        }
        if der.abs() <= 1e-14 || val == 0.0 {
            break;
        }
        let next = a - val / der;
        if !next.is_finite() || (next - alpha).abs() > 1e-3 * (1.0 + alpha.abs()) {
            break;
        }
        a = next;
    }
    let (val, der) = gap(path, instance, k, a);
    if val.abs() < best_val.abs() {
        best = a;
        best_val = val;
        slope = der;
    }
    let z = path.radius(instance, best);
    (best_val.abs() <= 1e-8 * (1.0 + z.abs())).then_some(Crossing { alpha: best, slope })
}

/// Sign-change scan of `f_k - f_top` on the admissible interval.
pub(crate) fn scan_crossings(
    path: &SearchPath,
    instance: &Instance,
    k: usize,
    limit: Step,
) -> Vec<Crossing> {
    let grid: Vec<f64> = match limit {
        Step::Finite(h) => (0..=512).map(|i| h * i as f64 / 512.0).collect(),
        Step::Unbounded => std::iter::once(0.0)
            .chain((0..400).map(|i| 1e-6 * 1.1_f64.powi(i)))
            .collect(),
    };
    let f = |a: f64| gap(path, instance, k, a).0;
    let mut out = Vec::new();
    let mut prev = (grid[0], f(grid[0]));
    for &a in &grid[1..] {
        let cur = (a, f(a));
        if prev.1 == 0.0 || prev.1.signum() != cur.1.signum() {
            let root = bisect(f, prev.0, cur.0);
            let slope = gap(path, instance, k, root).1;
            out.push(Crossing { alpha: root, slope });
        }
        prev = cur;
    }
    out
}

/// First point in `[lo, hi]` where `f` changes sign, by bisection.
pub(crate) fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid).signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Earliest violation of any ball along `[0, alpha]`, found by sampling and
/// bisection; used to guard a step against a missed crossing.
pub(crate) fn first_violation(
    path: &SearchPath,
    instance: &Instance,
    candidates: &[usize],
    alpha: f64,
    tol: &Tolerances,
) -> Option<(usize, f64)> {
    let end = path.point(alpha);
    let z_end = coverage(&end, instance.ball(path.top));
    let slack = tol.active_slack(z_end);
    let violated: Vec<usize> = candidates
        .iter()
        .copied()
        .filter(|&k| coverage(&end, instance.ball(k)) - z_end > slack)
        .collect();
    let mut best: Option<(usize, f64)> = None;
    for k in violated {
        let f = |a: f64| gap(path, instance, k, a).0;
        let samples = 64;
        let mut lo = 0.0;
        let mut root = alpha;
        for i in 1..=samples {
            let a = alpha * i as f64 / samples as f64;
            if f(a) > 0.0 {
                root = if f(lo) > 0.0 { lo } else { bisect(f, lo, a) };
                break;
            }
            lo = a;
        }
        if best.is_none_or(|(_, b)| root < b) {
            best = Some((k, root));
        }
    }
    best
}

/// Gauss-Newton correction restoring `f_i(x) = f_j(x)` for all members, with a
/// minimum-norm update. Leaves `x` unchanged when the residual is not small.
pub(crate) fn restore_activity(instance: &Instance, members: &[usize], x: &mut Vector) {
    if members.len() < 2 {
        return;
    }
    let n = x.len();
    let lead = members[0];
    for _ in 0..3 {
        let f0 = coverage(x, instance.ball(lead));
        let g0 = coverage_gradient(instance, lead, x);
        let rows = members.len() - 1;
        let mut jac = nalgebra::DMatrix::zeros(rows, n);
        let mut res = Vector::zeros(rows);
        for (r, &j) in members[1..].iter().enumerate() {
            res[r] = coverage(x, instance.ball(j)) - f0;
            let g = coverage_gradient(instance, j, x) - &g0;
            jac.set_row(r, &g.transpose());
        }
        let size = res.amax();
        if size <= 1e-15 * (1.0 + f0.abs()) || size > 1e-6 * (1.0 + f0.abs()) {
            return;
        }
        let step = solve_linear(&jac, &res);
        let candidate = &*x - step.x();
        let new_size = members[1..]
            .iter()
            .map(|&j| {
                (coverage(&candidate, instance.ball(j)) - coverage(&candidate, instance.ball(lead)))
                    .abs()
            })
            .fold(0.0, f64::max);
        if new_size >= size {
            return;
        }
        *x = candidate;
    }
}
