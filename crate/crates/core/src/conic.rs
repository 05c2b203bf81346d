//! Bisectors of ball pairs and their intersections.
//!
//! For balls `[p_j, r_j]`, `[p_k, r_k]` the bisector is the locus where
//! `||x - p_j|| + r_j = ||x - p_k|| + r_k`. Equal radii give the perpendicular
//! bisector hyperplane of the centers. For `r_j > r_k` it is the sheet nearer
//! `p_j` of the hyperboloid of revolution
//!
//! ```text
//! (x - c)^2 - eps^2 ((x - c) . v)^2 = a^2 - c_param^2
//! ```
//!
//! with center `c = (p_j + p_k)/2`, unit axis `v` from `p_k` toward `p_j`,
//! `a = (r_j - r_k)/2`, `c_param = ||p_j - p_k||/2` and eccentricity
//! `eps = c_param / a > 1`. On that sheet `||x - p_j|| = eps v . (x - d)` where
//! `d = c + (a^2 / c_param) v` lies on the directrix.
//!
//! Intersecting the bisectors of an active set `S` (ordered by non-increasing
//! radius, `r_1 > r_s`) starts from the sheet of `(p_1, p_s)` and folds in one
//! hyperplane per remaining member. Each fold keeps a quadric of revolution whose
//! eccentricity is multiplied by `rho = sqrt(1 - (h . v)^2)`; the result is a
//! hyperboloid sheet (`eps > 1`), an ellipsoid (`eps < 1`) or a paraboloid
//! (`eps = 1`) of dimension `n - s + 2`. Any two-dimensional slice through its
//! axis is a hyperbola, ellipse or parabola, which [`Curve`] parametrizes.

use crate::error::{Error, Result};
use crate::geometry::{coverage, unit, Ball, Tolerances, Vector};
use crate::linalg::orthogonal_complement;

/// One sheet of a two-sheeted hyperboloid of revolution with foci at two centers.
#[derive(Debug, Clone, PartialEq)]
pub struct Sheet {
    /// Center of the larger ball; the sheet bends around it.
    pub focus: Vector,
    /// Center of the smaller ball.
    pub other_focus: Vector,
    pub center: Vector,
    /// Unit axis from `other_focus` toward `focus`.
    pub axis: Vector,
    /// Half the radius difference.
    pub a: f64,
    /// Half the center distance.
    pub c: f64,
    pub eccentricity: f64,
    /// `center + a * axis`.
    pub vertex: Vector,
    /// `c^2 - a^2`.
    pub b2: f64,
    /// Point on the directrix hyperplane, `center + (a^2 / c) * axis`.
    pub directrix: Vector,
}

impl Sheet {
    /// Quadratic form residual; zero on either sheet of the full hyperboloid.
    pub fn quadratic_form_residual(&self, x: &Vector) -> f64 {
        quadratic_form_residual(&self.center, &self.axis, self.eccentricity, self.a, x)
    }

    /// The linear form `eps v . (x - d)`, equal to `||x - focus||` on the sheet.
    pub fn focal_distance(&self, x: &Vector) -> f64 {
        self.eccentricity * self.axis.dot(&(x - &self.directrix))
    }
}

/// Bisector of two balls.
#[derive(Debug, Clone, PartialEq)]
pub enum Bisector {
    /// Equal radii: `normal . (x - point) = 0`.
    Hyperplane { normal: Vector, point: Vector },
    /// Unequal radii.
    Sheet(Sheet),
}

/// Residual `(x - c)^2 - (eps (x - c) . v)^2 - (a^2 - (eps a)^2)` of a quadric of revolution.
pub fn quadratic_form_residual(
    center: &Vector,
    axis: &Vector,
    eccentricity: f64,
    a: f64,
    x: &Vector,
) -> f64 {
    let w = x - center;
    let t = w.dot(axis);
    w.norm_squared() - (eccentricity * t).powi(2) - a * a * (1.0 - eccentricity * eccentricity)
}

/// Builds the bisector of two balls.
///
/// Fails with [`Error::Containment`] when one ball contains the other
/// (`outer`/`inner` refer to argument positions 0 and 1).
pub fn build_bisector(ball_a: &Ball, ball_b: &Ball, tol: &Tolerances) -> Result<Bisector> {
    if ball_a.dim() != ball_b.dim() {
        return Err(Error::DimensionMismatch {
            expected: ball_a.dim(),
            found: ball_b.dim(),
        });
    }
    let dist = (&ball_a.center - &ball_b.center).norm();
    if ball_a.radius >= dist + ball_b.radius {
        return Err(Error::Containment { outer: 0, inner: 1 });
    }
    if ball_b.radius >= dist + ball_a.radius {
        return Err(Error::Containment { outer: 1, inner: 0 });
    }
    if tol.radii_equal(ball_a.radius, ball_b.radius) {
        let normal = (&ball_a.center - &ball_b.center) / dist;
        let point = (&ball_a.center + &ball_b.center) * 0.5;
        return Ok(Bisector::Hyperplane { normal, point });
    }
    let (big, small) = if ball_a.radius > ball_b.radius {
        (ball_a, ball_b)
    } else {
        (ball_b, ball_a)
    };
    Ok(Bisector::Sheet(sheet(big, small)))
}

/// Sheet for `big.radius > small.radius` without further checks.
fn sheet(big: &Ball, small: &Ball) -> Sheet {
    let diff = &big.center - &small.center;
    let c = 0.5 * diff.norm();
    let axis = diff / (2.0 * c);
    let a = 0.5 * (big.radius - small.radius);
    let center = (&big.center + &small.center) * 0.5;
    let vertex = &center + &axis * a;
    let directrix = &center + &axis * (a * a / c);
    Sheet {
        focus: big.center.clone(),
        other_focus: small.center.clone(),
        center,
        axis,
        a,
        c,
        eccentricity: c / a,
        vertex,
        b2: (c - a) * (c + a),
        directrix,
    }
}

/// Hyperplane containing the common intersection of the three bisectors of a triple.
#[derive(Debug, Clone, PartialEq)]
pub struct PairHyperplane {
    /// Unit normal `h`.
    pub normal: Vector,
    /// A point `d` on the hyperplane.
    pub point: Vector,
    /// Argument positions ordered by non-increasing radius (ties by position).
    pub order: [usize; 3],
}

impl PairHyperplane {
    /// Signed distance `h . (x - d)`.
    pub fn signed_distance(&self, x: &Vector) -> f64 {
        self.normal.dot(&(x - &self.point))
    }
}

/// Builds the hyperplane `H_T` of a triple of balls.
///
/// With the triple ordered `r_1 >= r_2 >= r_3`:
/// * `r_1 = r_2 > r_3`: perpendicular bisector of `p_1, p_2`;
/// * `r_1 > r_2 = r_3`: perpendicular bisector of `p_2, p_3`;
/// * `r_1 > r_2 > r_3`: `h` is the unit vector along `eps_12 v_12 - eps_13 v_13`,
///   `w` the unit component of `h` orthogonal to `v_13`, and
///   `d = d_13 + [v_12 . (d_12 - d_13) / (v_12 . w)] w`.
///
/// Intersected with a bisector through `p_1` (the largest ball) it reproduces the
/// intersection of the two bisectors through `p_1`.
pub fn build_pair_hyperplane(balls: [&Ball; 3], tol: &Tolerances) -> Result<PairHyperplane> {
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| balls[j].radius.total_cmp(&balls[i].radius).then(i.cmp(&j)));
    let [b1, b2, b3] = [balls[order[0]], balls[order[1]], balls[order[2]]];
    let mut eq12 = tol.radii_equal(b1.radius, b2.radius);
    let mut eq23 = tol.radii_equal(b2.radius, b3.radius);
    if eq12 && eq23 && !tol.radii_equal(b1.radius, b3.radius) {
        eq12 = b1.radius - b2.radius <= b2.radius - b3.radius;
        eq23 = !eq12;
    }
    let midplane = |p: &Ball, q: &Ball| -> Result<(Vector, Vector)> {
        let normal = unit(&(&p.center - &q.center)).ok_or(Error::AffinelyDependent)?;
        Ok((normal, (&p.center + &q.center) * 0.5))
    };
    let (normal, point) = if eq12 && eq23 {
        return Err(Error::EqualRadii);
    } else if eq12 {
        midplane(b1, b2)?
    } else if eq23 {
        midplane(b2, b3)?
    } else {
        let s12 = sheet(b1, b2);
        let s13 = sheet(b1, b3);
        let raw = &s12.axis * s12.eccentricity - &s13.axis * s13.eccentricity;
        let h = unit(&raw).ok_or(Error::AffinelyDependent)?;
        let offset = (s12.eccentricity * s12.axis.dot(&s12.directrix)
            - s13.eccentricity * s13.axis.dot(&s13.directrix))
            / raw.norm();
        let w = unit(&(&h - &s13.axis * h.dot(&s13.axis)));
        let point = match w {
            Some(w) if s12.axis.dot(&w).abs() > 1e-12 => {
                let t = s12.axis.dot(&(&s12.directrix - &s13.directrix)) / s12.axis.dot(&w);
                &s13.directrix + &w * t
            }
            _ => &h * offset,
        };
        (h, point)
    };
    Ok(PairHyperplane {
        normal,
        point,
        order,
    })
}

/// Kind of quadric of revolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConicKind {
    Hyperboloid,
    Ellipsoid,
    Paraboloid,
}

/// Intersection of the bisectors of an active set with unequal radii.
///
/// The section lives in the flat through `center` orthogonal to every vector of
/// `normals`. For a hyperboloid only the sheet containing `center + a axis` is
/// meant.
#[derive(Debug, Clone, PartialEq)]
pub struct ConicSection {
    pub kind: ConicKind,
    /// Center; for a paraboloid its vertex.
    pub center: Vector,
    /// Unit axis; for a paraboloid it points into the opening.
    pub axis: Vector,
    pub eccentricity: f64,
    /// Semi-axis along `axis` (hyperboloid, ellipsoid).
    pub a: f64,
    /// Transverse semi-axis (hyperboloid, ellipsoid).
    pub b: f64,
    /// Positive focal parameter of a paraboloid `c + c_tilde t^2 axis + 2 c_tilde t u`.
    pub c_tilde: f64,
    /// Orthonormal normals of the folded hyperplanes.
    pub normals: Vec<Vector>,
}

impl ConicSection {
    /// Vertex `center + a axis` (paraboloid: `center`).
    pub fn vertex(&self) -> Vector {
        match self.kind {
            ConicKind::Paraboloid => self.center.clone(),
            _ => &self.center + &self.axis * self.a,
        }
    }

    /// Dimension of the section as a surface.
    pub fn surface_dim(&self) -> usize {
        self.center.len() - 1 - self.normals.len()
    }

    /// Quadratic form residual inside the flat (hyperboloid, ellipsoid).
    pub fn quadratic_form_residual(&self, x: &Vector) -> Result<f64> {
        match self.kind {
            ConicKind::Paraboloid => Err(Error::Degenerate(
                "paraboloid has no central quadratic form; use paraboloid_residual".into(),
            )),
            _ => Ok(quadratic_form_residual(
                &self.center,
                &self.axis,
                self.eccentricity,
                self.a,
                x,
            )),
        }
    }

    /// Residual `|w_perp|^2 - 4 c_tilde (x - c) . axis` of a paraboloid inside the flat.
    pub fn paraboloid_residual(&self, x: &Vector) -> Result<f64> {
        if self.kind != ConicKind::Paraboloid {
            return Err(Error::Degenerate("not a paraboloid".into()));
        }
        let w = x - &self.center;
        let t = w.dot(&self.axis);
        let perp = w.norm_squared() - t * t;
        Ok(perp - 4.0 * self.c_tilde * t)
    }

    /// Largest offset of `x` from the flat holding the section.
    pub fn flat_residual(&self, x: &Vector) -> f64 {
        let w = x - &self.center;
        self.normals
            .iter()
            .map(|h| h.dot(&w).abs())
            .fold(0.0, f64::max)
    }

    /// Component of `w` orthogonal to the axis and to every folded normal.
    pub fn in_plane_component(&self, w: &Vector) -> Vector {
        let mut basis = self.normals.clone();
        basis.push(self.axis.clone());
        orthogonal_complement(w, &basis)
    }

    /// A unit vector orthogonal to the axis and every normal, from a sweep of the
    /// coordinate axes.
    pub fn fallback_plane_vector(&self) -> Option<Vector> {
        let n = self.center.len();
        let mut best: Option<Vector> = None;
        for i in 0..n {
            let mut e = Vector::zeros(n);
            e[i] = 1.0;
            let r = self.in_plane_component(&e);
            if best.as_ref().is_none_or(|b| r.norm() > b.norm()) {
                best = Some(r);
            }
        }
        best.and_then(|b| unit(&b))
    }

    /// The same ellipsoid with its axis reversed.
    pub fn flipped(&self) -> Self {
        let mut c = self.clone();
        c.axis = -c.axis;
        c
    }
}

/// Classification of a hyperplane fold.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldClass {
    /// Resulting kind, or `None` when the intersection is empty.
    pub kind: Option<ConicKind>,
    /// Offset `h_hat` of the hyperplane from the current center along `hp`.
    pub offset: f64,
    /// `rho = sqrt(1 - (hp . v)^2)`.
    pub rho: f64,
    /// `sigma = hp . v`.
    pub sigma: f64,
    /// Unit normal orthogonalized against the existing normals.
    pub hp: Vector,
}

/// Classifies the intersection of `conic` with the hyperplane `h . (x - d) = 0`.
pub fn classify_hyperplane_conic(
    conic: &ConicSection,
    normal: &Vector,
    point: &Vector,
    tol: &Tolerances,
) -> Result<FoldClass> {
    let raw = orthogonal_complement(normal, &conic.normals);
    let len = raw.norm();
    if len <= 1e-10 * normal.norm() {
        return Err(Error::AffinelyDependent);
    }
    let hp = raw / len;
    let offset = normal.dot(&(point - &conic.center)) / len;
    let sigma = conic.axis.dot(&hp).clamp(-1.0, 1.0);
    let rho = (&conic.axis - &hp * sigma).norm().min(1.0);
    let eps = conic.eccentricity;
    let eps_new = eps * rho;
    let kind = if (eps_new - 1.0).abs() <= tol.paraboloid {
        Some(ConicKind::Paraboloid)
    } else if eps_new > 1.0 {
        Some(ConicKind::Hyperboloid)
    } else {
        let den = 1.0 - eps_new * eps_new;
        let a2 = (1.0 - eps * eps) * (conic.a * conic.a * den - offset * offset) / (den * den);
        let scale = (conic.a * conic.a + offset * offset) / (den * den);
        (a2 >= -1e-10 * scale).then_some(ConicKind::Ellipsoid)
    };
    Ok(FoldClass {
        kind,
        offset,
        rho,
        sigma,
        hp,
    })
}

/// Intersects the bisectors of `balls`, ordered by non-increasing radius with
/// `r_1 > r_s`.
pub fn intersect_sequence(balls: &[&Ball], tol: &Tolerances) -> Result<ConicSection> {
    let s = balls.len();
    if s < 2 {
        return Err(Error::Degenerate(
            "intersection needs at least two balls".into(),
        ));
    }
    let (first, last) = (balls[0], balls[s - 1]);
    if tol.radii_equal(first.radius, last.radius) || first.radius < last.radius {
        return Err(Error::EqualRadii);
    }
    let base = match build_bisector(first, last, tol)? {
        Bisector::Sheet(sh) => sh,
        Bisector::Hyperplane { .. } => return Err(Error::EqualRadii),
    };
    let mut conic = ConicSection {
        kind: ConicKind::Hyperboloid,
        center: base.center.clone(),
        axis: base.axis.clone(),
        eccentricity: base.eccentricity,
        a: base.a,
        b: base.b2.max(0.0).sqrt(),
        c_tilde: 0.0,
        normals: Vec::with_capacity(s.saturating_sub(2)),
    };
    for (fold, ball) in balls.iter().enumerate().take(s - 1).skip(1) {
        let plane = build_pair_hyperplane([first, ball, last], tol)?;
        conic = fold_hyperplane(&conic, &plane.normal, &plane.point, fold, tol)?;
    }
    Ok(conic)
}

/// Intersects `conic` with the hyperplane `h . (x - d) = 0`.
pub fn fold_hyperplane(
    conic: &ConicSection,
    normal: &Vector,
    point: &Vector,
    fold: usize,
    tol: &Tolerances,
) -> Result<ConicSection> {
    if conic.kind == ConicKind::Paraboloid {
        return Err(Error::ChainedParaboloid { fold });
    }
    let class = classify_hyperplane_conic(conic, normal, point, tol)?;
    let FoldClass {
        kind,
        offset,
        rho,
        sigma,
        hp,
    } = class;
    let eps = conic.eccentricity;
    let eps_new = eps * rho;
    let empty = || Error::EmptyIntersection {
        fold,
        offset,
        eccentricity: eps,
        rho,
    };
    let kind = kind.ok_or_else(empty)?;
    let mut normals = conic.normals.clone();
    normals.push(hp.clone());
    let g = if rho > 1e-12 {
        unit(&(&conic.axis - &hp * sigma)).ok_or_else(empty)?
    } else {
        let probe = ConicSection {
            normals: normals.clone(),
            ..conic.clone()
        };
        probe.fallback_plane_vector().ok_or_else(empty)?
    };
    let base = &conic.center + &hp * offset;
    let next = match kind {
        ConicKind::Paraboloid => {
            let c_tilde = eps * sigma * offset / 2.0;
            if c_tilde.abs() <= 1e-14 * (1.0 + conic.a) {
                return Err(Error::Degenerate(format!(
                    "fold {fold}: paraboloid with zero focal parameter"
                )));
            }
            let b2 = conic.b * conic.b;
            let t_vertex =
                ((1.0 - eps * eps * sigma * sigma) * offset * offset + b2) / (4.0 * c_tilde);
            let center = &base + &g * t_vertex;
            let (axis, c_tilde) = if c_tilde > 0.0 {
                (g, c_tilde)
            } else {
                (-g, -c_tilde)
            };
            ConicSection {
                kind,
                center,
                axis,
                eccentricity: 1.0,
                a: 0.0,
                b: 0.0,
                c_tilde,
                normals,
            }
        }
        ConicKind::Hyperboloid | ConicKind::Ellipsoid => {
            let den = 1.0 - eps_new * eps_new;
            let shift = eps * eps * rho * sigma * offset / den;
            let a2 = ((1.0 - eps * eps) * (conic.a * conic.a * den - offset * offset)
                / (den * den))
                .max(0.0);
            let a = a2.sqrt();
            let b = (a2 * (eps_new * eps_new - 1.0).abs()).sqrt();
            ConicSection {
                kind,
                center: &base + &g * shift,
                axis: g,
                eccentricity: eps_new,
                a,
                b,
                c_tilde: 0.0,
                normals,
            }
        }
    };
    if conic.kind == ConicKind::Hyperboloid && next.kind != ConicKind::Hyperboloid {
        // The closed section lies on one sheet of the predecessor; it must be the
        // sheet around the larger focus.
        if (&next.center - &conic.center).dot(&conic.axis) <= 0.0 {
            return Err(empty());
        }
    }
    Ok(next)
}

/// Planar slice of a conic section through its axis, spanned by `axis` and `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub conic: ConicSection,
    pub u: Vector,
}

/// Checks `u` and returns the planar parametrization of `conic`:
/// hyperboloid `c + a sec(b) v + b_S tan(b) u` on `(-pi/2, pi/2)`,
/// ellipsoid `c + a cos(b) v + b_S sin(b) u`,
/// paraboloid `c + c_tilde b^2 v + 2 c_tilde b u`.
pub fn parametrize_2d(conic: &ConicSection, u: &Vector) -> Result<Curve> {
    if (u.norm() - 1.0).abs() > 1e-10 || u.dot(&conic.axis).abs() > 1e-10 {
        return Err(Error::InvalidPlaneVector);
    }
    Ok(Curve {
        conic: conic.clone(),
        u: u.clone(),
    })
}

impl Curve {
    /// Point `y(beta)`.
    pub fn point(&self, beta: f64) -> Vector {
        let (p, q) = self.coefficients(beta);
        let mut y = self.conic.center.clone();
        y.axpy(p, &self.conic.axis, 1.0);
        y.axpy(q, &self.u, 1.0);
        y
    }

    /// Derivative `y'(beta)`.
    pub fn tangent(&self, beta: f64) -> Vector {
        let k = &self.conic;
        let (p, q) = match k.kind {
            ConicKind::Hyperboloid => {
                let sec = 1.0 / beta.cos();
                (k.a * sec * beta.tan(), k.b * sec * sec)
            }
            ConicKind::Ellipsoid => (-k.a * beta.sin(), k.b * beta.cos()),
            ConicKind::Paraboloid => (2.0 * k.c_tilde * beta, 2.0 * k.c_tilde),
        };
        &k.axis * p + &self.u * q
    }

    /// Coordinates of `y(beta) - center` along `(axis, u)`.
    pub fn coefficients(&self, beta: f64) -> (f64, f64) {
        let k = &self.conic;
        match k.kind {
            ConicKind::Hyperboloid => (k.a / beta.cos(), k.b * beta.tan()),
            ConicKind::Ellipsoid => (k.a * beta.cos(), k.b * beta.sin()),
            ConicKind::Paraboloid => (k.c_tilde * beta * beta, 2.0 * k.c_tilde * beta),
        }
    }

    /// Parameter of the curve point nearest `x` in the `(axis, u)` coordinates.
    pub fn parameter_of(&self, x: &Vector) -> f64 {
        let k = &self.conic;
        let w = x - &k.center;
        let xi = w.dot(&k.axis);
        let eta = w.dot(&self.u);
        match k.kind {
            ConicKind::Hyperboloid => {
                if k.b > 0.0 {
                    (eta / k.b).atan()
                } else {
                    0.0
                }
            }
            ConicKind::Ellipsoid => {
                let s = if k.b > 0.0 { eta / k.b } else { 0.0 };
                let c = if k.a > 0.0 { xi / k.a } else { 1.0 };
                s.atan2(c)
            }
            ConicKind::Paraboloid => eta / (2.0 * k.c_tilde),
        }
    }
}

/// Largest disagreement of the coverage values of `balls` at `x`.
pub fn bisector_spread(balls: &[&Ball], x: &Vector) -> f64 {
    let vals: Vec<f64> = balls.iter().map(|b| coverage(x, b)).collect();
    let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    hi - lo
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn v(x: &[f64]) -> Vector {
        Vector::from_column_slice(x)
    }

    #[test]
    fn sheet_example() {
        let tol = Tolerances::default();
        let a = Ball::new(&[0.0, 0.0], 2.0);
        let b = Ball::new(&[6.0, 0.0], 0.0);
        let Bisector::Sheet(s) = build_bisector(&a, &b, &tol).unwrap() else {
            panic!("expected a sheet")
        };
        assert_relative_eq!(s.center, v(&[3.0, 0.0]), epsilon = 1e-15);
        assert_relative_eq!(s.axis, v(&[-1.0, 0.0]), epsilon = 1e-15);
        assert_relative_eq!(s.a, 1.0);
        assert_relative_eq!(s.c, 3.0);
        assert_relative_eq!(s.eccentricity, 3.0);
        assert_relative_eq!(s.vertex, v(&[2.0, 0.0]), epsilon = 1e-15);
        assert_relative_eq!(s.b2, 8.0);
        assert_relative_eq!(
            coverage(&s.vertex, &a),
            coverage(&s.vertex, &b),
            epsilon = 1e-15
        );
        assert_relative_eq!(s.quadratic_form_residual(&s.vertex), 0.0, epsilon = 1e-14);
        assert_relative_eq!(s.quadratic_form_residual(&s.center), 8.0, epsilon = 1e-14);
    }

    #[test]
    fn equal_radii_midplane() {
        let tol = Tolerances::default();
        let a = Ball::new(&[0.0, 0.0], 1.0);
        let b = Ball::new(&[2.0, 0.0], 1.0);
        match build_bisector(&a, &b, &tol).unwrap() {
            Bisector::Hyperplane { normal, point } => {
                assert_relative_eq!(normal, v(&[-1.0, 0.0]), epsilon = 1e-15);
                assert_relative_eq!(point, v(&[1.0, 0.0]), epsilon = 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn containment_is_rejected() {
        let tol = Tolerances::default();
        let a = Ball::new(&[0.0, 0.0], 5.0);
        let b = Ball::new(&[1.0, 0.0], 1.0);
        assert!(matches!(
            build_bisector(&a, &b, &tol),
            Err(Error::Containment { outer: 0, inner: 1 })
        ));
    }

    #[test]
    fn pair_hyperplane_examples() {
        let tol = Tolerances::default();
        let p = [
            Ball::new(&[0.0, 0.0], 2.0),
            Ball::new(&[2.0, 0.0], 2.0),
            Ball::new(&[1.0, 3.0], 0.0),
        ];
        let h = build_pair_hyperplane([&p[0], &p[1], &p[2]], &tol).unwrap();
        assert_relative_eq!(h.normal, v(&[-1.0, 0.0]), epsilon = 1e-15);
        assert_relative_eq!(h.point, v(&[1.0, 0.0]), epsilon = 1e-15);

        let q = [
            Ball::new(&[0.0, 0.0], 2.0),
            Ball::new(&[4.0, 0.0], 0.0),
            Ball::new(&[0.0, 4.0], 0.0),
        ];
        let h = build_pair_hyperplane([&q[0], &q[1], &q[2]], &tol).unwrap();
        let s = 1.0 / 2.0_f64.sqrt();
        assert_relative_eq!(h.normal, v(&[s, -s]), epsilon = 1e-15);
        assert_relative_eq!(h.point, v(&[2.0, 2.0]), epsilon = 1e-15);

        let r = [
            Ball::new(&[0.0], 1.0),
            Ball::new(&[3.0], 1.0),
            Ball::new(&[9.0], 1.0),
        ];
        assert!(matches!(
            build_pair_hyperplane([&r[0], &r[1], &r[2]], &tol),
            Err(Error::EqualRadii)
        ));
    }

    #[test]
    fn two_balls_pass_through() {
        let tol = Tolerances::default();
        let a = Ball::new(&[0.0, 0.0, 0.0], 2.0);
        let b = Ball::new(&[6.0, 0.0, 1.0], 0.5);
        let conic = intersect_sequence(&[&a, &b], &tol).unwrap();
        let Bisector::Sheet(s) = build_bisector(&a, &b, &tol).unwrap() else {
            panic!()
        };
        assert_eq!(conic.kind, ConicKind::Hyperboloid);
        assert_eq!(conic.center, s.center);
        assert_eq!(conic.axis, s.axis);
        assert_relative_eq!(conic.a, s.a);
        assert_relative_eq!(conic.b * conic.b, s.b2, epsilon = 1e-12);
        assert_relative_eq!(conic.eccentricity, s.eccentricity);
    }

    #[test]
    fn classification_thresholds() {
        let tol = Tolerances::default();
        let conic = ConicSection {
            kind: ConicKind::Hyperboloid,
            center: v(&[0.0, 0.0, 0.0]),
            axis: v(&[1.0, 0.0, 0.0]),
            eccentricity: 3.0,
            a: 1.0,
            b: 8.0_f64.sqrt(),
            c_tilde: 0.0,
            normals: vec![],
        };
        let origin = v(&[0.0, 0.0, 0.0]);
        let c = classify_hyperplane_conic(&conic, &v(&[0.0, 1.0, 0.0]), &origin, &tol).unwrap();
        assert_eq!(c.kind, Some(ConicKind::Hyperboloid));
        assert_relative_eq!(c.rho, 1.0);
        let c = classify_hyperplane_conic(&conic, &v(&[1.0, 0.0, 0.0]), &v(&[2.0, 0.0, 0.0]), &tol)
            .unwrap();
        assert_eq!(c.kind, Some(ConicKind::Ellipsoid));
        assert_relative_eq!(c.rho, 0.0);
        let mut two = conic.clone();
        two.eccentricity = 2.0;
        let h = v(&[3.0_f64.sqrt() / 2.0, 0.5, 0.0]);
        let c = classify_hyperplane_conic(&two, &h, &origin, &tol).unwrap();
        assert_relative_eq!(c.rho, 0.5, epsilon = 1e-15);
        assert_eq!(c.kind, Some(ConicKind::Paraboloid));
    }

    #[test]
    fn curve_vertices() {
        let conic = ConicSection {
            kind: ConicKind::Ellipsoid,
            center: v(&[1.0, 1.0]),
            axis: v(&[1.0, 0.0]),
            eccentricity: 0.5,
            a: 2.0,
            b: 3.0_f64.sqrt(),
            c_tilde: 0.0,
            normals: vec![],
        };
        let curve = parametrize_2d(&conic, &v(&[0.0, 1.0])).unwrap();
        assert_relative_eq!(curve.point(0.0), conic.vertex(), epsilon = 1e-15);
        assert_relative_eq!(
            curve.point(std::f64::consts::PI),
            v(&[-1.0, 1.0]),
            epsilon = 1e-15
        );
        assert!(parametrize_2d(&conic, &v(&[1.0, 0.0])).is_err());
        let para = ConicSection {
            kind: ConicKind::Paraboloid,
            c_tilde: 0.7,
            ..conic
        };
        let curve = parametrize_2d(&para, &v(&[0.0, 1.0])).unwrap();
        assert_relative_eq!(curve.point(0.0), para.center, epsilon = 1e-15);
        assert_relative_eq!(
            para.paraboloid_residual(&curve.point(1.3)).unwrap(),
            0.0,
            epsilon = 1e-12
        );
    }
}
