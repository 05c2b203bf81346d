//! Balls, instances, active sets and the coverage function.
//!
//! The covering constraint of ball `i` at a candidate center `x` is
//! `z >= ||x - p_i|| + r_i`; [`coverage_value`] evaluates its right-hand side.

use nalgebra::DVector;

use crate::error::{Error, Result};

/// Dense real vector used for points and directions.
pub type Vector = DVector<f64>;

/// Numerical tolerances shared by the solvers and the oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Radii `r_a`, `r_b` are equal when `|r_a - r_b| <= radius * (1 + max(r_a, r_b))`.
    pub radius: f64,
    /// A constraint is active when `|z - ||x - p|| - r| <= active * (1 + z)`.
    pub active: f64,
    /// Relative singular value cutoff for rank decisions.
    pub rank: f64,
    /// Residual cutoff for declaring a linear system consistent.
    pub residual: f64,
    /// Deadband around eccentricity one that selects the paraboloid formulas.
    pub paraboloid: f64,
    /// Relative deadband that clamps a discriminant to zero.
    pub discriminant: f64,
    /// Barycentric coordinates above `-barycentric` count as nonnegative.
    pub barycentric: f64,
    /// Multipliers above `-multiplier` count as nonnegative.
    pub multiplier: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            radius: 1e-9,
            active: 1e-7,
            rank: 1e-10,
            residual: 1e-9,
            paraboloid: 1e-8,
            discriminant: 1e-12,
            barycentric: 1e-9,
            multiplier: 1e-9,
        }
    }
}

impl Tolerances {
    /// Whether two radii count as equal.
    pub fn radii_equal(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.radius * (1.0 + a.max(b))
    }

    /// Activity slack allowed at covering radius `z`.
    pub fn active_slack(&self, z: f64) -> f64 {
        self.active * (1.0 + z.abs())
    }
}

/// A closed ball `[p, r]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: Vector,
    pub radius: f64,
}

impl Ball {
    /// Builds a ball from a center slice and a radius.
    pub fn new(center: &[f64], radius: f64) -> Self {
        Self {
            center: Vector::from_column_slice(center),
            radius,
        }
    }

    /// Dimension of the ambient space.
    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Whether this ball contains `other` (`r_self >= ||p_other - p_self|| + r_other`).
    pub fn contains(&self, other: &Ball) -> bool {
        let d = (&self.center - &other.center).norm();
        self.radius >= d + other.radius - 1e-12 * (1.0 + self.radius)
    }
}

/// Evaluates `||x - p|| + r`, the radius needed at `x` to cover `ball`.
pub fn coverage_value(x: &Vector, ball: &Ball) -> Result<f64> {
    if x.len() != ball.dim() {
        return Err(Error::DimensionMismatch {
            expected: ball.dim(),
            found: x.len(),
        });
    }
    Ok(coverage(x, ball))
}

/// Unchecked variant of [`coverage_value`] for hot loops with validated dimensions.
#[inline]
pub(crate) fn coverage(x: &Vector, ball: &Ball) -> f64 {
    (x - &ball.center).norm() + ball.radius
}

/// An ordered list of balls in a common space.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    dim: usize,
    balls: Vec<Ball>,
}

impl Instance {
    /// Validates dimensions, finiteness and nonnegative radii.
    pub fn new(dim: usize, balls: Vec<Ball>) -> Result<Self> {
        if balls.is_empty() {
            return Err(Error::EmptyInstance);
        }
        for (index, ball) in balls.iter().enumerate() {
            if ball.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: ball.dim(),
                });
            }
            if !ball.center.iter().all(|v| v.is_finite()) {
                return Err(Error::InvalidBall {
                    index,
                    reason: "center has a non-finite entry".into(),
                });
            }
            if !(ball.radius.is_finite() && ball.radius >= 0.0) {
                return Err(Error::InvalidBall {
                    index,
                    reason: format!("radius {} is not a finite nonnegative number", ball.radius),
                });
            }
        }
        Ok(Self { dim, balls })
    }

    /// Ambient dimension `n`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of balls `m`.
    pub fn len(&self) -> usize {
        self.balls.len()
    }

    /// Always false for a constructed instance; present for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    /// The balls in input order.
    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    /// Ball `i`.
    pub fn ball(&self, i: usize) -> &Ball {
        &self.balls[i]
    }

    /// Centroid of the ball centers.
    pub fn centroid(&self) -> Vector {
        let mut c = Vector::zeros(self.dim);
        for b in &self.balls {
            c += &b.center;
        }
        c / self.balls.len() as f64
    }

    /// Largest coverage value at `x` and the smallest index attaining it.
    pub fn max_coverage(&self, x: &Vector) -> (f64, usize) {
        let mut best = (f64::NEG_INFINITY, 0);
        for (i, b) in self.balls.iter().enumerate() {
            let v = coverage(x, b);
            if v > best.0 {
                best = (v, i);
            }
        }
        best
    }

    /// Diameter of the union of the balls: `max ||p_i - p_j|| + r_i + r_j`.
    pub fn diameter(&self) -> f64 {
        let mut best = 0.0_f64;
        for (i, a) in self.balls.iter().enumerate() {
            best = best.max(2.0 * a.radius);
            for b in &self.balls[i + 1..] {
                best = best.max((&a.center - &b.center).norm() + a.radius + b.radius);
            }
        }
        best
    }
}

/// A covering ball `[x, z]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoveringBall {
    pub center: Vector,
    pub radius: f64,
}

/// Indices of the balls whose constraints are held active.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ActiveSet {
    indices: Vec<usize>,
}

impl ActiveSet {
    /// Builds an active set, rejecting repeated indices.
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        let mut sorted = indices.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != indices.len() {
            return Err(Error::Degenerate("active set has repeated indices".into()));
        }
        Ok(Self { indices })
    }

    /// Indices in stored order.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Number of members `s`.
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    /// Whether the set is empty.
    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Whether `i` is a member.
    pub fn contains(&self, i: usize) -> bool {
        self.indices.contains(&i)
    }

    /// Appends `i` if it is not yet a member.
    pub fn insert(&mut self, i: usize) {
        if !self.contains(i) {
            self.indices.push(i);
        }
    }

    /// Removes `i` if present.
    pub fn remove(&mut self, i: usize) {
        self.indices.retain(|&j| j != i);
    }

    /// Members sorted by non-increasing radius, ties by index.
    pub fn by_radius(&self, instance: &Instance) -> Vec<usize> {
        let mut order = self.indices.clone();
        order.sort_by(|&a, &b| {
            instance.balls[b]
                .radius
                .total_cmp(&instance.balls[a].radius)
                .then(a.cmp(&b))
        });
        order
    }
}

/// Outcome of [`preprocess_instance`].
#[derive(Debug, Clone, PartialEq)]
pub struct Preprocessed {
    /// Surviving balls in input order.
    pub instance: Instance,
    /// Original index of every surviving ball.
    pub kept: Vec<usize>,
    /// `(removed, container)` pairs in original indices.
    pub removed: Vec<(usize, usize)>,
    /// Original index of a ball containing every other ball, if any.
    pub trivial: Option<usize>,
}

/// Drops every ball contained in another one so that no ball contains another.
///
/// Of two identical balls the one with the smaller index survives.
pub fn preprocess_instance(raw: &Instance) -> Preprocessed {
    let m = raw.len();
    let mut removed = Vec::new();
    let mut kept = Vec::with_capacity(m);
    for k in 0..m {
        let container = (0..m).find(|&j| {
            j != k
                && raw.balls[j].contains(&raw.balls[k])
                && !(raw.balls[k].contains(&raw.balls[j]) && k < j)
        });
        match container {
            Some(j) => removed.push((k, j)),
            None => kept.push(k),
        }
    }
    let balls = kept.iter().map(|&i| raw.balls[i].clone()).collect();
    let trivial = (kept.len() == 1).then(|| kept[0]);
    Preprocessed {
        instance: Instance {
            dim: raw.dim,
            balls,
        },
        kept,
        removed,
        trivial,
    }
}

/// Unit vector along `v`, or `None` when `v` is numerically zero.
pub(crate) fn unit(v: &Vector) -> Option<Vector> {
    let n = v.norm();
    (n > f64::MIN_POSITIVE * 1e10).then(|| v / n)
}
