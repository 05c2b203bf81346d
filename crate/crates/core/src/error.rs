//! Error type shared by every module of the crate.

use thiserror::Error;

use crate::geometry::CoveringBall;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Structured failures reported by the geometry, conic, solver and oracle layers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Two objects that must live in the same space do not.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// The instance holds no balls.
    #[error("instance contains no balls")]
    EmptyInstance,

    /// A ball has a negative or non-finite radius, or a non-finite center.
    #[error("ball {index} is invalid: {reason}")]
    InvalidBall { index: usize, reason: String },

    /// A pair of balls where one contains the other, so their bisector is empty.
    #[error("ball {inner} is contained in ball {outer}")]
    Containment { outer: usize, inner: usize },

    /// A pair hyperplane was requested for three balls with equal radii.
    #[error("pair hyperplane requested for three balls of equal radius")]
    EqualRadii,

    /// A set of centers that must be affinely independent is not.
    #[error("centers are affinely dependent")]
    AffinelyDependent,

    /// Folding a hyperplane into the current conic left nothing behind.
    #[error(
        "empty intersection at fold {fold}: h = {offset:e}, eps = {eccentricity}, rho = {rho}"
    )]
    EmptyIntersection {
        fold: usize,
        offset: f64,
        eccentricity: f64,
        rho: f64,
    },

    /// A hyperplane was folded into a paraboloid, which the recurrence does not cover.
    #[error("fold {fold} intersects a paraboloid with another hyperplane")]
    ChainedParaboloid { fold: usize },

    /// The candidate center coincides with an active ball center.
    #[error("center coincides with the center of active ball {0}")]
    CenterAtPoint(usize),

    /// The in-plane vector of a conic path is not a unit vector orthogonal to the axis.
    #[error("in-plane vector must be a unit vector orthogonal to the axis")]
    InvalidPlaneVector,

    /// A solver ran out of iterations; carries the best bound reached so far.
    #[error("iteration limit {limit} reached with bound z = {}", best.radius)]
    IterationLimit { limit: usize, best: CoveringBall },

    /// Floating point degeneracy that the algorithm cannot resolve.
    #[error("numerical degeneracy: {0}")]
    Degenerate(String),
}
