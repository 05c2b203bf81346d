//! Minimum enclosing ball of a finite set of balls in `R^n`.
//!
//! Given balls `[p_i, r_i]`, the smallest ball `[x*, z*]` containing all of them
//! minimizes `max_i ||x - p_i|| + r_i`. Two active-set methods are provided:
//!
//! * [`primal_solve`] keeps a covering ball and shrinks it along rays and planar
//!   conic sections on which the active balls stay tangent;
//! * [`dual_solve`] keeps a ball that is optimal for a subset of the balls and
//!   grows it toward violated balls.
//!
//! The [`oracle`] module supplies independent reference solutions and a
//! certificate check based on the optimality conditions.

pub mod conic;
pub mod dual;
pub mod error;
pub mod geometry;
pub mod kkt;
pub mod linalg;
pub mod oracle;
pub mod path;
pub mod primal;
pub mod scalar;
pub mod solve;

pub use dual::dual_solve;
pub use error::{Error, Result};
pub use geometry::{
    coverage_value, preprocess_instance, ActiveSet, Ball, CoveringBall, Instance, Tolerances,
    Vector,
};
pub use kkt::{kkt_check, KktSolution, KktStatus};
pub use oracle::{oracle_enumerate, oracle_subgradient, validate, Certificate};
pub use primal::primal_solve;
pub use solve::{SolveOptions, SolveResult, TraceRecord};
