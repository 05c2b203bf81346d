//! Options, results and per-iteration traces shared by both solvers.

use crate::geometry::{ActiveSet, CoveringBall, Preprocessed, Tolerances, Vector};
use crate::path::PathKind;

/// Solver configuration.
#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    pub tolerances: Tolerances,
    /// Iteration cap; `None` means `100 m`.
    pub max_iterations: Option<usize>,
    /// Record a [`TraceRecord`] per iteration.
    pub trace: bool,
    /// Primal starting point; the centroid of the centers when absent.
    pub initial_point: Option<Vector>,
    /// Dual starting pair in input indices; the farthest pair when absent.
    pub initial_pair: Option<(usize, usize)>,
}

impl SolveOptions {
    /// Effective iteration cap for `m` balls.
    pub fn iteration_cap(&self, m: usize) -> usize {
        self.max_iterations.unwrap_or(100 * m.max(1))
    }
}

/// What an iteration did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    /// Starting point.
    Init,
    /// A step along a search path.
    Search(PathKind),
    /// An optimality check that changed or certified the active set.
    Update,
}

impl StepKind {
    /// Lower-case name used in serialized traces.
    pub fn name(self) -> &'static str {
        match self {
            Self::Init => "init",
            Self::Search(kind) => kind.name(),
            Self::Update => "update",
        }
    }
}

/// One line of a solver trace. Indices refer to the input instance.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub iteration: usize,
    /// Covering radius after the iteration.
    pub z: f64,
    /// Size of the active set after the iteration.
    pub active: usize,
    pub kind: StepKind,
    /// Step length taken along the path (zero for updates).
    pub step: f64,
    pub entering: Option<usize>,
    pub leaving: Option<usize>,
}

/// Outcome of a successful solve. Indices refer to the input instance.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub ball: CoveringBall,
    /// Final active set.
    pub support: ActiveSet,
    pub iterations: usize,
    pub trace: Vec<TraceRecord>,
    /// Steps shortened because a closed-form crossing was missed.
    pub safeguard_hits: usize,
    /// `(removed, container)` pairs dropped before solving.
    pub removed: Vec<(usize, usize)>,
}

/// Maps indices of the preprocessed instance back to the input.
#[derive(Debug, Clone)]
pub(crate) struct IndexMap {
    kept: Vec<usize>,
}

impl IndexMap {
    pub(crate) fn new(pre: &Preprocessed) -> Self {
        Self {
            kept: pre.kept.clone(),
        }
    }

    pub(crate) fn original(&self, i: usize) -> usize {
        self.kept[i]
    }

    pub(crate) fn local(&self, original: usize) -> Option<usize> {
        self.kept.iter().position(|&k| k == original)
    }

    pub(crate) fn active_set(&self, s: &ActiveSet) -> ActiveSet {
        ActiveSet::new(s.indices().iter().map(|&i| self.kept[i]).collect())
            .expect("distinct indices stay distinct")
    }
}

/// Result for an instance where one ball contains every other.
pub(crate) fn trivial_result(pre: &Preprocessed, winner: usize) -> SolveResult {
    let ball = pre.instance.ball(0);
    SolveResult {
        ball: CoveringBall {
            center: ball.center.clone(),
            radius: ball.radius,
        },
        support: ActiveSet::new(vec![winner]).expect("single index"),
        iterations: 0,
        trace: Vec::new(),
        safeguard_hits: 0,
        removed: pre.removed.clone(),
    }
}
