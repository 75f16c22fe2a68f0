use thiserror::Error;

use crate::graph::{ArcId, VertexId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} is out of range for a graph on {order} vertices")]
    VertexOutOfRange { vertex: VertexId, order: usize },
    #[error("arc {0:?} does not exist")]
    ArcMissing(ArcId),
    #[error("loop at vertex {0}")]
    LoopArc(VertexId),
    #[error("parallel arcs {tail} -> {head}")]
    ParallelArc { tail: VertexId, head: VertexId },
    #[error("bad partition: {0}")]
    BadPartition(String),
    #[error("independent part contains arc {tail} -> {head}")]
    IndependenceViolation { tail: VertexId, head: VertexId },
    #[error("vertices {0} and {1} of the semicomplete part are not adjacent")]
    SemicompletenessViolation(VertexId, VertexId),

    #[error("digraph is not strong")]
    NotStrong,
    #[error("digraph is not semicomplete")]
    NotSemicomplete,
    #[error("need at least {needed} vertices, got {got}")]
    TooSmall { needed: usize, got: usize },
    #[error("internal verification failed: {0}")]
    VerificationFailed(String),

    #[error("splitting arcs {in_arc:?} and {out_arc:?} would create a loop at {vertex}")]
    LoopWouldForm { in_arc: ArcId, out_arc: ArcId, vertex: VertexId },
    #[error("arcs {in_arc:?} and {out_arc:?} do not form a splittable pair: {reason}")]
    NotSplittable { in_arc: ArcId, out_arc: ArcId, reason: String },
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("invalid feasible set: {0}")]
    InfeasibleSet(String),
    #[error("arc classes do not partition the carrier: {0}")]
    NotAPartition(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("degree hypothesis fails at vertex {0}")]
    DegreeHypothesisFails(VertexId),
    #[error("no in/out arc pair available to patch vertex {0}")]
    PatchUnavailable(VertexId),
    #[error("exhaustive search found no strong arc decomposition for a non-exceptional input")]
    SearchExhausted,
    #[error("fewer than two arc-disjoint paths between the chosen terminal and initial sets")]
    NoTwoPaths,
    #[error("unexpected structure: {0}")]
    ShapeMismatch(String),
    #[error("unexpected structure: {0}")]
    StructureMismatch(String),

    #[error("instance has {arcs} arcs, above the oracle bound of {bound}")]
    TooLarge { arcs: usize, bound: usize },
    #[error("gave up after {attempts} sampling attempts")]
    GiveUp { attempts: usize },
}

impl Error {
    /// True for errors that can only be reached through an implementation bug
    /// when the caller's input satisfies the documented preconditions.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::VerificationFailed(_)
                | Error::SearchExhausted
                | Error::PatchUnavailable(_)
                | Error::ShapeMismatch(_)
                | Error::StructureMismatch(_)
        )
    }
}
