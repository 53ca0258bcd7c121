use thiserror::Error;

use crate::polytope::Status;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid graphon: {0}")]
    InvalidGraphon(String),
    #[error("invalid skeleton graph: {0}")]
    InvalidSkeleton(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("vector entries must sum to 1, got {0}")]
    NotNormalized(String),
    #[error("skeleton graph is disconnected; components: {}", format_components(.0))]
    Disconnected(Vec<Vec<usize>>),
    #[error("skeleton graph has no odd cycle")]
    NoOddCycle,
    #[error("certificate status is {0}, expected Interior")]
    NotInterior(Status),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("matrix rounding precondition: {0}")]
    NonIntegerSums(String),
    #[error("A-matrix construction failed: {0}")]
    BuildA(#[from] BuildAFailure),
    #[error("invalid balanced matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("directed edge from block {from} to block {to} is not allowed by the skeleton")]
    Homomorphism { from: usize, to: usize },
    #[error("invalid refinement: {0}")]
    InvalidRefinement(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

/// Which step of the A-matrix pipeline gave up, or which of the five
/// postconditions was violated.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildAFailure {
    #[error("n*x is not integer-valued")]
    NotIntegral,
    #[error("x is not in the relative interior of the edge polytope (status {0})")]
    NotInterior(Status),
    #[error("loopless subgraph has no odd cycle; normalize the graphon first")]
    LooplessBipartite,
    #[error("residual vector after even rounding is not positive at node {0}")]
    ResidualNotPositive(usize),
    #[error("normalized residual is {0} for the loopless edge polytope")]
    ThetaOutside(Status),
    #[error("postcondition {item} violated: {detail}")]
    Property { item: u8, detail: String },
}

fn format_components(components: &[Vec<usize>]) -> String {
    components
        .iter()
        .map(|c| format!("{{{}}}", c.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")))
        .collect::<Vec<_>>()
        .join(" ")
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
