use thiserror::Error;

use crate::graph::{Id, Violation};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("invalid graph: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("unknown vertex id {0}")]
    UnknownVertex(Id),
    #[error("not a bijection over the vertex set: {0}")]
    NotABijection(String),
    #[error("isomorphism check limited to {limit} vertices, got {got}")]
    TooLarge { limit: usize, got: usize },
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransformError {
    #[error("edge-to-vertex transform needs at least one edge")]
    EmptyEdgeSet,
    #[error("graph already contains a dummy vertex ({0})")]
    DummyPresent(Id),
    #[error("isolated vertex {0} cannot be represented in the transformed graph")]
    IsolatedVertex(Id),
    #[error("expected exactly one dummy vertex, found {0}")]
    DummyCount(usize),
    #[error("vertex id {0} is recovered with inconsistent label sets")]
    InconsistentLabels(Id),
    #[error("edge id {0} is used by more than one edge")]
    DuplicateEdgeId(Id),
    #[error("recovered graph is invalid: {0}")]
    Malformed(String),
}

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("feature vectors come from different dictionaries")]
    DictionaryMismatch,
    #[error("graph {index}: {source}")]
    Graph {
        index: usize,
        #[source]
        source: TransformError,
    },
    #[error("invalid kernel spec: {0}")]
    Spec(String),
    #[error("empty dataset")]
    EmptyDataset,
}

#[derive(Debug, Error)]
pub enum LearnError {
    #[error("labels must contain both classes")]
    SingleClass,
    #[error("only binary labels are supported, found {0} classes")]
    Multiclass(usize),
    #[error("kernel contains a non-finite value at ({0}, {1})")]
    NonFinite(usize, usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("need at least 10 samples to split, got {0}")]
    TooFewSamples(usize),
    #[error("SMO did not converge within {0} iterations")]
    NoConvergence(u64),
    #[error("empty hyperparameter grid")]
    EmptyGrid,
    #[error("degenerate split for seed {seed}: {reason}")]
    DegenerateSplit { seed: u64, reason: String },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {reason}")]
    Parse {
        path: String,
        line: usize,
        reason: String,
    },
    #[error("{path}: {reason}")]
    Format { path: String, reason: String },
}
