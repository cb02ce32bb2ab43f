//! Dummy-node augmentation, a lossless edge-to-vertex transform with an exact
//! inverse, graph kernels over the resulting graphs, and a precomputed-kernel
//! SVM pipeline for graph classification.

pub mod error;
pub mod graph;
pub mod io;
pub mod iso;
pub mod kernels;
pub mod learn;
pub mod rng;
pub mod selftest;
pub mod transform;

pub use error::{GraphError, IoError, KernelError, LearnError, TransformError};
pub use graph::{
    DegreePartition, DegreeProfile, Edge, GraphBuilder, GraphParts, Id, Label, LabelSet,
    LabeledDigraph, Vertex, Violation,
};
pub use iso::is_isomorphic;
pub use kernels::{BaseKernel, GramMatrix, KernelSpec, Variant};
pub use transform::{
    augment_dummy, edge_to_vertex, inverse_edge_to_vertex, line_graph, TransformStats,
};
