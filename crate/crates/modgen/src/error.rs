use std::io;

/// Errors produced by generators, analyzers, and file codecs.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter violated its documented domain.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A node id outside `0..node_count` was passed to a graph operation.
    #[error("node id {id} out of range for graph with {node_count} nodes")]
    NodeOutOfRange { id: usize, node_count: usize },

    /// Community assignment could not place a node within the iteration cap.
    #[error("assignment stalled: node {node} could not be placed after {iterations} homeless iterations")]
    AssignmentStalled { node: usize, iterations: usize },

    /// No community capacity can host this node under the mixing constraint.
    #[error("node {node} with degree {degree} is infeasible: (1-mu)*degree = {required:.2} exceeds c_max = {c_max}")]
    InfeasibleNode {
        node: usize,
        degree: usize,
        required: f64,
        c_max: usize,
    },

    /// A metric that requires hard partitions was given overlapping memberships.
    #[error("overlapping membership at node {node}: metric requires a hard partition")]
    OverlappingPartition { node: usize },

    /// Shortest-path analysis needs a component with at least two nodes.
    #[error("largest connected component has {size} node(s); average path length undefined")]
    PathLengthUndefined { size: usize },

    /// A file could not be parsed.
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
