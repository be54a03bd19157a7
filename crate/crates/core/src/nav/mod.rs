//! Navigation graphs: reduction of walkable space to a finite graph, A*
//! pathfinding, frontier exploration and on-the-fly graph growth.

mod graph;
mod mesh;
mod search;

use thiserror::Error;

pub use graph::{Metric, NavGraph, NodeId};
pub use mesh::TriangleMesh;
pub use search::{Path, Search, SearchOutcome};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NavError {
    #[error("unknown node id {0}")]
    UnknownNode(NodeId),
    #[error("grid is empty")]
    EmptyGrid,
    #[error("grid row {row} has a different width than row 0")]
    RaggedGrid { row: usize },
    #[error("triangle {0} is degenerate")]
    DegenerateTriangle(usize),
    #[error("triangle {triangle} references missing vertex {vertex}")]
    BadVertexIndex { triangle: usize, vertex: usize },
    #[error("mesh line {line}: {message}")]
    MeshParse { line: usize, message: String },
}
