use std::time::Duration;

use thiserror::Error;

use crate::poly::{Cell, LatticePoint};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("shape has no cells")]
    EmptyShape,
    #[error("cells are not edge-connected")]
    Disconnected,
    #[error("unexpected character {ch:?} at line {line}, column {column}")]
    BadChar { line: usize, column: usize, ch: char },
    #[error("cell {0} is not part of the polyomino")]
    OutsideShape(Cell),
    #[error("point {0} is not a vertex of the polyomino")]
    NotAVertex(LatticePoint),
    #[error("no path between {0} and {1}")]
    Unreachable(LatticePoint, LatticePoint),
    #[error("random growth could not reach {cells} cells")]
    GrowthStuck { cells: usize },
    #[error("polyomino has holes")]
    NotSimple,
    #[error("the guard sees the whole polyomino")]
    FullyVisible,
    #[error("gate orientation undefined for k = 2 with alpha = {alpha}, beta = {beta}")]
    CaseGap { alpha: usize, beta: usize },
    #[error("polyomino is not tree-shaped: {0}")]
    NotTreeShaped(&'static str),
    #[error("polyomino is a single 1 x m rectangle")]
    DegenerateRectangle,
    #[error("search budget exhausted after {nodes} nodes ({elapsed:?})")]
    Timeout { nodes: u64, elapsed: Duration },
    #[error("no vertex guard set covers the polyomino")]
    Unguardable,
    #[error("gadget placements overlap at cell {0}")]
    Overlap(Cell),
    #[error("port mismatch: {0}")]
    PortMismatch(String),
    #[error("clause {0} is not satisfied by the assignment")]
    UnsatisfiedClause(usize),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}
