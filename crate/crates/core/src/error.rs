use thiserror::Error;

use crate::metric::PointId;

/// Everything that can go wrong while building or transforming the objects of
/// this crate. Axiom violations carry the offending points.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0}")]
    Parse(String),
    #[error("space has no points")]
    Empty,
    #[error("matrix has {rows} rows but row {row} has {len} entries")]
    NotSquare { rows: usize, row: usize, len: usize },
    #[error("{names} point names given for a {size}x{size} matrix")]
    NameCount { names: usize, size: usize },
    #[error("asymmetric entry: d({i},{j}) != d({j},{i})")]
    Asymmetric { i: PointId, j: PointId },
    #[error("nonzero diagonal entry d({i},{i})")]
    NonzeroDiagonal { i: PointId },
    #[error("distance between distinct points {i} and {j} is not positive")]
    NonPositive { i: PointId, j: PointId },
    #[error("triangle inequality fails: d({x},{y}) > d({x},{z}) + d({z},{y})")]
    Triangle { x: PointId, y: PointId, z: PointId },
    #[error("strong triangle inequality fails: d({x},{y}) > max(d({x},{z}), d({z},{y}))")]
    StrongTriangle { x: PointId, y: PointId, z: PointId },
    #[error("subset is empty")]
    EmptySubset,
    #[error("point {index} out of range for a space of {len} points")]
    PointOutOfRange { index: usize, len: usize },
    #[error("relation d < {threshold} is not transitive: d({u},{v}) and d({v},{w}) are below it, d({u},{w}) is not")]
    NotEquivalence {
        u: PointId,
        v: PointId,
        w: PointId,
        threshold: String,
    },
    #[error("threshold must be positive, got {0}")]
    NonPositiveThreshold(String),
    #[error("sequence must be positive and strictly decreasing (fails at position {0})")]
    BadSequence(usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph is not a tree: {0}")]
    NotATree(String),
    #[error("operation needs a rooted tree")]
    RootRequired,
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("label of vertex {0} is negative")]
    NegativeLabel(usize),
    #[error("labeling is not monotone: {0}")]
    NonMonotone(String),
    #[error("relation is not a partial order: {a} and {b} lie on a cycle")]
    NotPartialOrder { a: usize, b: usize },
    #[error("size {size} exceeds the cap of {cap}")]
    SizeCap { size: usize, cap: usize },
    #[error("map is not a bijection: {0}")]
    NotBijection(String),
    #[error("function does not preserve ultrametrics on the distance set: {0}")]
    NotPreserving(String),
    #[error("distance d({i},{j}) is not below the bound {bound}")]
    OutOfBound {
        i: PointId,
        j: PointId,
        bound: String,
    },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("duplicate point {0}")]
    DuplicatePoint(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
