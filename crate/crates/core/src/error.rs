use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or inconsistent input (unknown labels, bad partitions, ...).
    #[error("invalid input: {0}")]
    Input(String),

    /// The graph is disconnected, so it has no spanning tree.
    #[error("graph is disconnected")]
    Disconnected,

    /// An operation that requires a 2-connected graph or matroid got something else.
    #[error("not 2-connected: {0}")]
    NotBiconnected(String),

    /// An enumeration or oracle bound was exceeded.
    #[error("capacity exceeded: {what} (limit {limit}); {hint}")]
    Capacity {
        what: String,
        limit: u64,
        hint: String,
    },

    /// An inequality is violated by a spanning tree (given as its edge ids).
    #[error("inequality violated by spanning tree {tree:?}")]
    Invalid { tree: Vec<usize> },

    /// Exact integer arithmetic would overflow its representation.
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    /// Two emitted rows canonicalize identically.
    #[error("duplicate facet rows {0} and {1}")]
    DuplicateRow(usize, usize),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
