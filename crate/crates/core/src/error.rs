use thiserror::Error;

#[derive(Debug, Error)]
pub enum GcmError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("input contains no edges")]
    EmptyGraph,

    #[error("node {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("measure undefined: {0}")]
    UndefinedMeasure(&'static str),

    #[error("k = {k} out of range (allowed {min}..={max})")]
    InvalidK { k: usize, min: usize, max: usize },

    #[error("graph is not connected ({components} components)")]
    Disconnected { components: usize },

    #[error("node {0} is already a member of the group")]
    AlreadyMember(usize),

    #[error("{what} needs {required} but the cap is {cap}")]
    Capacity {
        what: &'static str,
        required: u128,
        cap: u128,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = GcmError> = std::result::Result<T, E>;
