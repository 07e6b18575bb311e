use thiserror::Error;

/// Errors raised by the library. Each variant maps onto a stable class name
/// (see [`Error::class`]) that the command-line front end reports verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0}")]
    InvalidArgument(String),
    #[error("{0}")]
    Parse(String),
    #[error("capacity exceeded: n = {n} is above the enumeration bound {bound}")]
    Capacity { n: usize, bound: usize },
    #[error("{0}")]
    Shape(String),
    #[error("{0}")]
    InvalidFilling(String),
    #[error("task graph contains a cycle through task {0}")]
    Cycle(u32),
    #[error("processors {first} and {second} share a tabloid row but have different rates")]
    RowRate { first: u32, second: u32 },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("zero-norm vector has no defined angle")]
    ZeroVector,
}

impl Error {
    pub fn class(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::Parse(_) => "parse-error",
            Error::Capacity { .. } => "capacity-error",
            Error::Shape(_) => "shape-error",
            Error::InvalidFilling(_) => "invalid-filling",
            Error::Cycle(_) => "cycle-error",
            Error::RowRate { .. } => "row-rate-error",
            Error::SingularMatrix => "singular-matrix-error",
            Error::ZeroVector => "zero-vector-error",
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
