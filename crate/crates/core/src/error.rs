use alloc::string::String;

/// Errors produced by the spectral toolkit.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("variable count {n} exceeds the dense-table limit of {limit}")]
    Capacity { n: u32, limit: u32 },
    #[error("truth table has {got} entries, expected {expected}")]
    TableLength { expected: usize, got: usize },
    #[error("table entry {index} is {value}, expected +1 or -1")]
    NotBoolean { index: usize, value: i64 },
    #[error("index {index} out of range for {n} variables")]
    IndexOutOfRange { index: u32, n: u32 },
    #[error("variable counts differ: {left} vs {right}")]
    DimensionMismatch { left: u32, right: u32 },
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("undefined for this input: {0}")]
    Undefined(String),
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("variable x{var} repeats on a root-to-leaf path")]
    RepeatedPathVariable { var: u32 },
    #[error("variable x{var} appears twice in clause {clause}")]
    DuplicateLiteral { var: u32, clause: usize },
    #[error("subset {mask:#x} has no cover")]
    NoCover { mask: usize },
    #[error("search guard exceeded: {0}")]
    Guard(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
