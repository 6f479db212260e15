use core::fmt;

/// Errors reported by code construction, encoding, and simulation entry points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A code specification needs at least one kernel.
    EmptyKernelList,
    /// The frozen set size does not match `N - K`.
    DimensionMismatch { expected: usize, actual: usize },
    /// An index or count is outside its valid range.
    RangeError(&'static str),
    /// A vector length does not match the code parameter it must equal.
    LengthMismatch { expected: usize, actual: usize },
    /// The generator-matrix oracle was asked for a code longer than its bound.
    OracleBoundExceeded { n: usize, bound: usize },
    /// A numeric parameter is invalid for the requested operation.
    InvalidParameter(&'static str),
    /// The number of kernel-order permutations exceeds the sweep cap.
    CapExceeded { count: usize, cap: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyKernelList => write!(f, "kernel list is empty"),
            Error::DimensionMismatch { expected, actual } => {
                write!(f, "frozen set size mismatch: expected {expected}, got {actual}")
            }
            Error::RangeError(what) => write!(f, "out of range: {what}"),
            Error::LengthMismatch { expected, actual } => {
                write!(f, "length mismatch: expected {expected}, got {actual}")
            }
            Error::OracleBoundExceeded { n, bound } => {
                write!(f, "generator matrix oracle bound exceeded: N={n} > {bound}")
            }
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::CapExceeded { count, cap } => {
                write!(f, "{count} kernel orders exceed the sweep cap of {cap}")
            }
        }
    }
}

impl core::error::Error for Error {}
