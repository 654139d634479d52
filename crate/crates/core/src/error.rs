use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("exponent must lie in [1, inf], got {0}")]
    InvalidExponent(f64),
    #[error("cannot parse exponent from {0:?}")]
    ExponentSyntax(String),
    #[error("vector must have at least one entry")]
    EmptyVector,
    #[error("vector entry {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },
    #[error("rank {k} out of range [0, {d}]")]
    RankOutOfRange { k: usize, d: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("normal cone base point must be nonzero")]
    ZeroBasePoint,
    #[error("point lies outside the subdifferential domain for p = {p}")]
    OutOfDomain { p: String },
    #[error("witness search did not converge after {doublings} doublings")]
    WitnessDiverged { doublings: u32 },
    #[error("grid has {cells} cells, budget is {budget}")]
    BudgetExceeded { cells: u128, budget: u128 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("sample list is empty")]
    EmptySamples,
    #[error("p = {p} is outside the Capra-convex regime (1, inf)")]
    NotCapraConvex { p: String },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
