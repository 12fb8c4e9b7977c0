use thiserror::Error;

use crate::search::Falsification;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {0} is not supported (need an odd prime below 2^31)")]
    UnsupportedPrime(u64),
    #[error("point {}: all coordinates vanish mod p", .index + 1)]
    ZeroPoint { index: usize },
    #[error("point {} duplicates point {} after normalization", .index + 1, .first + 1)]
    DuplicatePoint { index: usize, first: usize },
    #[error("point {}: expected {expected} coordinates, found {found}", .index + 1)]
    WrongArity {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("only implemented for points in P^2 (got n = {0})")]
    NotPlane(usize),
    #[error(
        "no certified-generic sample after {retries} attempts (n = {n}, d = {d}, p = {prime})"
    )]
    GenericityFailed {
        n: usize,
        d: usize,
        prime: u32,
        retries: u32,
    },
    #[error("{candidates} candidate subsets exceed the budget of {budget}")]
    BudgetExceeded { candidates: u128, budget: u128 },
    #[error("not linkable: {0}")]
    NotLinkable(String),
    #[error("forms do not form a regular sequence (common factor of degree {0})")]
    NotRegularSequence(usize),
    #[error("malformed Betti table: {0}")]
    MalformedBetti(String),
    #[error("subset search exhausted every removal order without success")]
    Falsified(Box<Falsification>),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
