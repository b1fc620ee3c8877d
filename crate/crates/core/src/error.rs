use thiserror::Error;

/// Errors produced by the deck and reconstruction machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph must have between 1 and {max} vertices, got {got}")]
    VertexCount { got: usize, max: usize },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self loop at vertex {0}")]
    SelfLoop(usize),
    #[error("invalid vertex set: {0}")]
    InvalidVertexSet(String),
    #[error("graph is not connected")]
    NotConnected,
    #[error("card size {j} out of range for a graph on {n} vertices")]
    InvalidCardSize { j: usize, n: usize },
    #[error("inconsistent deck: {0}")]
    InconsistentDeck(String),
    #[error("inconsistent input: {0}")]
    InconsistentInput(String),
    #[error("no boundary count supplied for family member {0}")]
    MissingBoundary(String),
    #[error("deck contains a card with a cycle")]
    NotAcyclicDeck,
    #[error("(n, l) = ({n}, {ell}) is excluded")]
    ExcludedCase { n: usize, ell: usize },
    #[error("outside the range where the result is valid: {0}")]
    OutOfValidityRange(String),
    #[error("girth {girth} is below the required {required}")]
    GirthTooSmall { girth: usize, required: usize },
    #[error("anchor is not a center of the requested vine kind")]
    NotACenter,
    #[error("graph is not a tree")]
    NotATree,
    #[error("tree is a path and has no legs")]
    IsAPath,
    #[error("bad card: {0}")]
    BadCard(String),
    #[error("vertex {0} received two marks")]
    MarkingCollision(usize),
    #[error("{what} on {n} vertices exceeds the budget of {budget}")]
    BudgetExceeded { what: &'static str, n: usize, budget: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("arithmetic overflow while {0}")]
    Overflow(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
