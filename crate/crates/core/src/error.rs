use thiserror::Error;

use crate::var::Var;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("variable order must be nonempty")]
    EmptyOrder,
    #[error("variable {0} appears twice in the order")]
    DuplicateVariable(Var),
    #[error("variable {0} is not in the vtree")]
    UnknownVariable(Var),
    #[error("cannot remove the last variable of a vtree")]
    LastVariable,
    #[error("vtrees differ")]
    VtreeMismatch,
    #[error("vtree is not linear")]
    NonLinearVtree,
    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("{0} variables exceed the truth-table limit of {1}")]
    TooManyVariables(usize, usize),
    #[error("assignment domain does not match: {0}")]
    DomainMismatch(String),
    #[error("circuit still depends on variable {0}")]
    SyntacticDependence(Var),
    #[error("nodes {0} and {1} are not twins")]
    NotTwins(u32, u32),
    #[error("the root family has no twins")]
    RootFamily,
    #[error("malformed diagram: {0}")]
    Malformed(String),
    #[error("circuit is cyclic")]
    CyclicCircuit,
    #[error("teacher answered inconsistently: {0}")]
    InconsistentTeacher(String),
}
