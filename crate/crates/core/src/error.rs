use thiserror::Error;

use crate::taxon::Taxon;

/// Errors raised while reading, building or querying trees.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("newick syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("degree violation: {0}")]
    Degree(String),
    #[error("duplicate taxon label {0}")]
    DuplicateLabel(Taxon),
    #[error("unknown taxon {0}")]
    UnknownTaxon(Taxon),
    #[error("taxon set is empty")]
    EmptySet,
    #[error("nodes {0} and {1} are not joined by an edge")]
    EdgeNotInTree(usize, usize),
    #[error("operation needs at least {needed} leaves, tree has {found}")]
    TooFewLeaves { needed: usize, found: usize },
    #[error("malformed tree: {0}")]
    Malformed(String),
}

/// Errors raised by the solvers and constructions.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("trees are on different taxon sets")]
    TaxaMismatch,
    #[error("{n} leaves exceeds the cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal check failed: {0}")]
    Invariant(String),
    #[error("invalid generator spec: {0}")]
    Generator(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
