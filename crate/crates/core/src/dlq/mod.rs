//! Description-logic class-expression queries: parsing, closed-world
//! evaluation over a saturated graph, and an interactive loop.

use thiserror::Error;

pub mod eval;
pub mod parse;
pub mod repl;

pub use eval::{evaluate, individuals, QueryResult};
pub use parse::{parse, ClassExpression};
pub use repl::repl;

/// A query syntax error at a 1-based character column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}
