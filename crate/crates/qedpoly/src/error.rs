//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced by graph operations, polynomial builders and the CLI.
#[derive(Error, Debug, PartialEq, Eq)]
pub enum Error {
    /// The operation requires a connected graph.
    #[error("graph is disconnected")]
    Disconnected,
    /// Contracting a self-loop is undefined.
    #[error("cannot contract self-loop edge {0}")]
    TadpoleContraction(u32),
    /// A pair operation was called with the same edge twice.
    #[error("expected two distinct edges, got edge {0} twice")]
    SameEdge(u32),
    /// The graph violates the QED vertex rules; one message per violation.
    #[error("not a valid QED graph: {}", .0.join("; "))]
    InvalidQed(Vec<String>),
    /// The operation requires at least one external leg.
    #[error("graph has no external legs")]
    NoExternals,
    /// An edge id that does not occur in the graph.
    #[error("unknown edge id {0}")]
    UnknownEdge(u32),
    /// The input is not syntactically valid JSON.
    #[error("could not parse input: {0}")]
    ParseError(String),
    /// The input is valid JSON but does not describe a graph.
    #[error("input does not match the graph schema: {0}")]
    SchemaError(String),
    /// The graph exceeds a hard implementation limit.
    #[error("unsupported input: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
