//! Exact graph polynomials and parametric QED integrand numerators.
//!
//! The crate computes Kirchhoff and second Symanzik polynomials, cycle and
//! bond polynomials of directed Feynman graphs, and assembles the exact
//! tensor numerator of parametric QED Feynman integrals. A brute-force
//! symbolic-differentiation oracle verifies the assembled numerator term by
//! term. All arithmetic is exact (arbitrary-precision integers), and every
//! result is kept in a canonical form so equality checks are structural.

pub mod error;
pub mod polyring;

pub mod exec;
pub mod graph;

pub mod grapoly;

pub mod integrand;

pub mod oracle;

pub mod corpus;
pub mod identities;

pub mod fixtures;

pub mod cli;

pub use error::{Error, Result};
