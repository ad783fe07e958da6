//! Exact SL2 skein algebras and weight-diagram semigroups over trivalent ribbon graphs.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`]: ribbon graphs, contraction, mutation, spanning trees.
//! - [`weights`]: the semigroups `H_Γ` and `U_Γ`, level filtration, Hilbert
//!   functions, the Verlinde oracle and minimal generators.
//! - [`skein`]: arc diagrams, planar tensors, the rewriting system, products
//!   and trace-word tensors.
//! - [`eval`]: exact evaluation on rational SL2 points; the numeric ground truth.
//! - [`strata`]: boundary strata posets and witness weightings.
//! - [`report`]: deterministic JSON/TSV emission used by the CLI.
//!
//! Parallel work goes through [`Exec`]; with the `parallel` feature disabled
//! every policy runs sequentially.

pub mod eval;
pub mod exec;
pub mod graph;
pub mod linalg;
pub mod report;
pub mod skein;
pub mod strata;
pub mod weights;

pub use exec::Exec;
pub use graph::{GraphError, RibbonGraph, StandardGraph};

use num_bigint::BigInt;
use num_rational::BigRational;

pub type Rational = BigRational;
pub type Integer = BigInt;

/// Umbrella error so callers can use `?` across modules.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] graph::GraphError),
    #[error(transparent)]
    Load(#[from] graph::LoadError),
    #[error(transparent)]
    Weight(#[from] weights::WeightError),
    #[error(transparent)]
    Skein(#[from] skein::SkeinError),
    #[error(transparent)]
    Eval(#[from] eval::EvalError),
    #[error(transparent)]
    Report(#[from] report::ReportError),
}
