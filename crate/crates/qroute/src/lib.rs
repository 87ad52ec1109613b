//! Qubit routing by swap insertion, decomposed into a token allocation
//! problem solved exactly and a sequence of token swapping problems.
//!
//! The pipeline groups the two-qubit gates of a circuit into layers of
//! disjoint pairs, finds one allocation of logical qubits (tokens) to
//! physical qubits (vertices) per layer such that every gate sits on a
//! hardware edge and the total token movement between layers is minimal,
//! and then realizes each transition between consecutive allocations with
//! swap gates.
//!
//! Module map:
//!
//! * [`graph`] — hardware graphs, distance matrices, line / connectivity /
//!   relaxed graphs and edge-induced subgraph isomorphism.
//! * [`circuit`] — circuit model, text format, gate layering, instance
//!   generators and routing metrics.
//! * [`tap`] — the token allocation problem: feasible-allocation
//!   enumeration, exact layered shortest-path solver, subgraph
//!   isomorphism cuts and LP export of the flow model.
//! * [`swap`] — token swapping: a modified 4-approximation, lower bounds
//!   and an exact best-first search over the Cayley graph.
//! * [`route`] — the end-to-end routing pass and an independent
//!   equivalence checker.
//! * [`mod@bench`] — deterministic benchmark suites with CSV reporting.

pub mod bench;
pub mod circuit;
pub mod graph;
pub mod route;
pub mod swap;
pub mod tap;

mod error;

pub use error::{Error, Result};
pub use graph::HardwareGraph;
pub use tap::Allocation;
