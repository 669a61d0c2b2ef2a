//! Universal algorithms over semirings.
//!
//! One generic implementation of matrix closure, Bellman-equation solvers and
//! semiring LDM factorization serves shortest paths, maximal path widths,
//! dynamic programming and real matrix inversion alike; swapping the
//! [`Semiring`](semiring::Semiring) swaps the problem. The weak interval
//! extension lifts any idempotent instance so the same code computes interval
//! bounds, and [`idemcalc`] covers idempotent integration, convolution, the
//! Legendre transform, dequantization and Newton polytopes.

pub mod error;
pub mod idemcalc;
pub mod interval;
pub mod io;
pub mod matalg;
pub mod pathgraph;
pub mod semiring;

pub use error::{Error, ErrorClass, Result};
pub use interval::{Interval, IntervalSemiring};
pub use matalg::{BellmanMethod, ClosureMethod, LdmTriple, Matrix, OpCounters};
pub use pathgraph::WeightedDigraph;
pub use semiring::{make_semiring, Carrier, Instance, Params, Semiring};
