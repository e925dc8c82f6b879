//! Certified approximation pipeline for the s-t-path graph TSP.

pub mod bench;
pub mod dp;
pub mod ear;
pub mod error;
pub mod generate;
pub mod graph;
pub mod induction;
pub mod io;
pub mod lp;
pub mod matroid;
pub mod outer;
pub mod pairing;
pub mod scalar;
pub mod solve;

pub use error::{Error, Result};
pub use graph::{EdgeMultiset, MultiGraph, ProblemInstance, VertexSet};

/// Exact rational with machine-word components.
pub type Rational = num_rational::Ratio<i64>;
/// Arbitrary-precision rational used by the LP oracle.
pub type BigRational = num_rational::BigRational;
