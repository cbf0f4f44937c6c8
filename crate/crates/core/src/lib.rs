//! Nonimmersion results for real projective spaces as executable rules.
//!
//! - [`dyadic`]: binary digit sums and 2-adic valuations of binomials.
//! - [`rules`]: the theorem catalog, `D(n)`, `K(n)` and first-source lookup.
//! - [`obstruction`]: tmf chart data and replays of the obstruction proofs.
//! - [`tabulator`]: the best-known table, its claim checks, and emitters.
//! - [`cli`]: the `psni` command line.

pub mod cli;
pub mod dyadic;
pub mod obstruction;
pub mod rules;
pub mod tabulator;
