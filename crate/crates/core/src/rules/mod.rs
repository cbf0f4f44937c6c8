//! Nonimmersion theorems encoded as fact generators, with the `D(n)` / `K(n)`
//! closures and first-source attribution.
//!
//! A fact `(n, k)` says `P^n` does not immerse in `R^k`. Since `P^N` sits
//! inside `P^n` for `N <= n`, every fact also holds for all larger `n`; both
//! `D` and `K` are maxima over that monotone closure.

mod catalog;
mod config;
mod index;

use thiserror::Error;

pub use catalog::{
    builtin_rules, check_13_hypothesis, Builtin, Catalog, FactGenerator, NonimmersionFact, Params,
    Part11,
};
pub use config::RuleConfig;
pub use index::{best_row, d_of, d_table, k_of, rule_facts, FactIndex};

pub const R_ANN: &str = "R-Ann";
pub const R_JAMES: &str = "R-James";
pub const R_DZ: &str = "R-DZ";
pub const R_11A: &str = "R-1.1a";
pub const R_11B: &str = "R-1.1b";
pub const R_11C: &str = "R-1.1c";
pub const R_11D: &str = "R-1.1d";
pub const R_11E: &str = "R-1.1e";
pub const R_13BE: &str = "R-1.3be";
pub const R_13C: &str = "R-1.3c";
pub const R_13D: &str = "R-1.3d";

/// Built-in rule ids in default precedence order (earliest source first).
pub const DEFAULT_PRECEDENCE: [&str; 11] = [
    R_JAMES, R_ANN, R_DZ, R_11A, R_11B, R_11C, R_11D, R_11E, R_13BE, R_13C, R_13D,
];

#[derive(Debug, Error)]
pub enum RulesError {
    #[error("unknown rule id `{0}`")]
    UnknownRule(String),
    #[error("M = {0} has fewer than two set bits")]
    TooFewBits(u64),
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("duplicate rule id `{0}` in catalog")]
    DuplicateRule(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
