//! tmf obstruction replays.
//!
//! An immersion `P^n` in `R^k` gives an axial map, and the tmf-cohomology
//! class `X^e` that vanishes in the target pulls back to
//! `sum C(e, i) X_1^i X_2^{e-i}`. Each theorem instance is replayed by
//! computing that sum's 2-adic coefficients, locating the group it lives in
//! (duality plus periodicity) and evaluating it in the encoded chart.

mod chart;
mod chartdb;
mod degree;
mod extension;
pub mod lattice;
mod replay;

use thiserror::Error;

pub use chart::{
    ChartCheck, ChartKey, ChartPortion, ChartRelation, ChartTower, Generator, Presentation,
    RelationKind, TowerRef,
};
pub use chartdb::{ChartDb, Lookup, PERIOD_DEGREE, PERIOD_FILTRATION};
pub use degree::{
    axial_triple, exponent_of, monomial_window, obstruction_degree, reduce_to_chart, AxialTriple,
    DimExpr, Exponent,
};
pub use extension::{check_four_conditions, factor_order_exponent, FourConditions, OuterTerm, Variant13};
pub use replay::{
    center_index, evaluate_sum, obstruction_terms, replay_part, replay_part_exploratory,
    Evaluation, ObstructionReport, StatementReplay, Term, Verdict,
};

#[derive(Debug, Error)]
pub enum ObstructionError {
    #[error("part ({part}) needs alpha(M) = {expected}, but alpha({m}) = {found}")]
    WrongAlpha {
        part: char,
        m: u64,
        expected: u32,
        found: u32,
    },
    #[error("unknown chart {0}")]
    UnknownChart(ChartKey),
    #[error("degree {degree} on P^{n1} ^ P^{n2} keeps a dependence on L")]
    ResidualL {
        degree: DimExpr,
        n1: DimExpr,
        n2: DimExpr,
    },
    #[error("degree bookkeeping: {0}")]
    Degree(String),
    #[error("chart {key} has no tower at offset {offset}")]
    NoTower { key: ChartKey, offset: i64 },
    #[error("term 2^{valuation} at offset {offset} lies below the drawn portion of chart {key}")]
    BelowPortion {
        key: ChartKey,
        offset: i64,
        valuation: u32,
    },
    #[error("monomial offsets {window:?} do not match the towers {towers:?} of chart {key}")]
    ChartMismatch {
        key: ChartKey,
        window: Vec<i64>,
        towers: Vec<i64>,
    },
    #[error("invalid chart {key}: {msg}")]
    InvalidChart { key: ChartKey, msg: String },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("chart database line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
