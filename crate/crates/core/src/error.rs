use thiserror::Error;

/// Where a near-zero denominator was met.
#[derive(Debug, Clone, PartialEq)]
pub enum BreakdownSite {
    /// Cell `(column, row)` of an epsilon table: lower index `column`, upper index `row`.
    EpsilonCell { column: usize, row: usize },
    /// The small coefficient system of a windowed transformation.
    CoefficientSystem { condition: f64 },
    /// A closed-form `k = 1` expression.
    ClosedForm,
}

/// A transformation could not be evaluated because a denominator vanished.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("transformation breakdown at {site:?} (denominator {denominator:e})")]
pub struct Breakdown {
    pub site: BreakdownSite,
    pub denominator: f64,
}

impl Breakdown {
    pub fn condition(condition: f64) -> Self {
        Breakdown {
            site: BreakdownSite::CoefficientSystem { condition },
            denominator: 1.0 / condition,
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("singular: {0}")]
    Singular(String),
    #[error("order {n} exceeds the limit {limit} for {what}; raise the guard to allow it")]
    Capability {
        what: &'static str,
        n: usize,
        limit: usize,
    },
    #[error("index {index} out of range for order {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("window holds {have} iterates, {need} required")]
    InsufficientWindow { have: usize, need: usize },
    #[error(transparent)]
    Breakdown(#[from] Breakdown),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
