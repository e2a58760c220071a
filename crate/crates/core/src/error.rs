use alloc::boxed::Box;
use alloc::string::String;

use crate::adaptive::CertifiedResult;
use crate::expr::{EvalError, ParseError};
use crate::interval::IntervalError;
use crate::rules::RuleId;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Eval(#[from] EvalError),

    #[error(transparent)]
    Interval(#[from] IntervalError),

    /// No finite enclosure of `f''` could be computed on the panel.
    #[error("{rule} rule cannot be certified on [{a}, {b}]: {source}")]
    Uncertifiable {
        rule: RuleId,
        a: f64,
        b: f64,
        source: EvalError,
    },

    /// The panel budget ran out before the bound dropped below `eps`.
    /// `best` is the certificate reached so far; its bound is still valid.
    #[error("panel budget of {max_panels} exhausted: bound {} > eps {eps}", best.bound)]
    BudgetExhausted {
        max_panels: usize,
        eps: f64,
        best: Box<CertifiedResult>,
    },
}

macro_rules! precondition {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::Error::Precondition(alloc::format!($($arg)+)));
        }
    };
}
pub(crate) use precondition;

/// Shared check for the `a < b`, both finite, contract.
pub(crate) fn check_bounds(a: f64, b: f64) -> Result<()> {
    precondition!(
        a.is_finite() && b.is_finite(),
        "interval endpoints must be finite, got [{a}, {b}]"
    );
    precondition!(a < b, "expected a < b, got a = {a}, b = {b}");
    Ok(())
}
