//! Certified Newton-Cotes quadrature.
//!
//! Simpson's rule, the 3/8 rule and Boole's rule, each paired with an error
//! bound of the form `C * (Gamma - gamma) * (b - a)^3` where
//! `gamma <= f''(t) <= Gamma` on `[a, b]`. The second-derivative bounds are
//! obtained automatically by evaluating a parsed expression in second-order
//! interval jet arithmetic.
//!
//! The crate is `no_std` and only needs `alloc`.
//!
//! ```
//! use peanoquad_core::{parse, integrate_adaptive, AdaptiveConfig, RuleId};
//!
//! let f = parse("exp(t)").unwrap();
//! let res = integrate_adaptive(&f, RuleId::Simpson, 0.0, 1.0, 1e-8, &AdaptiveConfig::default()).unwrap();
//! assert!(res.bound <= 1e-8);
//! assert!((res.estimate - (core::f64::consts::E - 1.0)).abs() <= res.bound + res.rounding);
//! ```

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod adaptive;
mod error;
pub mod expr;
pub mod interval;
pub mod jet;
pub mod kernels;
pub mod rules;

pub use adaptive::{
    composite_apply, integrate_adaptive, integrate_uniform, uniform_panel_count, AdaptiveConfig,
    CertifiedResult, Panel,
};
pub use error::{Error, Result};
pub use expr::{parse, BinaryOp, EvalError, Expr, ParseError, UnaryOp};
pub use interval::{Interval, IntervalError};
pub use jet::{second_derivative_enclosure, Jet2};
pub use kernels::KernelId;
pub use rules::{BoundComparison, Integrand, RuleId};

/// Default number of halvings used when bounding `f''` over a single panel.
pub const DEFAULT_REFINE_DEPTH: u32 = 6;
