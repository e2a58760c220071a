//! Simpson, 3/8 and Boole rules with their error bounds.
//!
//! For `gamma <= f'' <= Gamma` on `[a, b]`:
//!
//! | rule      | Peano-like bound                   | classical Peano bound              |
//! |-----------|------------------------------------|------------------------------------|
//! | Simpson   | `(Γ-γ)(b-a)^3 / 162`               | `‖f''‖∞ (b-a)^3 / 81`              |
//! | 3/8       | `(Γ-γ)(b-a)^3 / 384`               | `‖f''‖∞ (b-a)^3 / 192`             |
//! | Boole     | `509 (Γ-γ)(b-a)^3 / 273375`        | `1018 ‖f''‖∞ (b-a)^3 / 273375`     |
//!
//! Each constant `C` equals `∫_0^1 |K| / (2 m)` for the rule's kernel `K` and
//! aggregation multiplier `m`.

use alloc::vec;
use core::fmt;
use core::str::FromStr;

use num_rational::Ratio;

use crate::adaptive::{CertifiedResult, Panel};
use crate::error::{check_bounds, precondition, Error, Result};
use crate::expr::{EvalError, Expr};
use crate::interval::Interval;
use crate::jet::second_derivative_enclosure;
use crate::kernels::KernelId;

/// Anything that can be sampled at a point.
pub trait Integrand {
    fn value_at(&self, t: f64) -> core::result::Result<f64, EvalError>;
}

impl Integrand for Expr {
    fn value_at(&self, t: f64) -> core::result::Result<f64, EvalError> {
        self.eval_real(t)
    }
}

impl<F: Fn(f64) -> f64> Integrand for F {
    fn value_at(&self, t: f64) -> core::result::Result<f64, EvalError> {
        Ok(self(t))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    Simpson,
    Simpson38,
    Boole,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown rule `{0}` (expected simpson, simpson38 or boole)")]
pub struct UnknownRule(pub alloc::string::String);

impl FromStr for RuleId {
    type Err = UnknownRule;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "simpson" => Ok(RuleId::Simpson),
            "simpson38" | "simpson3/8" | "3/8" => Ok(RuleId::Simpson38),
            "boole" => Ok(RuleId::Boole),
            _ => Err(UnknownRule(s.into())),
        }
    }
}

const fn r(n: i64, d: i64) -> Ratio<i64> {
    Ratio::new_raw(n, d)
}

const SIMPSON_NODES: [Ratio<i64>; 3] = [r(0, 1), r(1, 2), r(1, 1)];
const SIMPSON38_NODES: [Ratio<i64>; 4] = [r(0, 1), r(1, 3), r(2, 3), r(1, 1)];
const BOOLE_NODES: [Ratio<i64>; 5] = [r(0, 1), r(1, 4), r(1, 2), r(3, 4), r(1, 1)];

impl RuleId {
    pub const ALL: [RuleId; 3] = [RuleId::Simpson, RuleId::Simpson38, RuleId::Boole];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::Simpson => "simpson",
            RuleId::Simpson38 => "simpson38",
            RuleId::Boole => "boole",
        }
    }

    /// Node positions as fractions of `[a, b]`: node `i` is `a + θ_i (b - a)`.
    pub fn node_fractions(self) -> &'static [Ratio<i64>] {
        match self {
            RuleId::Simpson => &SIMPSON_NODES,
            RuleId::Simpson38 => &SIMPSON38_NODES,
            RuleId::Boole => &BOOLE_NODES,
        }
    }

    /// Integer weight numerators over [`RuleId::weight_denominator`].
    pub fn weight_numerators(self) -> &'static [i64] {
        match self {
            RuleId::Simpson => &[1, 4, 1],
            RuleId::Simpson38 => &[1, 3, 3, 1],
            RuleId::Boole => &[7, 32, 12, 32, 7],
        }
    }

    pub fn weight_denominator(self) -> i64 {
        match self {
            RuleId::Simpson => 6,
            RuleId::Simpson38 => 8,
            RuleId::Boole => 90,
        }
    }

    pub fn weights(self) -> impl Iterator<Item = Ratio<i64>> {
        let d = self.weight_denominator();
        self.weight_numerators().iter().map(move |&n| Ratio::new(n, d))
    }

    pub fn node_count(self) -> usize {
        self.weight_numerators().len()
    }

    /// Constant `C` of the bound `C (Γ - γ) (b - a)^3`.
    pub fn peano_like_const(self) -> Ratio<i64> {
        match self {
            RuleId::Simpson => r(1, 162),
            RuleId::Simpson38 => r(1, 384),
            RuleId::Boole => r(509, 273_375),
        }
    }

    /// Constant of the classical bound `c ‖f''‖∞ (b - a)^3`.
    pub fn peano_const(self) -> Ratio<i64> {
        match self {
            RuleId::Simpson => r(1, 81),
            RuleId::Simpson38 => r(1, 192),
            RuleId::Boole => r(1018, 273_375),
        }
    }

    /// Highest polynomial degree integrated exactly.
    pub fn degree(self) -> u32 {
        match self {
            RuleId::Simpson | RuleId::Simpson38 => 3,
            RuleId::Boole => 5,
        }
    }

    pub fn kernel(self) -> KernelId {
        match self {
            RuleId::Simpson => KernelId::K1,
            RuleId::Simpson38 => KernelId::K2,
            RuleId::Boole => KernelId::K3,
        }
    }

    /// Factor multiplying `∫f` when the single-node identities are summed
    /// into the kernel; `C = ∫_0^1|K| / (2 m)`.
    pub fn kernel_multiplier(self) -> i64 {
        match self {
            RuleId::Simpson => 3,
            RuleId::Simpson38 => 8,
            RuleId::Boole => 90,
        }
    }

    pub fn nodes(self, a: f64, b: f64) -> impl Iterator<Item = f64> {
        self.node_fractions().iter().map(move |theta| {
            if *theta.numer() == 0 {
                a
            } else if theta.numer() == theta.denom() {
                b
            } else {
                a + (b - a) * (*theta.numer() as f64 / *theta.denom() as f64)
            }
        })
    }
}

fn ratio_f64(x: Ratio<i64>) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// One rule application: the estimate plus `Σ |w_i f(x_i)| (b - a)` for
/// rounding bookkeeping.
pub(crate) struct RuleSample {
    pub estimate: f64,
    pub magnitude: f64,
}

pub(crate) fn sample_rule<F: Integrand + ?Sized>(
    rule: RuleId,
    f: &F,
    a: f64,
    b: f64,
) -> core::result::Result<RuleSample, EvalError> {
    let mut acc = 0.0;
    let mut mag = 0.0;
    for (x, &w) in rule.nodes(a, b).zip(rule.weight_numerators()) {
        let fx = f.value_at(x)?;
        acc += w as f64 * fx;
        mag += (w as f64 * fx).abs();
    }
    let (l, den) = (b - a, rule.weight_denominator() as f64);
    Ok(RuleSample {
        estimate: acc * l / den,
        magnitude: mag * l / den,
    })
}

/// `Σ w_i (b - a) f(x_i)`.
pub fn apply_rule<F: Integrand + ?Sized>(rule: RuleId, f: &F, a: f64, b: f64) -> Result<f64> {
    check_bounds(a, b)?;
    Ok(sample_rule(rule, f, a, b)?.estimate)
}

/// `C (Γ - γ) (b - a)^3`.
pub fn peano_like_bound(rule: RuleId, gamma: f64, gamma_upper: f64, a: f64, b: f64) -> Result<f64> {
    check_bounds(a, b)?;
    precondition!(
        gamma.is_finite() && gamma_upper.is_finite(),
        "f'' bounds must be finite, got [{gamma}, {gamma_upper}]"
    );
    precondition!(
        gamma <= gamma_upper,
        "expected gamma <= Gamma, got {gamma} > {gamma_upper}"
    );
    let l = b - a;
    Ok(ratio_f64(rule.peano_like_const()) * (gamma_upper - gamma) * l * l * l)
}

/// `c ‖f''‖∞ (b - a)^3`.
pub fn peano_bound(rule: RuleId, sup_norm_f2: f64, a: f64, b: f64) -> Result<f64> {
    check_bounds(a, b)?;
    precondition!(
        sup_norm_f2.is_finite() && sup_norm_f2 >= 0.0,
        "sup norm must be finite and non-negative, got {sup_norm_f2}"
    );
    let l = b - a;
    Ok(ratio_f64(rule.peano_const()) * sup_norm_f2 * l * l * l)
}

/// Side-by-side view of the two bounds for the same `[γ, Γ]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundComparison {
    pub peano_like: f64,
    pub peano_classic: f64,
    /// `peano_like / peano_classic`, or 1 when the classical bound is 0.
    pub ratio: f64,
    pub gamma: f64,
    pub gamma_upper: f64,
    pub sup_norm: f64,
}

/// Compares both bounds with `‖f''‖∞` taken as `max(|γ|, |Γ|)`.
///
/// `peano_like <= peano_classic` always; they agree exactly when `Γ = -γ`.
pub fn compare_bounds(
    rule: RuleId,
    gamma: f64,
    gamma_upper: f64,
    a: f64,
    b: f64,
) -> Result<BoundComparison> {
    let peano_like = peano_like_bound(rule, gamma, gamma_upper, a, b)?;
    let sup_norm = gamma.abs().max(gamma_upper.abs());
    let peano_classic = peano_bound(rule, sup_norm, a, b)?;
    let ratio = if peano_classic > 0.0 {
        peano_like / peano_classic
    } else {
        1.0
    };
    Ok(BoundComparison {
        peano_like,
        peano_classic,
        ratio,
        gamma,
        gamma_upper,
        sup_norm,
    })
}

/// Bounds the computed panel bound away from rounding in its own evaluation.
pub(crate) fn round_up(x: f64) -> f64 {
    x * (1.0 + 4.0 * f64::EPSILON)
}

/// Rounding allowance for a rule estimate with the given magnitude.
pub(crate) fn rounding_allowance(rule: RuleId, magnitude: f64) -> f64 {
    (32 + 2 * rule.node_count()) as f64 * f64::EPSILON * magnitude
}

/// Certifies a single panel, optionally tightening the `f''` enclosure with
/// one already known to hold on it.
pub(crate) fn certify_one(
    expr: &Expr,
    rule: RuleId,
    a: f64,
    b: f64,
    refine_depth: u32,
    known: Option<Interval>,
) -> Result<(Panel, f64)> {
    let uncertifiable = |source| Error::Uncertifiable { rule, a, b, source };
    let x = Interval::new(a, b)?;
    let mut enclosure = second_derivative_enclosure(expr, x, refine_depth).map_err(uncertifiable)?;
    if let Some(tight) = known.and_then(|k| k.intersect(&enclosure)) {
        enclosure = tight;
    }
    let sample = sample_rule(rule, expr, a, b).map_err(uncertifiable)?;
    let bound = round_up(peano_like_bound(rule, enclosure.lo(), enclosure.hi(), a, b)?);
    let panel = Panel {
        a,
        b,
        gamma: enclosure.lo(),
        gamma_upper: enclosure.hi(),
        bound,
        estimate: sample.estimate,
    };
    Ok((panel, rounding_allowance(rule, sample.magnitude)))
}

/// Single-panel certificate: the rule estimate, the `f''` enclosure used and
/// the Peano-like bound it implies.
pub fn certify_panel(
    expr: &Expr,
    rule: RuleId,
    a: f64,
    b: f64,
    refine_depth: u32,
) -> Result<CertifiedResult> {
    check_bounds(a, b)?;
    let (panel, rounding) = certify_one(expr, rule, a, b, refine_depth, None)?;
    Ok(CertifiedResult {
        estimate: panel.estimate,
        bound: panel.bound,
        rounding,
        evals: rule.node_count() as u64,
        panels: vec![panel],
    })
}
