//! Second-order error kernels of the three rules.
//!
//! With
//!
//! ```text
//! p(x, t) = t - a   (t <= x)        q(x, s) = ∫_a^b p(x, t) p(t, s) dt
//!           t - b   (t >  x)
//! ```
//!
//! each rule's error is `(1 / (b - a)) ∫ K(s) f''(s) ds` divided by an
//! aggregation multiplier, where `K` is a weighted sum of `q(x_j, s)` over the
//! rule's nodes:
//!
//! ```text
//! K1 = 2 q(m, s) + q(a, s)                                     (Simpson)
//! K2 = q(a, s) + 3 q(x1, s) + 3 q(x2, s) + q(b, s)             (3/8)
//! K3 = 7 q(a, s) + 32 q(x1, s) + 12 q(m, s) + 32 q(x3, s) + 7 q(b, s)  (Boole)
//! ```
//!
//! Kernels are always assembled from `q`; the zero sets and `∫|K|` are
//! computed from that assembly rather than taken as given.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;

use crate::error::{check_bounds, precondition, Result};
use crate::expr::Expr;
use crate::rules::RuleId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelId {
    K1,
    K2,
    K3,
}

impl fmt::Display for KernelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KernelId::K1 => "K1",
            KernelId::K2 => "K2",
            KernelId::K3 => "K3",
        })
    }
}

impl KernelId {
    pub const ALL: [KernelId; 3] = [KernelId::K1, KernelId::K2, KernelId::K3];

    pub fn rule(self) -> RuleId {
        match self {
            KernelId::K1 => RuleId::Simpson,
            KernelId::K2 => RuleId::Simpson38,
            KernelId::K3 => RuleId::Boole,
        }
    }

    /// `(theta, weight)` pairs: node `x = a + theta (b - a)` enters with `weight`.
    fn terms(self) -> &'static [(f64, f64)] {
        match self {
            KernelId::K1 => &[(0.0, 1.0), (0.5, 2.0)],
            KernelId::K2 => &[(0.0, 1.0), (1.0 / 3.0, 3.0), (2.0 / 3.0, 3.0), (1.0, 1.0)],
            KernelId::K3 => &[
                (0.0, 7.0),
                (0.25, 32.0),
                (0.5, 12.0),
                (0.75, 32.0),
                (1.0, 7.0),
            ],
        }
    }

    /// Sum of the term weights; kernel values scale like `weight_sum * (b-a)^3`.
    pub fn weight_sum(self) -> f64 {
        self.terms().iter().map(|&(_, w)| w).sum()
    }

    /// `∫_0^1 |K(s)| ds` as an exact fraction `(num, den)`.
    pub fn abs_integral_unit(self) -> (i64, i64) {
        match self {
            KernelId::K1 => (1, 27),
            KernelId::K2 => (1, 24),
            KernelId::K3 => (2036, 6075),
        }
    }

    /// `(theta, weight)` pairs as exact fractions `theta = num / den`.
    fn exact_terms(self) -> &'static [(i128, i128, i128)] {
        match self {
            KernelId::K1 => &[(0, 1, 1), (1, 2, 2)],
            KernelId::K2 => &[(0, 1, 1), (1, 3, 3), (2, 3, 3), (1, 1, 1)],
            KernelId::K3 => &[(0, 1, 7), (1, 4, 32), (1, 2, 12), (3, 4, 32), (1, 1, 7)],
        }
    }

    /// Zeros as fractions `num / den` of `[0, 1]`, including both endpoints.
    fn zero_fractions(self) -> &'static [(i128, i128)] {
        match self {
            KernelId::K1 => &[(0, 1), (1, 3), (2, 3), (1, 1)],
            KernelId::K2 => &[(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)],
            KernelId::K3 => &[(0, 1), (7, 45), (1, 3), (2, 3), (38, 45), (1, 1)],
        }
    }
}

fn check_point(name: &str, v: f64, a: f64, b: f64) -> Result<()> {
    precondition!(
        v.is_finite() && a <= v && v <= b,
        "{name} = {v} must lie in [{a}, {b}]"
    );
    Ok(())
}

/// `p(x, t)`: `t - a` for `t <= x`, `t - b` otherwise.
pub fn p_eval(x: f64, t: f64, a: f64, b: f64) -> Result<f64> {
    check_bounds(a, b)?;
    check_point("x", x, a, b)?;
    check_point("t", t, a, b)?;
    Ok(if t <= x { t - a } else { t - b })
}

/// Closed form of `q(x, s) = ∫_a^b p(x, t) p(t, s) dt`.
pub fn q_eval(x: f64, s: f64, a: f64, b: f64) -> Result<f64> {
    check_bounds(a, b)?;
    check_point("x", x, a, b)?;
    check_point("s", s, a, b)?;
    Ok(q_unchecked(x, s, a, b))
}

fn q_unchecked(x: f64, s: f64, a: f64, b: f64) -> f64 {
    let l = b - a;
    let shift = x - 0.5 * (a + b);
    let r = if s <= x { s - a } else { s - b };
    l * shift * r - 0.5 * l * r * r
}

fn node(theta: f64, a: f64, b: f64) -> f64 {
    if theta == 1.0 {
        b
    } else {
        a + theta * (b - a)
    }
}

pub fn kernel_eval(k: KernelId, s: f64, a: f64, b: f64) -> Result<f64> {
    check_bounds(a, b)?;
    check_point("s", s, a, b)?;
    Ok(kernel_unchecked(k, s, a, b))
}

fn kernel_unchecked(k: KernelId, s: f64, a: f64, b: f64) -> f64 {
    k.terms()
        .iter()
        .map(|&(theta, w)| w * q_unchecked(node(theta, a, b), s, a, b))
        .sum()
}

/// Zeros of `K` on `[a, b]`, ascending, endpoints included.
pub fn kernel_zeros(k: KernelId, a: f64, b: f64) -> Result<Vec<f64>> {
    check_bounds(a, b)?;
    Ok(k
        .zero_fractions()
        .iter()
        .map(|&(num, den)| match (num, den) {
            (0, _) => a,
            (n, d) if n == d => b,
            (n, d) => {
                let (n, d) = (n as f64, d as f64);
                ((d - n) * a + n * b) / d
            }
        })
        .collect())
}

type Q = Ratio<i128>;

fn zero() -> Q {
    Q::from_integer(0)
}

/// Quadratic `c0 + c1 v + c2 v^2` in the unit variable `v = (s - a) / (b - a)`,
/// with exact coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Quadratic {
    c0: Q,
    c1: Q,
    c2: Q,
}

impl Quadratic {
    fn eval(&self, v: Q) -> Q {
        self.c0 + (self.c1 + self.c2 * v) * v
    }

    fn integral(&self, v0: Q, v1: Q) -> Q {
        let antideriv = |v: Q| (self.c0 + (self.c1 / 2 + self.c2 * v / 3) * v) * v;
        antideriv(v1) - antideriv(v0)
    }

    /// Whether the polynomial takes both strict signs on `[v0, v1]`. The
    /// extremes of a quadratic lie at the ends or at its vertex.
    fn changes_sign(&self, v0: Q, v1: Q) -> bool {
        let mut samples = vec![self.eval(v0), self.eval(v1)];
        if self.c2 != zero() {
            let vertex = -self.c1 / (self.c2 * 2);
            if v0 < vertex && vertex < v1 {
                samples.push(self.eval(vertex));
            }
        }
        samples.iter().any(|&x| x > zero()) && samples.iter().any(|&x| x < zero())
    }
}

/// `K(a + v (b - a)) = (b - a)^3 k(v)`; returns `k` on an open piece
/// `(v0, v1)` on which every `q` term keeps one branch.
///
/// Per term, `q / l^3 = (theta - 1/2) r - r^2 / 2` with `r = v` left of the
/// node and `r = v - 1` right of it.
fn piece(k: KernelId, v0: Q, v1: Q) -> Quadratic {
    let mid = (v0 + v1) / 2;
    let half = Q::new(1, 2);
    let mut p = Quadratic {
        c0: zero(),
        c1: zero(),
        c2: zero(),
    };
    for &(num, den, w) in k.exact_terms() {
        let theta = Q::new(num, den);
        let w = Q::from_integer(w);
        let shift = theta - half;
        p.c2 -= w * half;
        if mid <= theta {
            p.c1 += w * shift;
        } else {
            // (theta - 1/2)(v - 1) - (v - 1)^2 / 2
            p.c0 -= w * (shift + half);
            p.c1 += w * (shift + Q::from_integer(1));
        }
    }
    p
}

/// Breakpoints in `v`: kernel zeros plus the nodes where some `q` switches
/// branch, sorted and deduplicated.
fn breakpoints(k: KernelId) -> Vec<Q> {
    let mut pts: Vec<Q> = k
        .zero_fractions()
        .iter()
        .map(|&(n, d)| Q::new(n, d))
        .chain(k.exact_terms().iter().map(|&(n, d, _)| Q::new(n, d)))
        .collect();
    pts.sort();
    pts.dedup();
    pts
}

/// Signed integrals of `k` over its pieces on `[0, 1]`.
fn unit_pieces(k: KernelId) -> Vec<(Q, bool)> {
    breakpoints(k)
        .windows(2)
        .map(|w| {
            let poly = piece(k, w[0], w[1]);
            (poly.integral(w[0], w[1]), poly.changes_sign(w[0], w[1]))
        })
        .collect()
}

fn to_f64(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// `∫_0^1 |k(v)| dv`, exactly. Fails if a piece between consecutive
/// breakpoints changes sign, i.e. the zero list is incomplete.
fn unit_abs_integral(k: KernelId) -> Result<Q> {
    let mut total = zero();
    for (v, mixed) in unit_pieces(k) {
        precondition!(!mixed, "{k} changes sign between listed zeros");
        total += if v < zero() { -v } else { v };
    }
    Ok(total)
}

/// `∫_a^b |K(s)| ds`, integrating the quadratic pieces in closed form.
///
/// The pieces are integrated exactly on the unit interval, so the only
/// rounding is in the final `(b - a)^4` scaling.
pub fn kernel_abs_integral(k: KernelId, a: f64, b: f64) -> Result<f64> {
    check_bounds(a, b)?;
    Ok(to_f64(unit_abs_integral(k)?) * libm::pow(b - a, 4.0))
}

/// `∫_a^b K(s) ds`, which vanishes for all three kernels.
pub fn kernel_integral(k: KernelId, a: f64, b: f64) -> Result<f64> {
    check_bounds(a, b)?;
    let signed: Q = unit_pieces(k).into_iter().map(|(v, _)| v).sum();
    Ok(to_f64(signed) * libm::pow(b - a, 4.0))
}

/// Composite trapezoid estimate of `∫_a^b |K(s)| ds` on `n` uniform
/// subintervals, using pointwise kernel evaluation only.
pub fn kernel_abs_integral_oracle(k: KernelId, a: f64, b: f64, n: usize) -> Result<f64> {
    check_bounds(a, b)?;
    precondition!(n >= 1000, "oracle needs n >= 1000, got {n}");
    let h = (b - a) / n as f64;
    let at = |i: usize| {
        let s = if i == n { b } else { a + i as f64 * h };
        kernel_unchecked(k, s, a, b).abs()
    };
    let inner: f64 = (1..n).map(at).sum();
    Ok(h * (0.5 * (at(0) + at(n)) + inner))
}

/// Both sides of the identity
///
/// ```text
/// f(x)(b-a) - (x - (a+b)/2)(f(b) - f(a)) - ∫_a^b f
///     = (1/(b-a)) ∫_a^b ∫_a^b p(x,t) p(t,s) f''(s) ds dt
/// ```
///
/// `lhs` uses the supplied `reference` for `∫_a^b f`. `rhs` is a numeric double
/// integral: composite Simpson with `resolution` subintervals on each smooth
/// piece (the integrands jump at `t = x` and `s = t`).
pub fn kernel_identity_residual(
    expr: &Expr,
    x: f64,
    a: f64,
    b: f64,
    reference: f64,
    resolution: usize,
) -> Result<(f64, f64)> {
    check_bounds(a, b)?;
    check_point("x", x, a, b)?;
    precondition!(resolution >= 2, "resolution must be at least 2");
    let n = resolution + resolution % 2;
    let l = b - a;

    let fa = expr.eval_real(a)?;
    let fb = expr.eval_real(b)?;
    let fx = expr.eval_real(x)?;
    let lhs = fx * l - (x - 0.5 * (a + b)) * (fb - fa) - reference;

    let f2 = |s: f64| expr.eval_derivatives(s).map(|d| d[2]);
    // g(t) = ∫ p(t,s) f''(s) ds, split at s = t
    let inner = |t: f64| -> Result<f64> {
        let left = simpson(a, t, n, |s| Ok((s - a) * f2(s)?))?;
        let right = simpson(t, b, n, |s| Ok((s - b) * f2(s)?))?;
        Ok(left + right)
    };
    let outer_left = simpson(a, x, n, |t| Ok((t - a) * inner(t)?))?;
    let outer_right = simpson(x, b, n, |t| Ok((t - b) * inner(t)?))?;
    Ok((lhs, (outer_left + outer_right) / l))
}

fn simpson(lo: f64, hi: f64, n: usize, mut f: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
    if hi <= lo {
        return Ok(0.0);
    }
    let h = (hi - lo) / n as f64;
    let mut acc = f(lo)? + f(hi)?;
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(lo + i as f64 * h)?;
    }
    Ok(acc * h / 3.0)
}
