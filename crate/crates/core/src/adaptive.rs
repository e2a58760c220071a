//! Composite rules and certified integration to a tolerance.
//!
//! Applied on `n` equal panels the Peano-like bound becomes
//! `C (Γ - γ) (b - a)^3 / n^2`, which fixes the uniform panel count a priori.
//! The adaptive driver instead bisects the panel with the largest bound until
//! the bounds sum to at most `eps`.

use alloc::boxed::Box;
use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{check_bounds, precondition, Error, Result};
use crate::expr::Expr;
use crate::interval::Interval;
use crate::jet::second_derivative_enclosure;
use crate::rules::{certify_one, peano_like_bound, sample_rule, Integrand, RuleId};
use crate::DEFAULT_REFINE_DEPTH;

/// One panel of a certified partition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Panel {
    pub a: f64,
    pub b: f64,
    /// Lower bound on `f''` over the panel.
    pub gamma: f64,
    /// Upper bound on `f''` over the panel.
    pub gamma_upper: f64,
    /// `C (Γ - γ) (b - a)^3`, rounded up.
    pub bound: f64,
    pub estimate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertifiedResult {
    pub estimate: f64,
    /// Sum of the panel bounds: the certified truncation error.
    pub bound: f64,
    /// Allowance for floating-point error in computing `estimate`. Not part
    /// of `bound`; compare against `bound + rounding` when checking results.
    pub rounding: f64,
    /// Panels left to right; consecutive panels share endpoints bitwise.
    pub panels: Vec<Panel>,
    /// Number of integrand evaluations performed.
    pub evals: u64,
}

impl CertifiedResult {
    /// Builds the totals from panels already in left-to-right order.
    fn from_panels(panels: Vec<Panel>, rounding: f64, evals: u64) -> Self {
        let estimate: f64 = panels.iter().map(|p| p.estimate).sum();
        let bound: f64 = panels.iter().map(|p| p.bound).sum();
        let abs_sum: f64 = panels.iter().map(|p| p.estimate.abs()).sum();
        // summing n panel estimates adds at most ~n ulps of the absolute sum
        let summation = panels.len() as f64 * f64::EPSILON * abs_sum;
        CertifiedResult {
            estimate,
            bound,
            rounding: rounding + summation,
            panels,
            evals,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdaptiveConfig {
    /// Depth used for the single whole-interval enclosure that sizes the
    /// uniform partition.
    pub sizing_depth: u32,
    /// Depth used when enclosing `f''` on each panel.
    pub panel_depth: u32,
    /// Upper limit on the number of panels in either mode.
    pub max_panels: usize,
}

impl Default for AdaptiveConfig {
    fn default() -> Self {
        AdaptiveConfig {
            sizing_depth: DEFAULT_REFINE_DEPTH,
            panel_depth: 2,
            max_panels: 100_000,
        }
    }
}

/// `Σ_i rule(f, p_i, p_{i+1})`.
pub fn composite_apply<F: Integrand + ?Sized>(rule: RuleId, f: &F, partition: &[f64]) -> Result<f64> {
    precondition!(
        partition.len() >= 2,
        "partition needs at least two points, got {}",
        partition.len()
    );
    precondition!(
        partition.iter().all(|p| p.is_finite()) && partition.windows(2).all(|w| w[0] < w[1]),
        "partition must be finite and strictly increasing"
    );
    let mut total = 0.0;
    for w in partition.windows(2) {
        total += sample_rule(rule, f, w[0], w[1])?.estimate;
    }
    Ok(total)
}

fn uniform_bound(c_width_cubed: f64, n: u64) -> f64 {
    let n = n as f64;
    c_width_cubed / (n * n)
}

/// Smallest `n >= 1` with `C (Γ - γ) (b - a)^3 / n^2 <= eps`.
pub fn uniform_panel_count(
    rule: RuleId,
    gamma: f64,
    gamma_upper: f64,
    a: f64,
    b: f64,
    eps: f64,
) -> Result<u64> {
    precondition!(eps > 0.0 && eps.is_finite(), "eps must be positive, got {eps}");
    let single = peano_like_bound(rule, gamma, gamma_upper, a, b)?;
    if single <= eps {
        return Ok(1);
    }
    let guess = libm::ceil(libm::sqrt(single / eps));
    precondition!(
        guess < 1e15,
        "uniform partition would need about {guess:e} panels"
    );
    let mut n = (guess as u64).max(1);
    while n > 1 && uniform_bound(single, n - 1) <= eps {
        n -= 1;
    }
    while uniform_bound(single, n) > eps {
        n += 1;
    }
    Ok(n)
}

fn uncertifiable_whole(rule: RuleId, a: f64, b: f64, e: crate::expr::EvalError) -> Error {
    Error::Uncertifiable {
        rule,
        a,
        b,
        source: e,
    }
}

fn check_common(a: f64, b: f64, eps: f64, config: &AdaptiveConfig) -> Result<()> {
    check_bounds(a, b)?;
    precondition!(eps > 0.0 && eps.is_finite(), "eps must be positive, got {eps}");
    precondition!(config.max_panels >= 1, "max_panels must be at least 1");
    Ok(())
}

/// Uniform composite rule sized from a whole-interval enclosure of `f''`.
///
/// Each panel is then re-enclosed (intersected with the global enclosure), so
/// the reported bound never exceeds the a-priori one.
pub fn integrate_uniform(
    expr: &Expr,
    rule: RuleId,
    a: f64,
    b: f64,
    eps: f64,
    config: &AdaptiveConfig,
) -> Result<CertifiedResult> {
    check_common(a, b, eps, config)?;
    let whole = Interval::new(a, b)?;
    let global = second_derivative_enclosure(expr, whole, config.sizing_depth)
        .map_err(|e| uncertifiable_whole(rule, a, b, e))?;
    let mut n = uniform_panel_count(rule, global.lo(), global.hi(), a, b, eps)?;
    loop {
        if n > config.max_panels as u64 {
            let (panel, rounding) = certify_one(expr, rule, a, b, config.sizing_depth, Some(global))?;
            let best = CertifiedResult::from_panels(alloc::vec![panel], rounding, rule.node_count() as u64);
            return Err(Error::BudgetExhausted {
                max_panels: config.max_panels,
                eps,
                best: Box::new(best),
            });
        }
        let points: Vec<f64> = whole.subdivide(n as usize).map(|p| p.lo()).chain([b]).collect();
        precondition!(
            points.windows(2).all(|w| w[0] < w[1]),
            "[{a}, {b}] is too narrow for {n} panels"
        );
        let mut panels = Vec::with_capacity(n as usize);
        let mut rounding = 0.0;
        for w in points.windows(2) {
            let (panel, r) = certify_one(expr, rule, w[0], w[1], config.panel_depth, Some(global))?;
            panels.push(panel);
            rounding += r;
        }
        let evals = n * rule.node_count() as u64;
        let result = CertifiedResult::from_panels(panels, rounding, evals);
        if result.bound <= eps {
            return Ok(result);
        }
        // only reachable through rounding in the per-panel sums
        n += 1;
    }
}

/// Heap entry: largest bound first, leftmost first among equal bounds.
struct Worst {
    panel: Panel,
    rounding: f64,
}

impl PartialEq for Worst {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Worst {}

impl PartialOrd for Worst {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Worst {
    fn cmp(&self, other: &Self) -> Ordering {
        self.panel
            .bound
            .total_cmp(&other.panel.bound)
            .then_with(|| other.panel.a.total_cmp(&self.panel.a))
    }
}

fn collect_sorted(heap: &BinaryHeap<Worst>) -> (Vec<Panel>, f64) {
    let mut entries: Vec<&Worst> = heap.iter().collect();
    entries.sort_by(|x, y| x.panel.a.total_cmp(&y.panel.a));
    let rounding = entries.iter().map(|w| w.rounding).sum();
    (entries.into_iter().map(|w| w.panel).collect(), rounding)
}

fn canonical_bound(heap: &BinaryHeap<Worst>) -> f64 {
    let mut bounds: Vec<(f64, f64)> = heap.iter().map(|w| (w.panel.a, w.panel.bound)).collect();
    bounds.sort_by(|x, y| x.0.total_cmp(&y.0));
    bounds.iter().map(|&(_, b)| b).sum()
}

/// Worst-first bisection until the panel bounds sum to at most `eps`.
///
/// Splits are exact midpoints; the sequence of splits does not depend on
/// `eps`, so a smaller tolerance never yields fewer panels.
pub fn integrate_adaptive(
    expr: &Expr,
    rule: RuleId,
    a: f64,
    b: f64,
    eps: f64,
    config: &AdaptiveConfig,
) -> Result<CertifiedResult> {
    check_common(a, b, eps, config)?;
    let depth = config.panel_depth;
    let mut evals = rule.node_count() as u64;
    let (root, rounding) = certify_one(expr, rule, a, b, depth, None)?;
    let mut running = root.bound;
    let mut heap = BinaryHeap::new();
    heap.push(Worst {
        panel: root,
        rounding,
    });

    loop {
        if running <= eps {
            let exact = canonical_bound(&heap);
            if exact <= eps {
                break;
            }
            running = exact;
        }
        let mid_ok = heap.peek().is_some_and(|w| {
            let mid = 0.5 * (w.panel.a + w.panel.b);
            w.panel.a < mid && mid < w.panel.b
        });
        if heap.len() >= config.max_panels || !mid_ok {
            let (panels, rounding) = collect_sorted(&heap);
            return Err(Error::BudgetExhausted {
                max_panels: config.max_panels,
                eps,
                best: Box::new(CertifiedResult::from_panels(panels, rounding, evals)),
            });
        }
        let Some(worst) = heap.pop() else { break };
        let Panel { a: pa, b: pb, .. } = worst.panel;
        let mid = 0.5 * (pa + pb);
        let (left, rl) = certify_one(expr, rule, pa, mid, depth, None)?;
        let (right, rr) = certify_one(expr, rule, mid, pb, depth, None)?;
        evals += 2 * rule.node_count() as u64;
        running += left.bound + right.bound - worst.panel.bound;
        heap.push(Worst {
            panel: left,
            rounding: rl,
        });
        heap.push(Worst {
            panel: right,
            rounding: rr,
        });
    }

    let (panels, rounding) = collect_sorted(&heap);
    Ok(CertifiedResult::from_panels(panels, rounding, evals))
}
