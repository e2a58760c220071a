mod common;

use common::corpus;
use peanoquad_core::{parse, second_derivative_enclosure, Interval};
use proptest::prelude::*;

const INFLATION: f64 = 1e-12;

fn subset_up_to(inner: Interval, outer: Interval) -> bool {
    let slack = INFLATION * (1.0 + outer.mag());
    outer.lo() - slack <= inner.lo() && inner.hi() <= outer.hi() + slack
}

fn interval_in(lo: f64, hi: f64) -> impl Strategy<Value = Interval> {
    (lo..hi, lo..hi).prop_filter_map("degenerate", |(x, y)| {
        let (a, b) = if x < y { (x, y) } else { (y, x) };
        (b - a > 1e-9).then(|| Interval::new(a, b).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn arithmetic_contains_pointwise_results(
        x in interval_in(-4.0, 4.0),
        y in interval_in(0.5, 4.0),
        s in 0.0f64..=1.0,
        r in 0.0f64..=1.0,
    ) {
        let p = x.lo() + s * x.width();
        let q = y.lo() + r * y.width();
        prop_assert!(x.add(y).unwrap().contains(p + q));
        prop_assert!(x.sub(y).unwrap().contains(p - q));
        prop_assert!(x.mul(y).unwrap().contains(p * q));
        prop_assert!(x.div(y).unwrap().contains(p / q));
        prop_assert!(x.sqr().unwrap().contains(p * p));
        prop_assert!(x.powi(5).unwrap().contains(p.powi(5)));
        prop_assert!(y.powi(-3).unwrap().contains(q.powi(-3)));
        prop_assert!(x.exp().unwrap().contains(p.exp()));
        prop_assert!(y.ln().unwrap().contains(q.ln()));
        prop_assert!(y.sqrt().unwrap().contains(q.sqrt()));
        prop_assert!(x.sin().unwrap().contains(p.sin()));
        prop_assert!(x.cos().unwrap().contains(p.cos()));
    }

    #[test]
    fn jet_enclosures_are_inclusion_monotone(
        idx in 0usize..15,
        outer in interval_in(0.0, 3.0),
        s in 0.0f64..1.0,
        w in 0.0f64..1.0,
    ) {
        let case = &corpus()[idx];
        let expr = case.expr();
        let lo = outer.lo() + s * outer.width();
        let hi = lo + w * (outer.hi() - lo);
        let inner = Interval::new(lo, hi).unwrap();
        let big = expr.eval_jet(outer).unwrap();
        let small = expr.eval_jet(inner).unwrap();
        prop_assert!(subset_up_to(small.val, big.val), "{}: {} vs {}", case.src, small.val, big.val);
        prop_assert!(subset_up_to(small.d1, big.d1));
        prop_assert!(subset_up_to(small.d2, big.d2));
    }

    #[test]
    fn refinement_never_loosens(idx in 0usize..15, x in interval_in(0.0, 3.0), depth in 0u32..6) {
        let expr = corpus()[idx].expr();
        let coarse = second_derivative_enclosure(&expr, x, depth).unwrap();
        let fine = second_derivative_enclosure(&expr, x, depth + 1).unwrap();
        prop_assert!(fine.width() <= coarse.width() + INFLATION * (1.0 + coarse.mag()));
    }

    #[test]
    fn second_derivative_enclosure_contains_samples(idx in 0usize..15, x in interval_in(0.0, 3.0), s in 0.0f64..=1.0) {
        let case = &corpus()[idx];
        let g = second_derivative_enclosure(&case.expr(), x, 3).unwrap();
        let t = x.lo() + s * x.width();
        prop_assert!(g.contains(case.derivs(t)[2]));
    }
}

#[test]
fn point_interval_gives_narrow_output() {
    let e = parse("exp(t) * sin(t)").unwrap();
    let jet = e.eval_jet(Interval::point(0.7).unwrap()).unwrap();
    let want = 0.7f64.exp() * 0.7f64.sin();
    assert!(jet.val.contains(want));
    assert!(jet.val.width() <= 1e-13);
}

#[test]
fn enclosure_spec_examples() {
    let j = parse("t").unwrap().eval_jet(Interval::new(2.0, 3.0).unwrap()).unwrap();
    assert_eq!((j.val.lo(), j.val.hi()), (2.0, 3.0));
    assert_eq!((j.d1.lo(), j.d1.hi()), (1.0, 1.0));
    assert_eq!((j.d2.lo(), j.d2.hi()), (0.0, 0.0));

    let unit = Interval::new(0.0, 1.0).unwrap();
    let j = parse("exp(t)").unwrap().eval_jet(unit).unwrap();
    assert!(j.d2.lo() <= 1.0 && j.d2.hi() >= core::f64::consts::E);

    let g = second_derivative_enclosure(&parse("t^4").unwrap(), unit, 4).unwrap();
    assert!(g.lo() <= 0.0 && g.hi() >= 12.0);
    assert!(g.lo() >= -0.01 && g.hi() <= 12.01);
}

#[test]
fn log_and_sqrt_need_positive_lower_endpoint() {
    let touching = Interval::new(0.0, 1.0).unwrap();
    assert!(parse("log(t)").unwrap().eval_jet(touching).is_err());
    assert!(parse("sqrt(t)").unwrap().eval_jet(touching).is_err());
    let err = parse("1 + sqrt(t)").unwrap().eval_jet(touching).unwrap_err();
    assert_eq!(err.subexpr, "sqrt(t)");
}
