use peanoquad_core::kernels::{self, KernelId};
use peanoquad_core::rules::{apply_rule, certify_panel, compare_bounds};
use peanoquad_core::{
    integrate_adaptive, integrate_uniform, parse as parse_expr, second_derivative_enclosure, AdaptiveConfig,
    CertifiedResult, Error, Expr, Interval, ParseError, RuleId, DEFAULT_REFINE_DEPTH,
};
use serde_json::{json, Map, Value};

use crate::args::{BoundsArgs, IntegrateArgs, Mode, ParseArgs, VerifyKernelsArgs};
use crate::output::{real, Record, Status};
use crate::Outcome;

fn failed(record: Record, status: Status, message: String) -> Outcome {
    let stderr = format!("error: {message}");
    Outcome {
        record: record.fail(status, message),
        stderr: Some(stderr),
        text: None,
    }
}

/// Points at the offending character under the echoed source.
fn parse_failure(record: Record, src: &str, err: &ParseError) -> Outcome {
    let mut out = failed(record, Status::ParseError, err.to_string());
    let caret = format!("  {src}\n  {}^", " ".repeat(err.offset()));
    out.stderr = out.stderr.map(|s| format!("{s}\n{caret}"));
    out
}

fn status_of(err: &Error) -> Status {
    match err {
        Error::Parse(_) => Status::ParseError,
        Error::Precondition(_) | Error::Interval(_) => Status::InvalidInput,
        Error::Eval(_) | Error::Uncertifiable { .. } => Status::Uncertifiable,
        Error::BudgetExhausted { .. } => Status::BudgetExhausted,
    }
}

fn inputs(pairs: impl IntoIterator<Item = (&'static str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn certified_json(res: &CertifiedResult, list_panels: bool) -> Value {
    let gamma = res.panels.iter().map(|p| p.gamma).fold(f64::INFINITY, f64::min);
    let gamma_upper = res.panels.iter().map(|p| p.gamma_upper).fold(f64::NEG_INFINITY, f64::max);
    let widths = res.panels.iter().map(|p| p.b - p.a);
    let min_width = widths.clone().fold(f64::INFINITY, f64::min);
    let max_width = widths.fold(0.0, f64::max);
    let max_bound = res.panels.iter().map(|p| p.bound).fold(0.0, f64::max);
    let mut panels = json!({
        "count": res.panels.len(),
        "min_width": real(min_width),
        "max_width": real(max_width),
        "max_bound": real(max_bound),
    });
    if list_panels {
        panels["list"] = res
            .panels
            .iter()
            .map(|p| {
                json!({
                    "a": real(p.a),
                    "b": real(p.b),
                    "gamma": real(p.gamma),
                    "Gamma": real(p.gamma_upper),
                    "bound": real(p.bound),
                    "estimate": real(p.estimate),
                })
            })
            .collect();
    }
    json!({
        "estimate": real(res.estimate),
        "bound": real(res.bound),
        "rounding": real(res.rounding),
        "gamma": real(gamma),
        "Gamma": real(gamma_upper),
        "evals": res.evals,
        "panels": panels,
    })
}

pub fn integrate(args: &IntegrateArgs) -> Outcome {
    let rule = RuleId::from(args.rule);
    let depth = args.refine_depth.unwrap_or(match args.mode {
        Mode::Single => DEFAULT_REFINE_DEPTH,
        Mode::Adaptive | Mode::Uniform => AdaptiveConfig::default().panel_depth,
    });
    let mut record = Record::new(
        "integrate",
        inputs([
            ("expr", args.expr.clone().into()),
            ("a", real(args.a)),
            ("b", real(args.b)),
            ("rule", rule.name().into()),
            ("eps", args.eps.map_or(Value::Null, real)),
            ("mode", args.mode.name().into()),
            ("max_panels", args.max_panels.into()),
            ("refine_depth", depth.into()),
        ]),
    );
    let expr = match parse_expr(&args.expr) {
        Ok(e) => e,
        Err(e) => return parse_failure(record, &args.expr, &e),
    };

    let cfg = AdaptiveConfig {
        panel_depth: depth,
        max_panels: args.max_panels,
        ..AdaptiveConfig::default()
    };
    let result = match (args.mode, args.eps) {
        (Mode::Single, _) => certify_panel(&expr, rule, args.a, args.b, depth),
        (Mode::Uniform, Some(eps)) => integrate_uniform(&expr, rule, args.a, args.b, eps, &cfg),
        (Mode::Adaptive, Some(eps)) => integrate_adaptive(&expr, rule, args.a, args.b, eps, &cfg),
        (mode, None) => {
            let msg = format!("--eps is required in {} mode", mode.name());
            return failed(record, Status::InvalidInput, msg);
        }
    };
    match result {
        Ok(res) => {
            record.results = certified_json(&res, args.list_panels);
            match args.eps {
                Some(eps) if res.bound > eps => {
                    let msg = format!("certified bound {:e} exceeds eps {eps:e}", res.bound);
                    failed(record, Status::ToleranceFailed, msg)
                }
                _ => Outcome::new(record),
            }
        }
        Err(err) => {
            if let Error::BudgetExhausted { best, .. } = &err {
                record.results = certified_json(best, args.list_panels);
            }
            failed(record, status_of(&err), err.to_string())
        }
    }
}

/// High-accuracy reference for the true error: Boole adaptive to a tight
/// tolerance. Returns `(value, certified radius)` when it succeeds.
fn reference_integral(expr: &Expr, a: f64, b: f64, scale: f64) -> Option<(f64, f64)> {
    let cfg = AdaptiveConfig {
        max_panels: 200_000,
        ..AdaptiveConfig::default()
    };
    let eps = 1e-13 * scale.abs().max(1.0);
    integrate_adaptive(expr, RuleId::Boole, a, b, eps, &cfg)
        .ok()
        .map(|r| (r.estimate, r.bound + r.rounding))
}

pub fn bounds(args: &BoundsArgs) -> Outcome {
    let rule = RuleId::from(args.rule);
    let mut record = Record::new(
        "bounds",
        inputs([
            ("expr", args.expr.clone().into()),
            ("a", real(args.a)),
            ("b", real(args.b)),
            ("rule", rule.name().into()),
            ("gamma", args.gamma.map_or(Value::Null, real)),
            ("Gamma", args.gamma_upper.map_or(Value::Null, real)),
            ("refine_depth", args.refine_depth.into()),
        ]),
    );
    let expr = match parse_expr(&args.expr) {
        Ok(e) => e,
        Err(e) => return parse_failure(record, &args.expr, &e),
    };

    let (gamma, gamma_upper, source) = match (args.gamma, args.gamma_upper) {
        (Some(g), Some(gu)) => (g, gu, "override"),
        (g, gu) => {
            let enc = Interval::new(args.a, args.b)
                .map_err(Error::from)
                .and_then(|x| second_derivative_enclosure(&expr, x, args.refine_depth).map_err(Error::from));
            match enc {
                Ok(enc) => {
                    let src = if g.is_some() || gu.is_some() { "mixed" } else { "enclosure" };
                    (g.unwrap_or(enc.lo()), gu.unwrap_or(enc.hi()), src)
                }
                Err(err) => return failed(record, status_of(&err), err.to_string()),
            }
        }
    };
    let cmp = match compare_bounds(rule, gamma, gamma_upper, args.a, args.b) {
        Ok(c) => c,
        Err(err) => return failed(record, status_of(&err), err.to_string()),
    };
    let estimate = apply_rule(rule, &expr, args.a, args.b).ok();
    let reference = estimate.and_then(|e| reference_integral(&expr, args.a, args.b, e));
    let true_error = estimate.zip(reference).map(|(e, (r, _))| (e - r).abs());

    record.results = json!({
        "peano_like": real(cmp.peano_like),
        "peano": real(cmp.peano_classic),
        "ratio": real(cmp.ratio),
        "gamma": real(cmp.gamma),
        "Gamma": real(cmp.gamma_upper),
        "sup_norm": real(cmp.sup_norm),
        "gamma_source": source,
        "estimate": estimate.map_or(Value::Null, real),
        "reference": reference.map_or(Value::Null, |r| real(r.0)),
        "reference_bound": reference.map_or(Value::Null, |r| real(r.1)),
        "true_error": true_error.map_or(Value::Null, real),
    });
    Outcome::new(record)
}

const CLOSED_FORM_REL_TOL: f64 = 1e-12;
const ORACLE_ABS_TOL: f64 = 1e-5;
const MEAN_ZERO_TOL: f64 = 1e-12;
const ZERO_TOL: f64 = 1e-10;

pub fn verify_kernels(args: &VerifyKernelsArgs) -> Outcome {
    let (a, b) = (args.a, args.b);
    let mut record = Record::new(
        "verify-kernels",
        inputs([("a", real(a)), ("b", real(b)), ("oracle_n", args.oracle_n.into())]),
    );
    let mut rows = Vec::new();
    let mut offenders = Vec::new();
    for k in KernelId::ALL {
        match verify_one(k, a, b, args.oracle_n, &mut offenders) {
            Ok(row) => rows.push(row),
            Err(err) => return failed(record, status_of(&err), err.to_string()),
        }
    }
    record.results = json!({
        "tolerances": {
            "closed_form_rel": real(CLOSED_FORM_REL_TOL),
            "oracle_abs_scaled": real(ORACLE_ABS_TOL),
            "mean_zero_scaled": real(MEAN_ZERO_TOL),
            "zero_scaled": real(ZERO_TOL),
        },
        "kernels": rows,
    });
    if offenders.is_empty() {
        Outcome::new(record)
    } else {
        let msg = format!("tolerance exceeded: {}", offenders.join("; "));
        failed(record, Status::ToleranceFailed, msg)
    }
}

fn verify_one(k: KernelId, a: f64, b: f64, n: usize, offenders: &mut Vec<String>) -> Result<Value, Error> {
    let l4 = (b - a).powi(4);
    let scale = k.weight_sum() * (b - a).powi(3);
    let (num, den) = k.abs_integral_unit();
    let expected = num as f64 / den as f64 * l4;

    let closed = kernels::kernel_abs_integral(k, a, b)?;
    let oracle = kernels::kernel_abs_integral_oracle(k, a, b, n)?;
    let mean = kernels::kernel_integral(k, a, b)?;
    let closed_rel = ((closed - expected) / expected).abs();
    let oracle_gap = (oracle - closed).abs();

    if !(closed_rel <= CLOSED_FORM_REL_TOL) {
        offenders.push(format!("{k} closed form relative error {closed_rel:e}"));
    }
    if !(oracle_gap <= ORACLE_ABS_TOL * l4) {
        offenders.push(format!("{k} oracle differs by {oracle_gap:e}"));
    }
    if !(mean.abs() <= MEAN_ZERO_TOL * scale * (b - a)) {
        offenders.push(format!("{k} mean {mean:e}"));
    }
    let mut zeros = Vec::new();
    for s in kernels::kernel_zeros(k, a, b)? {
        let v = kernels::kernel_eval(k, s, a, b)?;
        if !(v.abs() <= ZERO_TOL * scale) {
            offenders.push(format!("{k}({s}) = {v:e}"));
        }
        zeros.push(json!({ "s": real(s), "value": real(v) }));
    }
    Ok(json!({
        "kernel": k.to_string(),
        "rule": k.rule().name(),
        "closed_form": real(closed),
        "oracle": real(oracle),
        "expected": real(expected),
        "expected_unit": format!("{num}/{den}"),
        "closed_form_rel_error": real(closed_rel),
        "oracle_abs_error": real(oracle_gap),
        "mean": real(mean),
        "zeros": zeros,
    }))
}

pub fn parse(args: &ParseArgs) -> Outcome {
    let record = Record::new("parse", inputs([("expr", args.expr.clone().into())]));
    match parse_expr(&args.expr) {
        Ok(e) => {
            let sexpr = e.to_sexpr();
            let mut record = record;
            record.results = json!({
                "sexpr": sexpr,
                "infix": e.to_string(),
                "depth": e.depth(),
            });
            Outcome {
                record,
                stderr: None,
                text: Some(format!("{sexpr}\n")),
            }
        }
        Err(e) => parse_failure(record, &args.expr, &e),
    }
}
