//! Test oracles shared by the integration tests: a corpus of integrands with
//! hand-coded derivatives and antiderivatives, and an adaptive Gauss-Kronrod
//! integrator that is independent of the crate under test.

#![allow(dead_code)]

use peanoquad_core::{parse, Expr};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind {
    Pow(i32),
    Sin,
    Cos,
    Exp,
    Gauss,
    Recip1p,
    Log1p,
}

#[derive(Debug, Clone)]
pub struct Case {
    pub src: String,
    pub kind: Kind,
}

impl Case {
    pub fn new(kind: Kind) -> Case {
        let src = match kind {
            Kind::Pow(k) => format!("t^{k}"),
            Kind::Sin => "sin(t)".into(),
            Kind::Cos => "cos(t)".into(),
            Kind::Exp => "exp(t)".into(),
            Kind::Gauss => "exp(-t^2)".into(),
            Kind::Recip1p => "1/(1+t)".into(),
            Kind::Log1p => "log(1+t)".into(),
        };
        Case { src, kind }
    }

    pub fn expr(&self) -> Expr {
        parse(&self.src).unwrap()
    }

    /// `[f, f', f'']` at `t`.
    pub fn derivs(&self, t: f64) -> [f64; 3] {
        match self.kind {
            Kind::Pow(k) => {
                let kf = k as f64;
                let p = |e: i32| if e < 0 { 0.0 } else { t.powi(e) };
                [p(k), kf * p(k - 1), kf * (kf - 1.0) * p(k - 2)]
            }
            Kind::Sin => [t.sin(), t.cos(), -t.sin()],
            Kind::Cos => [t.cos(), -t.sin(), -t.cos()],
            Kind::Exp => [t.exp(); 3],
            Kind::Gauss => {
                let g = (-t * t).exp();
                [g, -2.0 * t * g, (4.0 * t * t - 2.0) * g]
            }
            Kind::Recip1p => {
                let u = 1.0 / (1.0 + t);
                [u, -u * u, 2.0 * u * u * u]
            }
            Kind::Log1p => {
                let u = 1.0 / (1.0 + t);
                [t.ln_1p(), u, -u * u]
            }
        }
    }

    pub fn f(&self, t: f64) -> f64 {
        self.derivs(t)[0]
    }

    pub fn antiderivative(&self, t: f64) -> f64 {
        match self.kind {
            Kind::Pow(k) => t.powi(k + 1) / (k + 1) as f64,
            Kind::Sin => -t.cos(),
            Kind::Cos => t.sin(),
            Kind::Exp => t.exp(),
            Kind::Gauss => 0.5 * core::f64::consts::PI.sqrt() * libm::erf(t),
            Kind::Recip1p => t.ln_1p(),
            Kind::Log1p => (1.0 + t) * t.ln_1p() - t,
        }
    }

    pub fn closed_form(&self, a: f64, b: f64) -> f64 {
        self.antiderivative(b) - self.antiderivative(a)
    }
}

/// `{t^0..t^8, sin, cos, exp, exp(-t^2), 1/(1+t), log(1+t)}`.
pub fn corpus() -> Vec<Case> {
    let mut out: Vec<Case> = (0..=8).map(|k| Case::new(Kind::Pow(k))).collect();
    for kind in [Kind::Sin, Kind::Cos, Kind::Exp, Kind::Gauss, Kind::Recip1p, Kind::Log1p] {
        out.push(Case::new(kind));
    }
    out
}

// 7-point Gauss / 15-point Kronrod abscissae and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Returns `(kronrod, |kronrod - gauss|, ∫|f| estimate)`.
fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    let mut abs = WGK[7] * fc.abs();
    for j in 0..7 {
        let (f1, f2) = (f(c - h * XGK[j]), f(c + h * XGK[j]));
        k += WGK[j] * (f1 + f2);
        abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            g += WG[j / 2] * (f1 + f2);
        }
    }
    (k * h, ((k - g) * h).abs(), abs * h)
}

#[derive(Debug, Clone, Copy)]
pub struct Reference {
    pub value: f64,
    /// Upper estimate of `|value - ∫f|`: the Kronrod-Gauss differences plus
    /// a rounding allowance on the weighted sums.
    pub uncertainty: f64,
}

/// Worst-first adaptive Gauss-Kronrod to absolute tolerance `tol`.
pub fn gauss_kronrod(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Reference {
    let mut pieces = vec![(a, b, gk15(f, a, b))];
    for _ in 0..10_000 {
        let err: f64 = pieces.iter().map(|p| p.2 .1).sum();
        if err <= tol {
            break;
        }
        let (i, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2 .1.total_cmp(&y.1 .2 .1))
            .unwrap();
        let (lo, hi, _) = pieces.swap_remove(i);
        let mid = 0.5 * (lo + hi);
        if !(lo < mid && mid < hi) {
            break;
        }
        pieces.push((lo, mid, gk15(f, lo, mid)));
        pieces.push((mid, hi, gk15(f, mid, hi)));
    }
    pieces.sort_by(|x, y| x.0.total_cmp(&y.0));
    let value = pieces.iter().map(|p| p.2 .0).sum();
    let err: f64 = pieces.iter().map(|p| p.2 .1).sum();
    let abs: f64 = pieces.iter().map(|p| p.2 .2).sum();
    Reference {
        value,
        uncertainty: err + 32.0 * f64::EPSILON * abs,
    }
}

/// Reference integral of a corpus case, cross-checked against its closed form.
pub fn reference(case: &Case, a: f64, b: f64, tol: f64) -> Reference {
    let r = gauss_kronrod(&|t| case.f(t), a, b, tol);
    let closed = case.closed_form(a, b);
    let cancel = 8.0 * f64::EPSILON * (case.antiderivative(a).abs() + case.antiderivative(b).abs());
    assert!(
        (r.value - closed).abs() <= tol + r.uncertainty + cancel,
        "{} on [{a}, {b}]: quadrature {} vs closed form {closed}",
        case.src,
        r.value
    );
    r
}

/// Deterministic generator for test sweeps.
pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

/// Random `a < b` inside `[lo, hi]` with `b - a >= min_width`.
pub fn random_subinterval(rng: &mut impl rand::Rng, lo: f64, hi: f64, min_width: f64) -> (f64, f64) {
    loop {
        let x: f64 = rng.gen_range(lo..=hi);
        let y: f64 = rng.gen_range(lo..=hi);
        let (a, b) = if x < y { (x, y) } else { (y, x) };
        if b - a >= min_width {
            return (a, b);
        }
    }
}
