use alloc::string::{String, ToString};

use super::{BinaryOp, Expr, UnaryOp};
use crate::interval::{Interval, IntervalError};
use crate::jet::Jet2;

/// Evaluation failure, naming the smallest subexpression that failed.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("cannot evaluate `{subexpr}`: {reason}")]
pub struct EvalError {
    pub subexpr: String,
    pub reason: EvalFailure,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalFailure {
    #[error(transparent)]
    Interval(#[from] IntervalError),

    #[error("{op} is undefined at {arg}")]
    Domain { op: &'static str, arg: f64 },

    #[error("result is not finite")]
    NonFinite,
}

impl EvalError {
    fn at(node: &Expr, reason: impl Into<EvalFailure>) -> Self {
        EvalError {
            subexpr: node.to_string(),
            reason: reason.into(),
        }
    }
}

/// Exponent as an `i32` when it is integral.
fn integer_exponent(k: f64) -> Option<i32> {
    (k == libm::trunc(k) && k.abs() <= i32::MAX as f64).then_some(k as i32)
}

fn exponent_of(rhs: &Expr) -> f64 {
    match rhs {
        Expr::Const(k) => *k,
        // the parser only builds constant exponents
        _ => f64::NAN,
    }
}

impl Expr {
    /// Plain double-precision evaluation at `t`.
    pub fn eval_real(&self, t: f64) -> Result<f64, EvalError> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var => t,
            Expr::Unary(op, c) => {
                let x = c.eval_real(t)?;
                let domain = |op| EvalError::at(self, EvalFailure::Domain { op, arg: x });
                match op {
                    UnaryOp::Neg => -x,
                    UnaryOp::Sin => libm::sin(x),
                    UnaryOp::Cos => libm::cos(x),
                    UnaryOp::Exp => libm::exp(x),
                    UnaryOp::Log if x <= 0.0 => return Err(domain("log")),
                    UnaryOp::Log => libm::log(x),
                    UnaryOp::Sqrt if x < 0.0 => return Err(domain("sqrt")),
                    UnaryOp::Sqrt => libm::sqrt(x),
                }
            }
            Expr::Binary(op, l, r) => {
                let x = l.eval_real(t)?;
                match op {
                    BinaryOp::Pow => {
                        let k = exponent_of(r);
                        if integer_exponent(k).is_none() && x < 0.0 {
                            return Err(EvalError::at(
                                self,
                                EvalFailure::Domain { op: "pow", arg: x },
                            ));
                        }
                        libm::pow(x, k)
                    }
                    _ => {
                        let y = r.eval_real(t)?;
                        match op {
                            BinaryOp::Add => x + y,
                            BinaryOp::Sub => x - y,
                            BinaryOp::Mul => x * y,
                            BinaryOp::Div if y == 0.0 => {
                                return Err(EvalError::at(
                                    self,
                                    EvalFailure::Domain { op: "div", arg: y },
                                ))
                            }
                            BinaryOp::Div => x / y,
                            BinaryOp::Pow => unreachable!(),
                        }
                    }
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::at(self, EvalFailure::NonFinite))
        }
    }

    /// Enclosures of `f`, `f'`, `f''` over `x`.
    pub fn eval_jet(&self, x: Interval) -> Result<Jet2, EvalError> {
        let wrap = |r: Result<Jet2, IntervalError>| r.map_err(|e| EvalError::at(self, e));
        match self {
            Expr::Const(c) => wrap(Jet2::constant(*c)),
            Expr::Var => Ok(Jet2::variable(x)),
            Expr::Unary(op, c) => {
                let u = c.eval_jet(x)?;
                wrap(match op {
                    UnaryOp::Neg => Ok(u.neg()),
                    UnaryOp::Sin => u.sin(),
                    UnaryOp::Cos => u.cos(),
                    UnaryOp::Exp => u.exp(),
                    UnaryOp::Log => u.ln(),
                    UnaryOp::Sqrt => u.sqrt(),
                })
            }
            Expr::Binary(BinaryOp::Pow, l, r) => {
                let u = l.eval_jet(x)?;
                let k = exponent_of(r);
                wrap(match integer_exponent(k) {
                    Some(n) => u.powi(n),
                    None => u.powf(k),
                })
            }
            Expr::Binary(op, l, r) => {
                let u = l.eval_jet(x)?;
                let v = r.eval_jet(x)?;
                wrap(match op {
                    BinaryOp::Add => u.add(v),
                    BinaryOp::Sub => u.sub(v),
                    BinaryOp::Mul => u.mul(v),
                    BinaryOp::Div => u.div(v),
                    BinaryOp::Pow => unreachable!(),
                })
            }
        }
    }

    /// `(f(t), f'(t), f''(t))` by forward-mode differentiation in doubles.
    /// Not an enclosure; used where a pointwise `f''` is all that is needed.
    pub fn eval_derivatives(&self, t: f64) -> Result<[f64; 3], EvalError> {
        let d = self.dual(t)?;
        Ok([d.v, d.d1, d.d2])
    }

    fn dual(&self, t: f64) -> Result<Dual2, EvalError> {
        let d = match self {
            Expr::Const(c) => Dual2::constant(*c),
            Expr::Var => Dual2 {
                v: t,
                d1: 1.0,
                d2: 0.0,
            },
            Expr::Unary(op, c) => {
                let u = c.dual(t)?;
                let x = u.v;
                let domain = |op| EvalError::at(self, EvalFailure::Domain { op, arg: x });
                match op {
                    UnaryOp::Neg => u.chain(-x, -1.0, 0.0),
                    UnaryOp::Sin => {
                        let (s, c) = (libm::sin(x), libm::cos(x));
                        u.chain(s, c, -s)
                    }
                    UnaryOp::Cos => {
                        let (s, c) = (libm::sin(x), libm::cos(x));
                        u.chain(c, -s, -c)
                    }
                    UnaryOp::Exp => {
                        let e = libm::exp(x);
                        u.chain(e, e, e)
                    }
                    UnaryOp::Log if x <= 0.0 => return Err(domain("log")),
                    UnaryOp::Log => u.chain(libm::log(x), 1.0 / x, -1.0 / (x * x)),
                    UnaryOp::Sqrt if x <= 0.0 => return Err(domain("sqrt")),
                    UnaryOp::Sqrt => {
                        let r = libm::sqrt(x);
                        u.chain(r, 0.5 / r, -0.25 / (x * r))
                    }
                }
            }
            Expr::Binary(BinaryOp::Pow, l, r) => {
                let u = l.dual(t)?;
                let k = exponent_of(r);
                let x = u.v;
                if integer_exponent(k).is_none() && x <= 0.0 {
                    return Err(EvalError::at(
                        self,
                        EvalFailure::Domain { op: "pow", arg: x },
                    ));
                }
                u.chain(
                    libm::pow(x, k),
                    k * libm::pow(x, k - 1.0),
                    k * (k - 1.0) * libm::pow(x, k - 2.0),
                )
            }
            Expr::Binary(op, l, r) => {
                let u = l.dual(t)?;
                let v = r.dual(t)?;
                match op {
                    BinaryOp::Add => Dual2 {
                        v: u.v + v.v,
                        d1: u.d1 + v.d1,
                        d2: u.d2 + v.d2,
                    },
                    BinaryOp::Sub => Dual2 {
                        v: u.v - v.v,
                        d1: u.d1 - v.d1,
                        d2: u.d2 - v.d2,
                    },
                    BinaryOp::Mul => u.mul(v),
                    BinaryOp::Div if v.v == 0.0 => {
                        return Err(EvalError::at(
                            self,
                            EvalFailure::Domain { op: "div", arg: 0.0 },
                        ))
                    }
                    BinaryOp::Div => {
                        let x = v.v;
                        u.mul(v.chain(1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x)))
                    }
                    BinaryOp::Pow => unreachable!(),
                }
            }
        };
        if d.v.is_finite() && d.d1.is_finite() && d.d2.is_finite() {
            Ok(d)
        } else {
            Err(EvalError::at(self, EvalFailure::NonFinite))
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Dual2 {
    v: f64,
    d1: f64,
    d2: f64,
}

impl Dual2 {
    fn constant(c: f64) -> Self {
        Dual2 {
            v: c,
            d1: 0.0,
            d2: 0.0,
        }
    }

    fn mul(self, o: Dual2) -> Self {
        Dual2 {
            v: self.v * o.v,
            d1: self.d1 * o.v + self.v * o.d1,
            d2: self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        }
    }

    fn chain(self, h0: f64, h1: f64, h2: f64) -> Self {
        Dual2 {
            v: h0,
            d1: h1 * self.d1,
            d2: h2 * self.d1 * self.d1 + h1 * self.d2,
        }
    }
}
