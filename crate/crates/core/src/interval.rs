//! Closed intervals of finite doubles.
//!
//! There is no directed rounding. Instead every operation inflates its result
//! outward by a relative `16 * EPSILON` plus an absolute `1e-300`, which
//! covers the error of a correctly-rounded (or 1-ulp) operation with room to
//! spare. Enclosures are therefore rigorous up to that floating-point model.

use core::f64::consts::{FRAC_PI_2, PI, TAU};
use core::fmt;

/// Relative outward inflation applied to every computed endpoint.
pub const INFLATION_REL: f64 = 16.0 * f64::EPSILON;
/// Absolute outward inflation applied to every computed endpoint.
pub const INFLATION_ABS: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IntervalError {
    #[error("invalid interval [{lo}, {hi}]")]
    Invalid { lo: f64, hi: f64 },

    #[error("{op} is undefined on {arg}: {requirement}")]
    Domain {
        op: &'static str,
        arg: Interval,
        requirement: &'static str,
    },

    #[error("{op} overflowed to a non-finite endpoint")]
    Overflow { op: &'static str },
}

type Result<T> = core::result::Result<T, IntervalError>;

/// A closed interval `[lo, hi]` with `lo <= hi`, both finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

fn down(x: f64) -> f64 {
    x - x.abs() * INFLATION_REL - INFLATION_ABS
}

fn up(x: f64) -> f64 {
    x + x.abs() * INFLATION_REL + INFLATION_ABS
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_finite() && hi.is_finite() && lo <= hi {
            Ok(Interval { lo, hi })
        } else {
            Err(IntervalError::Invalid { lo, hi })
        }
    }

    pub fn point(x: f64) -> Result<Self> {
        Self::new(x, x)
    }

    /// Builds the interval from raw endpoints, widening them outward.
    fn inflated(op: &'static str, lo: f64, hi: f64) -> Result<Self> {
        let (lo, hi) = (down(lo), up(hi));
        if lo.is_finite() && hi.is_finite() {
            Ok(Interval { lo, hi })
        } else {
            Err(IntervalError::Overflow { op })
        }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        self.lo + 0.5 * (self.hi - self.lo)
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// Splits into `pieces` equal subintervals. Shared endpoints are bitwise
    /// identical and the outer endpoints are exactly `lo` and `hi`.
    pub fn subdivide(&self, pieces: usize) -> impl Iterator<Item = Interval> + '_ {
        let n = pieces.max(1);
        let at = move |i: usize| {
            if i == n {
                self.hi
            } else {
                self.lo + self.width() * (i as f64 / n as f64)
            }
        };
        (0..n).map(move |i| Interval {
            lo: at(i),
            hi: at(i + 1).max(at(i)),
        })
    }
}

#[allow(clippy::should_implement_trait)]
impl Interval {
    pub fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    pub fn add(self, rhs: Interval) -> Result<Interval> {
        Self::inflated("add", self.lo + rhs.lo, self.hi + rhs.hi)
    }

    pub fn sub(self, rhs: Interval) -> Result<Interval> {
        Self::inflated("sub", self.lo - rhs.hi, self.hi - rhs.lo)
    }

    pub fn mul(self, rhs: Interval) -> Result<Interval> {
        let p = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        let (lo, hi) = min_max(&p);
        Self::inflated("mul", lo, hi)
    }

    pub fn div(self, rhs: Interval) -> Result<Interval> {
        if rhs.contains_zero() {
            return Err(IntervalError::Domain {
                op: "div",
                arg: rhs,
                requirement: "divisor must not contain 0",
            });
        }
        let q = [
            self.lo / rhs.lo,
            self.lo / rhs.hi,
            self.hi / rhs.lo,
            self.hi / rhs.hi,
        ];
        let (lo, hi) = min_max(&q);
        Self::inflated("div", lo, hi)
    }

    pub fn scale(self, k: f64) -> Result<Interval> {
        let (lo, hi) = if k >= 0.0 {
            (self.lo * k, self.hi * k)
        } else {
            (self.hi * k, self.lo * k)
        };
        Self::inflated("scale", lo, hi)
    }

    /// `x^2`, tighter than `x * x` when the interval straddles zero.
    pub fn sqr(self) -> Result<Interval> {
        self.powi(2)
    }

    /// Integer power. Negative exponents need `0` outside the interval.
    pub fn powi(self, k: i32) -> Result<Interval> {
        if k == 0 {
            return Ok(Interval::ONE);
        }
        if k < 0 {
            if self.contains_zero() {
                return Err(IntervalError::Domain {
                    op: "pow",
                    arg: self,
                    requirement: "negative exponent needs 0 outside the base",
                });
            }
            return Interval::ONE.div(self.powi(-k)?);
        }
        let n = k.unsigned_abs();
        let (lo, hi) = if n % 2 == 1 || self.lo >= 0.0 {
            (pow_by_squaring(self.lo, n), pow_by_squaring(self.hi, n))
        } else if self.hi <= 0.0 {
            (pow_by_squaring(self.hi, n), pow_by_squaring(self.lo, n))
        } else {
            (0.0, pow_by_squaring(self.lo, n).max(pow_by_squaring(self.hi, n)))
        };
        // repeated squaring loses up to ~n ulps; widen for it beyond the usual slack
        let extra = n as f64 * f64::EPSILON;
        Self::inflated(
            "pow",
            lo - lo.abs() * extra,
            hi + hi.abs() * extra,
        )
    }

    pub fn exp(self) -> Result<Interval> {
        Self::inflated("exp", libm::exp(self.lo), libm::exp(self.hi))
    }

    pub fn ln(self) -> Result<Interval> {
        if self.lo <= 0.0 {
            return Err(IntervalError::Domain {
                op: "log",
                arg: self,
                requirement: "argument must be strictly positive",
            });
        }
        Self::inflated("log", libm::log(self.lo), libm::log(self.hi))
    }

    pub fn sqrt(self) -> Result<Interval> {
        if self.lo <= 0.0 {
            return Err(IntervalError::Domain {
                op: "sqrt",
                arg: self,
                requirement: "argument must be strictly positive",
            });
        }
        Self::inflated("sqrt", libm::sqrt(self.lo), libm::sqrt(self.hi))
    }

    pub fn sin(self) -> Result<Interval> {
        self.periodic("sin", libm::sin, FRAC_PI_2, -FRAC_PI_2)
    }

    pub fn cos(self) -> Result<Interval> {
        self.periodic("cos", libm::cos, 0.0, PI)
    }

    /// Range of a 2π-periodic function with maxima at `argmax + 2kπ`,
    /// minima at `argmin + 2kπ` and monotone pieces in between.
    fn periodic(
        self,
        op: &'static str,
        f: fn(f64) -> f64,
        argmax: f64,
        argmin: f64,
    ) -> Result<Interval> {
        if self.width() >= TAU {
            return Self::inflated(op, -1.0, 1.0);
        }
        let (fl, fh) = (f(self.lo), f(self.hi));
        let mut lo = fl.min(fh);
        let mut hi = fl.max(fh);
        if hits_lattice(self, argmax) {
            hi = 1.0;
        }
        if hits_lattice(self, argmin) {
            lo = -1.0;
        }
        Self::inflated(op, lo, hi)
    }
}

/// Whether some `offset + 2kπ` lies in `x`.
fn hits_lattice(x: Interval, offset: f64) -> bool {
    let k = libm::ceil((x.lo - offset) / TAU);
    offset + k * TAU <= x.hi
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        })
}

fn pow_by_squaring(mut base: f64, mut n: u32) -> f64 {
    let mut acc = 1.0;
    while n > 0 {
        if n & 1 == 1 {
            acc *= base;
        }
        base *= base;
        n >>= 1;
    }
    acc
}
