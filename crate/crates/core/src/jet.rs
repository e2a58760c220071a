//! Second-order interval jets.
//!
//! A [`Jet2`] over an input interval `X` holds enclosures of `f`, `f'` and
//! `f''` on `X`. Jets are combined with the usual forward differentiation
//! rules, evaluated in interval arithmetic.

use crate::expr::{EvalError, Expr};
use crate::interval::{Interval, IntervalError};

type Result<T> = core::result::Result<T, IntervalError>;

/// Largest accepted `refine_depth` (2^24 subintervals).
pub const MAX_REFINE_DEPTH: u32 = 24;

/// Bounds `[gamma, Gamma]` on `f''` over `x`.
///
/// With `refine_depth > 0` the interval is split into `2^refine_depth` equal
/// pieces, a jet is evaluated on each and the `f''` enclosures are hulled.
/// Depths above [`MAX_REFINE_DEPTH`] are clamped.
pub fn second_derivative_enclosure(
    expr: &Expr,
    x: Interval,
    refine_depth: u32,
) -> core::result::Result<Interval, EvalError> {
    let pieces = 1usize << refine_depth.min(MAX_REFINE_DEPTH);
    let mut pieces = x.subdivide(pieces);
    // subdivide always yields at least one piece
    let first = pieces.next().unwrap_or(x);
    let mut hull = expr.eval_jet(first)?.d2;
    for piece in pieces {
        hull = hull.hull(&expr.eval_jet(piece)?.d2);
    }
    Ok(hull)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    /// Enclosure of `f` over the input interval.
    pub val: Interval,
    /// Enclosure of `f'`.
    pub d1: Interval,
    /// Enclosure of `f''`.
    pub d2: Interval,
}

impl Jet2 {
    /// The identity function `t` over `x`.
    pub fn variable(x: Interval) -> Self {
        Jet2 {
            val: x,
            d1: Interval::ONE,
            d2: Interval::ZERO,
        }
    }

    pub fn constant(c: f64) -> Result<Self> {
        Ok(Jet2 {
            val: Interval::point(c)?,
            d1: Interval::ZERO,
            d2: Interval::ZERO,
        })
    }

    pub fn neg(self) -> Self {
        Jet2 {
            val: self.val.neg(),
            d1: self.d1.neg(),
            d2: self.d2.neg(),
        }
    }

    pub fn add(self, rhs: Jet2) -> Result<Self> {
        Ok(Jet2 {
            val: self.val.add(rhs.val)?,
            d1: self.d1.add(rhs.d1)?,
            d2: self.d2.add(rhs.d2)?,
        })
    }

    pub fn sub(self, rhs: Jet2) -> Result<Self> {
        Ok(Jet2 {
            val: self.val.sub(rhs.val)?,
            d1: self.d1.sub(rhs.d1)?,
            d2: self.d2.sub(rhs.d2)?,
        })
    }

    /// `(fg)'' = f''g + 2f'g' + fg''`
    pub fn mul(self, rhs: Jet2) -> Result<Self> {
        let val = self.val.mul(rhs.val)?;
        let d1 = self.d1.mul(rhs.val)?.add(self.val.mul(rhs.d1)?)?;
        let d2 = self
            .d2
            .mul(rhs.val)?
            .add(self.d1.mul(rhs.d1)?.scale(2.0)?)?
            .add(self.val.mul(rhs.d2)?)?;
        Ok(Jet2 { val, d1, d2 })
    }

    pub fn div(self, rhs: Jet2) -> Result<Self> {
        self.mul(rhs.recip()?)
    }

    pub fn recip(self) -> Result<Self> {
        let u = self.val;
        let inv = Interval::ONE.div(u)?;
        let d1 = inv.sqr()?.neg();
        let d2 = inv.powi(3)?.scale(2.0)?;
        self.chain(inv, d1, d2)
    }

    /// Integer power via the power rule on `u^(k-1)` and `u^(k-2)`.
    pub fn powi(self, k: i32) -> Result<Self> {
        match k {
            0 => Jet2::constant(1.0),
            1 => Ok(self),
            2 => {
                let u = self.val;
                self.chain(u.sqr()?, u.scale(2.0)?, Interval::point(2.0)?)
            }
            _ => {
                let u = self.val;
                let kf = k as f64;
                let h0 = u.powi(k)?;
                let h1 = u.powi(k - 1)?.scale(kf)?;
                let h2 = u.powi(k - 2)?.scale(kf * (kf - 1.0))?;
                self.chain(h0, h1, h2)
            }
        }
    }

    /// Real power `u^r = exp(r ln u)`; needs a strictly positive base.
    pub fn powf(self, r: f64) -> Result<Self> {
        let r = Jet2::constant(r)?;
        self.ln()?.mul(r)?.exp()
    }

    pub fn exp(self) -> Result<Self> {
        let e = self.val.exp()?;
        self.chain(e, e, e)
    }

    pub fn ln(self) -> Result<Self> {
        let u = self.val;
        let h0 = u.ln()?;
        let inv = Interval::ONE.div(u)?;
        self.chain(h0, inv, inv.sqr()?.neg())
    }

    pub fn sqrt(self) -> Result<Self> {
        let u = self.val;
        let r = u.sqrt()?;
        let h1 = Interval::point(0.5)?.div(r)?;
        let h2 = Interval::point(-0.25)?.div(u.mul(r)?)?;
        self.chain(r, h1, h2)
    }

    pub fn sin(self) -> Result<Self> {
        let s = self.val.sin()?;
        let c = self.val.cos()?;
        self.chain(s, c, s.neg())
    }

    pub fn cos(self) -> Result<Self> {
        let s = self.val.sin()?;
        let c = self.val.cos()?;
        self.chain(c, s.neg(), c.neg())
    }

    /// Composes an outer function `h` with `self`, given enclosures of
    /// `h`, `h'`, `h''` over `self.val`:
    /// `(h∘f)' = h'(f) f'` and `(h∘f)'' = h''(f) f'^2 + h'(f) f''`.
    fn chain(self, h0: Interval, h1: Interval, h2: Interval) -> Result<Self> {
        Ok(Jet2 {
            val: h0,
            d1: h1.mul(self.d1)?,
            d2: h2.mul(self.d1.sqr()?)?.add(h1.mul(self.d2)?)?,
        })
    }
}
