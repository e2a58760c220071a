//! Single-variable expressions in `t`.
//!
//! Grammar, lowest to highest precedence:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | power
//! power  := atom ('^' exponent)?
//! exponent := '-'? number ('^' exponent)?
//! atom   := number | 't' | 'pi' | 'e' | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! Exponents must be numeric literals; they may carry a sign and chain
//! right-associatively (`t^2^3` is `t^8`). Functions that are not twice
//! differentiable (`abs`, `floor`, `min`, ...) are rejected at parse time.

mod eval;
mod parse;

use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

pub use eval::EvalError;
pub use parse::{parse, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
}

impl UnaryOp {
    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "neg",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Exp => "exp",
            UnaryOp::Log => "log",
            UnaryOp::Sqrt => "sqrt",
        }
    }

    fn function(name: &str) -> Option<UnaryOp> {
        Some(match name {
            "sin" => UnaryOp::Sin,
            "cos" => UnaryOp::Cos,
            "exp" => UnaryOp::Exp,
            "log" => UnaryOp::Log,
            "sqrt" => UnaryOp::Sqrt,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    /// Right operand is always [`Expr::Const`].
    Pow,
}

impl BinaryOp {
    pub fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
            BinaryOp::Pow => '^',
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinaryOp::Add | BinaryOp::Sub => 1,
            BinaryOp::Mul | BinaryOp::Div => 2,
            BinaryOp::Pow => 4,
        }
    }
}

/// Parsed integrand.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
}

const PREC_NEG: u8 = 3;
const PREC_ATOM: u8 = 5;

impl Expr {
    pub fn unary(op: UnaryOp, child: Expr) -> Expr {
        Expr::Unary(op, Box::new(child))
    }

    pub fn binary(op: BinaryOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn depth(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var => 1,
            Expr::Unary(_, c) => 1 + c.depth(),
            Expr::Binary(_, l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Canonical s-expression form, e.g. `(+ (^ t 2) 1)`.
    pub fn to_sexpr(&self) -> String {
        let mut out = String::new();
        // writing into a String cannot fail
        let _ = self.write_sexpr(&mut out);
        out
    }

    fn write_sexpr(&self, out: &mut impl fmt::Write) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(out, "{c}"),
            Expr::Var => out.write_str("t"),
            Expr::Unary(op, c) => {
                write!(out, "({} ", op.name())?;
                c.write_sexpr(out)?;
                out.write_char(')')
            }
            Expr::Binary(op, l, r) => {
                write!(out, "({} ", op.symbol())?;
                l.write_sexpr(out)?;
                out.write_char(' ')?;
                r.write_sexpr(out)?;
                out.write_char(')')
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Const(c) if *c < 0.0 => PREC_NEG,
            Expr::Const(_) | Expr::Var => PREC_ATOM,
            Expr::Unary(UnaryOp::Neg, _) => PREC_NEG,
            Expr::Unary(..) => PREC_ATOM,
            Expr::Binary(op, ..) => op.precedence(),
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, parens: bool) -> fmt::Result {
        if parens {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

/// Infix form with the minimum parentheses needed to reparse to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var => f.write_str("t"),
            Expr::Unary(UnaryOp::Neg, c) => {
                f.write_str("-")?;
                c.write_child(f, c.precedence() < PREC_NEG)
            }
            Expr::Unary(op, c) => write!(f, "{}({c})", op.name()),
            Expr::Binary(BinaryOp::Pow, base, exp) => {
                base.write_child(f, base.precedence() < PREC_ATOM)?;
                write!(f, "^{exp}")
            }
            Expr::Binary(op, l, r) => {
                let p = op.precedence();
                l.write_child(f, l.precedence() < p)?;
                write!(f, " {} ", op.symbol())?;
                r.write_child(f, r.precedence() <= p)
            }
        }
    }
}
