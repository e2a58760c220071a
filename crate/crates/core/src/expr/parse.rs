use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{E, PI};

use super::{BinaryOp, Expr, UnaryOp};

/// Parse failure. Offsets are 0-based character positions in the source.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },

    #[error("`{name}` at offset {offset} is not allowed: the integrand must be twice differentiable")]
    NotTwiceDifferentiable { offset: usize, name: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownIdentifier { offset, .. }
            | ParseError::NotTwiceDifferentiable { offset, .. } => *offset,
        }
    }
}

const NON_SMOOTH: &[&str] = &[
    "abs", "floor", "ceil", "round", "trunc", "min", "max", "sign", "sgn",
];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(x) => format!("number {x}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn syntax(offset: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        offset,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if c.is_ascii_digit() || c == '.' => {
                let end = scan_number(&chars, i);
                let text: String = chars[i..end].iter().collect();
                let value: f64 = text
                    .parse()
                    .map_err(|_| syntax(start, format!("malformed number `{text}`")))?;
                if !value.is_finite() {
                    return Err(syntax(start, format!("number `{text}` is not finite")));
                }
                i = end;
                out.push((start, Tok::Num(value)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(chars[start..i].iter().collect())));
                continue;
            }
            other => return Err(syntax(start, format!("unexpected character `{other}`"))),
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((chars.len(), Tok::End));
    Ok(out)
}

/// digits [. digits] [(e|E) [+-] digits]
fn scan_number(chars: &[char], mut i: usize) -> usize {
    let digits = |mut i: usize| {
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        i
    };
    i = digits(i);
    if i < chars.len() && chars[i] == '.' {
        i = digits(i + 1);
    }
    if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
        let mut j = i + 1;
        if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
            j += 1;
        }
        if j < chars.len() && chars[j].is_ascii_digit() {
            i = digits(j);
        }
    }
    i
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, context: &str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(
                self.offset(),
                format!(
                    "expected {} {context}, found {}",
                    want.describe(),
                    self.peek().describe()
                ),
            ))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinaryOp::Add,
                Tok::Minus => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            lhs = Expr::binary(op, lhs, self.term()?);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinaryOp::Mul,
                Tok::Slash => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            lhs = Expr::binary(op, lhs, self.factor()?);
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::unary(UnaryOp::Neg, self.factor()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let k = self.exponent()?;
        Ok(Expr::binary(BinaryOp::Pow, base, Expr::Const(k)))
    }

    fn exponent(&mut self) -> Result<f64, ParseError> {
        let negative = *self.peek() == Tok::Minus;
        if negative {
            self.bump();
        }
        let (at, tok) = self.bump();
        let mut k = match tok {
            Tok::Num(x) => x,
            other => {
                return Err(syntax(
                    at,
                    format!(
                        "exponent must be a numeric constant, found {}",
                        other.describe()
                    ),
                ))
            }
        };
        if *self.peek() == Tok::Caret {
            self.bump();
            let at = self.offset();
            k = libm::pow(k, self.exponent()?);
            if !k.is_finite() {
                return Err(syntax(at, "exponent overflows"));
            }
        }
        Ok(if negative { -k } else { k })
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let (at, tok) = self.bump();
        match tok {
            Tok::Num(x) => Ok(Expr::Const(x)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "to close `(`")?;
                Ok(inner)
            }
            Tok::Ident(name) => self.identifier(at, name),
            Tok::End => Err(syntax(at, "unexpected end of input, expected an operand")),
            other => Err(syntax(
                at,
                format!("expected an operand, found {}", other.describe()),
            )),
        }
    }

    fn identifier(&mut self, at: usize, name: String) -> Result<Expr, ParseError> {
        match name.as_str() {
            "t" => return Ok(Expr::Var),
            "pi" => return Ok(Expr::Const(PI)),
            "e" => return Ok(Expr::Const(E)),
            _ => {}
        }
        if let Some(op) = UnaryOp::function(&name) {
            let ctx = format!("after function name `{name}`");
            self.expect(Tok::LParen, &ctx)?;
            let arg = self.expr()?;
            self.expect(Tok::RParen, "to close the function argument")?;
            return Ok(Expr::unary(op, arg));
        }
        if NON_SMOOTH.contains(&name.as_str()) {
            return Err(ParseError::NotTwiceDifferentiable { offset: at, name });
        }
        Err(ParseError::UnknownIdentifier { offset: at, name })
    }
}

/// Parses an expression in the single variable `t`.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let toks = lex(src)?;
    if toks.len() == 1 {
        return Err(syntax(0, "empty expression"));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(syntax(
            p.offset(),
            format!("unexpected {} after expression", p.peek().describe()),
        ));
    }
    Ok(e)
}
