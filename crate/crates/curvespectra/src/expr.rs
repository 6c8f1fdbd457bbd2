//! Symbolic coordinate expressions for parametric curves.
//!
//! The grammar covers numbers, the parameter `t`, the constant `pi`,
//! `+ - * / ^` with standard precedence (`^` above unary minus above
//! `* /` above `+ -`, binaries left-associative), `sin`, `cos`, and
//! parentheses. Multiplication is always explicit and `^` takes an
//! integer-literal exponent, which keeps the tree language closed
//! under differentiation. The only rewriting ever performed is
//! constant folding of literal subtrees and elision of 0/1 identities.

// guards like `Const(x) if x == 0.0` stay guards: float literal
// patterns are deprecated
#![allow(clippy::redundant_guards)]

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum ExprNode {
    Const(f64),
    Pi,
    Var,
    Neg(Box<ExprNode>),
    Sin(Box<ExprNode>),
    Cos(Box<ExprNode>),
    Add(Box<ExprNode>, Box<ExprNode>),
    Sub(Box<ExprNode>, Box<ExprNode>),
    Mul(Box<ExprNode>, Box<ExprNode>),
    Div(Box<ExprNode>, Box<ExprNode>),
    Pow(Box<ExprNode>, i32),
}

use ExprNode::*;

pub fn constant(c: f64) -> ExprNode {
    Const(c)
}

pub fn add(a: ExprNode, b: ExprNode) -> ExprNode {
    match (a, b) {
        (Const(x), Const(y)) => Const(x + y),
        (Const(x), b) if x == 0.0 => b,
        (a, Const(y)) if y == 0.0 => a,
        (a, b) => Add(Box::new(a), Box::new(b)),
    }
}

pub fn sub(a: ExprNode, b: ExprNode) -> ExprNode {
    match (a, b) {
        (Const(x), Const(y)) => Const(x - y),
        (a, Const(y)) if y == 0.0 => a,
        (Const(x), b) if x == 0.0 => neg(b),
        (a, b) => Sub(Box::new(a), Box::new(b)),
    }
}

pub fn mul(a: ExprNode, b: ExprNode) -> ExprNode {
    match (a, b) {
        (Const(x), Const(y)) => Const(x * y),
        (Const(x), _) | (_, Const(x)) if x == 0.0 => Const(0.0),
        (Const(x), b) if x == 1.0 => b,
        (a, Const(y)) if y == 1.0 => a,
        (a, b) => Mul(Box::new(a), Box::new(b)),
    }
}

pub fn div(a: ExprNode, b: ExprNode) -> ExprNode {
    match (a, b) {
        (Const(x), Const(y)) if y != 0.0 => Const(x / y),
        (a, Const(y)) if y == 1.0 => a,
        (a, b) => Div(Box::new(a), Box::new(b)),
    }
}

pub fn neg(a: ExprNode) -> ExprNode {
    match a {
        Const(x) => Const(-x),
        Neg(inner) => *inner,
        a => Neg(Box::new(a)),
    }
}

pub fn sin(a: ExprNode) -> ExprNode {
    match a {
        Const(x) => Const(x.sin()),
        a => Sin(Box::new(a)),
    }
}

pub fn cos(a: ExprNode) -> ExprNode {
    match a {
        Const(x) => Const(x.cos()),
        a => Cos(Box::new(a)),
    }
}

pub fn pow(base: ExprNode, exponent: i32) -> ExprNode {
    match (base, exponent) {
        (_, 0) => Const(1.0),
        (b, 1) => b,
        (Const(x), n) => Const(x.powi(n)),
        (b, n) => Pow(Box::new(b), n),
    }
}

impl ExprNode {
    /// Numeric value at parameter `t`.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        Ok(match self {
            Const(c) => *c,
            Pi => std::f64::consts::PI,
            Var => t,
            Neg(a) => -a.evaluate(t)?,
            Sin(a) => a.evaluate(t)?.sin(),
            Cos(a) => a.evaluate(t)?.cos(),
            Add(a, b) => a.evaluate(t)? + b.evaluate(t)?,
            Sub(a, b) => a.evaluate(t)? - b.evaluate(t)?,
            Mul(a, b) => a.evaluate(t)? * b.evaluate(t)?,
            Div(a, b) => {
                let den = b.evaluate(t)?;
                if den == 0.0 {
                    return Err(Error::DivisionByZero {
                        subtree: self.to_string(),
                        at: t,
                    });
                }
                a.evaluate(t)? / den
            }
            Pow(a, n) => a.evaluate(t)?.powi(*n),
        })
    }

    /// Structural derivative d/dt; the result is again a valid tree.
    pub fn differentiate(&self) -> ExprNode {
        match self {
            Const(_) | Pi => Const(0.0),
            Var => Const(1.0),
            Neg(a) => neg(a.differentiate()),
            Sin(a) => mul(cos((**a).clone()), a.differentiate()),
            Cos(a) => neg(mul(sin((**a).clone()), a.differentiate())),
            Add(a, b) => add(a.differentiate(), b.differentiate()),
            Sub(a, b) => sub(a.differentiate(), b.differentiate()),
            Mul(a, b) => add(
                mul(a.differentiate(), (**b).clone()),
                mul((**a).clone(), b.differentiate()),
            ),
            Div(a, b) => div(
                sub(
                    mul(a.differentiate(), (**b).clone()),
                    mul((**a).clone(), b.differentiate()),
                ),
                pow((**b).clone(), 2),
            ),
            Pow(a, n) => mul(
                mul(Const(f64::from(*n)), pow((**a).clone(), n - 1)),
                a.differentiate(),
            ),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Add(..) | Sub(..) => 1,
            Mul(..) | Div(..) => 2,
            Neg(_) => 3,
            Const(c) if *c < 0.0 => 3,
            Pow(..) => 4,
            _ => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let p = self.precedence();
        if p < min {
            write!(f, "(")?;
        }
        match self {
            Const(c) => write!(f, "{c}")?,
            Pi => write!(f, "pi")?,
            Var => write!(f, "t")?,
            Neg(a) => {
                write!(f, "-")?;
                a.fmt_prec(f, 4)?;
            }
            Sin(a) => write!(f, "sin({a})")?,
            Cos(a) => write!(f, "cos({a})")?,
            Add(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " + ")?;
                b.fmt_prec(f, 2)?;
            }
            Sub(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " - ")?;
                b.fmt_prec(f, 2)?;
            }
            Mul(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " * ")?;
                b.fmt_prec(f, 3)?;
            }
            Div(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " / ")?;
                b.fmt_prec(f, 3)?;
            }
            Pow(a, n) => {
                a.fmt_prec(f, 5)?;
                write!(f, "^{n}")?;
            }
        }
        if p < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for ExprNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(source: &str) -> Result<Vec<(Token, usize)>> {
    let bytes = source.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\r' | '\n' => i += 1,
            '+' => {
                tokens.push((Token::Plus, i));
                i += 1;
            }
            '-' => {
                tokens.push((Token::Minus, i));
                i += 1;
            }
            '*' => {
                tokens.push((Token::Star, i));
                i += 1;
            }
            '/' => {
                tokens.push((Token::Slash, i));
                i += 1;
            }
            '^' => {
                tokens.push((Token::Caret, i));
                i += 1;
            }
            '(' => {
                tokens.push((Token::LParen, i));
                i += 1;
            }
            ')' => {
                tokens.push((Token::RParen, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &source[start..i];
                let value = text.parse::<f64>().map_err(|_| Error::Syntax {
                    position: start,
                    message: format!("malformed number `{text}`"),
                })?;
                tokens.push((Token::Num(value), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                tokens.push((Token::Ident(source[start..i].to_string()), start));
            }
            _ => {
                return Err(Error::Syntax {
                    position: i,
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: &'a [(Token, usize)],
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn position(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|&(_, p)| p)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Token, what: &str) -> Result<()> {
        let position = self.position();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(Error::Syntax {
                position,
                message: format!("expected {what}"),
            }),
        }
    }

    fn expr(&mut self) -> Result<ExprNode> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    lhs = add(lhs, self.term()?);
                }
                Some(Token::Minus) => {
                    self.bump();
                    lhs = sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<ExprNode> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.bump();
                    lhs = mul(lhs, self.unary()?);
                }
                Some(Token::Slash) => {
                    self.bump();
                    lhs = div(lhs, self.unary()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<ExprNode> {
        if let Some(Token::Minus) = self.peek() {
            self.bump();
            Ok(neg(self.unary()?))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<ExprNode> {
        let mut base = self.atom()?;
        while let Some(Token::Caret) = self.peek() {
            self.bump();
            base = pow(base, self.exponent()?);
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i32> {
        let negative = if let Some(Token::Minus) = self.peek() {
            self.bump();
            true
        } else {
            false
        };
        let position = self.position();
        match self.bump() {
            Some(Token::Num(v)) => {
                if v.fract() != 0.0 || v.abs() > f64::from(i32::MAX) {
                    return Err(Error::NonIntegerExponent(format!("{v}")));
                }
                let n = v as i32;
                Ok(if negative { -n } else { n })
            }
            Some(Token::Ident(name)) => Err(Error::NonIntegerExponent(name)),
            _ => Err(Error::Syntax {
                position,
                message: "expected an integer exponent after `^`".into(),
            }),
        }
    }

    fn atom(&mut self) -> Result<ExprNode> {
        let position = self.position();
        match self.bump() {
            Some(Token::Num(v)) => self.reject_juxtaposition(Const(v)),
            Some(Token::Ident(name)) => match name.as_str() {
                "t" => self.reject_juxtaposition(Var),
                "pi" => self.reject_juxtaposition(Pi),
                "sin" | "cos" => {
                    self.expect(Token::LParen, "`(` after function name")?;
                    let arg = self.expr()?;
                    self.expect(Token::RParen, "`)`")?;
                    Ok(if name == "sin" { sin(arg) } else { cos(arg) })
                }
                _ => Err(Error::UnknownIdentifier(name)),
            },
            Some(Token::LParen) => {
                let inner = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(Error::Syntax {
                position,
                message: "expected a number, `t`, `pi`, function call, or `(`".into(),
            }),
        }
    }

    /// Catches `3t`, `2pi`, `t t` and friends right where they occur:
    /// an operand may not be followed directly by another operand.
    fn reject_juxtaposition(&self, value: ExprNode) -> Result<ExprNode> {
        match self.peek() {
            Some(Token::Num(_)) | Some(Token::Ident(_)) | Some(Token::LParen) => {
                Err(Error::Syntax {
                    position: self.position(),
                    message: "implicit multiplication is not supported; write `*`".into(),
                })
            }
            _ => Ok(value),
        }
    }
}

pub fn parse_expr(source: &str) -> Result<ExprNode> {
    let tokens = lex(source)?;
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        end: source.len(),
    };
    let e = parser.expr()?;
    if parser.pos != tokens.len() {
        return Err(Error::Syntax {
            position: parser.position(),
            message: "trailing input after expression".into(),
        });
    }
    Ok(e)
}

/// Evaluation of the expression's first derivative; exposed for symmetry
/// with [`parse_expr`] and used by tests.
pub fn differentiate(e: &ExprNode) -> ExprNode {
    e.differentiate()
}

pub fn evaluate(e: &ExprNode, t: f64) -> Result<f64> {
    e.evaluate(t)
}

/// A closed parametric curve: 2 or 3 coordinate expressions over a
/// half-open parameter interval `[t0, t1)`.
#[derive(Debug, Clone)]
pub struct CurveDef {
    pub name: String,
    pub coords: Vec<ExprNode>,
    pub domain: (f64, f64),
    d1: Vec<ExprNode>,
    d2: Vec<ExprNode>,
}

pub const CLOSURE_TOL: f64 = 1e-9;
pub const REGULARITY_MIN_SPEED: f64 = 1e-8;

impl CurveDef {
    pub fn new(name: &str, coords: Vec<ExprNode>, domain: (f64, f64)) -> Result<CurveDef> {
        if coords.len() < 2 || coords.len() > 3 {
            return Err(Error::Domain(format!(
                "curve `{name}` must have 2 or 3 coordinates, got {}",
                coords.len()
            )));
        }
        if !domain.0.is_finite() || !domain.1.is_finite() || domain.1 <= domain.0 {
            return Err(Error::Domain(format!(
                "curve `{name}` needs a finite domain with t1 > t0"
            )));
        }
        let d1: Vec<_> = coords.iter().map(ExprNode::differentiate).collect();
        let d2: Vec<_> = d1.iter().map(ExprNode::differentiate).collect();
        let curve = CurveDef {
            name: name.to_string(),
            coords,
            domain,
            d1,
            d2,
        };
        curve.check_closure()?;
        curve.check_regularity()?;
        Ok(curve)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    fn eval_triplet(exprs: &[ExprNode], t: f64) -> Result<[f64; 3]> {
        let mut out = [0.0; 3];
        for (k, e) in exprs.iter().enumerate() {
            out[k] = e.evaluate(t)?;
        }
        Ok(out)
    }

    /// gamma(t), padded with z = 0 for plane curves.
    pub fn point(&self, t: f64) -> Result<[f64; 3]> {
        Self::eval_triplet(&self.coords, t)
    }

    /// gamma'(t)
    pub fn velocity(&self, t: f64) -> Result<[f64; 3]> {
        Self::eval_triplet(&self.d1, t)
    }

    /// gamma''(t)
    pub fn acceleration(&self, t: f64) -> Result<[f64; 3]> {
        Self::eval_triplet(&self.d2, t)
    }

    /// |gamma'(t)|, guarding the regularity floor.
    pub fn speed(&self, t: f64) -> Result<f64> {
        let v = self.velocity(t)?;
        let speed = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if speed < REGULARITY_MIN_SPEED {
            return Err(Error::Irregular {
                name: self.name.clone(),
                t,
                speed,
            });
        }
        Ok(speed)
    }

    fn check_closure(&self) -> Result<()> {
        let (t0, t1) = self.domain;
        let names = ["x", "y", "z"];
        for (order, trees) in [(0, &self.coords), (1, &self.d1), (2, &self.d2)] {
            for (k, e) in trees.iter().enumerate() {
                let defect = (e.evaluate(t0)? - e.evaluate(t1)?).abs();
                if defect > CLOSURE_TOL {
                    let what = format!("{}{}", names[k], "'".repeat(order));
                    return Err(Error::NotClosed {
                        name: self.name.clone(),
                        what,
                        defect,
                    });
                }
            }
        }
        Ok(())
    }

    fn check_regularity(&self) -> Result<()> {
        const SAMPLES: usize = 4096;
        let (t0, t1) = self.domain;
        for i in 0..SAMPLES {
            let t = t0 + (t1 - t0) * (i as f64) / (SAMPLES as f64);
            self.speed(t)?;
        }
        Ok(())
    }
}

/// Parses the plain-text curve definition format: one `key = "value"`
/// pair per line, keys `name`, `x`, `y`, optional `z`, and `domain`
/// (two numbers `"t0 t1"`); `#` starts a comment.
pub fn parse_curve_file(text: &str) -> Result<CurveDef> {
    let mut name: Option<String> = None;
    let mut x: Option<ExprNode> = None;
    let mut y: Option<ExprNode> = None;
    let mut z: Option<ExprNode> = None;
    let mut domain: Option<(f64, f64)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once('=').ok_or_else(|| Error::CurveFile {
            line: line_no,
            message: "expected `key = \"value\"`".into(),
        })?;
        let key = key.trim();
        let rest = rest.trim();
        let value = rest
            .strip_prefix('"')
            .and_then(|r| r.strip_suffix('"'))
            .ok_or_else(|| Error::CurveFile {
                line: line_no,
                message: format!("value for `{key}` must be double-quoted"),
            })?;
        match key {
            "name" => name = Some(value.to_string()),
            "x" => x = Some(parse_expr(value)?),
            "y" => y = Some(parse_expr(value)?),
            "z" => z = Some(parse_expr(value)?),
            "domain" => {
                let parts: Vec<&str> = value.split_whitespace().collect();
                if parts.len() != 2 {
                    return Err(Error::CurveFile {
                        line: line_no,
                        message: "domain must be two numbers `\"t0 t1\"`".into(),
                    });
                }
                let t0 = parts[0].parse::<f64>().map_err(|_| Error::CurveFile {
                    line: line_no,
                    message: format!("malformed number `{}`", parts[0]),
                })?;
                let t1 = parts[1].parse::<f64>().map_err(|_| Error::CurveFile {
                    line: line_no,
                    message: format!("malformed number `{}`", parts[1]),
                })?;
                domain = Some((t0, t1));
            }
            other => {
                return Err(Error::CurveFile {
                    line: line_no,
                    message: format!("unknown key `{other}`"),
                })
            }
        }
    }

    let missing = |what: &str| Error::CurveFile {
        line: 0,
        message: format!("missing required key `{what}`"),
    };
    let name = name.ok_or_else(|| missing("name"))?;
    let x = x.ok_or_else(|| missing("x"))?;
    let y = y.ok_or_else(|| missing("y"))?;
    let domain = domain.ok_or_else(|| missing("domain"))?;
    let mut coords = vec![x, y];
    if let Some(z) = z {
        coords.push(z);
    }
    CurveDef::new(&name, coords, domain)
}
