//! Rational expressions: parsing, printing, compilation to systems and
//! direct evaluation at matrix points.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := 'inv' '(' expr ')' | '(' expr ')' | '-' factor | literal | identifier
//! literal := INT ('/' INT)?
//! ```
//!
//! A `-` directly followed by a literal is part of the literal.

use std::fmt;

use num_traits::{One, Signed};

use crate::als::{Alphabet, Als, Assignment};
use crate::error::{Error, Result};
use crate::inverse::minimal_inverse;
use crate::linalg::{format_scalar, parse_scalar, KMatrix, Scalar};
use crate::regular::{is_regular, minimize_regular};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Letter(String),
    Const(Scalar),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Inv(Box<Expr>),
}

// tree constructors, not arithmetic
#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn letter(name: &str) -> Expr {
        Expr::Letter(name.to_string())
    }

    pub fn constant(c: Scalar) -> Expr {
        Expr::Const(c)
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn neg(a: Expr) -> Expr {
        Expr::Neg(Box::new(a))
    }

    pub fn inv(a: Expr) -> Expr {
        Expr::Inv(Box::new(a))
    }

    /// Letter names in order of first occurrence.
    pub fn letters(&self) -> Vec<String> {
        fn walk(e: &Expr, out: &mut Vec<String>) {
            match e {
                Expr::Letter(n) => {
                    if !out.contains(n) {
                        out.push(n.clone());
                    }
                }
                Expr::Const(_) => {}
                Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                Expr::Neg(a) | Expr::Inv(a) => walk(a, out),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// The letters of the expression, or `{x}` for letter-free expressions.
    pub fn alphabet(&self) -> Result<Alphabet> {
        let letters = self.letters();
        if letters.is_empty() {
            return Alphabet::new(["x"]);
        }
        Alphabet::new(letters)
    }

    /// Evaluates at a matrix point by direct matrix arithmetic; `None` when
    /// some inverted subexpression is singular there.
    pub fn eval_at_matrices(&self, point: &Assignment) -> Result<Option<KMatrix>> {
        let m = crate::als::point_size(point)?;
        self.eval_sized(point, m)
    }

    fn eval_sized(&self, point: &Assignment, m: usize) -> Result<Option<KMatrix>> {
        let both = |a: &Expr, b: &Expr| -> Result<Option<(KMatrix, KMatrix)>> {
            let Some(x) = a.eval_sized(point, m)? else { return Ok(None) };
            let Some(y) = b.eval_sized(point, m)? else { return Ok(None) };
            Ok(Some((x, y)))
        };
        Ok(match self {
            Expr::Letter(n) => Some(point.get(n).cloned().ok_or_else(|| Error::MissingAssignment(n.clone()))?),
            Expr::Const(c) => Some(KMatrix::identity(m).scale(c)),
            Expr::Add(a, b) => both(a, b)?.map(|(x, y)| &x + &y),
            Expr::Sub(a, b) => both(a, b)?.map(|(x, y)| &x - &y),
            Expr::Mul(a, b) => both(a, b)?.map(|(x, y)| &x * &y),
            Expr::Neg(a) => a.eval_sized(point, m)?.map(|x| -&x),
            Expr::Inv(a) => match a.eval_sized(point, m)? {
                Some(x) => x.invert()?,
                None => None,
            },
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Const(c) if c.is_negative() => 3,
            _ => 4,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn side(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Letter(n) => f.write_str(n),
            Expr::Const(c) => f.write_str(&format_scalar(c)),
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                side(f, a, 1)?;
                f.write_str(if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                side(f, b, 2)
            }
            Expr::Mul(a, b) => {
                side(f, a, 2)?;
                f.write_str("*")?;
                side(f, b, 3)
            }
            Expr::Neg(a) => {
                f.write_str("-")?;
                // keep `-(3)` distinct from the literal `-3`
                if matches!(**a, Expr::Const(_)) {
                    write!(f, "({a})")
                } else {
                    side(f, a, 3)
                }
            }
            Expr::Inv(a) => write!(f, "inv({a})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Int(String),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            _ if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '/' => Token::Slash,
            '(' => Token::LParen,
            ')' => Token::RParen,
            _ if c.is_ascii_digit() => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Token::Int(chars[start..i].iter().collect())));
                continue;
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((start, Token::Ident(chars[start..i].iter().collect())));
                continue;
            }
            _ => return Err(Error::Parse { pos: i, msg: format!("unexpected character `{c}`") }),
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.offset(), msg: msg.into() })
    }

    fn expect(&mut self, t: Token, what: &str) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    lhs = Expr::add(lhs, self.term()?);
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    lhs = Expr::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            lhs = Expr::mul(lhs, self.factor()?);
        }
        Ok(lhs)
    }

    fn literal(&mut self, negative: bool) -> Result<Expr> {
        let Some(Token::Int(n)) = self.peek().cloned() else {
            return self.error("expected a number");
        };
        self.pos += 1;
        let mut text = if negative { format!("-{n}") } else { n };
        if self.peek() == Some(&Token::Slash) {
            self.pos += 1;
            let Some(Token::Int(d)) = self.peek().cloned() else {
                return self.error("expected a denominator");
            };
            self.pos += 1;
            text = format!("{text}/{d}");
        }
        let pos = self.offset();
        parse_scalar(&text).map(Expr::Const).map_err(|_| Error::Parse { pos, msg: format!("bad literal `{text}`") })
    }

    fn factor(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Token::Minus) => {
                self.pos += 1;
                if matches!(self.peek(), Some(Token::Int(_))) {
                    self.literal(true)
                } else {
                    Ok(Expr::neg(self.factor()?))
                }
            }
            Some(Token::Int(_)) => self.literal(false),
            Some(Token::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(e)
            }
            Some(Token::Ident(name)) if name == "inv" => {
                self.pos += 1;
                self.expect(Token::LParen, "`(` after `inv`")?;
                let e = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(Expr::inv(e))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                Ok(Expr::Letter(name))
            }
            Some(_) => self.error("expected a letter, number, `inv(` or `(`"),
            None => self.error("unexpected end of input"),
        }
    }
}

/// Parses an expression.
pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser { tokens: tokenize(text)?, pos: 0, end: text.chars().count() };
    let e = p.expr()?;
    if p.pos < p.tokens.len() {
        return p.error("unexpected trailing input");
    }
    Ok(e)
}

/// Settings for [`compile`].
#[derive(Debug, Clone, Default)]
pub struct CompileOptions {
    /// Minimize regular subresults and use minimal inverses where possible.
    pub minimize: bool,
    /// Alphabet of the result; defaults to the letters of the expression.
    pub alphabet: Option<Alphabet>,
}

/// Builds a system for the expression bottom-up with the rational operations.
///
/// With `minimize`, every regular intermediate result is minimized and
/// inverses of certified-minimal operands use the minimal inverse, so the
/// result is certified minimal whenever the construction allows it.
/// Without it, the plain constructions are used throughout.
pub fn compile(expr: &Expr, opts: &CompileOptions) -> Result<Als> {
    let ab = match &opts.alphabet {
        Some(a) => {
            if let Some(l) = expr.letters().into_iter().find(|l| a.index_of(l).is_none()) {
                return Err(Error::UnknownLetter(l));
            }
            a.clone()
        }
        None => expr.alphabet()?,
    };
    compile_in(expr, &ab, opts.minimize)
}

fn compile_in(e: &Expr, ab: &Alphabet, minimize: bool) -> Result<Als> {
    let minus_one = -Scalar::one();
    let out = match e {
        Expr::Letter(n) => Als::monomial_of(ab, &[n.as_str()])?,
        Expr::Const(c) => Als::scalar(ab, c),
        Expr::Add(a, b) => compile_in(a, ab, minimize)?.add(&compile_in(b, ab, minimize)?)?,
        Expr::Sub(a, b) => compile_in(a, ab, minimize)?.add(&compile_in(b, ab, minimize)?.scale(&minus_one))?,
        Expr::Neg(a) => compile_in(a, ab, minimize)?.scale(&minus_one),
        Expr::Mul(a, b) => match (&**a, &**b) {
            (Expr::Const(c), other) | (other, Expr::Const(c)) => compile_in(other, ab, minimize)?.scale(c),
            _ => compile_in(a, ab, minimize)?.mul(&compile_in(b, ab, minimize)?)?,
        },
        Expr::Inv(a) => {
            let f = compile_in(a, ab, minimize)?;
            if f.is_empty() {
                return Err(Error::InverseOfZero);
            }
            if minimize && f.is_certified_minimal() {
                minimal_inverse(&f)?.als
            } else {
                f.std_inverse()?
            }
        }
    };
    if minimize && !out.is_certified_minimal() && is_regular(&out) {
        return minimize_regular(&out);
    }
    Ok(out)
}
