//! Text syntax for ring and tensor elements.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := int ['*' factor ('*' factor)*] | factor ('*' factor)*
//! factor := atom | '(' expr ')' ['^' int]
//! atom   := 'A[' int ',' int ']' ['@' int]
//! ```
//!
//! `A[i,j]@l` is the class `A[i,j]` pulled back from the `l`-th factor of a
//! cartesian power. Whitespace is ignored. The printers emit the same grammar,
//! so printed normal forms parse back to themselves.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::ring::{Element, Generator, RingError, RingSpec};
use crate::tensor::{TensorElement, TensorError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("slotted atom {0} in an expression over a single ring")]
    UnexpectedSlot(String),
    #[error("atom {0} needs a slot `@l` in a tensor-power expression")]
    MissingSlot(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Atom { gen: Generator, slot: Option<u32> },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    /// Whether any atom carries a slot.
    pub fn is_slotted(&self) -> bool {
        match self {
            Expr::Int(_) => false,
            Expr::Atom { slot, .. } => slot.is_some(),
            Expr::Neg(a) | Expr::Pow(a, _) => a.is_slotted(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.is_slotted() || b.is_slotted(),
        }
    }

    /// Largest slot index used, if any.
    pub fn max_slot(&self) -> Option<u32> {
        match self {
            Expr::Int(_) => None,
            Expr::Atom { slot, .. } => *slot,
            Expr::Neg(a) | Expr::Pow(a, _) => a.max_slot(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.max_slot().max(b.max_slot()),
        }
    }

    pub fn eval_ring(&self, spec: RingSpec) -> Result<Element, EvalError> {
        Ok(match self {
            Expr::Int(k) => Element::one(spec).scale(k),
            Expr::Atom { gen, slot: None } => Element::generator(spec, gen.i, gen.j)?,
            Expr::Atom { gen, slot: Some(l) } => {
                return Err(EvalError::UnexpectedSlot(format!("{gen}@{l}")))
            }
            Expr::Neg(a) => -&a.eval_ring(spec)?,
            Expr::Add(a, b) => a.eval_ring(spec)?.try_add(&b.eval_ring(spec)?)?,
            Expr::Sub(a, b) => a.eval_ring(spec)?.try_add(&-&b.eval_ring(spec)?)?,
            Expr::Mul(a, b) => a.eval_ring(spec)?.multiply(&b.eval_ring(spec)?)?,
            Expr::Pow(a, e) => a.eval_ring(spec)?.pow(*e),
        })
    }

    pub fn eval_tensor(&self, spec: RingSpec, s: u32) -> Result<TensorElement, EvalError> {
        Ok(match self {
            Expr::Int(k) => TensorElement::one(spec, s)?.scale(k),
            Expr::Atom { gen, slot: Some(l) } => TensorElement::slotted_generator(spec, s, *gen, *l)?,
            Expr::Atom { gen, slot: None } => return Err(EvalError::MissingSlot(gen.to_string())),
            Expr::Neg(a) => a.eval_tensor(spec, s)?.scale(&BigInt::from(-1)),
            Expr::Add(a, b) => a.eval_tensor(spec, s)?.try_add(&b.eval_tensor(spec, s)?)?,
            Expr::Sub(a, b) => a
                .eval_tensor(spec, s)?
                .try_add(&b.eval_tensor(spec, s)?.scale(&BigInt::from(-1)))?,
            Expr::Mul(a, b) => a.eval_tensor(spec, s)?.tmultiply(&b.eval_tensor(spec, s)?)?,
            Expr::Pow(a, e) => a.eval_tensor(spec, s)?.pow(*e),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    A,
    LBracket,
    RBracket,
    Comma,
    At,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(k) => write!(f, "integer {k}"),
            Tok::A => f.write_str("`A`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::At => f.write_str("`@`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l0, c0) = (line, col);
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let mut digits = String::new();
            while let Some(&d) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                digits.push(d);
                chars.next();
                col += 1;
            }
            out.push((Tok::Int(digits.parse().expect("digits")), l0, c0));
            continue;
        }
        let tok = match c {
            'A' => Tok::A,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            '@' => Tok::At,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(ParseError {
                    line: l0,
                    column: c0,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        chars.next();
        col += 1;
        out.push((tok, l0, c0));
    }
    out.push((Tok::End, line, col));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let (_, line, column) = self.toks[self.pos];
        ParseError { line, column, message: message.into() }
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error_here(format!("expected {want}, found {}", self.peek())))
        }
    }

    fn small_int(&mut self, what: &str) -> Result<u32, ParseError> {
        match self.peek().clone() {
            Tok::Int(k) => {
                let v = u32::try_from(&k).map_err(|_| self.error_here(format!("{what} out of range")))?;
                self.bump();
                Ok(v)
            }
            other => Err(self.error_here(format!("expected {what}, found {other}"))),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let negate = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = Expr::Neg(Box::new(acc));
        }
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = if let Tok::Int(k) = self.peek().clone() {
            self.bump();
            if *self.peek() != Tok::Star {
                return Ok(Expr::Int(k));
            }
            self.bump();
            Expr::Mul(Box::new(Expr::Int(k)), Box::new(self.factor()?))
        } else {
            self.factor()?
        };
        while *self.peek() == Tok::Star {
            self.bump();
            acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Tok::A => self.atom(),
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                if *self.peek() == Tok::Caret {
                    self.bump();
                    let e = self.small_int("exponent")?;
                    Ok(Expr::Pow(Box::new(inner), e))
                } else {
                    Ok(inner)
                }
            }
            other => Err(self.error_here(format!("expected `A[i,j]` or `(`, found {other}"))),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        self.expect(Tok::A)?;
        self.expect(Tok::LBracket)?;
        let i = self.small_int("index")?;
        self.expect(Tok::Comma)?;
        let j = self.small_int("index")?;
        self.expect(Tok::RBracket)?;
        let at = |p: &Parser, message: String| {
            let (_, line, column) = p.toks[start];
            ParseError { line, column, message }
        };
        if j == 0 {
            return Err(at(self, format!("A[{i},{j}]: indices start at 1")));
        }
        if j >= i {
            return Err(at(self, format!("A[{i},{j}]: requires j < i")));
        }
        let slot = if *self.peek() == Tok::At {
            self.bump();
            let l = self.small_int("slot")?;
            if l == 0 {
                return Err(at(self, format!("A[{i},{j}]@0: slots start at 1")));
            }
            Some(l)
        } else {
            None
        };
        Ok(Expr::Atom { gen: Generator::new(i, j), slot })
    }
}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: tokenize(text)?, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error_here(format!("unexpected {}", p.peek())));
    }
    Ok(e)
}

/// Writes `c_1*f_1 + c_2*f_2 - ...` in the given order; empty sums print as `0`.
pub(crate) fn write_sum<'a, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: Iterator<Item = (&'a [String], &'a BigInt)>,
{
    let mut first = true;
    for (factors, c) in terms {
        let neg = c.is_negative();
        if first {
            if neg {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if neg { " - " } else { " + " })?;
        }
        first = false;
        let mag = c.abs();
        if factors.is_empty() {
            write!(f, "{mag}")?;
            continue;
        }
        if !mag.is_one() {
            write!(f, "{mag}*")?;
        }
        f.write_str(&factors.join("*"))?;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

/// Parses `text` and reduces it in `spec`.
pub fn reduce_ring(text: &str, spec: RingSpec) -> Result<Element, ReduceError> {
    Ok(parse(text)?.eval_ring(spec)?)
}

pub fn reduce_tensor(text: &str, spec: RingSpec, s: u32) -> Result<TensorElement, ReduceError> {
    Ok(parse(text)?.eval_tensor(spec, s)?)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReduceError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}
