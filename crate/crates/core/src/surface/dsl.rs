//! Small expression language for user-supplied immersions.
//!
//! ```text
//! expr   := vec3 | scalar
//! vec3   := "(" scalar "," scalar "," scalar ")"
//! scalar := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := "-" unary | power
//! power  := atom ("^" ["-"] integer)?
//! atom   := number | "pi" | var | fn "(" scalar ")" | "(" scalar ")"
//! var    := t | x | p | y | phi
//! fn     := sin | cos | sinh | cosh | exp | log | sqrt | atan
//! ```

use std::fmt;

use crate::error::{Error, Result};
use crate::jet::Jet2;
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    /// First coordinate (`t` or `x`).
    T,
    /// Second coordinate (`p`, `phi` or `y`).
    P,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Log,
    Sqrt,
    Atan,
}

impl Func {
    fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "atan" => Func::Atan,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Atan => "atan",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn eval<T: Real>(&self, t: &Jet2<T>, p: &Jet2<T>) -> Result<Jet2<T>> {
        Ok(match self {
            Expr::Num(v) => Jet2::constant(T::c(*v), t.order()),
            Expr::Var(Var::T) => *t,
            Expr::Var(Var::P) => *p,
            Expr::Neg(a) => -a.eval(t, p)?,
            Expr::Add(a, b) => a.eval(t, p)? + b.eval(t, p)?,
            Expr::Sub(a, b) => a.eval(t, p)? - b.eval(t, p)?,
            Expr::Mul(a, b) => a.eval(t, p)? * b.eval(t, p)?,
            Expr::Div(a, b) => a.eval(t, p)? * b.eval(t, p)?.recip()?,
            Expr::Pow(a, n) => a.eval(t, p)?.powi(*n)?,
            Expr::Call(f, a) => {
                let v = a.eval(t, p)?;
                match f {
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Sinh => v.sinh(),
                    Func::Cosh => v.cosh(),
                    Func::Exp => v.exp(),
                    Func::Log => v.ln()?,
                    Func::Sqrt => v.sqrt()?,
                    Func::Atan => v.atan(),
                }
            }
        })
    }
}

/// Canonical, fully parenthesized form that parses back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Var(Var::T) => write!(f, "t"),
            Expr::Var(Var::P) => write!(f, "p"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, n) => write!(f, "({a}^{n})"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

/// Parsed immersion `(x(t,p), y(t,p), z(t,p))`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImmersionExpr {
    pub components: [Expr; 3],
}

impl ImmersionExpr {
    pub fn eval<T: Real>(&self, t: &Jet2<T>, p: &Jet2<T>) -> Result<[Jet2<T>; 3]> {
        Ok([self.components[0].eval(t, p)?, self.components[1].eval(t, p)?, self.components[2].eval(t, p)?])
    }
}

impl fmt::Display for ImmersionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.components;
        write!(f, "({a}, {b}, {c})")
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

impl Lexer {
    fn new(src: &str) -> Result<Self> {
        let mut toks = Vec::new();
        let b = src.as_bytes();
        let mut i = 0;
        while i < b.len() {
            let ch = src[i..].chars().next().unwrap_or(' ');
            if ch.is_whitespace() {
                i += ch.len_utf8();
            } else if ch.is_ascii_digit() || ch == '.' {
                let start = i;
                while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
                    i += 1;
                }
                if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                    let mut j = i + 1;
                    if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                        j += 1;
                    }
                    if j < b.len() && b[j].is_ascii_digit() {
                        i = j;
                        while i < b.len() && b[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let v = text
                    .parse::<f64>()
                    .map_err(|_| Error::Syntax { pos: start, msg: format!("malformed number `{text}`") })?;
                toks.push((Tok::Num(v), start));
            } else if ch.is_alphabetic() || ch == '_' {
                let start = i;
                while i < b.len() {
                    let c = src[i..].chars().next().unwrap();
                    if c.is_alphanumeric() || c == '_' {
                        i += c.len_utf8();
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Ident(src[start..i].to_string()), start));
            } else if "+-*/^(),".contains(ch) {
                toks.push((Tok::Sym(ch), i));
                i += 1;
            } else {
                return Err(Error::Syntax { pos: i, msg: format!("unexpected character `{ch}`") });
            }
        }
        toks.push((Tok::End, src.len()));
        Ok(Lexer { toks })
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }
    fn pos(&self) -> usize {
        self.toks[self.at].1
    }
    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }
    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }
    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Syntax { pos: self.pos(), msg: format!("expected `{c}`, found {}", describe(self.peek())) })
        }
    }

    /// Top level: a scalar or a parenthesized tuple.
    fn top(&mut self) -> Result<Vec<Expr>> {
        let items = if *self.peek() == Tok::Sym('(') {
            let save = self.at;
            self.bump();
            let first = self.scalar()?;
            if *self.peek() == Tok::Sym(',') {
                let mut items = vec![first];
                while self.eat(',') {
                    items.push(self.scalar()?);
                }
                self.expect(')')?;
                items
            } else {
                self.at = save;
                vec![self.scalar()?]
            }
        } else {
            vec![self.scalar()?]
        };
        if *self.peek() != Tok::End {
            return Err(Error::Syntax { pos: self.pos(), msg: format!("unexpected {}", describe(self.peek())) });
        }
        Ok(items)
    }

    fn scalar(&mut self) -> Result<Expr> {
        let mut e = self.term()?;
        loop {
            if self.eat('+') {
                e = Expr::Add(Box::new(e), Box::new(self.term()?));
            } else if self.eat('-') {
                e = Expr::Sub(Box::new(e), Box::new(self.term()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.unary()?;
        loop {
            if self.eat('*') {
                e = Expr::Mul(Box::new(e), Box::new(self.unary()?));
            } else if self.eat('/') {
                e = Expr::Div(Box::new(e), Box::new(self.unary()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let pos = self.pos();
            match self.bump() {
                Tok::Num(v) if v.fract() == 0.0 && v.abs() <= 64.0 => {
                    let n = if neg { -(v as i32) } else { v as i32 };
                    Ok(Expr::Pow(Box::new(base), n))
                }
                t => Err(Error::Syntax { pos, msg: format!("exponent must be an integer, found {}", describe(&t)) }),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::Sym('(') => {
                let e = self.scalar()?;
                if *self.peek() == Tok::Sym(',') {
                    return Err(Error::Syntax { pos: self.pos(), msg: "vectors are only allowed at top level".into() });
                }
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if *self.peek() == Tok::Sym('(') {
                    let func = Func::from_name(&name)
                        .ok_or_else(|| Error::Syntax { pos, msg: format!("unknown function `{name}`") })?;
                    self.bump();
                    let arg = self.scalar()?;
                    if *self.peek() == Tok::Sym(',') {
                        let mut found = 1;
                        while self.eat(',') {
                            self.scalar()?;
                            found += 1;
                        }
                        return Err(Error::Arity { expected: 1, found });
                    }
                    self.expect(')')?;
                    return Ok(Expr::Call(func, Box::new(arg)));
                }
                match name.as_str() {
                    "t" | "x" => Ok(Expr::Var(Var::T)),
                    "p" | "y" | "phi" => Ok(Expr::Var(Var::P)),
                    "pi" => Ok(Expr::Num(std::f64::consts::PI)),
                    _ => Err(Error::UnboundVariable { name, pos }),
                }
            }
            t => Err(Error::Syntax { pos, msg: format!("unexpected {}", describe(&t)) }),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(v) => format!("number {v}"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::End => "end of input".into(),
    }
}

/// Parses a single scalar expression.
pub fn parse_scalar(src: &str) -> Result<Expr> {
    let mut p = Parser { toks: Lexer::new(src)?.toks, at: 0 };
    let mut items = p.top()?;
    if items.len() != 1 {
        return Err(Error::Arity { expected: 1, found: items.len() });
    }
    Ok(items.remove(0))
}

/// Parses an immersion `(x, y, z)`.
pub fn parse_immersion(src: &str) -> Result<ImmersionExpr> {
    let mut p = Parser { toks: Lexer::new(src)?.toks, at: 0 };
    let items = p.top()?;
    let n = items.len();
    let components: [Expr; 3] = items.try_into().map_err(|_| Error::Arity { expected: 3, found: n })?;
    Ok(ImmersionExpr { components })
}
