//! Target-function mini-language: a recursive-descent parser and evaluator
//! for complex expressions in the variable `s`.
//!
//! Grammar (standard precedence, `^` right-associative and tighter than
//! unary minus):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+')* power
//! power  := atom ('^' unary)?
//! atom   := number | number 'i' | 'i' | 'pi' | 's'
//!         | ('exp' | 'log' | 'sin' | 'cos' | 'zeta_shift') '(' expr ')'
//!         | '(' expr ')'
//! ```
//!
//! `zeta_shift(t0)` evaluates to `zeta(s + i t0)`; its argument must be a
//! real constant expression. Integer powers are computed by repeated
//! multiplication; everything else uses the principal branch.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::zeta::{zeta, EvalConfig};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(Complex64),
    Var,
    Pi,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Exp(Box<Expr>),
    Log(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    ZetaShift(f64),
}

/// A parsed target function `f(s)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetFunction {
    root: Expr,
}

impl TargetFunction {
    pub fn new(root: Expr) -> TargetFunction {
        TargetFunction { root }
    }

    pub fn root(&self) -> &Expr {
        &self.root
    }

    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        self.eval_with(s, &EvalConfig::default())
    }

    pub fn eval_with(&self, s: Complex64, cfg: &EvalConfig) -> Result<Complex64> {
        eval_node(&self.root, s, cfg)
    }
}

impl std::fmt::Display for TargetFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write_node(f, &self.root, 0)
    }
}

impl std::str::FromStr for TargetFunction {
    type Err = Error;
    fn from_str(text: &str) -> Result<TargetFunction> {
        parse_target(text)
    }
}

pub fn parse_target(text: &str) -> Result<TargetFunction> {
    let mut parser = Parser {
        input: text.as_bytes(),
        pos: 0,
    };
    parser.skip_ws();
    if parser.pos >= parser.input.len() {
        return Err(parser.error("empty expression"));
    }
    let root = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.input.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(TargetFunction { root })
}

fn eval_node(node: &Expr, s: Complex64, cfg: &EvalConfig) -> Result<Complex64> {
    Ok(match node {
        Expr::Const(c) => *c,
        Expr::Var => s,
        Expr::Pi => Complex64::new(std::f64::consts::PI, 0.0),
        Expr::Add(a, b) => eval_node(a, s, cfg)? + eval_node(b, s, cfg)?,
        Expr::Sub(a, b) => eval_node(a, s, cfg)? - eval_node(b, s, cfg)?,
        Expr::Mul(a, b) => eval_node(a, s, cfg)? * eval_node(b, s, cfg)?,
        Expr::Div(a, b) => eval_node(a, s, cfg)? / eval_node(b, s, cfg)?,
        Expr::Neg(a) => -eval_node(a, s, cfg)?,
        Expr::Pow(a, b) => {
            let base = eval_node(a, s, cfg)?;
            let exp = eval_node(b, s, cfg)?;
            complex_pow(base, exp)
        }
        Expr::Exp(a) => eval_node(a, s, cfg)?.exp(),
        Expr::Log(a) => eval_node(a, s, cfg)?.ln(),
        Expr::Sin(a) => eval_node(a, s, cfg)?.sin(),
        Expr::Cos(a) => eval_node(a, s, cfg)?.cos(),
        Expr::ZetaShift(t0) => zeta(s + Complex64::new(0.0, *t0), cfg)?,
    })
}

fn complex_pow(base: Complex64, exp: Complex64) -> Complex64 {
    if exp.im == 0.0 && exp.re.fract() == 0.0 && exp.re.abs() <= 64.0 {
        return base.powi(exp.re as i32);
    }
    if base.norm_sqr() == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    base.powc(exp)
}

// ---------------------------------------------------------------- unparse

fn precedence(node: &Expr) -> u8 {
    match node {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Neg(..) => 3,
        Expr::Pow(..) => 4,
        _ => 5,
    }
}

fn write_node(f: &mut std::fmt::Formatter<'_>, node: &Expr, parent_prec: u8) -> std::fmt::Result {
    let prec = precedence(node);
    let parens = prec < parent_prec;
    if parens {
        write!(f, "(")?;
    }
    match node {
        Expr::Const(c) => write_const(f, *c)?,
        Expr::Var => write!(f, "s")?,
        Expr::Pi => write!(f, "pi")?,
        Expr::Add(a, b) => {
            write_node(f, a, prec)?;
            write!(f, " + ")?;
            write_node(f, b, prec + 1)?;
        }
        Expr::Sub(a, b) => {
            write_node(f, a, prec)?;
            write!(f, " - ")?;
            write_node(f, b, prec + 1)?;
        }
        Expr::Mul(a, b) => {
            write_node(f, a, prec)?;
            write!(f, "*")?;
            write_node(f, b, prec + 1)?;
        }
        Expr::Div(a, b) => {
            write_node(f, a, prec)?;
            write!(f, "/")?;
            write_node(f, b, prec + 1)?;
        }
        Expr::Neg(a) => {
            write!(f, "-")?;
            write_node(f, a, prec + 1)?;
        }
        Expr::Pow(a, b) => {
            write_node(f, a, prec + 1)?;
            write!(f, "^")?;
            write_node(f, b, prec)?;
        }
        Expr::Exp(a) => {
            write!(f, "exp(")?;
            write_node(f, a, 0)?;
            write!(f, ")")?;
        }
        Expr::Log(a) => {
            write!(f, "log(")?;
            write_node(f, a, 0)?;
            write!(f, ")")?;
        }
        Expr::Sin(a) => {
            write!(f, "sin(")?;
            write_node(f, a, 0)?;
            write!(f, ")")?;
        }
        Expr::Cos(a) => {
            write!(f, "cos(")?;
            write_node(f, a, 0)?;
            write!(f, ")")?;
        }
        Expr::ZetaShift(t0) => write!(f, "zeta_shift({t0})")?,
    }
    if parens {
        write!(f, ")")?;
    }
    Ok(())
}

fn write_const(f: &mut std::fmt::Formatter<'_>, c: Complex64) -> std::fmt::Result {
    if c.im == 0.0 {
        if c.re < 0.0 {
            write!(f, "({})", c.re)
        } else {
            write!(f, "{}", c.re)
        }
    } else if c.re == 0.0 {
        if c.im == 1.0 {
            write!(f, "i")
        } else if c.im < 0.0 {
            write!(f, "({}i)", c.im)
        } else {
            write!(f, "{}i", c.im)
        }
    } else if c.im < 0.0 {
        write!(f, "({} - {}i)", c.re, -c.im)
    } else {
        write!(f, "({} + {}i)", c.re, c.im)
    }
}

// ------------------------------------------------------------------ parser

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.input.get(self.pos).copied()
    }

    fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, byte: u8) -> Result<()> {
        if self.eat(byte) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", byte as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut node = self.term()?;
        loop {
            if self.eat(b'+') {
                node = Expr::Add(Box::new(node), Box::new(self.term()?));
            } else if self.eat(b'-') {
                node = Expr::Sub(Box::new(node), Box::new(self.term()?));
            } else {
                return Ok(node);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut node = self.unary()?;
        loop {
            if self.eat(b'*') {
                node = Expr::Mul(Box::new(node), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                node = Expr::Div(Box::new(node), Box::new(self.unary()?));
            } else {
                return Ok(node);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else if self.eat(b'+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exp = self.unary()?;
            Ok(Expr::Pow(Box::new(base), Box::new(exp)))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            None => Err(self.error("unexpected end of expression")),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(),
            Some(c) => Err(self.error(&format!("unexpected character '{}'", c as char))),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.input.len()
            && (self.input[self.pos].is_ascii_digit() || self.input[self.pos] == b'.')
        {
            self.pos += 1;
        }
        // Exponent part, careful not to swallow the 'e' of an identifier.
        if self.pos < self.input.len() && (self.input[self.pos] | 0x20) == b'e' {
            let mut ahead = self.pos + 1;
            if ahead < self.input.len() && (self.input[ahead] == b'+' || self.input[ahead] == b'-')
            {
                ahead += 1;
            }
            if ahead < self.input.len() && self.input[ahead].is_ascii_digit() {
                self.pos = ahead;
                while self.pos < self.input.len() && self.input[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            }
        }
        let text = std::str::from_utf8(&self.input[start..self.pos]).unwrap();
        let value: f64 = text.parse().map_err(|_| Error::Parse {
            position: start,
            message: format!("malformed number '{text}'"),
        })?;
        // Imaginary suffix: "2.5i" (but not "2.5index").
        if self.pos < self.input.len()
            && self.input[self.pos] == b'i'
            && !self
                .input
                .get(self.pos + 1)
                .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
        {
            self.pos += 1;
            return Ok(Expr::Const(Complex64::new(0.0, value)));
        }
        Ok(Expr::Const(Complex64::new(value, 0.0)))
    }

    fn identifier(&mut self) -> Result<Expr> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.input.len()
            && (self.input[self.pos].is_ascii_alphanumeric() || self.input[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.input[start..self.pos]).unwrap();
        match name {
            "s" => Ok(Expr::Var),
            "i" => Ok(Expr::Const(Complex64::new(0.0, 1.0))),
            "pi" => Ok(Expr::Pi),
            "exp" | "log" | "sin" | "cos" => {
                self.expect(b'(')?;
                let arg = Box::new(self.expr()?);
                self.expect(b')')?;
                Ok(match name {
                    "exp" => Expr::Exp(arg),
                    "log" => Expr::Log(arg),
                    "sin" => Expr::Sin(arg),
                    _ => Expr::Cos(arg),
                })
            }
            "zeta_shift" => {
                let arg_pos = self.pos;
                self.expect(b'(')?;
                let arg = self.expr()?;
                self.expect(b')')?;
                let t0 = constant_value(&arg).ok_or(Error::Parse {
                    position: arg_pos,
                    message: "zeta_shift argument must be a real constant".to_string(),
                })?;
                Ok(Expr::ZetaShift(t0))
            }
            _ => Err(Error::Parse {
                position: start,
                message: format!("unknown identifier '{name}'"),
            }),
        }
    }
}

/// Evaluates a variable-free subtree to a real constant, if possible.
fn constant_value(node: &Expr) -> Option<f64> {
    fn go(node: &Expr) -> Option<Complex64> {
        Some(match node {
            Expr::Const(c) => *c,
            Expr::Pi => Complex64::new(std::f64::consts::PI, 0.0),
            Expr::Add(a, b) => go(a)? + go(b)?,
            Expr::Sub(a, b) => go(a)? - go(b)?,
            Expr::Mul(a, b) => go(a)? * go(b)?,
            Expr::Div(a, b) => go(a)? / go(b)?,
            Expr::Neg(a) => -go(a)?,
            Expr::Pow(a, b) => complex_pow(go(a)?, go(b)?),
            Expr::Exp(a) => go(a)?.exp(),
            Expr::Log(a) => go(a)?.ln(),
            Expr::Sin(a) => go(a)?.sin(),
            Expr::Cos(a) => go(a)?.cos(),
            Expr::Var | Expr::ZetaShift(_) => return None,
        })
    }
    let v = go(node)?;
    (v.im.abs() < 1e-12).then_some(v.re)
}
