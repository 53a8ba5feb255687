//! A closed expression grammar in one variable `x` for user-supplied
//! functions: numbers, `x`, `pi`, `e`, `+ - * / ^`, `exp`, `sin`, `cos`,
//! `abs` (also written `|u|`) and `sgn`, plus piecewise definitions
//! `piecewise(b1, b2; e0; e1; e2)` where piece k covers [b_k, b_{k+1}).

use std::f64::consts::{E, PI};
use std::fmt;

use crate::error::{Error, Result};
use crate::function::{ExtendedInterval, RealFn, TailClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Abs,
    Sgn,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Abs => "abs",
            Func::Sgn => "sgn",
        }
    }

    fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "exp" => Func::Exp,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "abs" => Func::Abs,
            "sgn" => Func::Sgn,
            _ => return None,
        })
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            Func::Exp => v.exp(),
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Abs => v.abs(),
            Func::Sgn => {
                if v > 0.0 {
                    1.0
                } else if v < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => " + ",
            BinOp::Sub => " - ",
            BinOp::Mul => " * ",
            BinOp::Div => " / ",
            BinOp::Pow => "^",
        }
    }

    fn prec(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Pi,
    E,
    X,
    Neg(Box<Expr>),
    Call(Func, Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

const NEG_PREC: u8 = 3;
const ATOM_PREC: u8 = 5;

fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
    Expr::Bin(op, Box::new(a), Box::new(b))
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr> {
        let mut p = Parser::new(text);
        let e = p.expr()?;
        p.finish()?;
        Ok(e)
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Pi => PI,
            Expr::E => E,
            Expr::X => x,
            Expr::Neg(a) => -a.eval(x),
            Expr::Call(f, a) => f.apply(a.eval(x)),
            Expr::Bin(op, a, b) => {
                let u = a.eval(x);
                match op {
                    BinOp::Add => u + b.eval(x),
                    BinOp::Sub => u - b.eval(x),
                    BinOp::Mul => u * b.eval(x),
                    BinOp::Div => u / b.eval(x),
                    BinOp::Pow => match b.constant() {
                        Some(c) if c.fract() == 0.0 && c.abs() <= i32::MAX as f64 => u.powi(c as i32),
                        _ => u.powf(b.eval(x)),
                    },
                }
            }
        }
    }

    /// The value when the expression does not mention x.
    pub fn constant(&self) -> Option<f64> {
        if self.mentions_x() {
            None
        } else {
            Some(self.eval(0.0))
        }
    }

    fn mentions_x(&self) -> bool {
        match self {
            Expr::X => true,
            Expr::Num(_) | Expr::Pi | Expr::E => false,
            Expr::Neg(a) | Expr::Call(_, a) => a.mentions_x(),
            Expr::Bin(_, a, b) => a.mentions_x() || b.mentions_x(),
        }
    }

    /// d/dx, away from the zeros of abs and sgn arguments. `None` for
    /// powers with an exponent that depends on x.
    pub fn derivative(&self) -> Option<Expr> {
        let zero = || Expr::Num(0.0);
        Some(match self {
            Expr::Num(_) | Expr::Pi | Expr::E => zero(),
            Expr::X => Expr::Num(1.0),
            Expr::Neg(a) => Expr::Neg(Box::new(a.derivative()?)),
            Expr::Call(f, a) => {
                let da = a.derivative()?;
                let outer = match f {
                    Func::Exp => self.clone(),
                    Func::Sin => Expr::Call(Func::Cos, a.clone()),
                    Func::Cos => Expr::Neg(Box::new(Expr::Call(Func::Sin, a.clone()))),
                    Func::Abs => Expr::Call(Func::Sgn, a.clone()),
                    Func::Sgn => return Some(zero()),
                };
                bin(BinOp::Mul, outer, da)
            }
            Expr::Bin(op, a, b) => {
                let da = a.derivative()?;
                match op {
                    BinOp::Add => bin(BinOp::Add, da, b.derivative()?),
                    BinOp::Sub => bin(BinOp::Sub, da, b.derivative()?),
                    BinOp::Mul => bin(
                        BinOp::Add,
                        bin(BinOp::Mul, da, (**b).clone()),
                        bin(BinOp::Mul, (**a).clone(), b.derivative()?),
                    ),
                    BinOp::Div => bin(
                        BinOp::Div,
                        bin(
                            BinOp::Sub,
                            bin(BinOp::Mul, da, (**b).clone()),
                            bin(BinOp::Mul, (**a).clone(), b.derivative()?),
                        ),
                        bin(BinOp::Pow, (**b).clone(), Expr::Num(2.0)),
                    ),
                    BinOp::Pow => {
                        let c = b.constant()?;
                        bin(
                            BinOp::Mul,
                            bin(BinOp::Mul, Expr::Num(c), bin(BinOp::Pow, (**a).clone(), Expr::Num(c - 1.0))),
                            da,
                        )
                    }
                }
            }
        })
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Num(v) if *v < 0.0 || v.is_sign_negative() => NEG_PREC,
            Expr::Neg(_) => NEG_PREC,
            Expr::Bin(op, _, _) => op.prec(),
            _ => ATOM_PREC,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        if self.prec() < min_prec {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Num(v) if v.is_sign_negative() => write!(f, "-{}", format_number(-v)),
            Expr::Num(v) => write!(f, "{}", format_number(*v)),
            Expr::Pi => write!(f, "pi"),
            Expr::E => write!(f, "e"),
            Expr::X => write!(f, "x"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.write_at(f, NEG_PREC)
            }
            Expr::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.write_at(f, 0)?;
                write!(f, ")")
            }
            Expr::Bin(op, a, b) => {
                let p = op.prec();
                if *op == BinOp::Pow {
                    a.write_at(f, ATOM_PREC)?;
                    write!(f, "^")?;
                    b.write_at(f, NEG_PREC)
                } else {
                    a.write_at(f, p)?;
                    write!(f, "{}", op.symbol())?;
                    b.write_at(f, p + 1)
                }
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

/// Shortest decimal that reads back to the same binary64 value.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "NaN".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let a = v.abs();
    if (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Breakpoints with one expression per piece.
#[derive(Debug, Clone, PartialEq)]
pub struct Piecewise {
    pub breaks: Vec<f64>,
    pub pieces: Vec<Expr>,
}

impl Piecewise {
    pub fn parse(text: &str) -> Result<Piecewise> {
        let t = text.trim();
        let Some(body) = t.strip_prefix("piecewise") else {
            return Ok(Piecewise { breaks: Vec::new(), pieces: vec![Expr::parse(t)?] });
        };
        let body = body
            .trim()
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(|| Error::Parse("piecewise needs `piecewise(breaks; pieces...)`".into()))?;
        let mut parts = body.split(';');
        let breaks =
            parts.next().unwrap_or("").split(',').map(|b| parse_number(b.trim())).collect::<Result<Vec<f64>>>()?;
        if breaks.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Parse("piecewise breakpoints must increase".into()));
        }
        let pieces = parts.map(Expr::parse).collect::<Result<Vec<_>>>()?;
        if pieces.len() != breaks.len() + 1 {
            return Err(Error::Parse(format!(
                "{} breakpoints need {} pieces, got {}",
                breaks.len(),
                breaks.len() + 1,
                pieces.len()
            )));
        }
        Ok(Piecewise { breaks, pieces })
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.pieces[self.breaks.partition_point(|&b| b <= x)].eval(x)
    }

    /// Whether both outer pieces are the literal 0.
    pub fn has_compact_support(&self) -> bool {
        !self.breaks.is_empty()
            && [self.pieces.first(), self.pieces.last()].iter().all(|p| matches!(p, Some(Expr::Num(v)) if *v == 0.0))
    }

    pub fn derivative(&self) -> Option<Piecewise> {
        let pieces = self.pieces.iter().map(Expr::derivative).collect::<Option<Vec<_>>>()?;
        Some(Piecewise { breaks: self.breaks.clone(), pieces })
    }

    fn abs_args(&self) -> Vec<f64> {
        let mut zeros = Vec::new();
        for p in &self.pieces {
            collect_kinks(p, &mut zeros);
        }
        zeros
    }

    /// A [`RealFn`] named by the canonical text. Compactly supported when
    /// the outer pieces are 0, else of the given tail class.
    pub fn to_fn(&self, tail: TailClass) -> RealFn {
        self.build(self.to_string(), tail, true)
    }

    fn build(&self, name: String, tail: TailClass, with_derivative: bool) -> RealFn {
        let me = self.clone();
        let mut cuts = self.breaks.clone();
        cuts.extend(self.abs_args());
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut f = RealFn::new(name.clone(), move |x| me.eval(x)).with_breakpoints(cuts);
        if self.has_compact_support() {
            let (lo, hi) = (self.breaks[0], *self.breaks.last().unwrap());
            if let Ok(s) = ExtendedInterval::new(lo, hi) {
                f = f.with_support(s);
            }
        } else {
            f = f.with_tail_class(tail);
        }
        if with_derivative {
            if let Some(d) = self.derivative() {
                let dt = if tail == TailClass::BoundedVariationTail { TailClass::AbsolutelyIntegrable } else { tail };
                f = f.with_derivative(d.build(format!("d/dx {name}"), dt, false));
            }
        }
        f
    }
}

/// Zeros of abs and sgn arguments that are linear in x, which are kinks
/// or jumps.
fn collect_kinks(e: &Expr, out: &mut Vec<f64>) {
    match e {
        Expr::Call(f, a) => {
            if matches!(f, Func::Abs | Func::Sgn) {
                if let Some(d) = a.derivative() {
                    let slope = d.eval(0.0);
                    if slope != 0.0 && [-1.7, 0.9, 3.1].iter().all(|&x| d.eval(x) == slope) {
                        out.push(-a.eval(0.0) / slope);
                    }
                }
            }
            collect_kinks(a, out);
        }
        Expr::Neg(a) => collect_kinks(a, out),
        Expr::Bin(_, a, b) => {
            collect_kinks(a, out);
            collect_kinks(b, out);
        }
        _ => {}
    }
}

impl fmt::Display for Piecewise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.breaks.is_empty() {
            return write!(f, "{}", self.pieces[0]);
        }
        let breaks: Vec<String> = self.breaks.iter().map(|b| format_number(*b)).collect();
        write!(f, "piecewise({}", breaks.join(", "))?;
        for p in &self.pieces {
            write!(f, "; {p}")?;
        }
        write!(f, ")")
    }
}

fn parse_number(s: &str) -> Result<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| Error::Parse(format!("`{s}` is not a finite number")))
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

/// Longest accepted nesting of parentheses and unary minus.
const MAX_DEPTH: usize = 64;

impl Parser {
    fn new(text: &str) -> Self {
        Parser { toks: lex(text), pos: 0 }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected `{c}` at token {}", self.pos)))
        }
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(Error::Parse(format!("unexpected {t:?} at token {}", self.pos))),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        self.sum(0)
    }

    fn sum(&mut self, depth: usize) -> Result<Expr> {
        let mut e = self.product(depth)?;
        loop {
            let op = if self.eat('+') {
                BinOp::Add
            } else if self.eat('-') {
                BinOp::Sub
            } else {
                return Ok(e);
            };
            e = bin(op, e, self.product(depth)?);
        }
    }

    fn product(&mut self, depth: usize) -> Result<Expr> {
        let mut e = self.unary(depth)?;
        loop {
            let op = if self.eat('*') {
                BinOp::Mul
            } else if self.eat('/') {
                BinOp::Div
            } else {
                return Ok(e);
            };
            e = bin(op, e, self.unary(depth)?);
        }
    }

    fn unary(&mut self, depth: usize) -> Result<Expr> {
        if depth > MAX_DEPTH {
            return Err(Error::Parse("expression nested too deeply".into()));
        }
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary(depth + 1)?)));
        }
        let base = self.atom(depth)?;
        if self.eat('^') {
            return Ok(bin(BinOp::Pow, base, self.unary(depth + 1)?));
        }
        Ok(base)
    }

    fn atom(&mut self, depth: usize) -> Result<Expr> {
        let tok = self.toks.get(self.pos).cloned();
        self.pos += 1;
        match tok {
            Some(Tok::Num(v)) => Ok(Expr::Num(v)),
            Some(Tok::Sym('(')) => {
                let e = self.sum(depth + 1)?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Sym('|')) => {
                let e = self.sum(depth + 1)?;
                self.expect('|')?;
                Ok(Expr::Call(Func::Abs, Box::new(e)))
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "x" => Ok(Expr::X),
                "pi" => Ok(Expr::Pi),
                "e" => Ok(Expr::E),
                _ => {
                    let func = Func::from_name(&name).ok_or_else(|| Error::Parse(format!("unknown name `{name}`")))?;
                    self.expect('(')?;
                    let e = self.sum(depth + 1)?;
                    self.expect(')')?;
                    Ok(Expr::Call(func, Box::new(e)))
                }
            },
            Some(t) => Err(Error::Parse(format!("unexpected {t:?}"))),
            None => Err(Error::Parse("unexpected end of expression".into())),
        }
    }
}

fn lex(text: &str) -> Vec<Tok> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s: String = chars[start..i].iter().collect();
            match s.parse::<f64>() {
                Ok(v) => out.push(Tok::Num(v)),
                Err(_) => out.push(Tok::Sym('?')),
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else {
            out.push(Tok::Sym(c));
            i += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_eval() {
        let e = Expr::parse("-x^2 + 2*x - 3/4").unwrap();
        assert_eq!(e.eval(2.0), -4.0 + 4.0 - 0.75);
        assert_eq!(Expr::parse("2^3^2").unwrap().eval(0.0), 512.0);
        assert_eq!(Expr::parse("|x - 1|*|x|").unwrap().eval(-2.0), 6.0);
        assert_eq!(Expr::parse("1e-3*x").unwrap().eval(2.0), 2e-3);
        assert!((Expr::parse("exp(-pi*x^2)").unwrap().eval(1.0) - (-PI).exp()).abs() < 1e-16);
    }

    #[test]
    fn canonical_round_trip() {
        for s in ["(1 - x^2)^3", "-(x + 1)*2", "x - (x - 1)", "x/(2*x)", "(-x)^2", "-x^2", "sin(x)/x", "e^-x"] {
            let e = Expr::parse(s).unwrap();
            let canon = e.to_string();
            assert_eq!(Expr::parse(&canon).unwrap(), e, "{s} -> {canon}");
        }
        assert_eq!(Expr::parse("|x|").unwrap().to_string(), "abs(x)");
    }

    #[test]
    fn rejects_outside_grammar() {
        for s in ["log(x)", "x +", "(x", "2 3", "y", "x;", ""] {
            assert!(Expr::parse(s).is_err(), "{s}");
        }
    }

    #[test]
    fn symbolic_derivative() {
        let e = Expr::parse("x^3*sin(x) + exp(-x^2)/(1 + x^2)").unwrap();
        let d = e.derivative().unwrap();
        for x in [-1.3, 0.2, 2.0] {
            let h = 1e-6;
            let fd = (e.eval(x + h) - e.eval(x - h)) / (2.0 * h);
            assert!((fd - d.eval(x)).abs() < 1e-7, "{x}");
        }
        assert!(Expr::parse("x^x").unwrap().derivative().is_none());
    }

    #[test]
    fn piecewise_box_and_bump() {
        let p = Piecewise::parse("piecewise(-0.5, 0.5; 0; 1; 0)").unwrap();
        assert_eq!((p.eval(-0.5), p.eval(0.0), p.eval(0.5)), (1.0, 1.0, 0.0));
        assert!(p.has_compact_support());
        let f = p.to_fn(TailClass::AbsolutelyIntegrable);
        assert_eq!(f.tail_class(), TailClass::CompactSupport);
        assert_eq!(Piecewise::parse(&p.to_string()).unwrap(), p);
        assert!(Piecewise::parse("piecewise(1, 0; 0; 1; 0)").is_err());
        assert!(Piecewise::parse("piecewise(0; 1)").is_err());
    }

    #[test]
    fn abs_kinks_become_breakpoints() {
        let f = Piecewise::parse("abs(2*x - 1)").unwrap().to_fn(TailClass::BoundedVariationTail);
        assert_eq!(f.breakpoints(), &[0.5]);
    }
}
