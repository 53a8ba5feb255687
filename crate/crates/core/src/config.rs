//! Run configuration: a flat `key = value` file whose canonical form is the
//! set keys in a fixed order, one per line.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::corpus;
use crate::error::{Error, Result};
use crate::expr::{format_number, Piecewise};
use crate::function::{RealFn, TailClass};
use crate::types::{LadderConfig, LadderDirection};

/// A corpus name or an expression from the closed grammar.
#[derive(Debug, Clone, PartialEq)]
pub enum FnSpec {
    Named(String),
    Expr(Piecewise),
}

impl FnSpec {
    /// The function, taking `tail` as the tail class of expressions that
    /// are not compactly supported (absolutely integrable by default).
    pub fn resolve(&self, tail: Option<TailClass>) -> Result<RealFn> {
        match self {
            FnSpec::Named(n) => corpus::lookup(n),
            FnSpec::Expr(p) => Ok(p.to_fn(tail.unwrap_or(TailClass::AbsolutelyIntegrable))),
        }
    }
}

impl FromStr for FnSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if corpus::corpus().contains_key(s) {
            return Ok(FnSpec::Named(s.to_string()));
        }
        if !s.is_empty()
            && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            && s != "x"
            && s != "pi"
            && s != "e"
        {
            return Err(Error::UnknownFunction(s.to_string()));
        }
        Ok(FnSpec::Expr(Piecewise::parse(s)?))
    }
}

impl fmt::Display for FnSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FnSpec::Named(n) => write!(f, "{n}"),
            FnSpec::Expr(p) => write!(f, "{p}"),
        }
    }
}

/// A list of points, or `lo:hi:n` for n equally spaced points.
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    List(Vec<f64>),
    Linspace { lo: f64, hi: f64, n: usize },
}

/// Largest accepted number of grid points.
const MAX_GRID: usize = 1 << 20;

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        match *self {
            Grid::List(ref v) => v.clone(),
            Grid::Linspace { lo, n: 1, .. } => vec![lo],
            Grid::Linspace { lo, hi, n } => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
        }
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').map(str::trim).collect();
            let [lo, hi, n] = parts[..] else {
                return Err(Error::Parse(format!("grid `{s}` is not lo:hi:n")));
            };
            let (lo, hi) = (number(lo)?, number(hi)?);
            let n: usize = n.parse().map_err(|_| Error::Parse(format!("`{n}` is not a point count")))?;
            if n == 0 || n > MAX_GRID || hi < lo || (n > 1 && hi == lo) {
                return Err(Error::Parse(format!("grid `{s}` needs lo < hi and 1 <= n <= {MAX_GRID}")));
            }
            return Ok(Grid::Linspace { lo, hi, n });
        }
        if s.is_empty() {
            return Ok(Grid::List(Vec::new()));
        }
        let v = s.split(',').map(|t| number(t.trim())).collect::<Result<Vec<_>>>()?;
        if v.len() > MAX_GRID {
            return Err(Error::Parse(format!("more than {MAX_GRID} grid points")));
        }
        Ok(Grid::List(v))
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grid::List(v) => write!(f, "{}", v.iter().map(|x| format_number(*x)).collect::<Vec<_>>().join(",")),
            Grid::Linspace { lo, hi, n } => write!(f, "{}:{}:{n}", format_number(*lo), format_number(*hi)),
        }
    }
}

/// `start,ratio,count` of a geometric ladder; the command fixes the
/// direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderSpec {
    pub start: f64,
    pub ratio: f64,
    pub count: usize,
}

impl LadderSpec {
    pub fn to_ladder(&self, direction: LadderDirection) -> Result<LadderConfig> {
        LadderConfig::new(self.start, self.ratio, self.count, direction)
    }
}

impl FromStr for LadderSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [start, ratio, count] = parts[..] else {
            return Err(Error::Parse(format!("ladder `{s}` is not start,ratio,count")));
        };
        let count = count.parse().map_err(|_| Error::Parse(format!("`{count}` is not a ladder length")))?;
        let spec = LadderSpec { start: number(start)?, ratio: number(ratio)?, count };
        spec.to_ladder(LadderDirection::Increasing).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(spec)
    }
}

impl fmt::Display for LadderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", format_number(self.start), format_number(self.ratio), self.count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "jsonl" | "json-lines" => Ok(Format::Jsonl),
            other => Err(Error::Parse(format!("unknown format `{other}`"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Jsonl => "jsonl",
        })
    }
}

/// Settings of one command. Unset keys take the command's defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub function: Option<FnSpec>,
    /// Second operand of a convolution.
    pub g: Option<FnSpec>,
    pub tail: Option<TailClass>,
    pub xs: Option<Grid>,
    pub ys: Option<Grid>,
    pub tol: Option<f64>,
    pub delta: Option<f64>,
    pub ladder: Option<LadderSpec>,
    /// Verification suites; empty selects none.
    pub suites: Option<Vec<String>>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Every accepted key, in canonical order.
pub const KEYS: [&str; 11] = ["fn", "g", "tail", "xs", "ys", "tol", "delta", "ladder", "suite", "out", "format"];

fn number(s: &str) -> Result<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| Error::Parse(format!("`{s}` is not a finite number")))
}

fn positive(key: &str, s: &str) -> Result<f64> {
    let v = number(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(Error::Parse(format!("{key} must be positive, got {s}")))
    }
}

impl RunConfig {
    /// Parses `key = value` lines. Blank lines and lines starting with `#`
    /// are skipped; unknown and repeated keys are rejected.
    pub fn parse(text: &str) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        let mut seen = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) =
                line.split_once('=').ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`", n + 1)))?;
            let key = key.trim();
            if seen.contains(&key) {
                return Err(Error::Parse(format!("line {}: repeated key `{key}`", n + 1)));
            }
            seen.push(key);
            cfg.set(key, value.trim()).map_err(|e| match e {
                Error::Parse(m) => Error::Parse(format!("line {}: {m}", n + 1)),
                other => other,
            })?;
        }
        Ok(cfg)
    }

    /// Sets one key from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "fn" => self.function = Some(value.parse()?),
            "g" => self.g = Some(value.parse()?),
            "tail" => self.tail = Some(TailClass::parse(value)?),
            "xs" => self.xs = Some(value.parse()?),
            "ys" => self.ys = Some(value.parse()?),
            "tol" => self.tol = Some(positive(key, value)?),
            "delta" => self.delta = Some(positive(key, value)?),
            "ladder" => self.ladder = Some(value.parse()?),
            "suite" => {
                self.suites =
                    Some(value.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect())
            }
            "out" => {
                if value.is_empty() {
                    return Err(Error::Parse("out needs a path".into()));
                }
                self.out = Some(PathBuf::from(value))
            }
            "format" => self.format = Some(value.parse()?),
            other => return Err(Error::Parse(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Keys set in `other` replace those here.
    pub fn merge(mut self, other: RunConfig) -> RunConfig {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(function, g, tail, xs, ys, tol, delta, ladder, suites, out, format);
        self
    }

    fn value_of(&self, key: &str) -> Option<String> {
        match key {
            "fn" => self.function.as_ref().map(ToString::to_string),
            "g" => self.g.as_ref().map(ToString::to_string),
            "tail" => self.tail.map(|t| t.as_str().to_string()),
            "xs" => self.xs.as_ref().map(ToString::to_string),
            "ys" => self.ys.as_ref().map(ToString::to_string),
            "tol" => self.tol.map(format_number),
            "delta" => self.delta.map(format_number),
            "ladder" => self.ladder.map(|l| l.to_string()),
            "suite" => self.suites.as_ref().map(|s| s.join(",")),
            "out" => self.out.as_ref().map(|p| p.display().to_string()),
            "format" => self.format.map(|f| f.to_string()),
            _ => None,
        }
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for key in KEYS {
            if let Some(v) = self.value_of(key) {
                writeln!(f, "{key} = {v}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_canonical_form() {
        let text = "# comment\nys=-1, 0,1\n fn = gauss\n\ntol = 1e-8\nformat = jsonl\n";
        let cfg = RunConfig::parse(text).unwrap();
        assert_eq!(cfg.function, Some(FnSpec::Named("gauss".into())));
        assert_eq!(cfg.ys.as_ref().unwrap().points(), vec![-1.0, 0.0, 1.0]);
        let canon = cfg.to_string();
        assert_eq!(canon, "fn = gauss\nys = -1,0,1\ntol = 1e-8\nformat = jsonl\n");
        assert_eq!(RunConfig::parse(&canon).unwrap(), cfg);
    }

    #[test]
    fn rejects_unknown_and_repeated_keys() {
        assert!(matches!(RunConfig::parse("colour = red"), Err(Error::Parse(_))));
        assert!(matches!(RunConfig::parse("tol = 1\ntol = 2"), Err(Error::Parse(_))));
        assert!(matches!(RunConfig::parse("tol = -1"), Err(Error::Parse(_))));
        assert!(matches!(RunConfig::parse("just text"), Err(Error::Parse(_))));
        assert!(matches!(RunConfig::parse("fn = nosuch"), Err(Error::UnknownFunction(_))));
    }

    #[test]
    fn expression_functions_and_grids() {
        let cfg = RunConfig::parse("fn = piecewise(-1,1; 0; (1-x^2)^3; 0)\nxs = -1:1:5\nsuite =").unwrap();
        assert_eq!(cfg.xs.as_ref().unwrap().points(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!(cfg.suites, Some(vec![]));
        let f = cfg.function.as_ref().unwrap().resolve(None).unwrap();
        assert_eq!(f.eval(0.5), 0.75f64.powi(3));
        assert_eq!(f.tail_class(), TailClass::CompactSupport);
        assert_eq!(RunConfig::parse(&cfg.to_string()).unwrap(), cfg);
    }

    #[test]
    fn merge_prefers_later() {
        let a = RunConfig::parse("fn = gauss\ntol = 1e-6").unwrap();
        let b = RunConfig::parse("tol = 1e-9").unwrap();
        let m = a.merge(b);
        assert_eq!(m.tol, Some(1e-9));
        assert_eq!(m.function, Some(FnSpec::Named("gauss".into())));
    }
}
