//! Commands behind the `lpft` binary: each turns a [`RunConfig`] into a
//! table and an overall pass flag.

use num_complex::Complex64;
use serde_json::{Map, Value};

use crate::config::{FnSpec, Format, Grid, RunConfig};
use crate::convolution::{ConvPlan, Convolver};
use crate::error::{Error, Result};
use crate::expr::format_number;
use crate::fourier::{invert, spectrum, SpectrumProvider, TransformRequest};
use crate::function::RealFn;
use crate::laplace_means::{condition_certified, inversion_condition_check, ld0, ld1, MeanSpec};
use crate::types::{LadderConfig, LadderDirection, Scalar};
use crate::verify::{resolve_suites, run_suites};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;

/// Exit code for an error that stopped a command.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::UnknownFunction(_) => EXIT_PARSE,
        _ => EXIT_FAILED,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Ft,
    Ld,
    Conv,
    Invert,
    Verify,
}

impl Command {
    pub fn default_tol(self) -> f64 {
        match self {
            Command::Ft | Command::Conv => 1e-8,
            Command::Ld => 1e-6,
            Command::Invert => 1e-4,
            Command::Verify => 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Scalar(Scalar),
    Text(String),
    Bool(bool),
    Null,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format_number(*v),
            Cell::Scalar(Scalar::Real(v)) => format_number(*v),
            Cell::Scalar(Scalar::Complex(c)) => {
                let sign = if c.im.is_sign_negative() { "-" } else { "+" };
                format!("{}{sign}{}i", format_number(c.re), format_number(c.im.abs()))
            }
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) | Cell::Scalar(Scalar::Real(v)) => Value::from(*v),
            Cell::Scalar(Scalar::Complex(c)) => Value::from(vec![Value::from(c.re), Value::from(c.im)]),
            Cell::Text(s) => Value::from(s.clone()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Null => Value::Null,
        }
    }
}

/// Rows under a fixed header, plus whether the command succeeded.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub ok: bool,
}

impl Table {
    pub fn exit_code(&self) -> i32 {
        if self.ok {
            EXIT_OK
        } else {
            EXIT_FAILED
        }
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Jsonl => Ok(self.to_jsonl()),
        }
    }

    /// Header row and data rows, LF terminated.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }

    /// One JSON object per row with keys in header order.
    pub fn to_jsonl(&self) -> String {
        let mut s = String::new();
        for row in &self.rows {
            let obj: Map<String, Value> = self.header.iter().zip(row).map(|(k, c)| (k.to_string(), c.json())).collect();
            s.push_str(&Value::Object(obj).to_string());
            s.push('\n');
        }
        s
    }
}

fn required<'a, T>(v: &'a Option<T>, key: &str) -> Result<&'a T> {
    v.as_ref().ok_or_else(|| Error::Parse(format!("missing `{key}`")))
}

fn function(cfg: &RunConfig, spec: &Option<FnSpec>, key: &str) -> Result<RealFn> {
    required(spec, key)?.resolve(cfg.tail)
}

fn points(grid: &Option<Grid>, key: &str) -> Result<Vec<f64>> {
    Ok(required(grid, key)?.points())
}

fn mean_spec(cfg: &RunConfig, tol: f64) -> Result<MeanSpec> {
    let ladder = match cfg.ladder {
        Some(l) => l.to_ladder(LadderDirection::Increasing)?,
        None => LadderConfig::laplace_default(),
    };
    MeanSpec::new(cfg.delta.unwrap_or(MeanSpec::default().delta), ladder, tol)
}

/// Runs one command. Errors mean the configuration could not be used;
/// numerical failures are reported in the table.
pub fn run(cmd: Command, cfg: &RunConfig) -> Result<Table> {
    let tol = cfg.tol.unwrap_or(cmd.default_tol());
    match cmd {
        Command::Ft => cmd_ft(cfg, tol),
        Command::Ld => cmd_ld(cfg, tol),
        Command::Conv => cmd_conv(cfg, tol),
        Command::Invert => cmd_invert(cfg, tol),
        Command::Verify => cmd_verify(cfg),
    }
}

/// Columns `y,re,im,abs_err,status`; ok iff every row converged.
pub fn cmd_ft(cfg: &RunConfig, tol: f64) -> Result<Table> {
    let f = function(cfg, &cfg.function, "fn")?;
    let ys = points(&cfg.ys, "ys")?;
    if ys.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Parse("ys must be sorted".into()));
    }
    let table = spectrum(&TransformRequest::new(f, ys, tol)?);
    let rows = table
        .rows
        .iter()
        .map(|r| {
            let v = r.value();
            vec![
                Cell::Num(r.y),
                Cell::Num(v.re),
                Cell::Num(v.im),
                Cell::Num(r.abs_error()),
                Cell::Text(r.status_label().into()),
            ]
        })
        .collect();
    Ok(Table { header: vec!["y", "re", "im", "abs_err", "status"], rows, ok: table.all_converged() })
}

/// Columns `x,ld0,ld1,converged,rate`. A limit that fails shows the error
/// kind in place of its value.
pub fn cmd_ld(cfg: &RunConfig, tol: f64) -> Result<Table> {
    let f = function(cfg, &cfg.function, "fn")?;
    let xs = points(&cfg.xs, "xs")?;
    let spec = mean_spec(cfg, tol)?;
    let mut ok = true;
    let rows = xs
        .iter()
        .map(|&x| {
            let a = ld0(&f, x, &spec);
            let b = ld1(&f, x, &spec);
            let converged = a.as_ref().is_ok_and(|l| l.converged) && b.as_ref().is_ok_and(|l| l.converged);
            ok &= converged;
            let cell = |r: &Result<crate::types::LimitResult<f64>>| match r {
                Ok(l) => Cell::Num(l.value),
                Err(e) => Cell::Text(e.kind().into()),
            };
            let rate = b.as_ref().ok().and_then(|l| l.rate_estimate).map_or(Cell::Null, Cell::Num);
            vec![Cell::Num(x), cell(&a), cell(&b), Cell::Bool(converged), rate]
        })
        .collect();
    Ok(Table { header: vec!["x", "ld0", "ld1", "converged", "rate"], rows, ok })
}

/// Columns `x,value,abs_err,status` for f*g with g from key `g`.
pub fn cmd_conv(cfg: &RunConfig, tol: f64) -> Result<Table> {
    let f = function(cfg, &cfg.function, "fn")?;
    let g = function(cfg, &cfg.g, "g")?;
    let xs = points(&cfg.xs, "xs")?;
    let header = vec!["x", "value", "abs_err", "status"];
    if xs.is_empty() {
        return Ok(Table { header, rows: Vec::new(), ok: true });
    }
    let mut grid = xs.clone();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let plan = ConvPlan::new(tol, grid.clone())?;
    let conv = match Convolver::new(&f, &g, &plan, grid[0], grid[grid.len() - 1]) {
        Ok(c) => c,
        Err(e) => {
            let rows =
                xs.iter().map(|&x| vec![Cell::Num(x), Cell::Null, Cell::Null, Cell::Text(e.kind().into())]).collect();
            return Ok(Table { header, rows, ok: false });
        }
    };
    let mut ok = true;
    let rows = xs
        .iter()
        .map(|&x| match conv.eval(x) {
            Ok(r) => {
                ok &= r.is_converged();
                vec![
                    Cell::Num(x),
                    Cell::Num(r.value),
                    Cell::Num(r.abs_error_estimate),
                    Cell::Text(r.status.as_str().into()),
                ]
            }
            Err(e) => {
                ok = false;
                vec![Cell::Num(x), Cell::Null, Cell::Null, Cell::Text(e.kind().into())]
            }
        })
        .collect();
    Ok(Table { header, rows, ok })
}

/// Columns `x,value,residual_vs_f,condition_ok`. The value is the Gaussian
/// summability limit of the transform of f; ok iff every limit converged.
pub fn cmd_invert(cfg: &RunConfig, tol: f64) -> Result<Table> {
    let f = function(cfg, &cfg.function, "fn")?;
    let xs = points(&cfg.xs, "xs")?;
    let ladder = match cfg.ladder {
        Some(l) => l.to_ladder(LadderDirection::Decreasing)?,
        None => LadderConfig::gauss_default(),
    };
    let spec = MeanSpec::default().with_delta(cfg.delta.unwrap_or(MeanSpec::default().delta));
    let header = vec!["x", "value", "residual_vs_f", "condition_ok"];
    let provider = match SpectrumProvider::for_fn(&f, tol) {
        Ok(p) => p,
        Err(e) => {
            let rows = xs
                .iter()
                .map(|&x| vec![Cell::Num(x), Cell::Text(e.kind().into()), Cell::Null, Cell::Bool(false)])
                .collect();
            return Ok(Table { header, rows, ok: false });
        }
    };
    let mut ok = true;
    let rows = xs
        .iter()
        .map(|&x| {
            let cond = inversion_condition_check(&f, x, &spec, 64).is_ok_and(|c| condition_certified(&c, spec.tol));
            match invert(&provider, x, &ladder, tol) {
                Ok(v) => {
                    let value: Complex64 = v.value;
                    vec![Cell::Num(x), Cell::Num(value.re), Cell::Num((value.re - f.eval(x)).abs()), Cell::Bool(cond)]
                }
                Err(e) => {
                    ok = false;
                    vec![Cell::Num(x), Cell::Text(e.kind().into()), Cell::Null, Cell::Bool(cond)]
                }
            }
        })
        .collect();
    Ok(Table { header, rows, ok })
}

/// One row per check: `identity_name,fixture,lhs,rhs,abs_residual,pass,status`.
pub fn cmd_verify(cfg: &RunConfig) -> Result<Table> {
    let names = resolve_suites(cfg.suites.as_deref())?;
    let records = run_suites(&names)?;
    let ok = records.iter().all(|r| r.pass);
    let rows = records
        .into_iter()
        .map(|r| {
            vec![
                Cell::Text(r.identity_name),
                Cell::Text(r.fixture),
                r.lhs.map_or(Cell::Null, Cell::Scalar),
                r.rhs.map_or(Cell::Null, Cell::Scalar),
                r.abs_residual.map_or(Cell::Null, Cell::Num),
                Cell::Bool(r.pass),
                Cell::Text(r.status),
            ]
        })
        .collect();
    Ok(Table { header: vec!["identity_name", "fixture", "lhs", "rhs", "abs_residual", "pass", "status"], rows, ok })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> RunConfig {
        RunConfig::parse(text).unwrap()
    }

    #[test]
    fn ft_of_zero() {
        let t = run(Command::Ft, &cfg("fn = zero\nys = 0")).unwrap();
        assert_eq!(t.to_csv().unwrap(), "y,re,im,abs_err,status\n0,0,0,0,converged\n");
        assert_eq!(t.exit_code(), EXIT_OK);
    }

    #[test]
    fn missing_keys_are_parse_errors() {
        let e = run(Command::Ft, &cfg("fn = gauss")).unwrap_err();
        assert_eq!(exit_code_for(&e), EXIT_PARSE);
        let e = run(Command::Conv, &cfg("fn = box\nxs = 0")).unwrap_err();
        assert_eq!(exit_code_for(&e), EXIT_PARSE);
    }

    #[test]
    fn jsonl_keeps_header_order() {
        let t = Table {
            header: vec!["b", "a"],
            rows: vec![vec![Cell::Num(f64::NAN), Cell::Scalar(Scalar::Complex(Complex64::new(1.0, -2.0)))]],
            ok: true,
        };
        assert_eq!(t.to_jsonl(), "{\"b\":null,\"a\":[1.0,-2.0]}\n");
        assert_eq!(t.to_csv().unwrap(), "b,a\nNaN,1-2i\n");
    }

    #[test]
    fn empty_verify_selection() {
        let t = run(Command::Verify, &cfg("suite =")).unwrap();
        assert!(t.rows.is_empty() && t.ok);
    }
}
