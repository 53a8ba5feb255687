//! Exponential means s ∫_0^δ e^{-st} f(x ± t) dt and their limits as
//! s -> infinity: Laplace continuity (LD0), the Laplace derivative (LD1)
//! and the inversion condition.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::extrapolation::{last_three_agree, rate_estimate, richardson};
use crate::function::RealFn;
use crate::quadrature::bounded_integrand;
use crate::quadrature::{check_tol, CumulativeIntegral, TruncationPolicy};
use crate::types::{IntegralResult, LadderConfig, LadderDirection, LimitResult, ResidualReport, Status};

/// Upper limit of the substituted variable u = s t; e^{-50} is below
/// double precision relative to any mean.
const U_MAX: f64 = 50.0;

/// Smallest s δ whose ladder entry enters the extrapolation: the truncated
/// exponential tail e^{-s δ} is then below rounding.
const MIN_S_DELTA: f64 = 36.0;

/// Richardson order used for the s ladder.
const RICHARDSON_ORDER: usize = 3;

/// Ladder entries computed before an early stop is allowed.
const MIN_LADDER: usize = 6;

/// One-sided direction of a mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// t -> x + t
    Right,
    /// t -> x - t
    Left,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Right => 1.0,
            Side::Left => -1.0,
        }
    }
}

/// δ, the s ladder and the tolerance of a limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanSpec {
    pub delta: f64,
    pub ladder: LadderConfig,
    pub tol: f64,
}

impl Default for MeanSpec {
    fn default() -> Self {
        MeanSpec { delta: 0.5, ladder: LadderConfig::laplace_default(), tol: 1e-6 }
    }
}

impl MeanSpec {
    pub fn new(delta: f64, ladder: LadderConfig, tol: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidArgument(format!("delta must be positive, got {delta}")));
        }
        if ladder.direction != LadderDirection::Increasing {
            return Err(Error::InvalidArgument("the s ladder must be increasing".into()));
        }
        check_tol(tol)?;
        Ok(MeanSpec { delta, ladder, tol })
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }
}

/// δ clipped to the distance from `x` to the domain ends and to singular
/// points other than `x` itself.
pub fn effective_delta(f: &RealFn, x: f64, delta: f64) -> Result<f64> {
    let d = f.domain();
    let mut out = delta.min(x - d.lo()).min(d.hi() - x);
    for &p in f.singular_points() {
        if p != x {
            out = out.min((p - x).abs());
        }
    }
    if !(out > 0.0) {
        return Err(Error::InvalidArgument(format!("no room for a mean around {x} inside {}", d)));
    }
    Ok(out)
}

/// s^order ∫_0^δ e^{-st} (f(x ± t) - base) dt via u = s t, integrated to
/// the absolute tolerance `tol`.
fn mean(
    f: &RealFn,
    x: f64,
    side: Side,
    s: f64,
    delta: f64,
    base: f64,
    scale_by_s: bool,
    tol: f64,
) -> IntegralResult<f64> {
    let sg = side.sign();
    let upper = (s * delta).min(U_MAX);
    let factor = if scale_by_s { s } else { 1.0 };
    let g = move |u: f64| {
        let v = f.eval(x + sg * u / s) - base;
        if v == 0.0 {
            0.0
        } else {
            (-u).exp() * v
        }
    };
    let sign_fn = move |u: f64| f.eval(x + sg * u / s) - base;
    let map = |p: f64| sg * (p - x) * s;
    let cuts: Vec<f64> = f.cut_points().into_iter().map(map).filter(|&u| u > 0.0 && u < upper).collect();
    let singular: Vec<f64> = f.singular_points().iter().map(|&p| map(p)).collect();
    let r = bounded_integrand(&g, &sign_fn, &singular, 0.0, upper, &cuts, tol / factor);
    r.map(|v| v * factor)
}

/// s ∫_0^δ e^{-st} f(x ± t) dt.
pub fn laplace_mean(f: &RealFn, x: f64, side: Side, s: f64, delta: f64) -> Result<IntegralResult<f64>> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidArgument(format!("s must be positive, got {s}")));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument(format!("delta must be positive, got {delta}")));
    }
    let d = f.domain();
    let end = x + side.sign() * delta;
    if !(d.contains(x) && d.contains(end)) {
        return Err(Error::InvalidArgument(format!("mean window around {x} leaves the domain {d}")));
    }
    Ok(mean(f, x, side, s, delta, 0.0, false, 1e-13))
}

struct SideLadder {
    raw: Vec<f64>,
    extrapolated: Vec<f64>,
}

/// Extrapolates the tail of `raw` (entries with s δ large enough) in h = 1/s.
fn extrapolate(s: &[f64], raw: &[f64], delta: f64) -> Vec<f64> {
    let first = s.iter().position(|&v| v * delta >= MIN_S_DELTA).unwrap_or(s.len());
    let mut out: Vec<f64> = raw[..first].to_vec();
    if first < raw.len() {
        let h: Vec<f64> = s[first..].iter().map(|v| 1.0 / v).collect();
        out.extend(richardson(&h, &raw[first..], RICHARDSON_ORDER));
    }
    out
}

fn usable(s: &[f64], delta: f64) -> usize {
    s.iter().filter(|&&v| v * delta >= MIN_S_DELTA).count()
}

/// Runs both sides along the ladder and applies the agreement rules.
fn two_sided(
    spec: &MeanSpec,
    delta: f64,
    mut side_value: impl FnMut(Side, f64) -> IntegralResult<f64>,
) -> Result<LimitResult<f64>> {
    let svals = spec.ladder.values();
    let mut s_used = Vec::new();
    let mut right = SideLadder { raw: Vec::new(), extrapolated: Vec::new() };
    let mut left = SideLadder { raw: Vec::new(), extrapolated: Vec::new() };
    let mut quad_status = Status::Converged;
    for &s in &svals {
        let r = side_value(Side::Right, s);
        let l = side_value(Side::Left, s);
        quad_status = quad_status.worst(r.status).worst(l.status);
        s_used.push(s);
        right.raw.push(r.value);
        left.raw.push(l.value);
        right.extrapolated = extrapolate(&s_used, &right.raw, delta);
        left.extrapolated = extrapolate(&s_used, &left.raw, delta);
        let enough = s_used.len() >= MIN_LADDER && usable(&s_used, delta) >= 3;
        if enough && last_three_agree(&right.extrapolated, spec.tol) && last_three_agree(&left.extrapolated, spec.tol) {
            break;
        }
    }
    let n = s_used.len();
    let usable_n = usable(&s_used, delta);
    let r_ok = usable_n >= 3 && last_three_agree(&right.extrapolated, spec.tol);
    let l_ok = usable_n >= 3 && last_three_agree(&left.extrapolated, spec.tol);
    let rv = right.extrapolated[n - 1];
    let lv = left.extrapolated[n - 1];
    let ladder: Vec<(f64, f64)> =
        (0..n).map(|k| (s_used[k], 0.5 * (right.extrapolated[k] + left.extrapolated[k]))).collect();
    let raw_avg: Vec<f64> = (0..n).map(|k| 0.5 * (right.raw[k] + left.raw[k])).collect();
    let result = LimitResult {
        value: 0.5 * (rv + lv),
        ladder,
        converged: r_ok && l_ok && quad_status.is_converged(),
        rate_estimate: rate_estimate(&raw_avg).or_else(|| rate_estimate(&right.raw)),
    };
    if r_ok && l_ok && (rv - lv).abs() > spec.tol {
        return Err(Error::SidesDisagree { left: lv, right: rv });
    }
    if !result.converged {
        return Err(Error::NoConvergence(Box::new(result.to_scalar())));
    }
    Ok(result)
}

/// Laplace continuity value: the common limit of both one-sided means.
pub fn ld0(f: &RealFn, x: f64, spec: &MeanSpec) -> Result<LimitResult<f64>> {
    check_tol(spec.tol)?;
    let delta = effective_delta(f, x, spec.delta)?;
    let tol = spec.tol * 1e-3;
    two_sided(spec, delta, |side, s| mean(f, x, side, s, delta, 0.0, false, tol))
}

/// Laplace derivative: the common limit of
/// s^2 ∫_0^δ e^{-st} [f(x+t) - f(x)] dt and -s^2 ∫_0^δ e^{-st} [f(x-t) - f(x)] dt.
pub fn ld1(f: &RealFn, x: f64, spec: &MeanSpec) -> Result<LimitResult<f64>> {
    check_tol(spec.tol)?;
    let delta = effective_delta(f, x, spec.delta)?;
    let fx = f.eval(x);
    if !fx.is_finite() {
        return Err(Error::InvalidArgument(format!("{} is not finite at {x}", f.name())));
    }
    let tol = spec.tol * 1e-3;
    two_sided(spec, delta, |side, s| mean(f, x, side, s, delta, fx, true, tol).map(|v| side.sign() * v))
}

/// For each s on the ladder, the sup over `grid_m` + 1 uniform points x in
/// [-δ, δ] of |s ∫_{-δ}^x e^{-s|t|} (f(x0 + t) - f(x0)) dt|, extrapolated
/// in 1/s and clamped at 0. A converged value below `spec.tol` certifies the
/// inversion condition at x0.
pub fn inversion_condition_check(f: &RealFn, x0: f64, spec: &MeanSpec, grid_m: usize) -> Result<LimitResult<f64>> {
    check_tol(spec.tol)?;
    if grid_m == 0 {
        return Err(Error::InvalidArgument("grid_m must be positive".into()));
    }
    let d = f.domain();
    let delta = spec.delta;
    if !(d.contains(x0 - delta) && d.contains(x0 + delta)) {
        return Err(Error::InvalidArgument(format!("[{}, {}] is not inside {d}", x0 - delta, x0 + delta)));
    }
    let fx = f.eval(x0);
    let mut grid: Vec<f64> = (0..=grid_m).map(|i| -delta + 2.0 * delta * i as f64 / grid_m as f64).collect();
    if !grid.contains(&0.0) {
        grid.push(0.0);
        grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    }
    let shifted: Vec<f64> = f.cut_points().iter().map(|p| p - x0).collect();
    let singular: Vec<f64> = f.singular_points().iter().map(|p| p - x0).collect();
    let svals = spec.ladder.values();
    let mut s_used = Vec::new();
    let mut sups = Vec::new();
    let mut extrap = Vec::new();
    let mut status = Status::Converged;
    for &s in &svals {
        let g = move |t: f64| {
            let v = f.eval(x0 + t) - fx;
            if v == 0.0 {
                0.0
            } else {
                s * (-s * t.abs()).exp() * v
            }
        };
        let sign_fn = move |t: f64| f.eval(x0 + t) - fx;
        let cell_tol = spec.tol * 1e-3 / grid.len() as f64;
        let mut acc = 0.0f64;
        let mut sup = 0.0f64;
        for w in grid.windows(2) {
            let r = bounded_integrand(&g, &sign_fn, &singular, w[0], w[1], &shifted, cell_tol);
            status = status.worst(r.status);
            acc += r.value;
            sup = sup.max(acc.abs());
        }
        s_used.push(s);
        sups.push(sup);
        extrap = extrapolate(&s_used, &sups, delta);
        if s_used.len() >= MIN_LADDER && usable(&s_used, delta) >= 3 && last_three_agree(&extrap, spec.tol) {
            break;
        }
    }
    let n = s_used.len();
    let converged = usable(&s_used, delta) >= 3 && last_three_agree(&extrap, spec.tol) && status.is_converged();
    Ok(LimitResult {
        value: extrap[n - 1].max(0.0),
        ladder: s_used.iter().copied().zip(extrap.iter().copied()).collect(),
        converged,
        rate_estimate: rate_estimate(&sups),
    })
}

/// True when a condition check certifies the inversion hypothesis.
pub fn condition_certified(check: &LimitResult<f64>, tol: f64) -> bool {
    check.converged && check.value <= tol
}

/// Builds F(x) = ∫_a^x f from a cumulative table and reports
/// |LD1 F(x) - f(x)| at each x. Points where LD1 F fails (jumps of f) come
/// back as errors.
pub fn ftc_check(f: &RealFn, a: f64, xs: &[f64], spec: &MeanSpec) -> Result<Vec<Result<ResidualReport>>> {
    check_tol(spec.tol)?;
    if xs.is_empty() {
        return Ok(Vec::new());
    }
    let lo = xs.iter().copied().fold(a, f64::min) - spec.delta - 1.0;
    let hi = xs.iter().copied().fold(a, f64::max) + spec.delta + 1.0;
    let policy = TruncationPolicy::for_tol(spec.tol * 1e-3);
    let cum = CumulativeIntegral::new(f, a, lo, hi, 1.0 / 16.0, spec.tol * 1e-4, &policy)?;
    if !cum.status().is_converged() {
        return Err(Error::Integration(format!("primitive of {}: {}", f.name(), cum.status())));
    }
    let big_f = primitive_fn(f, cum);
    Ok(xs.iter().map(|&x| ld1(&big_f, x, spec).map(|lim| ResidualReport::new("ftc", lim.value, f.eval(x)))).collect())
}

fn primitive_fn(f: &RealFn, cum: CumulativeIntegral) -> RealFn {
    let cum = Arc::new(cum);
    RealFn::new(format!("int {}", f.name()), move |x| cum.eval(x)).with_breakpoints(f.cut_points())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn mean_of_constant() {
        let one = RealFn::constant(1.0);
        let m = laplace_mean(&one, 0.0, Side::Right, 10.0, 1.0).unwrap();
        assert!((m.value - (1.0 - (-10f64).exp())).abs() < 1e-13);
    }

    #[test]
    fn mean_of_identity() {
        let id = RealFn::new("t", |t| t);
        let m = laplace_mean(&id, 0.0, Side::Right, 10.0, 1.0).unwrap();
        let exact = (1.0 - 11.0 * (-10f64).exp()) / 10.0;
        assert!((m.value - exact).abs() < 1e-13, "{}", m.value);
    }

    #[test]
    fn ld0_at_continuity_point() {
        let g = corpus::gauss();
        let r = ld0(&g, 0.3, &MeanSpec::default()).unwrap();
        assert!((r.value - (-std::f64::consts::PI * 0.09).exp()).abs() < 1e-6);
        assert!(r.converged);
    }

    #[test]
    fn ld1_of_square() {
        let sq = RealFn::new("sq", |t| t * t);
        let r = ld1(&sq, 1.0, &MeanSpec::default()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-6, "{}", r.value);
    }

    #[test]
    fn sign_sides_disagree() {
        match ld0(&corpus::sign(), 0.0, &MeanSpec::default()) {
            Err(Error::SidesDisagree { left, right }) => {
                assert!((left + 1.0).abs() < 1e-6 && (right - 1.0).abs() < 1e-6);
            }
            other => panic!("{other:?}"),
        }
        match ld1(&corpus::abs(), 0.0, &MeanSpec::default()) {
            Err(Error::SidesDisagree { left, right }) => {
                assert!((left + 1.0).abs() < 1e-6 && (right - 1.0).abs() < 1e-6);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn condition_at_jump_and_continuity_point() {
        let spec = MeanSpec::default().with_tol(1e-4);
        let ok = inversion_condition_check(&corpus::gauss(), 0.0, &spec, 64).unwrap();
        assert!(condition_certified(&ok, 1e-4), "{ok:?}");
        let bad = inversion_condition_check(&corpus::sign(), 0.0, &spec, 64).unwrap();
        assert!(!condition_certified(&bad, 1e-4));
        assert!(bad.value > 0.5);
    }
}
