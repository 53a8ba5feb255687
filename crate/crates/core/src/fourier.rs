//! Fourier transform f^(y) = ∫ f(x) e^{-2 pi i y x} dx over the improper
//! integral machinery, its identity checks, and inversion through Gaussian
//! summability.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extrapolation::{last_three_agree, rate_estimate, richardson};
use crate::function::{translate, ExtendedInterval, RealFn, TailClass};
use crate::laplace_means::{condition_certified, inversion_condition_check, MeanSpec};
use crate::quadrature::{
    bounded_kernel, check_tol, complex_over, integrate_bounded, oscillatory_with, tail_kernel, TruncationPolicy,
};
use crate::types::{IntegralResult, LadderConfig, LadderDirection, LimitResult, ResidualReport, Status};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Grid points of the inversion condition check.
const CONDITION_GRID: usize = 64;

/// Smallest λ a sampled spectrum is built for by default.
pub const DEFAULT_LAMBDA_FLOOR: f64 = 0.02;

/// Which existence statement covers a transform evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Hypothesis {
    /// Locally integrable with Lebesgue integrable tails.
    LebesgueTails,
    /// Integrable on the line and of bounded variation near ±inf.
    BoundedVariationTails,
    /// y = 0: the transform is the improper integral of f itself.
    ZeroFrequency,
}

impl Hypothesis {
    pub fn as_str(&self) -> &'static str {
        match self {
            Hypothesis::LebesgueTails => "lebesgue-tails",
            Hypothesis::BoundedVariationTails => "bounded-variation-tails",
            Hypothesis::ZeroFrequency => "zero-frequency",
        }
    }
}

/// The existence statement that applies to f at frequency y, judged from
/// the tail class. Oscillating non-integrable tails are covered only at
/// y = 0.
pub fn existence_hypothesis(f: &RealFn, y: f64) -> Result<Hypothesis> {
    if !f.domain().contains_interval(&f.support().unwrap_or_else(ExtendedInterval::real_line)) {
        return Err(Error::HypothesisViolation(format!("{} is not defined on the whole line", f.name())));
    }
    match f.tail_class() {
        TailClass::CompactSupport | TailClass::AbsolutelyIntegrable => Ok(Hypothesis::LebesgueTails),
        TailClass::BoundedVariationTail => Ok(Hypothesis::BoundedVariationTails),
        TailClass::OscillatoryDecaying if y == 0.0 => Ok(Hypothesis::ZeroFrequency),
        TailClass::OscillatoryDecaying => Err(Error::HypothesisViolation(format!(
            "{} has oscillating tails that are neither integrable nor of bounded variation; \
             its transform is only covered at y = 0",
            f.name()
        ))),
    }
}

fn check_freq(y: f64) -> Result<()> {
    if y.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("frequency must be finite, got {y}")))
    }
}

/// f^(y). Bounded-variation tails at y != 0 with a declared derivative are
/// integrated by parts against e^{-2 pi i y x} / (-2 pi i y); everything
/// else goes through the oscillatory integral over the line.
pub fn fourier_transform(f: &RealFn, y: f64, tol: f64, policy: &TruncationPolicy) -> Result<IntegralResult<Complex64>> {
    check_freq(y)?;
    check_tol(tol)?;
    let hyp = existence_hypothesis(f, y)?;
    if hyp == Hypothesis::BoundedVariationTails && y != 0.0 && f.derivative().is_some() {
        return bv_by_parts(f, y, tol, policy);
    }
    oscillatory_with(f, y, ExtendedInterval::real_line(), tol, policy)
}

fn scale(r: IntegralResult<Complex64>, c: Complex64) -> IntegralResult<Complex64> {
    IntegralResult { value: r.value * c, abs_error_estimate: r.abs_error_estimate * c.norm(), ..r }
}

fn bv_by_parts(f: &RealFn, y: f64, tol: f64, policy: &TruncationPolicy) -> Result<IntegralResult<Complex64>> {
    let d = f.derivative().expect("checked by caller");
    let cuts = f.cut_points();
    let lo = cuts.iter().copied().fold(0.0, f64::min) - 1.0;
    let hi = cuts.iter().copied().fold(0.0, f64::max) + 1.0;
    for far in [lo - 1e6, hi + 1e6] {
        if f.eval(far).abs() > tol {
            return Err(Error::HypothesisViolation(format!("{} does not vanish at infinity", f.name())));
        }
    }
    // E(x) = e^{-2 pi i y x} / (-2 pi i y), so that E' is the kernel
    let e = |x: f64| Complex64::from_polar(1.0, -2.0 * PI * y * x) / (-2.0 * PI * y * I);
    let inv = 1.0 / (2.0 * PI * y * I);
    let middle = bounded_kernel(f, y, lo, hi, tol / 3.0);
    let right = scale(tail_kernel(d, y, hi, tol / 3.0, policy), inv);
    let left = scale(tail_kernel(&d.reflected(), -y, -lo, tol / 3.0, policy), inv);
    let boundary = e(lo) * f.eval(lo) - e(hi) * f.eval(hi);
    let r = middle.combine(right).combine(left);
    Ok(IntegralResult { value: r.value + boundary, ..r }.enforce_tolerance(tol))
}

/// A function with the frequencies, tolerance and policy of one spectrum
/// evaluation.
#[derive(Debug, Clone)]
pub struct TransformRequest {
    pub f: RealFn,
    pub frequencies: Vec<f64>,
    pub tol: f64,
    pub policy: TruncationPolicy,
}

impl TransformRequest {
    pub fn new(f: RealFn, frequencies: Vec<f64>, tol: f64) -> Result<Self> {
        check_tol(tol)?;
        if frequencies.iter().any(|y| !y.is_finite()) {
            return Err(Error::InvalidArgument("frequencies must be finite".into()));
        }
        if frequencies.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidArgument("frequencies must be sorted".into()));
        }
        Ok(TransformRequest { f, frequencies, tol, policy: TruncationPolicy::for_tol(tol) })
    }

    pub fn with_policy(mut self, policy: TruncationPolicy) -> Self {
        self.policy = policy;
        self
    }
}

/// One frequency of a spectrum; failures are kept per row.
#[derive(Debug, Clone)]
pub struct SpectrumRow {
    pub y: f64,
    pub hypothesis: Option<Hypothesis>,
    pub result: Result<IntegralResult<Complex64>>,
}

impl SpectrumRow {
    /// The value, NaN when the row failed.
    pub fn value(&self) -> Complex64 {
        self.result.as_ref().map(|r| r.value).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }

    pub fn abs_error(&self) -> f64 {
        self.result.as_ref().map(|r| r.abs_error_estimate).unwrap_or(f64::NAN)
    }

    /// The status label, or the error kind for failed rows.
    pub fn status_label(&self) -> &'static str {
        match &self.result {
            Ok(r) => r.status.as_str(),
            Err(e) => e.kind(),
        }
    }

    pub fn is_converged(&self) -> bool {
        self.result.as_ref().is_ok_and(|r| r.is_converged())
    }
}

/// Rows sorted by frequency.
#[derive(Debug, Clone)]
pub struct SpectrumTable {
    pub rows: Vec<SpectrumRow>,
}

impl SpectrumTable {
    pub fn all_converged(&self) -> bool {
        self.rows.iter().all(SpectrumRow::is_converged)
    }
}

/// The transform at every requested frequency.
pub fn spectrum(req: &TransformRequest) -> SpectrumTable {
    let rows = req
        .frequencies
        .iter()
        .map(|&y| SpectrumRow {
            y,
            hypothesis: existence_hypothesis(&req.f, y).ok(),
            result: fourier_transform(&req.f, y, req.tol, &req.policy),
        })
        .collect();
    SpectrumTable { rows }
}

fn ft_value(f: &RealFn, y: f64, tol: f64, policy: &TruncationPolicy) -> Result<Complex64> {
    let r = fourier_transform(f, y, tol, policy)?;
    if r.is_converged() {
        Ok(r.value)
    } else {
        Err(Error::Integration(format!("transform of {} at {y}: {}", f.name(), r.status)))
    }
}

/// Per frequency y: the transform of τ_ζ f against e^{-2 pi i ζ y} f^(y)
/// ("shift"), and f^(y - η) against the transform of e^{2 pi i η x} f(x)
/// taken through its real and imaginary parts ("modulation").
pub fn shift_modulation_check(f: &RealFn, zeta: f64, eta: f64, ys: &[f64], tol: f64) -> Result<Vec<ResidualReport>> {
    let policy = TruncationPolicy::for_tol(tol);
    let shifted = translate(f, zeta);
    let w = 2.0 * PI * eta;
    let cos_part = f.weighted("cos", move |x| (w * x).cos());
    let sin_part = f.weighted("sin", move |x| (w * x).sin());
    let mut out = Vec::with_capacity(2 * ys.len());
    for &y in ys {
        check_freq(y)?;
        let lhs = ft_value(&shifted, y, tol, &policy)?;
        let rhs = Complex64::from_polar(1.0, -2.0 * PI * zeta * y) * ft_value(f, y, tol, &policy)?;
        out.push(ResidualReport::new("shift", lhs, rhs));
        let lhs = ft_value(f, y - eta, tol, &policy)?;
        let rhs = ft_value(&cos_part, y, tol, &policy)? + I * ft_value(&sin_part, y, tol, &policy)?;
        out.push(ResidualReport::new("modulation", lhs, rhs));
    }
    Ok(out)
}

/// Transform of f' against 2 pi i y f^(y); f' is the declared derivative.
pub fn derivative_rule_check(f: &RealFn, ys: &[f64], tol: f64) -> Result<Vec<ResidualReport>> {
    let d =
        f.derivative().ok_or_else(|| Error::HypothesisViolation(format!("{} has no declared derivative", f.name())))?;
    let policy = TruncationPolicy::for_tol(tol);
    ys.iter()
        .map(|&y| {
            check_freq(y)?;
            let lhs = ft_value(d, y, tol, &policy)?;
            let rhs = 2.0 * PI * y * I * ft_value(f, y, tol, &policy)?;
            Ok(ResidualReport::new("derivative-rule", lhs, rhs))
        })
        .collect()
}

/// A residual together with the bound it is held to.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundedResidual {
    pub report: ResidualReport,
    pub allowed: f64,
    pub pass: bool,
}

/// Central difference of f^ with step h against the transform of
/// -2 pi i x f(x). The allowed residual is max(5 tol, C h^2), with C from a
/// third-difference probe of f^ plus the rounding of the difference.
pub fn multiplication_rule_check(f: &RealFn, ys: &[f64], h: f64, tol: f64) -> Result<Vec<BoundedResidual>> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {h}")));
    }
    if !matches!(f.tail_class(), TailClass::CompactSupport | TailClass::AbsolutelyIntegrable) {
        return Err(Error::HypothesisViolation(format!("x {}(x) is not declared integrable", f.name())));
    }
    let policy = TruncationPolicy::for_tol(tol);
    let xf = f.weighted("x", |x| x);
    ys.iter()
        .map(|&y| {
            check_freq(y)?;
            let at = |t: f64| ft_value(f, t, tol, &policy);
            let (m2, m1, p1, p2) = (at(y - 2.0 * h)?, at(y - h)?, at(y + h)?, at(y + 2.0 * h)?);
            let lhs = (p1 - m1) / (2.0 * h);
            let rhs = -2.0 * PI * I * ft_value(&xf, y, tol, &policy)?;
            let third = (p2 - 2.0 * p1 + 2.0 * m1 - m2) / (2.0 * h * h * h);
            let c = third.norm() / 6.0;
            let allowed = (5.0 * tol).max(2.0 * c * h * h + 4.0 * tol / h);
            let report = ResidualReport::new("multiplication-rule", lhs, rhs);
            let pass = report.abs_residual < allowed;
            Ok(BoundedResidual { report, allowed, pass })
        })
        .collect()
}

/// max(|f^(t)|, |f^(-t)|) along an increasing ladder of t. Converged when
/// the last value is below tol. Requires f integrable and of bounded
/// variation (no singular points, no oscillating tails).
pub fn riemann_lebesgue_check(f: &RealFn, ts: &[f64], tol: f64) -> Result<LimitResult<f64>> {
    if f.tail_class() == TailClass::OscillatoryDecaying || !f.singular_points().is_empty() {
        return Err(Error::HypothesisViolation(format!("{} is not declared of bounded variation", f.name())));
    }
    if ts.is_empty() || ts.iter().any(|t| !(t.is_finite() && *t > 0.0)) || ts.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("t ladder must be positive and increasing".into()));
    }
    let policy = TruncationPolicy::for_tol(tol / 10.0);
    let ladder = ts
        .iter()
        .map(|&t| {
            let a = ft_value(f, t, tol / 10.0, &policy)?.norm();
            let b = ft_value(f, -t, tol / 10.0, &policy)?.norm();
            Ok((t, a.max(b)))
        })
        .collect::<Result<Vec<_>>>()?;
    let vals: Vec<f64> = ladder.iter().map(|p| p.1).collect();
    let value = *vals.last().unwrap();
    Ok(LimitResult { value, converged: value < tol, rate_estimate: rate_estimate(&vals), ladder })
}

/// Running maximum from the end of a ladder: the smallest nonincreasing
/// sequence above it.
pub fn decay_envelope(ladder: &[(f64, f64)]) -> Vec<f64> {
    let mut env: Vec<f64> = ladder.iter().map(|p| p.1).collect();
    for k in (0..env.len().saturating_sub(1)).rev() {
        env[k] = env[k].max(env[k + 1]);
    }
    env
}

/// max over n offsets δ spread over [-radius, radius] of |f^(y0 + δ) - f^(y0)|,
/// as a report with that maximum on the left and 0 on the right.
/// Compactly supported and integrable f may be probed anywhere; bounded
/// variation tails only away from 0.
pub fn continuity_probe(f: &RealFn, y0: f64, radius: f64, n: usize, tol: f64) -> Result<ResidualReport> {
    check_freq(y0)?;
    if !(radius >= 0.0 && radius.is_finite()) || n == 0 {
        return Err(Error::InvalidArgument("radius must be nonnegative and n positive".into()));
    }
    match existence_hypothesis(f, y0)? {
        Hypothesis::LebesgueTails => {}
        Hypothesis::BoundedVariationTails if y0 != 0.0 && radius < y0.abs() => {}
        _ => {
            return Err(Error::HypothesisViolation(format!(
                "continuity of the transform of {} is not covered near {y0}",
                f.name()
            )))
        }
    }
    if radius == 0.0 {
        return Ok(ResidualReport::new("continuity", 0.0, 0.0));
    }
    let policy = TruncationPolicy::for_tol(tol);
    let base = ft_value(f, y0, tol, &policy)?;
    let offsets: Vec<f64> =
        if n == 1 { vec![radius] } else { (0..n).map(|j| radius * (2.0 * j as f64 / (n - 1) as f64 - 1.0)).collect() };
    let mut jump = 0.0f64;
    for d in offsets {
        jump = jump.max((ft_value(f, y0 + d, tol, &policy)? - base).norm());
    }
    Ok(ResidualReport::new("continuity", jump, 0.0))
}

/// [`continuity_probe`] at radius, radius / 10 and radius / 100.
pub fn continuity_ladder(f: &RealFn, y0: f64, radius: f64, n: usize, tol: f64) -> Result<Vec<ResidualReport>> {
    [1.0, 0.1, 0.01].iter().map(|k| continuity_probe(f, y0, radius * k, n, tol)).collect()
}

/// Doublings of the window when integrating over an unbounded support.
const MAX_WINDOW_DOUBLINGS: usize = 12;

/// ∫ a(t) b^(t) dt over the support of a, widening a symmetric window until
/// two successive additions are below tol / 4.
fn weighted_transform_integral(a: &RealFn, b: &RealFn, tol: f64) -> Result<IntegralResult<Complex64>> {
    let inner_tol = tol * 1e-2;
    let policy = TruncationPolicy::for_tol(inner_tol);
    let g = |t: f64| {
        let w = a.eval(t);
        if w == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        match ft_value(b, t, inner_tol, &policy) {
            Ok(v) => v * w,
            Err(_) => Complex64::new(f64::NAN, f64::NAN),
        }
    };
    let cuts = a.cut_points();
    let support = a.support().unwrap_or_else(ExtendedInterval::real_line);
    if support.is_bounded() {
        return Ok(complex_over(&g, support.lo(), support.hi(), &cuts, tol).enforce_tolerance(tol));
    }
    let mut w = 1.0;
    let mut acc = complex_over(&g, -w, w, &cuts, tol / 4.0);
    let mut quiet = 0;
    for _ in 0..MAX_WINDOW_DOUBLINGS {
        let piece =
            complex_over(&g, -2.0 * w, -w, &cuts, tol / 16.0).combine(complex_over(&g, w, 2.0 * w, &cuts, tol / 16.0));
        let small = piece.value.norm() < tol / 4.0;
        acc = acc.combine(piece);
        w *= 2.0;
        quiet = if small { quiet + 1 } else { 0 };
        if quiet >= 2 {
            return Ok(acc.enforce_tolerance(tol));
        }
    }
    Ok(IntegralResult { status: acc.status.worst(Status::MaxWorkExceeded), ..acc })
}

/// ∫ ψ φ^ against ∫ ψ^ φ. φ must be integrable together with its first
/// two moments, which the tail class must guarantee.
pub fn parseval_exchange_check(psi: &RealFn, phi: &RealFn, tol: f64) -> Result<ResidualReport> {
    check_tol(tol)?;
    if !matches!(phi.tail_class(), TailClass::CompactSupport | TailClass::AbsolutelyIntegrable) {
        return Err(Error::HypothesisViolation(format!("{} and its moments are not declared integrable", phi.name())));
    }
    existence_hypothesis(psi, 1.0)?;
    existence_hypothesis(phi, 1.0)?;
    let lhs = weighted_transform_integral(psi, phi, tol)?;
    let rhs = weighted_transform_integral(phi, psi, tol)?;
    for r in [&lhs, &rhs] {
        if !r.is_converged() {
            return Err(Error::Integration(format!("exchange integral: {}", r.status)));
        }
    }
    Ok(ResidualReport::new("parseval-exchange", lhs.value, rhs.value))
}

type SpectrumFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Source of f^ values for inversion: a closed form, or a table of computed
/// transforms that is treated as zero beyond its extent and is accurate for
/// Gaussian factors with λ at or above `min_lambda`.
#[derive(Clone)]
pub struct SpectrumProvider {
    eval: SpectrumFn,
    extent: f64,
    min_lambda: f64,
}

impl std::fmt::Debug for SpectrumProvider {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectrumProvider").field("extent", &self.extent).field("min_lambda", &self.min_lambda).finish()
    }
}

/// Refinement levels of a sampled spectrum.
const MAX_SPECTRUM_LEVELS: usize = 6;

/// Largest extent of a sampled spectrum.
const MAX_SPECTRUM_EXTENT: f64 = 2048.0;

impl SpectrumProvider {
    pub fn closed_form(eval: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        SpectrumProvider { eval: Arc::new(eval), extent: f64::INFINITY, min_lambda: 0.0 }
    }

    pub fn zero() -> Self {
        Self::closed_form(|_| Complex64::new(0.0, 0.0))
    }

    /// The attached closed form when there is one, else a sampled table
    /// built for λ down to [`DEFAULT_LAMBDA_FLOOR`].
    pub fn for_fn(f: &RealFn, tol: f64) -> Result<Self> {
        if f.has_known_transform() {
            let g = f.clone();
            return Ok(Self::closed_form(move |t| g.known_transform_at(t).expect("checked")));
        }
        Self::sampled(f, DEFAULT_LAMBDA_FLOOR, tol)
    }

    /// f^ tabulated on [-T, T] with cubic interpolation. T doubles from 8
    /// until the mass of |f^| e^{-λ^2 π t^2} beyond T, estimated from
    /// samples on [T, 2T], is below tol / 10; the step halves from 1/16
    /// until interpolation at the midpoints is within tol / 10.
    pub fn sampled(f: &RealFn, lambda_floor: f64, tol: f64) -> Result<Self> {
        check_tol(tol)?;
        if !(lambda_floor > 0.0 && lambda_floor.is_finite()) {
            return Err(Error::InvalidArgument(format!("λ floor must be positive, got {lambda_floor}")));
        }
        let inner = tol / 100.0;
        let policy = TruncationPolicy::for_tol(inner);
        let at = |t: f64| ft_value(f, t, inner, &policy);
        let a = lambda_floor * lambda_floor * PI;
        let mut big_t = 8.0;
        loop {
            let mut m = 0.0f64;
            for k in 0..=32 {
                let t = big_t * (1.0 + k as f64 / 32.0);
                m = m.max(at(t)?.norm()).max(at(-t)?.norm());
            }
            let weight_tail = (-a * big_t * big_t).exp() / (2.0 * a * big_t);
            if 2.0 * m * weight_tail < tol / 10.0 {
                break;
            }
            big_t *= 2.0;
            if big_t > MAX_SPECTRUM_EXTENT {
                return Err(Error::Integration(format!(
                    "transform of {} does not decay enough for λ down to {lambda_floor}",
                    f.name()
                )));
            }
        }
        let lo = -big_t;
        let mut n = (2.0 * big_t * 16.0) as usize;
        let mut vals = (0..=n).map(|i| at(lo + 2.0 * big_t * i as f64 / n as f64)).collect::<Result<Vec<_>>>()?;
        for _ in 0..MAX_SPECTRUM_LEVELS {
            let step = 2.0 * big_t / n as f64;
            let mids = (0..n).map(|i| at(lo + step * (i as f64 + 0.5))).collect::<Result<Vec<_>>>()?;
            let err = (0..n)
                .map(|i| (cubic(&vals, lo, step, lo + step * (i as f64 + 0.5)) - mids[i]).norm())
                .fold(0.0, f64::max);
            let mut refined = Vec::with_capacity(2 * n + 1);
            for i in 0..n {
                refined.push(vals[i]);
                refined.push(mids[i]);
            }
            refined.push(vals[n]);
            vals = refined;
            n *= 2;
            if err <= tol / 10.0 {
                let step = 2.0 * big_t / n as f64;
                let hi = big_t;
                let table = Arc::new(vals);
                return Ok(SpectrumProvider {
                    eval: Arc::new(move |t| {
                        if t < lo || t > hi {
                            Complex64::new(0.0, 0.0)
                        } else {
                            cubic(&table, lo, step, t)
                        }
                    }),
                    extent: big_t,
                    min_lambda: lambda_floor,
                });
            }
        }
        Err(Error::Integration(format!("sampled transform of {} did not reach {}", f.name(), tol / 10.0)))
    }

    pub fn at(&self, t: f64) -> Complex64 {
        (self.eval)(t)
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn min_lambda(&self) -> f64 {
        self.min_lambda
    }
}

fn cubic(v: &[Complex64], lo: f64, step: f64, x: f64) -> Complex64 {
    let n = v.len() - 1;
    let t = (x - lo) / step;
    let i = (t.floor() as isize).clamp(1, n as isize - 2) as usize;
    let u = t - i as f64;
    v[i - 1] * (-u * (u - 1.0) * (u - 2.0) / 6.0)
        + v[i] * ((u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0)
        + v[i + 1] * (-(u + 1.0) * u * (u - 2.0) / 2.0)
        + v[i + 2] * ((u + 1.0) * u * (u - 1.0) / 6.0)
}

/// Smallest number of ladder entries before the limit may be declared.
const MIN_INVERSION_LADDER: usize = 4;

/// ∫ e^{-λ^2 π t^2} f^(t) e^{2 pi i x t} dt, cut where the Gaussian factor
/// drops below tol 1e-3 (or at the provider's extent) and split into panels
/// a quarter period long.
pub fn regularized_inverse(provider: &SpectrumProvider, x: f64, lambda: f64, tol: f64) -> IntegralResult<Complex64> {
    let cut = ((1e3 / tol).ln() / PI).sqrt() / lambda;
    let big_t = cut.min(provider.extent());
    let width = 0.25f64.min(0.25 / x.abs());
    let n = (2.0 * big_t / width).ceil().max(1.0) as usize;
    let cuts: Vec<f64> = (1..n).map(|k| -big_t + 2.0 * big_t * k as f64 / n as f64).collect();
    let a = lambda * lambda * PI;
    let g = |t: f64| provider.at(t) * Complex64::from_polar((-a * t * t).exp(), 2.0 * PI * x * t);
    complex_over(&g, -big_t, big_t, &cuts, tol)
}

/// f~(x) as the λ -> 0+ limit of [`regularized_inverse`] along a decreasing
/// ladder, extrapolated by Richardson in λ^2. Ladder entries below the
/// provider's `min_lambda` are skipped. The ladder of the result holds the
/// extrapolated values.
pub fn invert(provider: &SpectrumProvider, x: f64, ladder: &LadderConfig, tol: f64) -> Result<LimitResult<Complex64>> {
    check_tol(tol)?;
    if !x.is_finite() {
        return Err(Error::InvalidArgument(format!("x must be finite, got {x}")));
    }
    if ladder.direction != LadderDirection::Decreasing {
        return Err(Error::InvalidArgument("inversion needs a decreasing λ ladder".into()));
    }
    let lambdas: Vec<f64> = ladder.values().into_iter().filter(|&l| l >= provider.min_lambda()).collect();
    let mut hs = Vec::new();
    let (mut re, mut im) = (Vec::new(), Vec::new());
    let (mut ex_re, mut ex_im) = (Vec::new(), Vec::new());
    let mut status = Status::Converged;
    let mut used = Vec::new();
    for &l in &lambdas {
        let r = regularized_inverse(provider, x, l, tol / 10.0);
        status = status.worst(r.status);
        used.push(l);
        hs.push(l * l);
        re.push(r.value.re);
        im.push(r.value.im);
        ex_re = richardson(&hs, &re, 3);
        ex_im = richardson(&hs, &im, 3);
        if used.len() >= MIN_INVERSION_LADDER && last_three_agree(&ex_re, tol) && last_three_agree(&ex_im, tol) {
            break;
        }
    }
    if used.is_empty() {
        return Err(Error::InvalidArgument("no ladder entry is at or above the provider's λ floor".into()));
    }
    let n = used.len();
    let converged = n >= MIN_INVERSION_LADDER
        && last_three_agree(&ex_re, tol)
        && last_three_agree(&ex_im, tol)
        && status.is_converged();
    let result = LimitResult {
        value: Complex64::new(ex_re[n - 1], ex_im[n - 1]),
        ladder: (0..n).map(|k| (used[k], Complex64::new(ex_re[k], ex_im[k]))).collect(),
        converged,
        rate_estimate: rate_estimate(&re),
    };
    if converged {
        Ok(result)
    } else {
        Err(Error::NoConvergence(Box::new(result.to_scalar())))
    }
}

/// ∫_{-δ}^{δ} λ^{-1} e^{-π t^2 / λ^2} dt, the mass of the summability
/// kernel near the origin.
pub fn gauss_kernel_mass(lambda: f64, delta: f64) -> Result<f64> {
    if !(lambda > 0.0 && delta > 0.0) {
        return Err(Error::InvalidArgument("λ and δ must be positive".into()));
    }
    let k = RealFn::new("kernel", move |t: f64| (-PI * t * t / (lambda * lambda)).exp() / lambda);
    Ok(integrate_bounded(&k, -delta, delta, 1e-13)?.value)
}

/// One point of [`inversion_roundtrip`].
#[derive(Debug, Clone, PartialEq)]
pub struct RoundTripPoint {
    pub x: f64,
    /// Whether the inversion condition was certified at x.
    pub certified: bool,
    /// Extrapolated value of the condition check, when it ran.
    pub condition: Option<f64>,
    /// f~(x) against f(x); `None` for skipped points.
    pub report: Option<ResidualReport>,
}

/// Inverts f^ at every x where the inversion condition is certified and
/// compares with f(x). Other points are skipped.
pub fn inversion_roundtrip(
    f: &RealFn,
    xs: &[f64],
    ladder: &LadderConfig,
    tol: f64,
    mean_spec: &MeanSpec,
) -> Result<Vec<RoundTripPoint>> {
    let provider = SpectrumProvider::for_fn(f, tol)?;
    xs.iter()
        .map(|&x| {
            let cond = inversion_condition_check(f, x, mean_spec, CONDITION_GRID).ok();
            let certified = cond.as_ref().is_some_and(|c| condition_certified(c, mean_spec.tol));
            let report = if certified {
                let v = invert(&provider, x, ladder, tol)?;
                Some(ResidualReport::new("inversion-roundtrip", v.value.re, f.eval(x)))
            } else {
                None
            };
            Ok(RoundTripPoint { x, certified, condition: cond.map(|c| c.value), report })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn ft(f: &RealFn, y: f64, tol: f64) -> IntegralResult<Complex64> {
        fourier_transform(f, y, tol, &TruncationPolicy::for_tol(tol)).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        let r = ft(&corpus::box_fn(), 0.0, 1e-10);
        assert!((r.value - 1.0).norm() < 1e-10);
        let r = ft(&corpus::gauss(), 1.0, 1e-10);
        assert!((r.value - (-PI).exp()).norm() < 1e-10, "{r:?}");
        let r = ft(&corpus::box_fn(), 1.0, 1e-10);
        assert!(r.value.norm() < 1e-10);
    }

    #[test]
    fn oscillating_tails_only_at_zero() {
        let s = corpus::sinc_tail();
        let r = ft(&s, 0.0, 1e-6);
        assert!((r.value.re - PI).abs() < 1e-6, "{r:?}");
        assert!(matches!(
            fourier_transform(&s, 0.1, 1e-6, &TruncationPolicy::default()),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn bounded_variation_tails_by_parts() {
        let l = corpus::lorentz().with_tail_class(TailClass::BoundedVariationTail);
        for y in [0.1, 0.35, -0.6] {
            let r = ft(&l, y, 1e-9);
            let want = PI * (-2.0 * PI * y.abs()).exp();
            assert!(r.is_converged() && (r.value - want).norm() < 1e-8, "{y}: {r:?}");
        }
        let sign = corpus::sign().with_derivative(RealFn::zero());
        assert!(matches!(
            fourier_transform(&sign, 0.5, 1e-6, &TruncationPolicy::default()),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn spectrum_rows_keep_failures() {
        let req = TransformRequest::new(corpus::fresnel(), vec![0.0, 0.5], 1e-6).unwrap();
        let t = spectrum(&req);
        assert_eq!(t.rows[0].hypothesis, Some(Hypothesis::ZeroFrequency));
        assert_eq!(t.rows[1].status_label(), "hypothesis-violation");
        assert!(!t.all_converged());
    }

    #[test]
    fn sampled_spectrum_matches_closed_form() {
        let plain = RealFn::new("g", |x: f64| (-PI * x * x).exp());
        let p = SpectrumProvider::sampled(&plain, 0.05, 1e-8).unwrap();
        for t in [0.0, 0.3, 1.7, -2.2] {
            assert!((p.at(t).re - (-PI * t * t).exp()).abs() < 1e-8, "{t}");
        }
    }

    #[test]
    fn shift_and_modulation() {
        let reps = shift_modulation_check(&corpus::expdecay(), 0.7, 0.3, &[-0.4, 0.0, 1.1], 1e-8).unwrap();
        assert_eq!(reps.len(), 6);
        for r in reps {
            assert!(r.abs_residual < 1e-7, "{r:?}");
        }
    }

    #[test]
    fn derivative_and_multiplication_rules() {
        for r in derivative_rule_check(&corpus::bump(), &[0.0, 0.4, -1.3], 1e-9).unwrap() {
            assert!(r.abs_residual < 1e-8, "{r:?}");
        }
        for r in multiplication_rule_check(&corpus::gauss(), &[0.0, 0.5, 1.2], 1e-3, 1e-10).unwrap() {
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn riemann_lebesgue_decay() {
        let lim = riemann_lebesgue_check(&corpus::box_fn(), &[10.5, 100.5, 1000.5, 10000.5], 1e-3).unwrap();
        assert!(lim.converged, "{lim:?}");
        let env = decay_envelope(&lim.ladder);
        assert!(env.windows(2).all(|w| w[1] <= w[0]));
        assert!(matches!(
            riemann_lebesgue_check(&corpus::hk_spike(), &[10.0], 1e-3),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn continuity_shrinks() {
        let reps = continuity_ladder(&corpus::expdecay(), 0.2, 0.1, 5, 1e-10).unwrap();
        assert!(reps[2].abs_residual < reps[0].abs_residual / 50.0, "{reps:?}");
    }

    #[test]
    fn parseval_exchange() {
        let r = parseval_exchange_check(&corpus::box_fn(), &corpus::gauss(), 1e-7).unwrap();
        assert!(r.abs_residual < 1e-6, "{r:?}");
    }

    #[test]
    fn gaussian_inversion() {
        let p = SpectrumProvider::for_fn(&corpus::gauss(), 1e-8).unwrap();
        let ladder = LadderConfig::new(0.5, 2.0, 8, LadderDirection::Decreasing).unwrap();
        for x in [0.0, 0.4, -1.0] {
            let v = invert(&p, x, &ladder, 1e-7).unwrap();
            assert!((v.value.re - (-PI * x * x).exp()).abs() < 1e-6, "{x}: {v:?}");
        }
    }

    #[test]
    fn box_roundtrip_where_certified() {
        let pts = inversion_roundtrip(
            &corpus::box_fn(),
            &[0.0, 0.25],
            &LadderConfig::new(0.4, 1.0 / 0.7, 12, LadderDirection::Decreasing).unwrap(),
            1e-4,
            &MeanSpec::default(),
        )
        .unwrap();
        for p in pts {
            assert!(p.certified, "{p:?}");
            assert!(p.report.unwrap().abs_residual < 1e-3);
        }
    }

    #[test]
    fn kernel_mass_near_one() {
        assert!(gauss_kernel_mass(0.01, 0.5).unwrap() > 1.0 - 1e-8);
    }
}
