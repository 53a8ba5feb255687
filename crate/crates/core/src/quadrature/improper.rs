//! Integrals over unbounded intervals as limits of truncated integrals.

use std::cell::Cell;

use super::bounded::{check_tol, Integrand};
use super::series::{accelerated_panels, SeriesAccel, ZeroMarcher, MAX_EVALUATIONS};
use crate::error::{Error, Result};
use crate::function::{ExtendedInterval, RealFn, TailClass};
use crate::types::{IntegralResult, QuadValue, Status};

/// Tolerance the default policy is tuned for.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Truncation points c_k = a + window_start * window_ratio^k for the Cauchy
/// test on partial integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    pub window_start: f64,
    pub window_ratio: f64,
    pub max_windows: usize,
    pub cauchy_eps: f64,
    pub accelerate: bool,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy::for_tol(DEFAULT_TOL)
    }
}

impl TruncationPolicy {
    pub fn new(
        window_start: f64,
        window_ratio: f64,
        max_windows: usize,
        cauchy_eps: f64,
        accelerate: bool,
    ) -> Result<Self> {
        if !(window_start > 0.0 && window_start.is_finite()) {
            return Err(Error::InvalidArgument(format!("window_start must be positive, got {window_start}")));
        }
        if !(window_ratio > 1.0 && window_ratio.is_finite()) {
            return Err(Error::InvalidArgument(format!("window_ratio must exceed 1, got {window_ratio}")));
        }
        if max_windows == 0 {
            return Err(Error::InvalidArgument("max_windows must be positive".into()));
        }
        if !(cauchy_eps > 0.0 && cauchy_eps.is_finite()) {
            return Err(Error::InvalidArgument(format!("cauchy_eps must be positive, got {cauchy_eps}")));
        }
        Ok(TruncationPolicy { window_start, window_ratio, max_windows, cauchy_eps, accelerate })
    }

    /// Defaults with the Cauchy threshold set to `tol / 4`.
    pub fn for_tol(tol: f64) -> Self {
        TruncationPolicy {
            window_start: 1.0,
            window_ratio: 2.0,
            max_windows: 40,
            cauchy_eps: tol / 4.0,
            accelerate: true,
        }
    }

    pub fn with_accelerate(mut self, accelerate: bool) -> Self {
        self.accelerate = accelerate;
        self
    }

    /// Offsets window_start * window_ratio^k for k = 0..max_windows.
    pub fn truncation_offsets(&self) -> Vec<f64> {
        (0..self.max_windows).map(|k| self.window_start * self.window_ratio.powi(k as i32)).collect()
    }
}

/// How the tail [a, inf) is cut into panels.
pub(crate) enum TailMode {
    /// Geometric windows from the policy.
    Windows,
    /// Half-waves between sign changes of the sign function.
    ZeroAligned,
    /// Panels of a fixed half-period.
    Periodic(f64),
}

/// ∫_a^inf of an integrand described by `it`, splitting at `cuts`.
pub(crate) fn tail<V: QuadValue>(
    it: &Integrand<'_, V>,
    a: f64,
    cuts: &[f64],
    tol: f64,
    policy: &TruncationPolicy,
    mode: TailMode,
) -> IntegralResult<V> {
    match mode {
        TailMode::Windows => windowed_tail(it, a, cuts, tol, policy),
        TailMode::ZeroAligned => {
            let start = a + policy.window_start;
            let base = it.over(a, start, cuts, tol / 8.0);
            let mut marcher = ZeroMarcher::new(it.sign, start, 1.0, policy.window_start / 16.0, None);
            let Some(z0) = marcher.next_zero() else {
                return windowed_tail(it, a, cuts, tol, policy);
            };
            let base = base.combine(it.over(start, z0, cuts, tol / 8.0));
            let mut prev = z0;
            let tol_panel = tol / 256.0;
            let mut r = accelerated_panels(
                base,
                || {
                    let z = marcher.next_zero()?;
                    let out = (prev, z);
                    prev = z;
                    Some(out)
                },
                |u, v, _| it.over(u, v, cuts, tol_panel),
                tol / 2.0,
            );
            r.evaluations += marcher.evaluations;
            r.enforce_tolerance(tol)
        }
        TailMode::Periodic(p) => {
            let first = ((a / p).floor() + 1.0) * p;
            let first = if first - a < 0.25 * p { first + p } else { first };
            let base = it.over(a, first, cuts, tol / 8.0);
            let mut k = 0.0;
            let tol_panel = tol / 256.0;
            accelerated_panels(
                base,
                || {
                    let lo = first + k * p;
                    k += 1.0;
                    Some((lo, first + k * p))
                },
                |u, v, _| it.over(u, v, cuts, tol_panel),
                tol,
            )
        }
    }
}

/// Geometric windows with the Cauchy test on raw partial sums and, when the
/// policy asks for it, epsilon acceleration of the partial sums.
fn windowed_tail<V: QuadValue>(
    it: &Integrand<'_, V>,
    a: f64,
    cuts: &[f64],
    tol: f64,
    policy: &TruncationPolicy,
) -> IntegralResult<V> {
    let offsets = policy.truncation_offsets();
    let tol_w = tol / 16.0;
    let mut prev_c = a;
    let mut sums: Vec<V> = Vec::new();
    let mut incs: Vec<V> = Vec::new();
    let mut accel = SeriesAccel::default();
    let mut quad_err = 0.0;
    let mut evaluations = 0usize;
    let mut status = Status::Converged;
    let mut sum = V::zero();
    let mut best = (V::zero(), f64::INFINITY);
    let over_budget = Cell::new(false);
    for off in offsets {
        let c = a + off;
        if !(c > prev_c) {
            break;
        }
        let r = it.over(prev_c, c, cuts, tol_w);
        prev_c = c;
        evaluations += r.evaluations;
        quad_err += r.abs_error_estimate;
        status = status.worst(r.status);
        if !r.value.finite() || r.status == Status::Diverged {
            return IntegralResult {
                value: sum,
                abs_error_estimate: f64::INFINITY,
                status: Status::Diverged,
                evaluations,
            };
        }
        sum = sum + r.value;
        incs.push(r.value);
        sums.push(sum);
        let acc = accel.push(sum);
        if acc.1 < best.1 {
            best = acc;
        }
        if evaluations > MAX_EVALUATIONS {
            over_budget.set(true);
            break;
        }
        let n = sums.len();
        if sum.magnitude() > 1e15 || diverging(&incs, policy.cauchy_eps) {
            return IntegralResult {
                value: sum,
                abs_error_estimate: f64::INFINITY,
                status: Status::Diverged,
                evaluations,
            };
        }
        if n < 4 {
            continue;
        }
        let cauchy = (sums[n - 1] - sums[n - 2]).magnitude() <= policy.cauchy_eps
            && (sums[n - 1] - sums[n - 3]).magnitude() <= policy.cauchy_eps
            && (sums[n - 2] - sums[n - 3]).magnitude() <= policy.cauchy_eps;
        if policy.accelerate {
            let (est, err) = acc;
            if err + quad_err <= tol && (cauchy || err <= policy.cauchy_eps) {
                return IntegralResult {
                    value: est,
                    abs_error_estimate: err + quad_err,
                    status: if status.is_converged() { Status::Converged } else { status },
                    evaluations,
                }
                .enforce_tolerance(tol);
            }
        } else if cauchy {
            let last = incs[n - 1].magnitude() + incs[n - 2].magnitude();
            return IntegralResult {
                value: sum,
                abs_error_estimate: last + quad_err,
                status: if status.is_converged() { Status::Converged } else { status },
                evaluations,
            }
            .enforce_tolerance(tol);
        }
    }
    let alternating = incs.windows(2).rev().take(6).any(|w| {
        let (a, b) = (w[0].parts().0, w[1].parts().0);
        a * b < 0.0
    });
    let final_status = if over_budget.get() {
        Status::MaxWorkExceeded
    } else if alternating {
        Status::OscillationUnresolved
    } else {
        status.worst(Status::MaxWorkExceeded)
    };
    let value = if policy.accelerate && best.0.finite() { best.0 } else { sum };
    IntegralResult { value, abs_error_estimate: best.1.min(f64::MAX) + quad_err, status: final_status, evaluations }
}

/// Window increments of one sign that do not shrink.
fn diverging<V: QuadValue>(incs: &[V], eps: f64) -> bool {
    let n = incs.len();
    if n < 6 {
        return false;
    }
    let w = &incs[n - 5..];
    let same_sign = w.windows(2).all(|p| p[0].parts().0 * p[1].parts().0 > 0.0);
    let not_shrinking = w.windows(2).all(|p| p[1].magnitude() >= 0.95 * p[0].magnitude());
    same_sign && not_shrinking && w[4].magnitude() > eps
}

/// Split point for two-sided integrals: 0, moved off singular points.
pub(crate) fn split_point(f: &RealFn) -> f64 {
    let mut a = 0.0;
    while f.is_singular_at(a) {
        a += 0.5;
    }
    a
}

fn check_unbounded(f: &RealFn, iv: &ExtendedInterval) -> Result<()> {
    if iv.is_bounded() {
        return Err(Error::InvalidArgument(format!("improper integral needs an infinite endpoint, got {iv}")));
    }
    if !f.domain().contains_interval(iv) {
        return Err(Error::InvalidArgument(format!("{iv} is not inside the domain {} of {}", f.domain(), f.name())));
    }
    Ok(())
}

fn real_tail(f: &RealFn, a: f64, tol: f64, policy: &TruncationPolicy) -> IntegralResult<f64> {
    let eval = |x: f64| f.eval(x);
    let it = Integrand { g: &eval, sign: &eval, singular: f.singular_points(), half_period: None };
    let mode = if f.tail_class() == TailClass::OscillatoryDecaying && policy.accelerate {
        TailMode::ZeroAligned
    } else {
        TailMode::Windows
    };
    tail(&it, a, &f.cut_points(), tol, policy, mode)
}

/// ∫ f over an interval with at least one infinite endpoint, as the limit of
/// bounded integrals along the policy's truncation points.
///
/// Conditionally convergent oscillating tails are summed over half-waves
/// between consecutive sign changes of `f` and accelerated with the epsilon
/// algorithm. Two-sided integrals split at 0 unless the support says
/// otherwise.
pub fn integrate_improper(
    f: &RealFn,
    iv: ExtendedInterval,
    tol: f64,
    policy: &TruncationPolicy,
) -> Result<IntegralResult<f64>> {
    check_unbounded(f, &iv)?;
    check_tol(tol)?;
    let iv = match f.support() {
        Some(sup) => match iv.intersect(&sup) {
            Some(i) => i,
            None => return Ok(IntegralResult::exact(0.0)),
        },
        None => iv,
    };
    if iv.is_bounded() {
        return Ok(super::bounded::real_over(f, iv.lo(), iv.hi(), tol));
    }
    let r = match (iv.lo_finite(), iv.hi_finite()) {
        (true, false) => real_tail(f, iv.lo(), tol, policy),
        (false, true) => real_tail(&f.reflected(), -iv.hi(), tol, policy),
        _ => {
            let a = split_point(f);
            let right = real_tail(f, a, tol / 2.0, policy);
            let left = real_tail(&f.reflected(), -a, tol / 2.0, policy);
            left.combine(right)
        }
    };
    Ok(r.enforce_tolerance(tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn half_line() -> ExtendedInterval {
        ExtendedInterval::new(0.0, f64::INFINITY).unwrap()
    }

    #[test]
    fn policy_offsets_increase() {
        let p = TruncationPolicy::default();
        let o = p.truncation_offsets();
        assert_eq!(o.len(), 40);
        assert!(o.windows(2).all(|w| w[1] > w[0]));
        assert!(TruncationPolicy::new(1.0, 1.0, 4, 1e-9, true).is_err());
    }

    #[test]
    fn lorentzian_line() {
        let f = RealFn::new("lorentz", |x: f64| 1.0 / (1.0 + x * x));
        let r = integrate_improper(&f, ExtendedInterval::real_line(), 1e-9, &TruncationPolicy::for_tol(1e-9)).unwrap();
        assert!(r.is_converged(), "{r:?}");
        assert!((r.value - PI).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn sine_over_x_half_line() {
        let f = RealFn::new("sinc", |x: f64| if x == 0.0 { 1.0 } else { x.sin() / x })
            .with_tail_class(TailClass::OscillatoryDecaying);
        let r = integrate_improper(&f, half_line(), 1e-8, &TruncationPolicy::for_tol(1e-8)).unwrap();
        assert!(r.is_converged(), "{r:?}");
        assert!((r.value - PI / 2.0).abs() < 1e-8, "{}", r.value);
    }

    #[test]
    fn unaccelerated_oscillation_is_reported() {
        let f = RealFn::new("sinc", |x: f64| if x == 0.0 { 1.0 } else { x.sin() / x })
            .with_tail_class(TailClass::OscillatoryDecaying);
        let p = TruncationPolicy { max_windows: 16, ..TruncationPolicy::for_tol(1e-8) }.with_accelerate(false);
        let r = integrate_improper(&f, half_line(), 1e-8, &p).unwrap();
        assert!(!r.is_converged());
    }

    #[test]
    fn divergent_tail() {
        let f = RealFn::new("recip", |x: f64| 1.0 / (1.0 + x));
        let r = integrate_improper(&f, half_line(), 1e-8, &TruncationPolicy::default()).unwrap();
        assert_eq!(r.status, Status::Diverged);
    }

    #[test]
    fn requires_infinite_endpoint() {
        let f = RealFn::new("one", |_| 1.0);
        let iv = ExtendedInterval::new(0.0, 1.0).unwrap();
        assert!(integrate_improper(&f, iv, 1e-8, &TruncationPolicy::default()).is_err());
    }
}
