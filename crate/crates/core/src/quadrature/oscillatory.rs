//! Integrals against the kernel e^{-2 pi i y x}.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::bounded::{check_tol, Integrand};
use super::improper::{integrate_improper, split_point, tail, TailMode, TruncationPolicy};
use crate::error::{Error, Result};
use crate::function::{ExtendedInterval, RealFn};
use crate::types::IntegralResult;

fn kernel(f: &RealFn, y: f64) -> impl Fn(f64) -> Complex64 + '_ {
    let w = -2.0 * PI * y;
    move |x: f64| {
        let v = f.eval(x);
        if v == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            let (s, c) = (w * x).sin_cos();
            Complex64::new(v * c, v * s)
        }
    }
}

/// ∫_lo^hi f(x) e^{-2 pi i y x} dx for finite lo < hi, y != 0.
pub(crate) fn bounded_kernel(f: &RealFn, y: f64, lo: f64, hi: f64, tol: f64) -> IntegralResult<Complex64> {
    let g = kernel(f, y);
    let sign = |x: f64| f.eval(x);
    let it = Integrand { g: &g, sign: &sign, singular: f.singular_points(), half_period: Some(0.5 / y.abs()) };
    it.over(lo, hi, &f.cut_points(), tol)
}

/// ∫_a^inf f(x) e^{-2 pi i y x} dx over half-period panels, y != 0.
pub(crate) fn tail_kernel(
    f: &RealFn,
    y: f64,
    a: f64,
    tol: f64,
    policy: &TruncationPolicy,
) -> IntegralResult<Complex64> {
    let g = kernel(f, y);
    let sign = |x: f64| f.eval(x);
    let p = 0.5 / y.abs();
    let it = Integrand { g: &g, sign: &sign, singular: f.singular_points(), half_period: Some(p) };
    tail(&it, a, &f.cut_points(), tol, policy, TailMode::Periodic(p))
}

/// Oscillatory integral with an explicit truncation policy.
pub(crate) fn oscillatory_with(
    f: &RealFn,
    y: f64,
    iv: ExtendedInterval,
    tol: f64,
    policy: &TruncationPolicy,
) -> Result<IntegralResult<Complex64>> {
    if !y.is_finite() {
        return Err(Error::InvalidArgument(format!("frequency must be finite, got {y}")));
    }
    check_tol(tol)?;
    if !f.domain().contains_interval(&iv) {
        return Err(Error::InvalidArgument(format!("{iv} is not inside the domain {} of {}", f.domain(), f.name())));
    }
    if y == 0.0 {
        let r = if iv.is_bounded() {
            super::bounded::integrate_bounded(f, iv.lo(), iv.hi(), tol)?
        } else {
            integrate_improper(f, iv, tol, policy)?
        };
        return Ok(r.into_complex(IntegralResult::exact(0.0)));
    }
    let iv = match f.support() {
        Some(sup) => match iv.intersect(&sup) {
            Some(i) => i,
            None => return Ok(IntegralResult::exact(Complex64::new(0.0, 0.0))),
        },
        None => iv,
    };
    let r = match (iv.lo_finite(), iv.hi_finite()) {
        (true, true) => bounded_kernel(f, y, iv.lo(), iv.hi(), tol),
        (true, false) => tail_kernel(f, y, iv.lo(), tol, policy),
        (false, true) => reflected_tail(f, y, iv.hi(), tol, policy),
        (false, false) => {
            let a = split_point(f);
            let right = tail_kernel(f, y, a, tol / 2.0, policy);
            let left = reflected_tail(f, y, a, tol / 2.0, policy);
            left.combine(right)
        }
    };
    Ok(r.enforce_tolerance(tol))
}

/// ∫_{-inf}^b f(x) e^{-2 pi i y x} dx through x -> -x.
fn reflected_tail(f: &RealFn, y: f64, b: f64, tol: f64, policy: &TruncationPolicy) -> IntegralResult<Complex64> {
    tail_kernel(&f.reflected(), -y, -b, tol, policy)
}

/// ∫_a^b f(x) e^{-2 pi i y x} dx over a possibly unbounded interval.
///
/// At y = 0 this is the plain integral. Bounded ranges longer than a couple of
/// half-periods 1/(2|y|) are pre-split at multiples of the half-period so that
/// each panel sees a bounded phase change; unbounded ranges sum half-period
/// panels and accelerate the real and imaginary partial sums separately.
pub fn oscillatory_integral(f: &RealFn, y: f64, a: f64, b: f64, tol: f64) -> Result<IntegralResult<Complex64>> {
    let iv = ExtendedInterval::new(a, b)?;
    oscillatory_with(f, y, iv, tol, &TruncationPolicy::for_tol(tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_transform_matches_sinc() {
        let bx = RealFn::new("box", |_| 1.0).with_support(ExtendedInterval::new(-0.5, 0.5).unwrap());
        for y in [0.25, 1.5, 7.0, 40.5] {
            let r = oscillatory_integral(&bx, y, f64::NEG_INFINITY, f64::INFINITY, 1e-10).unwrap();
            let exact = (PI * y).sin() / (PI * y);
            assert!(r.is_converged());
            assert!((r.value.re - exact).abs() < 1e-10, "y={y}: {}", r.value);
            assert!(r.value.im.abs() < 1e-10);
        }
    }

    #[test]
    fn exponential_half_line() {
        let e = RealFn::new("exp", |x: f64| (-x).exp()).with_domain(ExtendedInterval::real_line());
        let r = oscillatory_integral(&e, 0.3, 0.0, f64::INFINITY, 1e-9).unwrap();
        let exact = Complex64::new(1.0, 0.0) / Complex64::new(1.0, 2.0 * PI * 0.3);
        assert!(r.is_converged(), "{r:?}");
        assert!((r.value - exact).norm() < 1e-9, "{}", r.value);
    }

    #[test]
    fn lorentzian_transform() {
        let f = RealFn::new("lorentz", |x: f64| 1.0 / (1.0 + x * x));
        let r = oscillatory_integral(&f, 0.4, f64::NEG_INFINITY, f64::INFINITY, 1e-8).unwrap();
        let exact = PI * (-2.0 * PI * 0.4f64).exp();
        assert!(r.is_converged(), "{r:?}");
        assert!((r.value.re - exact).abs() < 1e-8, "{}", r.value);
    }
}
