//! Iterated integrals of two-variable kernels, the order-of-integration
//! residual, and differentiation under the integral sign.

use std::sync::atomic::{AtomicU8, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::function::{ExtendedInterval, RealFn};
use crate::laplace_means::{ld1, MeanSpec};
use crate::quadrature::integrate_bounded;
use crate::types::{IntegralResult, ResidualReport, Status};

type Eval2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A kernel k(x, y) on a product of intervals, optionally with ∂k/∂x.
///
/// Isolated singular points are stored as parallel coordinate lists. Outer
/// integrals put a collar around each coordinate; an inner slice gets one
/// only when it passes through the point.
#[derive(Clone)]
pub struct Kernel2D {
    eval: Eval2,
    dx_eval: Option<Eval2>,
    x_domain: ExtendedInterval,
    y_domain: ExtendedInterval,
    singular_x: Vec<f64>,
    singular_y: Vec<f64>,
}

impl std::fmt::Debug for Kernel2D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Kernel2D")
            .field("x_domain", &self.x_domain)
            .field("y_domain", &self.y_domain)
            .field("singular_x", &self.singular_x)
            .field("singular_y", &self.singular_y)
            .field("dx_eval", &self.dx_eval.is_some())
            .finish()
    }
}

impl Kernel2D {
    pub fn new(eval: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Kernel2D {
            eval: Arc::new(eval),
            dx_eval: None,
            x_domain: ExtendedInterval::real_line(),
            y_domain: ExtendedInterval::real_line(),
            singular_x: Vec::new(),
            singular_y: Vec::new(),
        }
    }

    pub fn with_dx(mut self, dx: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.dx_eval = Some(Arc::new(dx));
        self
    }

    pub fn with_domains(mut self, x_domain: ExtendedInterval, y_domain: ExtendedInterval) -> Self {
        self.x_domain = x_domain;
        self.y_domain = y_domain;
        self
    }

    /// Declares a singular point (x, y).
    pub fn with_singular_point(mut self, x: f64, y: f64) -> Self {
        self.singular_x.push(x);
        self.singular_y.push(y);
        self
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        (self.eval)(x, y)
    }

    pub fn dx(&self, x: f64, y: f64) -> Option<f64> {
        self.dx_eval.as_ref().map(|d| d(x, y))
    }

    pub fn x_domain(&self) -> ExtendedInterval {
        self.x_domain
    }

    pub fn y_domain(&self) -> ExtendedInterval {
        self.y_domain
    }

    /// (x, y) -> k(y, x) with the domains exchanged.
    pub fn transposed(&self) -> Kernel2D {
        let e = Arc::clone(&self.eval);
        Kernel2D {
            eval: Arc::new(move |x, y| e(y, x)),
            dx_eval: None,
            x_domain: self.y_domain,
            y_domain: self.x_domain,
            singular_x: self.singular_y.clone(),
            singular_y: self.singular_x.clone(),
        }
    }

    /// Largest |∂k/∂x - central difference| over `points` with step `h`.
    pub fn dx_mismatch(&self, points: &[(f64, f64)], h: f64) -> Option<f64> {
        let d = self.dx_eval.as_ref()?;
        Some(
            points
                .iter()
                .map(|&(x, y)| (d(x, y) - (self.eval(x + h, y) - self.eval(x - h, y)) / (2.0 * h)).abs())
                .fold(0.0, f64::max),
        )
    }
}

fn status_code(s: Status) -> u8 {
    match s {
        Status::Converged => 0,
        Status::MaxWorkExceeded => 1,
        Status::OscillationUnresolved => 2,
        Status::Diverged => 3,
    }
}

fn code_status(c: u8) -> Status {
    match c {
        0 => Status::Converged,
        1 => Status::MaxWorkExceeded,
        2 => Status::OscillationUnresolved,
        _ => Status::Diverged,
    }
}

fn check_rect(iv: (f64, f64), domain: ExtendedInterval, axis: &str) -> Result<()> {
    let (lo, hi) = iv;
    if !(lo < hi && lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidArgument(format!("{axis} range must be finite with lo < hi, got [{lo}, {hi}]")));
    }
    if !(domain.contains(lo) && domain.contains(hi)) {
        return Err(Error::InvalidArgument(format!("{axis} range [{lo}, {hi}] is not inside {domain}")));
    }
    Ok(())
}

/// ∫_outer ∫_inner k with the inner variable chosen by `inner_is_x`.
fn nested(k: &Kernel2D, xr: (f64, f64), yr: (f64, f64), inner_is_x: bool, tol: f64) -> Result<IntegralResult<f64>> {
    let (inner_r, outer_r) = if inner_is_x { (xr, yr) } else { (yr, xr) };
    let (inner_sing, outer_sing) = if inner_is_x {
        (k.singular_x.clone(), k.singular_y.clone())
    } else {
        (k.singular_y.clone(), k.singular_x.clone())
    };
    let pairs: Vec<(f64, f64)> = inner_sing.iter().copied().zip(outer_sing.iter().copied()).collect();
    let worst = Arc::new(AtomicU8::new(0));
    let inner_evals = Arc::new(std::sync::atomic::AtomicUsize::new(0));
    let kk = k.clone();
    let w = Arc::clone(&worst);
    let ie = Arc::clone(&inner_evals);
    let tol_inner = tol / 10.0;
    let outer_fn = RealFn::new("inner", move |o: f64| {
        let e = Arc::clone(&kk.eval);
        let on_slice = pairs.iter().filter(|p| p.1 == o).map(|p| p.0).collect();
        let inner = RealFn::new("slice", move |i: f64| if inner_is_x { e(i, o) } else { e(o, i) })
            .with_singular_points(on_slice);
        match integrate_bounded(&inner, inner_r.0, inner_r.1, tol_inner) {
            Ok(r) => {
                w.fetch_max(status_code(r.status), Ordering::Relaxed);
                ie.fetch_add(r.evaluations, Ordering::Relaxed);
                r.value
            }
            Err(_) => {
                w.fetch_max(3, Ordering::Relaxed);
                f64::NAN
            }
        }
    })
    .with_singular_points(outer_sing);
    let r = integrate_bounded(&outer_fn, outer_r.0, outer_r.1, tol)?;
    let status = r.status.worst(code_status(worst.load(Ordering::Relaxed)));
    Ok(IntegralResult { status, evaluations: inner_evals.load(Ordering::Relaxed), ..r })
}

/// (I1, I2) with I1 = ∫_y ∫_x k dx dy and I2 = ∫_x ∫_y k dy dx. Inner
/// integrals run at tol / 10.
pub fn iterated_integrals(
    k: &Kernel2D,
    xrect: (f64, f64),
    yrect: (f64, f64),
    tol: f64,
) -> Result<(IntegralResult<f64>, IntegralResult<f64>)> {
    check_rect(xrect, k.x_domain, "x")?;
    check_rect(yrect, k.y_domain, "y")?;
    let i1 = nested(k, xrect, yrect, true, tol)?;
    let i2 = nested(k, xrect, yrect, false, tol)?;
    Ok((i1, i2))
}

/// |I1 - I2|: near zero certifies that the order of integration may be
/// exchanged on the rectangle.
pub fn fubini_residual(k: &Kernel2D, xrect: (f64, f64), yrect: (f64, f64), tol: f64) -> Result<ResidualReport> {
    let (i1, i2) = iterated_integrals(k, xrect, yrect, tol)?;
    for r in [&i1, &i2] {
        if r.status == Status::Diverged {
            return Err(Error::Integration(format!("iterated integral diverged: {}", r.status)));
        }
    }
    Ok(ResidualReport::new("fubini", i1.value, i2.value))
}

/// LD1 of x -> ∫_yrect k(x, y) dy at `x` against ∫_yrect ∂k/∂x(x, y) dy.
pub fn diff_under_integral(
    k: &Kernel2D,
    x: f64,
    yrect: (f64, f64),
    spec: &MeanSpec,
    tol: f64,
) -> Result<ResidualReport> {
    check_rect(yrect, k.y_domain, "y")?;
    let dx = k.dx_eval.clone().ok_or_else(|| Error::InvalidArgument("kernel has no x-derivative".into()))?;
    let kk = k.clone();
    let sing: Vec<(f64, f64)> = k.singular_x.iter().copied().zip(k.singular_y.iter().copied()).collect();
    let big_f = RealFn::new("int k dy", move |xv: f64| {
        let e = Arc::clone(&kk.eval);
        let on_slice = sing.iter().filter(|p| p.0 == xv).map(|p| p.1).collect();
        let slice = RealFn::new("slice", move |y| e(xv, y)).with_singular_points(on_slice);
        integrate_bounded(&slice, yrect.0, yrect.1, 1e-13).map(|r| r.value).unwrap_or(f64::NAN)
    })
    .with_domain(k.x_domain);
    let lhs = ld1(&big_f, x, spec)?;
    let on_slice = k.singular_x.iter().zip(&k.singular_y).filter(|p| *p.0 == x).map(|p| *p.1).collect();
    let d_slice = RealFn::new("dk/dx", move |y| dx(x, y)).with_singular_points(on_slice);
    let rhs = integrate_bounded(&d_slice, yrect.0, yrect.1, tol)?;
    if !rhs.is_converged() {
        return Err(Error::Integration(format!("integral of dk/dx: {}", rhs.status)));
    }
    Ok(ResidualReport::new("diff-under-integral", lhs.value, rhs.value))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separable_product() {
        let k = Kernel2D::new(|x, y| x * y);
        let (a, b) = iterated_integrals(&k, (0.0, 1.0), (0.0, 1.0), 1e-10).unwrap();
        assert!((a.value - 0.25).abs() < 1e-12 && (b.value - 0.25).abs() < 1e-12);
    }

    #[test]
    fn transposition_swaps_orders() {
        let k = Kernel2D::new(|x, y| (x * x + 2.0 * y).exp() * y.cos());
        let r = fubini_residual(&k, (0.0, 1.0), (-1.0, 2.0), 1e-10).unwrap();
        let t = fubini_residual(&k.transposed(), (-1.0, 2.0), (0.0, 1.0), 1e-10).unwrap();
        assert!((r.abs_residual - t.abs_residual).abs() < 1e-10);
        assert!(r.abs_residual < 1e-8);
    }

    #[test]
    fn x_derivative_of_product() {
        let k = Kernel2D::new(|x, y| x * y).with_dx(|_, y| y);
        let r = diff_under_integral(&k, 1.0, (0.0, 1.0), &MeanSpec::default(), 1e-10).unwrap();
        assert!((r.rhs.re() - 0.5).abs() < 1e-12);
        assert!(r.abs_residual < 1e-6, "{r:?}");
    }

    #[test]
    fn classical_kernel_fails_interchange() {
        let k = Kernel2D::new(|x, y| (x * x - y * y) / (x * x + y * y).powi(2)).with_singular_point(0.0, 0.0);
        let (a, b) = iterated_integrals(&k, (0.0, 1.0), (0.0, 1.0), 1e-9).unwrap();
        let q = std::f64::consts::FRAC_PI_4;
        assert!((a.value + q).abs() < 1e-6, "{a:?}");
        assert!((b.value - q).abs() < 1e-6, "{b:?}");
        let r = fubini_residual(&k, (0.0, 1.0), (0.0, 1.0), 1e-9).unwrap();
        assert!((r.abs_residual - 2.0 * q).abs() < 1e-6);
    }

    #[test]
    fn gaussian_transform_kernel() {
        use std::f64::consts::PI;
        let k = Kernel2D::new(|x: f64, y: f64| (-PI * x * x).exp() * (2.0 * PI * x * y).cos());
        let (a, b) = iterated_integrals(&k, (-4.0, 4.0), (0.0, 1.0), 1e-10).unwrap();
        // erf(sqrt(pi)) / 2
        let want = 0.493_905_558_907_598_6;
        assert!((a.value - want).abs() < 1e-9 && (b.value - want).abs() < 1e-9, "{a:?} {b:?}");
    }

    #[test]
    fn gaussian_cosine_derivative() {
        use std::f64::consts::PI;
        let k = Kernel2D::new(|x: f64, y: f64| (-PI * x * x).exp() * y.cos())
            .with_dx(|x: f64, y: f64| -2.0 * PI * x * (-PI * x * x).exp() * y.cos());
        let r = diff_under_integral(&k, 0.5, (0.0, 1.0), &MeanSpec::default(), 1e-10).unwrap();
        let want = -PI * (-PI / 4.0).exp() * 1f64.sin();
        assert!((r.rhs.re() - want).abs() < 1e-10);
        assert!(r.abs_residual < 1e-6, "{r:?}");
    }
}
