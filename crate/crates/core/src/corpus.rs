//! Named test functions with their metadata and, where known, closed-form
//! transforms and derivative companions.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::function::{ExtendedInterval, RealFn, TailClass};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn interval(lo: f64, hi: f64) -> ExtendedInterval {
    ExtendedInterval::new(lo, hi).expect("valid corpus interval")
}

/// sin(pi y) / (pi y), 1 at 0.
pub fn sinc_pi(y: f64) -> f64 {
    let t = PI * y;
    if t.abs() < 1e-8 {
        1.0 - t * t / 6.0
    } else {
        t.sin() / t
    }
}

/// j_3(z) / z^3 for the spherical Bessel function j_3.
fn j3_over_cube(z: f64) -> f64 {
    let z = z.abs();
    if z < 4.0 {
        // sum_k (-z^2/2)^k / (k! (7 + 2k)!!)
        let q = -0.5 * z * z;
        let mut term = 1.0 / 105.0;
        let mut sum = term;
        for k in 1..40 {
            term *= q / (k as f64 * (7.0 + 2.0 * k as f64));
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        let (s, co) = z.sin_cos();
        let j3 = (15.0 / z.powi(3) - 6.0 / z) * s / z - (15.0 / (z * z) - 1.0) * co / z;
        j3 / z.powi(3)
    }
}

/// x -> e^{-pi x^2}; its transform is y -> e^{-pi y^2}.
pub fn gauss() -> RealFn {
    RealFn::new("gauss", |x: f64| (-PI * x * x).exp())
        .with_transform(|y| c((-PI * y * y).exp()))
        .with_derivative(gauss_prime())
}

/// x -> -2 pi x e^{-pi x^2}.
pub fn gauss_prime() -> RealFn {
    RealFn::new("gauss_prime", |x: f64| -2.0 * PI * x * (-PI * x * x).exp())
        .with_transform(|y| Complex64::new(0.0, 2.0 * PI * y) * (-PI * y * y).exp())
        .with_derivative(RealFn::new("gauss_second", |x: f64| (4.0 * PI * PI * x * x - 2.0 * PI) * (-PI * x * x).exp()))
}

/// Indicator of [-1/2, 1/2], 1 at both endpoints.
pub fn box_fn() -> RealFn {
    RealFn::new("box", |_| 1.0).with_support(interval(-0.5, 0.5)).with_transform(|y| c(sinc_pi(y)))
}

/// sin(x)/x, 1 at 0.
pub fn sinc_tail() -> RealFn {
    let cutoff = 0.5 / PI;
    RealFn::new("sinc_tail", |x: f64| if x == 0.0 { 1.0 } else { x.sin() / x })
        .with_tail_class(TailClass::OscillatoryDecaying)
        .with_transform(move |y| {
            let a = y.abs();
            if a < cutoff {
                c(PI)
            } else if a == cutoff {
                c(0.5 * PI)
            } else {
                c(0.0)
            }
        })
        .with_derivative(sinc_prime())
}

fn sinc_prime_eval(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        -x / 3.0 + x.powi(3) / 30.0
    } else {
        (x * x.cos() - x.sin()) / (x * x)
    }
}

/// (x cos x - sin x) / x^2, 0 at 0.
pub fn sinc_prime() -> RealFn {
    RealFn::new("sinc_prime", sinc_prime_eval).with_tail_class(TailClass::OscillatoryDecaying)
}

/// x -> sin(x^2); transform sqrt(pi) sin(pi/4 - pi^2 y^2).
pub fn fresnel() -> RealFn {
    RealFn::new("fresnel", |x: f64| (x * x).sin())
        .with_tail_class(TailClass::OscillatoryDecaying)
        .with_transform(|y| c(PI.sqrt() * (0.25 * PI - PI * PI * y * y).sin()))
}

/// d/dx [x^2 sin(x^-2)] = 2x sin(x^-2) - (2/x) cos(x^-2) on (0, 1], 0 elsewhere.
pub fn hk_spike() -> RealFn {
    RealFn::new("hk_spike", |x: f64| {
        if x > 0.0 && x <= 1.0 {
            let u = 1.0 / (x * x);
            let (s, co) = u.sin_cos();
            2.0 * x * s - 2.0 / x * co
        } else {
            0.0
        }
    })
    .with_support(interval(0.0, 1.0))
    .with_singular_points(vec![0.0])
}

/// (1 - x^2)^3 on [-1, 1]; transform 96 j_3(w) / w^3 with w = 2 pi y.
pub fn bump() -> RealFn {
    RealFn::new("bump", |x: f64| (1.0 - x * x).powi(3))
        .with_support(interval(-1.0, 1.0))
        .with_transform(|y| c(96.0 * j3_over_cube(2.0 * PI * y)))
        .with_derivative(bump_prime())
}

/// -6x (1 - x^2)^2 on [-1, 1].
pub fn bump_prime() -> RealFn {
    RealFn::new("bump_prime", |x: f64| -6.0 * x * (1.0 - x * x).powi(2))
        .with_support(interval(-1.0, 1.0))
        .with_transform(|y| Complex64::new(0.0, 2.0 * PI * y) * 96.0 * j3_over_cube(2.0 * PI * y))
        .with_derivative(
            RealFn::new("bump_second", |x: f64| -6.0 * (1.0 - x * x) * (1.0 - 5.0 * x * x))
                .with_support(interval(-1.0, 1.0)),
        )
}

/// e^{-x} on [0, inf), 0 elsewhere; transform 1/(1 + 2 pi i y).
pub fn expdecay() -> RealFn {
    RealFn::new("expdecay", |x: f64| (-x).exp())
        .with_support(interval(0.0, f64::INFINITY))
        .with_transform(|y| c(1.0) / Complex64::new(1.0, 2.0 * PI * y))
}

/// 1/(1 + x^2); transform pi e^{-2 pi |y|}.
pub fn lorentz() -> RealFn {
    RealFn::new("lorentz", |x: f64| 1.0 / (1.0 + x * x))
        .with_transform(|y| c(PI * (-2.0 * PI * y.abs()).exp()))
        .with_derivative(RealFn::new("lorentz_prime", |x: f64| -2.0 * x / (1.0 + x * x).powi(2)))
}

/// sin(x)/x restricted to [-20, 20].
pub fn sinc_window() -> RealFn {
    RealFn::new("sinc_window", |x: f64| if x == 0.0 { 1.0 } else { x.sin() / x })
        .with_support(interval(-20.0, 20.0))
        .with_derivative(RealFn::new("sinc_window_prime", sinc_prime_eval).with_support(interval(-20.0, 20.0)))
}

/// sign(x) with sign(0) = 0.
pub fn sign() -> RealFn {
    RealFn::new("sign", |x: f64| {
        if x > 0.0 {
            1.0
        } else if x < 0.0 {
            -1.0
        } else {
            0.0
        }
    })
    .with_breakpoints(vec![0.0])
    .with_tail_class(TailClass::BoundedVariationTail)
}

/// |x| on [-1000, 1000].
pub fn abs() -> RealFn {
    RealFn::new("abs", |x: f64| x.abs())
        .with_domain(interval(-1000.0, 1000.0))
        .with_breakpoints(vec![0.0])
        .with_tail_class(TailClass::BoundedVariationTail)
}

/// x on [-1000, 1000].
pub fn identity() -> RealFn {
    RealFn::new("identity", |x| x)
        .with_domain(interval(-1000.0, 1000.0))
        .with_tail_class(TailClass::BoundedVariationTail)
        .with_derivative(RealFn::constant(1.0).with_domain(interval(-1000.0, 1000.0)))
}

/// Every named function.
pub fn corpus() -> BTreeMap<String, RealFn> {
    let fns = [
        gauss(),
        gauss_prime(),
        box_fn(),
        sinc_tail(),
        fresnel(),
        hk_spike(),
        bump(),
        bump_prime(),
        expdecay(),
        lorentz(),
        sinc_window(),
        sign(),
        abs(),
        identity(),
        RealFn::zero(),
        RealFn::constant(1.0).with_name("one"),
    ];
    fns.into_iter().map(|f| (f.name().to_string(), f)).collect()
}

/// The corpus member called `name`.
pub fn lookup(name: &str) -> Result<RealFn> {
    corpus().remove(name).ok_or_else(|| Error::UnknownFunction(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_values() {
        let cp = corpus();
        assert_eq!(cp["gauss"].eval(0.0), 1.0);
        assert_eq!(cp["box"].eval(0.75), 0.0);
        assert_eq!(cp["box"].eval(0.5), 1.0);
        assert_eq!(cp["sinc_tail"].eval(0.0), 1.0);
        assert_eq!(cp["hk_spike"].eval(-0.5), 0.0);
        assert_eq!(cp["hk_spike"].singular_points(), &[0.0]);
        assert_eq!(cp["expdecay"].eval(-1e-12), 0.0);
        assert_eq!(cp["expdecay"].eval(0.0), 1.0);
    }

    #[test]
    fn tail_classes() {
        let cp = corpus();
        assert_eq!(cp["sinc_tail"].tail_class(), TailClass::OscillatoryDecaying);
        assert_eq!(cp["fresnel"].tail_class(), TailClass::OscillatoryDecaying);
        assert_eq!(cp["box"].tail_class(), TailClass::CompactSupport);
        assert_eq!(cp["bump"].tail_class(), TailClass::CompactSupport);
        assert_eq!(cp["hk_spike"].tail_class(), TailClass::CompactSupport);
        assert_eq!(cp["gauss"].tail_class(), TailClass::AbsolutelyIntegrable);
    }

    #[test]
    fn bump_transform_branches_agree() {
        // series and closed form must meet continuously at z = 4
        let below = j3_over_cube(4.0 - 1e-9);
        let above = j3_over_cube(4.0 + 1e-9);
        assert!((below - above).abs() < 1e-10, "{below} {above}");
        assert!((96.0 * j3_over_cube(0.0) - 32.0 / 35.0).abs() < 1e-15);
    }

    #[test]
    fn derivative_companions_match_finite_differences() {
        for f in [gauss(), gauss_prime(), bump(), bump_prime(), sinc_tail(), lorentz()] {
            let d = f.derivative().unwrap();
            for x in [-0.7, 0.0, 0.3, 0.9] {
                let h = 1e-5;
                let fd = (f.eval(x + h) - f.eval(x - h)) / (2.0 * h);
                assert!((fd - d.eval(x)).abs() < 1e-8, "{} at {x}", f.name());
            }
        }
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(lookup("nope"), Err(Error::UnknownFunction(_))));
    }
}
