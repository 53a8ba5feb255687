//! Bounded-interval integration: splitting at cut points, half-period
//! panelling, and collars around singular endpoints.

use std::cell::Cell;

use num_complex::Complex64;

use super::kronrod::{adaptive, EVALS_PER_RULE};
use super::series::{accelerated_panels, ZeroMarcher, MAX_EVALUATIONS};
use crate::error::{Error, Result};
use crate::function::RealFn;
use crate::types::{IntegralResult, QuadValue, Status};

/// Segment budget of a single adaptive run.
const MAX_SEGMENTS: usize = 40_000;

/// Largest number of half-period panels laid out up front.
const MAX_PERIOD_PANELS: usize = 20_000;

/// An integrand together with the real function whose sign changes place
/// collar panels, and the points that need a collar.
pub(crate) struct Integrand<'a, V> {
    pub g: &'a dyn Fn(f64) -> V,
    pub sign: &'a dyn Fn(f64) -> f64,
    pub singular: &'a [f64],
    /// Half-period of an oscillating factor, when present.
    pub half_period: Option<f64>,
}

impl<'a, V: QuadValue> Integrand<'a, V> {
    fn is_singular(&self, x: f64) -> bool {
        self.singular.contains(&x)
    }

    fn segments(&self, lo: f64, hi: f64) -> Vec<(f64, f64)> {
        match self.half_period {
            Some(p) if (hi - lo) > 2.0 * p && ((hi - lo) / p) < MAX_PERIOD_PANELS as f64 => {
                let mut out = Vec::new();
                let mut k = (lo / p).floor() + 1.0;
                let mut prev = lo;
                while k * p < hi {
                    let x = k * p;
                    if x > prev {
                        out.push((prev, x));
                        prev = x;
                    }
                    k += 1.0;
                }
                out.push((prev, hi));
                out
            }
            _ => vec![(lo, hi)],
        }
    }

    /// Adaptive integration over [lo, hi] with no singular endpoint.
    pub fn plain(&self, lo: f64, hi: f64, tol: f64, budget: usize) -> IntegralResult<V> {
        let segs = self.segments(lo, hi);
        let max_segments = (budget / (2 * EVALS_PER_RULE)).clamp(segs.len() + 1, MAX_SEGMENTS.max(segs.len() * 4));
        let r = adaptive(self.g, &segs, tol, max_segments);
        IntegralResult { value: r.value, abs_error_estimate: r.error, status: r.status, evaluations: r.evaluations }
    }

    /// Integral over [lo, hi] split at `cuts`, with collars at singular
    /// endpoints of each piece.
    pub fn over(&self, lo: f64, hi: f64, cuts: &[f64], tol: f64) -> IntegralResult<V> {
        let mut pts = vec![lo];
        pts.extend(cuts.iter().copied().filter(|&c| c > lo && c < hi));
        pts.push(hi);
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        let mut pieces: Vec<(f64, f64)> = Vec::new();
        for w in pts.windows(2) {
            let (p, q) = (w[0], w[1]);
            if self.is_singular(p) && self.is_singular(q) {
                let m = 0.5 * (p + q);
                pieces.push((p, m));
                pieces.push((m, q));
            } else {
                pieces.push((p, q));
            }
        }
        let piece_tol = tol / pieces.len() as f64;
        let mut total = IntegralResult::exact(V::zero());
        for (p, q) in pieces {
            let budget = MAX_EVALUATIONS.saturating_sub(total.evaluations);
            let r = if self.is_singular(p) {
                self.collar(p, q, piece_tol, budget)
            } else if self.is_singular(q) {
                self.collar(q, p, piece_tol, budget)
            } else {
                self.plain(p, q, piece_tol, budget)
            };
            total = total.combine(r);
        }
        total.enforce_tolerance(tol)
    }

    /// Integral over the interval between the singular point `s` and `e`,
    /// as the limit of integrals over [c, e] when c tends to `s`.
    fn collar(&self, s: f64, e: f64, tol: f64, budget: usize) -> IntegralResult<V> {
        let c0 = s + 0.5 * (e - s);
        if self.oscillates_near(s, c0) {
            self.collar_zero_aligned(s, e, c0, tol, budget)
        } else {
            self.collar_geometric(s, e, c0, tol, budget)
        }
    }

    fn oscillates_near(&self, s: f64, c0: f64) -> bool {
        let mut changes = 0;
        let mut prev = 0.0;
        for j in 0..=80 {
            let x = s + (c0 - s) * 2f64.powf(-(j as f64) / 4.0);
            let v = (self.sign)(x);
            if v != 0.0 && prev != 0.0 && (v > 0.0) != (prev > 0.0) {
                changes += 1;
            }
            if v != 0.0 {
                prev = v;
            }
        }
        changes >= 4
    }

    fn span(&self, u: f64, v: f64, tol: f64, budget: usize) -> IntegralResult<V> {
        self.plain(u.min(v), u.max(v), tol, budget)
    }

    /// Ladder c_k = s + (c0 - s) 2^-k with epsilon acceleration of the
    /// partial integrals.
    fn collar_geometric(&self, s: f64, e: f64, c0: f64, tol: f64, budget: usize) -> IntegralResult<V> {
        let base = self.span(c0, e, tol / 4.0, budget);
        let diverged = Cell::new(false);
        let mut c_prev = c0;
        let mut k = 0;
        let mut incs: Vec<f64> = Vec::new();
        let tol_inc = tol / 64.0;
        let r = accelerated_panels(
            base,
            || {
                k += 1;
                let c = s + (c0 - s) * 0.5f64.powi(k);
                if diverged.get() || k > 200 || (c - s).abs() <= 8.0 * f64::EPSILON * s.abs().max(1e-300) {
                    return None;
                }
                let out = (c, c_prev);
                c_prev = c;
                Some(out)
            },
            |u, v, remaining| {
                let r = self.span(u, v, tol_inc, remaining);
                let m = r.value.magnitude();
                incs.push(m);
                let n = incs.len();
                if !m.is_finite() || (n >= 5 && m > tol && incs[n - 4..].windows(2).all(|w| w[1] >= 0.95 * w[0])) {
                    diverged.set(true);
                }
                r
            },
            tol,
        );
        if diverged.get() {
            return IntegralResult { status: Status::Diverged, ..r };
        }
        r
    }

    /// Half-wave panels between consecutive sign changes of the sign
    /// function approaching `s`.
    fn collar_zero_aligned(&self, s: f64, e: f64, c0: f64, tol: f64, budget: usize) -> IntegralResult<V> {
        let dir = if s < e { -1.0 } else { 1.0 };
        let mut marcher = ZeroMarcher::new(self.sign, c0, dir, (c0 - s).abs() / 256.0, Some(s));
        let Some(z0) = marcher.next_zero() else {
            return self.collar_geometric(s, e, c0, tol, budget);
        };
        let base = self.span(z0, e, tol / 4.0, budget);
        let mut prev = z0;
        let tol_panel = tol / 256.0;
        let mut r = accelerated_panels(
            base,
            || {
                let z = marcher.next_zero()?;
                let out = (z.min(prev), z.max(prev));
                prev = z;
                Some(out)
            },
            |u, v, remaining| self.span(u, v, tol_panel, remaining),
            tol,
        );
        r.evaluations += marcher.evaluations;
        r
    }
}

/// Checks `a < b`, both finite, and `[a, b]` inside the domain of `f`.
pub(crate) fn check_bounded(f: &RealFn, a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument(format!("bounded integral needs finite limits, got [{a}, {b}]")));
    }
    if !(a < b) {
        return Err(Error::InvalidArgument(format!("integration limits must satisfy a < b, got [{a}, {b}]")));
    }
    let d = f.domain();
    if !(d.contains(a) && d.contains(b)) {
        return Err(Error::InvalidArgument(format!("[{a}, {b}] is not inside the domain {d} of {}", f.name())));
    }
    Ok(())
}

/// ∫_a^b f over a bounded interval.
///
/// The interval is clipped to the support of `f` and split at every singular
/// point and breakpoint. Pieces ending at a singular point are computed as
/// the limit of integrals over shrinking collars, accelerated with the
/// epsilon algorithm; when `f` oscillates into the singular point the collar
/// panels follow its sign changes.
pub fn integrate_bounded(f: &RealFn, a: f64, b: f64, tol: f64) -> Result<IntegralResult<f64>> {
    check_bounded(f, a, b)?;
    check_tol(tol)?;
    let (lo, hi) = match f.support() {
        Some(sup) => (a.max(sup.lo()), b.min(sup.hi())),
        None => (a, b),
    };
    if !(lo < hi) {
        return Ok(IntegralResult::exact(0.0));
    }
    Ok(real_over(f, lo, hi, tol))
}

/// Bounded integral of `f` over [lo, hi] (lo < hi, no checks).
pub(crate) fn real_over(f: &RealFn, lo: f64, hi: f64, tol: f64) -> IntegralResult<f64> {
    let eval = |x: f64| f.eval(x);
    let integrand = Integrand { g: &eval, sign: &eval, singular: f.singular_points(), half_period: None };
    integrand.over(lo, hi, &f.cut_points(), tol)
}

/// ∫_lo^hi g for a real integrand with explicit sign function, singular
/// points and cut points.
pub(crate) fn bounded_integrand(
    g: &dyn Fn(f64) -> f64,
    sign: &dyn Fn(f64) -> f64,
    singular: &[f64],
    lo: f64,
    hi: f64,
    cuts: &[f64],
    tol: f64,
) -> IntegralResult<f64> {
    let it = Integrand { g, sign, singular, half_period: None };
    it.over(lo, hi, cuts, tol)
}

/// ∫_lo^hi of a smooth complex integrand, split at `cuts`.
pub(crate) fn complex_over(
    g: &dyn Fn(f64) -> Complex64,
    lo: f64,
    hi: f64,
    cuts: &[f64],
    tol: f64,
) -> IntegralResult<Complex64> {
    let sign = |x: f64| g(x).re;
    let it = Integrand { g, sign: &sign, singular: &[], half_period: None };
    it.over(lo, hi, cuts, tol)
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("tolerance must be positive and finite, got {tol}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::ExtendedInterval;

    #[test]
    fn inverse_sqrt_singularity() {
        let f = RealFn::new("rsqrt", |x: f64| if x > 0.0 { 1.0 / x.sqrt() } else { 0.0 })
            .with_domain(ExtendedInterval::new(0.0, 1.0).unwrap())
            .with_singular_points(vec![0.0]);
        let r = integrate_bounded(&f, 0.0, 1.0, 1e-10).unwrap();
        assert!(r.is_converged(), "{r:?}");
        assert!((r.value - 2.0).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn log_singularity_inside() {
        let f = RealFn::new("log", |x: f64| (x - 0.5).abs().ln()).with_singular_points(vec![0.5]);
        let r = integrate_bounded(&f, 0.0, 1.0, 1e-9).unwrap();
        // 2 * (0.5 ln 0.5 - 0.5)
        let exact = 0.5f64.ln() - 1.0;
        assert!((r.value - exact).abs() < 1e-8, "{}", r.value);
    }

    #[test]
    fn non_integrable_singularity_diverges() {
        let f = RealFn::new("recip", |x: f64| 1.0 / x).with_singular_points(vec![0.0]);
        let r = integrate_bounded(&f, 0.0, 1.0, 1e-8).unwrap();
        assert_eq!(r.status, Status::Diverged);
    }

    #[test]
    fn oscillating_into_singularity() {
        // d/dx [x^2 sin(1/x^2)]
        let f = RealFn::new("spike", |x: f64| {
            if x > 0.0 {
                2.0 * x * (x.powi(-2)).sin() - 2.0 / x * (x.powi(-2)).cos()
            } else {
                0.0
            }
        })
        .with_singular_points(vec![0.0]);
        let r = integrate_bounded(&f, 0.0, 1.0, 1e-8).unwrap();
        assert!(r.is_converged(), "{r:?}");
        assert!((r.value - 1f64.sin()).abs() < 1e-8, "{}", r.value);
    }

    #[test]
    fn rejects_bad_limits() {
        let f = RealFn::new("one", |_| 1.0);
        assert!(integrate_bounded(&f, 1.0, 0.0, 1e-8).is_err());
        assert!(integrate_bounded(&f, 0.0, f64::INFINITY, 1e-8).is_err());
        assert!(integrate_bounded(&f, 0.0, 1.0, 0.0).is_err());
    }
}
