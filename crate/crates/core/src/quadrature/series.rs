//! Accelerated sums of panel integrals: half-wave panels between sign
//! changes, half-period panels of a complex exponential, and the zero search
//! that places them.

use crate::extrapolation::WynnEpsilon;
use crate::types::{IntegralResult, QuadValue, Status};

/// Upper bound on integrand evaluations for one top-level integral.
pub(crate) const MAX_EVALUATIONS: usize = 20_000_000;

/// Maximum number of panels summed before giving up.
pub(crate) const MAX_PANELS: usize = 600;

/// Epsilon acceleration applied to real and imaginary parts separately.
#[derive(Debug, Default)]
pub(crate) struct SeriesAccel {
    re: WynnEpsilon,
    im: WynnEpsilon,
}

impl SeriesAccel {
    pub fn push<V: QuadValue>(&mut self, s: V) -> (V, f64) {
        let (r, i) = s.parts();
        let (er, xr) = self.re.push(r);
        let (ei, xi) = self.im.push(i);
        (V::from_parts(er, ei), xr.max(xi))
    }
}

fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Marches from a known point in direction `dir` and locates successive sign
/// changes of `h`. When `limit` is set (a singular point) the march never
/// reaches it.
pub(crate) struct ZeroMarcher<'a> {
    h: &'a dyn Fn(f64) -> f64,
    dir: f64,
    limit: Option<f64>,
    pos: f64,
    step: f64,
    at_zero: bool,
    last_gap: Option<f64>,
    pub evaluations: usize,
}

impl<'a> ZeroMarcher<'a> {
    pub fn new(h: &'a dyn Fn(f64) -> f64, start: f64, dir: f64, initial_step: f64, limit: Option<f64>) -> Self {
        ZeroMarcher { h, dir, limit, pos: start, step: initial_step, at_zero: false, last_gap: None, evaluations: 0 }
    }

    fn clamp_at(&self, x: f64, step: f64) -> Option<f64> {
        match self.limit {
            Some(s) => {
                let dist = (x - s).abs();
                if dist <= 64.0 * f64::EPSILON * s.abs() || dist < 1e-300 {
                    None
                } else {
                    Some(step.min(dist / 16.0))
                }
            }
            None => Some(step),
        }
    }

    /// The next sign change beyond the current position, or `None` when no
    /// change is found within the step budget or the limit is reached.
    pub fn next_zero(&mut self) -> Option<f64> {
        let mut step = self.last_gap.map_or(self.step, |g| g / 8.0);
        let first = self.clamp_at(self.pos, step)?;
        let mut x = self.pos + self.dir * first * 0.25;
        let mut ref_sign = sign((self.h)(x));
        self.evaluations += 1;
        for steps in 1..=4000usize {
            if steps % 64 == 0 {
                step *= 2.0;
            }
            let nx = x + self.dir * self.clamp_at(x, step)?;
            let sv = sign((self.h)(nx));
            self.evaluations += 1;
            if ref_sign == 0 {
                ref_sign = sv;
            } else if sv != 0 && sv != ref_sign {
                let z = self.bisect(x, nx, ref_sign);
                if self.at_zero {
                    self.last_gap = Some((z - self.pos).abs());
                }
                self.at_zero = true;
                self.pos = z;
                return Some(z);
            }
            x = nx;
        }
        None
    }

    fn bisect(&mut self, mut lo: f64, mut hi: f64, lo_sign: i8) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            let s = sign((self.h)(mid));
            self.evaluations += 1;
            if s == 0 {
                return mid;
            }
            if s == lo_sign {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Sums `base` plus the integrals over consecutive panels produced by
/// `next_panel`, accelerating the partial sums until the extrapolation error
/// drops below `tol`.
///
/// `panel` integrates one panel and returns its result.
pub(crate) fn accelerated_panels<V: QuadValue>(
    base: IntegralResult<V>,
    mut next_panel: impl FnMut() -> Option<(f64, f64)>,
    mut panel: impl FnMut(f64, f64, usize) -> IntegralResult<V>,
    tol: f64,
) -> IntegralResult<V> {
    let mut accel = SeriesAccel::default();
    let mut sum = base.value;
    let mut quad_err = base.abs_error_estimate;
    let mut evaluations = base.evaluations;
    let mut status = base.status;
    let mut estimate = sum;
    let mut acc_err = f64::INFINITY;
    accel.push(sum);
    let mut panels = 0usize;
    let mut exhausted = false;
    while panels < MAX_PANELS {
        let Some((lo, hi)) = next_panel() else {
            exhausted = true;
            break;
        };
        panels += 1;
        let remaining = MAX_EVALUATIONS.saturating_sub(evaluations);
        if remaining == 0 {
            break;
        }
        let r = panel(lo, hi, remaining);
        evaluations += r.evaluations;
        quad_err += r.abs_error_estimate;
        status = status.worst(r.status);
        if r.status == Status::Diverged {
            break;
        }
        sum = sum + r.value;
        let (e, err) = accel.push(sum);
        estimate = e;
        acc_err = err;
        if panels >= 6 && acc_err + quad_err <= tol {
            return IntegralResult {
                value: estimate,
                abs_error_estimate: acc_err + quad_err,
                status: if status.is_converged() { Status::Converged } else { status },
                evaluations,
            }
            .enforce_tolerance(tol);
        }
    }
    let final_status = if status == Status::Diverged {
        Status::Diverged
    } else if exhausted || panels >= MAX_PANELS {
        Status::OscillationUnresolved
    } else {
        Status::MaxWorkExceeded
    };
    let value = if estimate.finite() { estimate } else { sum };
    IntegralResult { value, abs_error_estimate: acc_err + quad_err, status: final_status, evaluations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn marcher_finds_sine_zeros() {
        let h = |x: f64| x.sin();
        let mut m = ZeroMarcher::new(&h, 0.5, 1.0, 0.1, None);
        let pi = std::f64::consts::PI;
        for k in 1..6 {
            let z = m.next_zero().unwrap();
            assert!((z - k as f64 * pi).abs() < 1e-12, "{z}");
        }
    }

    #[test]
    fn marcher_approaches_limit_without_crossing() {
        let h = |x: f64| (1.0 / x).sin();
        let mut m = ZeroMarcher::new(&h, 0.3, -1.0, 0.01, Some(0.0));
        let mut last = 0.3;
        for _ in 0..20 {
            let z = m.next_zero().unwrap();
            assert!(z > 0.0 && z < last);
            let k = (1.0 / z / std::f64::consts::PI).round();
            assert!((1.0 / z - k * std::f64::consts::PI).abs() < 1e-6);
            last = z;
        }
    }
}
