//! Total variation, the Alexiewicz norm and the Hölder-type bound.

use std::sync::Arc;

use super::bounded::{check_bounded, integrate_bounded};
use super::cumulative::CumulativeIntegral;
use super::improper::{integrate_improper, TruncationPolicy};
use crate::error::{Error, Result};
use crate::function::{ExtendedInterval, RealFn};
use crate::types::{IntegralResult, ResidualReport, Status};

/// Refinement levels of `total_variation` (each doubles the partition).
const MAX_REFINEMENTS: usize = 16;

/// Σ |g(x_{i+1}) - g(x_i)| over a partition of [a, b] that starts with `n`
/// uniform points plus the cut points of `g` and is bisected until the sum
/// changes by less than 0.1%. The sums are nondecreasing along the
/// refinement. When the cap is hit the last sum is reported with
/// `MaxWorkExceeded`.
pub fn total_variation(g: &RealFn, a: f64, b: f64, n: usize) -> Result<IntegralResult<f64>> {
    check_bounded(g, a, b)?;
    if n < 2 {
        return Err(Error::InvalidArgument(format!("partition needs at least 2 points, got {n}")));
    }
    if g.singular_points().iter().any(|&p| p >= a && p <= b) {
        return Err(Error::InvalidArgument(format!("{} has a singular point in [{a}, {b}]", g.name())));
    }
    let mut xs: Vec<f64> = (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect();
    xs.extend(g.cut_points().into_iter().filter(|&c| c > a && c < b));
    xs.sort_by(|p, q| p.partial_cmp(q).unwrap());
    xs.dedup();
    let mut vals: Vec<f64> = xs.iter().map(|&x| g.eval(x)).collect();
    let mut evaluations = vals.len();
    let sum = |v: &[f64]| v.windows(2).map(|w| (w[1] - w[0]).abs()).sum::<f64>();
    let mut prev = sum(&vals);
    let mut quiet = 0;
    for _ in 0..MAX_REFINEMENTS {
        let mut nx = Vec::with_capacity(2 * xs.len());
        let mut nv = Vec::with_capacity(2 * xs.len());
        for i in 0..xs.len() - 1 {
            nx.push(xs[i]);
            nv.push(vals[i]);
            let m = 0.5 * (xs[i] + xs[i + 1]);
            nx.push(m);
            nv.push(g.eval(m));
            evaluations += 1;
        }
        nx.push(xs[xs.len() - 1]);
        nv.push(vals[vals.len() - 1]);
        xs = nx;
        vals = nv;
        let cur = sum(&vals);
        let change = (cur - prev).max(0.0);
        quiet = if change <= 1e-3 * cur { quiet + 1 } else { 0 };
        if quiet >= 2 || cur == 0.0 {
            return Ok(IntegralResult {
                value: cur,
                abs_error_estimate: change,
                status: Status::Converged,
                evaluations,
            });
        }
        prev = cur;
    }
    Ok(IntegralResult { value: prev, abs_error_estimate: f64::NAN, status: Status::MaxWorkExceeded, evaluations })
}

/// max over the grid of |∫_{-inf}^x f|, built from one improper integral up
/// to the first grid point and bounded integrals between grid points.
pub fn alexiewicz_norm(f: &RealFn, policy: &TruncationPolicy, grid: &[f64]) -> Result<IntegralResult<f64>> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("grid must be nonempty".into()));
    }
    if grid.windows(2).any(|w| !(w[0] <= w[1])) || grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("grid must be sorted and finite".into()));
    }
    let tol = 4.0 * policy.cauchy_eps;
    let x0 = grid[0];
    let head = match f.support() {
        Some(s) if s.lo_finite() && s.lo() >= x0 => IntegralResult::exact(0.0),
        _ => integrate_improper(f, ExtendedInterval::new(f64::NEG_INFINITY, x0)?, tol, policy)?,
    };
    let mut acc = head;
    let mut best = head.value.abs();
    for w in grid.windows(2) {
        if w[1] > w[0] {
            acc = acc.combine(integrate_bounded(f, w[0], w[1], tol / grid.len() as f64)?);
            best = best.max(acc.value.abs());
        }
    }
    Ok(IntegralResult { value: best, ..acc })
}

/// sup over [c, d] ⊆ [a, b] of |∫_c^d f|, i.e. max F - min F for the
/// primitive F(x) = ∫_a^x f sampled on `m` + 1 uniform points and the cut
/// points of `f`.
pub fn alexiewicz_norm_on(f: &RealFn, a: f64, b: f64, m: usize, tol: f64) -> Result<IntegralResult<f64>> {
    check_bounded(f, a, b)?;
    let m = m.max(1);
    let mut xs: Vec<f64> = (0..=m).map(|i| a + (b - a) * i as f64 / m as f64).collect();
    xs.extend(f.cut_points().into_iter().filter(|&c| c > a && c < b));
    xs.sort_by(|p, q| p.partial_cmp(q).unwrap());
    xs.dedup();
    let mut acc = IntegralResult::exact(0.0);
    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    for w in xs.windows(2) {
        acc = acc.combine(integrate_bounded(f, w[0], w[1], tol / xs.len() as f64)?);
        lo = lo.min(acc.value);
        hi = hi.max(acc.value);
    }
    Ok(IntegralResult { value: hi - lo, ..acc })
}

fn require_converged(what: &str, r: &IntegralResult<f64>) -> Result<()> {
    if r.is_converged() {
        Ok(())
    } else {
        Err(Error::Integration(format!("{what}: {}", r.status)))
    }
}

/// |∫_a^b f G| against (inf |G| + V[G]) ‖f‖ on [a, b] with G(x) = ∫_a^x g.
pub fn holder_bound_check(f: &RealFn, g: &RealFn, a: f64, b: f64) -> Result<ResidualReport> {
    check_bounded(f, a, b)?;
    check_bounded(g, a, b)?;
    let tol = 1e-9;
    let policy = TruncationPolicy::for_tol(tol);
    let cum = Arc::new(CumulativeIntegral::new(g, a, a, b, (b - a) / 64.0, tol, &policy)?);
    if !cum.status().is_converged() {
        return Err(Error::Integration(format!("primitive of {}: {}", g.name(), cum.status())));
    }
    let big_g = {
        let c = Arc::clone(&cum);
        RealFn::new(format!("int {}", g.name()), move |x| c.eval(x)).with_breakpoints(g.cut_points())
    };
    let product = {
        let c = Arc::clone(&cum);
        f.weighted("G", move |x| c.eval(x)).with_breakpoints([f.breakpoints().to_vec(), g.cut_points()].concat())
    };
    let lhs = integrate_bounded(&product, a, b, tol)?;
    require_converged("integral of f G", &lhs)?;
    let inf_g = (0..=512).map(|i| big_g.eval(a + (b - a) * i as f64 / 512.0).abs()).fold(f64::INFINITY, f64::min);
    let var = total_variation(&big_g, a, b, 64)?;
    let norm = alexiewicz_norm_on(f, a, b, 512, tol)?;
    require_converged("Alexiewicz norm", &norm)?;
    Ok(ResidualReport::new("holder-bound", lhs.value.abs(), (inf_g + var.value) * norm.value))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variation_of_monotone_and_constant() {
        let id = RealFn::new("x", |x| x);
        let v = total_variation(&id, 0.0, 1.0, 8).unwrap();
        assert!((v.value - 1.0).abs() < 1e-12);
        let c = RealFn::constant(5.0);
        assert_eq!(total_variation(&c, 0.0, 1.0, 8).unwrap().value, 0.0);
    }

    #[test]
    fn variation_of_sine() {
        let s = RealFn::new("sin", |x: f64| x.sin());
        let v = total_variation(&s, 0.0, 2.0 * std::f64::consts::PI, 16).unwrap();
        assert!((v.value - 4.0).abs() < 4e-3, "{v:?}");
    }

    #[test]
    fn alexiewicz_of_exponential() {
        let e = RealFn::new("e", |x: f64| (-x).exp()).with_support(ExtendedInterval::new(0.0, f64::INFINITY).unwrap());
        let r = alexiewicz_norm(&e, &TruncationPolicy::default(), &[-1.0, 0.0, 1.0, 10.0, 100.0]).unwrap();
        assert!((r.value - 1.0).abs() < 1e-8);
    }
}
