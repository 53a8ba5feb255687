//! Primitives F(x) = ∫_a^x f evaluated from a table of anchors.

use std::sync::Arc;

use super::bounded::real_over;
use super::improper::{integrate_improper, TruncationPolicy};
use crate::error::{Error, Result};
use crate::function::{ExtendedInterval, RealFn, TailClass};
use crate::types::{IntegralResult, Status};

/// F(x) = ∫_a^x f, with `a` finite or -inf.
///
/// Anchor values F(node) are computed once; a point evaluation adds the
/// integral from the nearest anchor at or below x, so nearby evaluations
/// share their anchor and differences F(x + t) - F(x) stay accurate.
#[derive(Debug, Clone)]
pub struct CumulativeIntegral {
    f: RealFn,
    nodes: Vec<f64>,
    values: Vec<f64>,
    tol: f64,
    status: Status,
    abs_error: f64,
}

impl CumulativeIntegral {
    /// Anchors at spacing `spacing` over [lo, hi] (extended to contain a
    /// finite `a`) plus every cut point of `f` inside.
    pub fn new(
        f: &RealFn,
        a: f64,
        lo: f64,
        hi: f64,
        spacing: f64,
        tol: f64,
        policy: &TruncationPolicy,
    ) -> Result<Self> {
        if !(lo < hi && lo.is_finite() && hi.is_finite() && spacing > 0.0) {
            return Err(Error::InvalidArgument(format!("bad anchor range [{lo}, {hi}] with spacing {spacing}")));
        }
        if a.is_nan() || a == f64::INFINITY {
            return Err(Error::InvalidArgument(format!("bad base point {a}")));
        }
        let (lo, hi) = if a.is_finite() { (lo.min(a), hi.max(a)) } else { (lo, hi) };
        let n = ((hi - lo) / spacing).ceil().max(1.0) as usize;
        let mut nodes: Vec<f64> = (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect();
        nodes.extend(f.cut_points().into_iter().filter(|&c| c > lo && c < hi));
        if a.is_finite() {
            nodes.push(a);
        }
        nodes.sort_by(|x, y| x.partial_cmp(y).unwrap());
        nodes.dedup();
        let piece_tol = tol / (4.0 * nodes.len() as f64);
        let mut values = vec![0.0; nodes.len()];
        let mut status = Status::Converged;
        let mut abs_error = 0.0;
        for j in 1..nodes.len() {
            let r = real_over(f, nodes[j - 1], nodes[j], piece_tol);
            status = status.worst(r.status);
            abs_error += r.abs_error_estimate;
            values[j] = values[j - 1] + r.value;
        }
        let offset = if a.is_finite() {
            let ia = nodes.iter().position(|&x| x == a).expect("base point is a node");
            values[ia]
        } else {
            let iv = ExtendedInterval::new(f64::NEG_INFINITY, nodes[0])?;
            let r = integrate_improper(f, iv, tol / 4.0, policy)?;
            status = status.worst(r.status);
            abs_error += r.abs_error_estimate;
            -r.value
        };
        for v in &mut values {
            *v -= offset;
        }
        Ok(CumulativeIntegral { f: f.clone(), nodes, values, tol, status, abs_error })
    }

    /// Worst status over the anchor integrals.
    pub fn status(&self) -> Status {
        self.status
    }

    pub fn abs_error(&self) -> f64 {
        self.abs_error
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Anchor values F(node).
    pub fn anchor_values(&self) -> &[f64] {
        &self.values
    }

    /// F(x) as a full result.
    pub fn eval_result(&self, x: f64) -> IntegralResult<f64> {
        let j = match self.nodes.binary_search_by(|n| n.partial_cmp(&x).unwrap()) {
            Ok(j) => return IntegralResult::exact(self.values[j]),
            Err(0) => 0,
            Err(j) => j - 1,
        };
        let node = self.nodes[j];
        let tol = self.tol * 1e-3;
        let r = if x > node { real_over(&self.f, node, x, tol) } else { real_over(&self.f, x, node, tol).map(|v| -v) };
        IntegralResult { value: self.values[j] + r.value, ..r }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_result(x).value
    }

    /// ∫_a^inf f continued from the last anchor.
    pub fn limit_at_infinity(&self, policy: &TruncationPolicy) -> Result<IntegralResult<f64>> {
        let last = *self.nodes.last().unwrap();
        let iv = ExtendedInterval::new(last, f64::INFINITY)?;
        let r = integrate_improper(&self.f, iv, self.tol / 4.0, policy)?;
        Ok(IntegralResult { value: self.values[self.values.len() - 1] + r.value, ..r })
    }

    /// The primitive as a function handle. It is continuous; breakpoints of
    /// `f` become its breakpoints.
    pub fn into_fn(self, name: impl Into<String>) -> RealFn {
        let kinks: Vec<f64> = self.f.cut_points();
        let f = self.f.clone();
        let tail =
            if f.support().is_some_and(|s| s.is_bounded()) { TailClass::BoundedVariationTail } else { f.tail_class() };
        let this = Arc::new(self);
        let mut out = RealFn::new(name, move |x| this.eval(x)).with_breakpoints(kinks).with_tail_class(tail);
        out = out.with_derivative(f);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_of_exponential() {
        let f = RealFn::new("exp", |x: f64| x.exp());
        let c = CumulativeIntegral::new(&f, 0.0, -1.0, 2.0, 0.25, 1e-12, &TruncationPolicy::default()).unwrap();
        for x in [-0.9, -0.1, 0.0, 0.33, 1.7] {
            assert!((c.eval(x) - (x.exp() - 1.0)).abs() < 1e-12, "{x}");
        }
    }

    #[test]
    fn primitive_from_minus_infinity() {
        let f = RealFn::new("exp", |x: f64| if x < 0.0 { x.exp() } else { 0.0 }).with_breakpoints(vec![0.0]);
        let c = CumulativeIntegral::new(&f, f64::NEG_INFINITY, -2.0, 2.0, 0.5, 1e-10, &TruncationPolicy::default())
            .unwrap();
        assert!((c.eval(-1.0) - (-1f64).exp()).abs() < 1e-10);
        assert!((c.eval(1.5) - 1.0).abs() < 1e-10);
        let lim = c.limit_at_infinity(&TruncationPolicy::default()).unwrap();
        assert!((lim.value - 1.0).abs() < 1e-10);
    }
}
