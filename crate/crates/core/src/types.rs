//! Result records shared by every module.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Values an integrator can accumulate: real or complex.
pub trait QuadValue:
    Copy
    + Default
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<f64, Output = Self>
    + Send
    + Sync
{
    fn magnitude(&self) -> f64;
    fn finite(&self) -> bool;
    fn zero() -> Self {
        Self::default()
    }
    fn into_scalar(self) -> Scalar;
    /// (real part, imaginary part).
    fn parts(self) -> (f64, f64);
    fn from_parts(re: f64, im: f64) -> Self;
}

impl QuadValue for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
    fn into_scalar(self) -> Scalar {
        Scalar::Real(self)
    }
    fn parts(self) -> (f64, f64) {
        (self, 0.0)
    }
    fn from_parts(re: f64, _im: f64) -> Self {
        re
    }
}

impl QuadValue for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn into_scalar(self) -> Scalar {
        Scalar::Complex(self)
    }
    fn parts(self) -> (f64, f64) {
        (self.re, self.im)
    }
    fn from_parts(re: f64, im: f64) -> Self {
        Complex64::new(re, im)
    }
}

/// A real or complex number as it appears in reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scalar {
    Real(f64),
    Complex(Complex64),
}

impl Scalar {
    pub fn as_complex(&self) -> Complex64 {
        match *self {
            Scalar::Real(r) => Complex64::new(r, 0.0),
            Scalar::Complex(c) => c,
        }
    }

    pub fn abs(&self) -> f64 {
        self.as_complex().norm()
    }

    pub fn re(&self) -> f64 {
        self.as_complex().re
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Real(r) => write!(f, "{r}"),
            Scalar::Complex(c) => write!(f, "{}{:+}i", c.re, c.im),
        }
    }
}

impl From<f64> for Scalar {
    fn from(v: f64) -> Self {
        Scalar::Real(v)
    }
}

impl From<Complex64> for Scalar {
    fn from(v: Complex64) -> Self {
        Scalar::Complex(v)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Scalar::Real(r) => s.serialize_f64(r),
            Scalar::Complex(c) => [c.re, c.im].serialize(s),
        }
    }
}

/// Outcome classification of a single integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Converged,
    Diverged,
    MaxWorkExceeded,
    OscillationUnresolved,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::Diverged => "diverged",
            Status::MaxWorkExceeded => "max-work-exceeded",
            Status::OscillationUnresolved => "oscillation-unresolved",
        }
    }

    pub fn is_converged(&self) -> bool {
        matches!(self, Status::Converged)
    }

    /// The more severe of two statuses.
    pub fn worst(self, other: Status) -> Status {
        fn rank(s: Status) -> u8 {
            match s {
                Status::Converged => 0,
                Status::MaxWorkExceeded => 1,
                Status::OscillationUnresolved => 2,
                Status::Diverged => 3,
            }
        }
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Value, error estimate, status and work count of one integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult<V> {
    pub value: V,
    pub abs_error_estimate: f64,
    pub status: Status,
    pub evaluations: usize,
}

impl<V: QuadValue> IntegralResult<V> {
    pub fn exact(value: V) -> Self {
        IntegralResult { value, abs_error_estimate: 0.0, status: Status::Converged, evaluations: 0 }
    }

    pub fn is_converged(&self) -> bool {
        self.status.is_converged()
    }

    /// Sum of two partial integrals over adjacent pieces.
    pub fn combine(self, other: IntegralResult<V>) -> Self {
        IntegralResult {
            value: self.value + other.value,
            abs_error_estimate: self.abs_error_estimate + other.abs_error_estimate,
            status: self.status.worst(other.status),
            evaluations: self.evaluations + other.evaluations,
        }
    }

    pub fn map<W: QuadValue>(self, f: impl FnOnce(V) -> W) -> IntegralResult<W> {
        IntegralResult {
            value: f(self.value),
            abs_error_estimate: self.abs_error_estimate,
            status: self.status,
            evaluations: self.evaluations,
        }
    }

    /// Downgrades a converged status whose error estimate exceeds `tol`.
    pub(crate) fn enforce_tolerance(mut self, tol: f64) -> Self {
        if self.status.is_converged() && !(self.abs_error_estimate <= tol) {
            self.status = Status::MaxWorkExceeded;
        }
        self
    }
}

impl IntegralResult<f64> {
    /// Joins real and imaginary parts computed separately.
    pub fn into_complex(self, im: IntegralResult<f64>) -> IntegralResult<Complex64> {
        IntegralResult {
            value: Complex64::new(self.value, im.value),
            abs_error_estimate: self.abs_error_estimate.hypot(im.abs_error_estimate),
            status: self.status.worst(im.status),
            evaluations: self.evaluations + im.evaluations,
        }
    }
}

/// Extrapolated limit of a parameterised family.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitResult<V> {
    pub value: V,
    /// (parameter, partial value) in ladder order.
    pub ladder: Vec<(f64, V)>,
    pub converged: bool,
    /// Empirical geometric factor between successive ladder differences.
    pub rate_estimate: Option<f64>,
}

impl<V: QuadValue> LimitResult<V> {
    pub fn to_scalar(&self) -> LimitResult<Scalar> {
        LimitResult {
            value: self.value.into_scalar(),
            ladder: self.ladder.iter().map(|&(p, v)| (p, v.into_scalar())).collect(),
            converged: self.converged,
            rate_estimate: self.rate_estimate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LadderDirection {
    /// s -> infinity
    Increasing,
    /// lambda -> 0+
    Decreasing,
}

/// Geometric parameter ladder `start * ratio^k` (or `start / ratio^k`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderConfig {
    pub start: f64,
    pub ratio: f64,
    pub count: usize,
    pub direction: LadderDirection,
}

impl LadderConfig {
    pub fn new(start: f64, ratio: f64, count: usize, direction: LadderDirection) -> Result<Self> {
        if !(start > 0.0 && start.is_finite()) {
            return Err(Error::InvalidArgument(format!("ladder start must be positive, got {start}")));
        }
        if !(ratio > 1.0 && ratio.is_finite()) {
            return Err(Error::InvalidArgument(format!("ladder ratio must exceed 1, got {ratio}")));
        }
        if count == 0 {
            return Err(Error::InvalidArgument("ladder count must be positive".into()));
        }
        Ok(LadderConfig { start, ratio, count, direction })
    }

    /// s_k = 8 * 2^k, k = 0..14.
    pub fn laplace_default() -> Self {
        LadderConfig { start: 8.0, ratio: 2.0, count: 15, direction: LadderDirection::Increasing }
    }

    /// lambda_k = 0.5 * 0.7^k, k = 0..20.
    pub fn gauss_default() -> Self {
        LadderConfig { start: 0.5, ratio: 1.0 / 0.7, count: 21, direction: LadderDirection::Decreasing }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count)
            .map(|k| match self.direction {
                LadderDirection::Increasing => self.start * self.ratio.powi(k as i32),
                LadderDirection::Decreasing => self.start / self.ratio.powi(k as i32),
            })
            .collect()
    }
}

/// Left side, right side and residual of one identity check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub identity_name: String,
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub abs_residual: f64,
    pub rel_residual: f64,
}

impl ResidualReport {
    pub fn new(identity_name: impl Into<String>, lhs: impl Into<Scalar>, rhs: impl Into<Scalar>) -> Self {
        let lhs = lhs.into();
        let rhs = rhs.into();
        let abs_residual = (lhs.as_complex() - rhs.as_complex()).norm();
        let rel_residual = abs_residual / lhs.abs().max(rhs.abs()).max(1.0);
        ResidualReport { identity_name: identity_name.into(), lhs, rhs, abs_residual, rel_residual }
    }

    /// For inequality reports: true when `lhs <= rhs + slack` (real parts).
    pub fn bound_holds(&self, slack: f64) -> bool {
        self.lhs.re() <= self.rhs.re() + slack
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_is_strictly_monotone() {
        let up = LadderConfig::laplace_default().values();
        assert_eq!(up.len(), 15);
        assert!(up.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(up[0], 8.0);
        assert_eq!(up[14], 8.0 * 16384.0);

        let down = LadderConfig::gauss_default().values();
        assert_eq!(down.len(), 21);
        assert!(down.windows(2).all(|w| w[1] < w[0]));
        assert!((down[20] - 0.5 * 0.7f64.powi(20)).abs() < 1e-15);
    }

    #[test]
    fn ladder_rejects_bad_ratio() {
        assert!(LadderConfig::new(1.0, 1.0, 3, LadderDirection::Increasing).is_err());
        assert!(LadderConfig::new(-1.0, 2.0, 3, LadderDirection::Increasing).is_err());
        assert!(LadderConfig::new(1.0, 2.0, 0, LadderDirection::Increasing).is_err());
    }

    #[test]
    fn residual_report_fields() {
        let r = ResidualReport::new("t", 3.0, 1.0);
        assert_eq!(r.abs_residual, 2.0);
        assert!((r.rel_residual - 2.0 / 3.0).abs() < 1e-15);
        let r = ResidualReport::new("t", 0.1, 0.2);
        assert!((r.rel_residual - 0.1).abs() < 1e-15);
    }

    #[test]
    fn status_worst() {
        assert_eq!(Status::Converged.worst(Status::Diverged), Status::Diverged);
        assert_eq!(Status::OscillationUnresolved.worst(Status::Converged), Status::OscillationUnresolved);
    }
}
