//! Function handles with the metadata the integrators rely on.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A closed interval of the extended real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedInterval {
    lo: f64,
    hi: f64,
}

impl ExtendedInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || !(lo < hi) {
            return Err(Error::InvalidArgument(format!("interval requires lo < hi, got [{lo}, {hi}]")));
        }
        if lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Err(Error::InvalidArgument(format!("degenerate infinite interval [{lo}, {hi}]")));
        }
        Ok(ExtendedInterval { lo, hi })
    }

    pub fn real_line() -> Self {
        ExtendedInterval { lo: f64::NEG_INFINITY, hi: f64::INFINITY }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn lo_finite(&self) -> bool {
        self.lo.is_finite()
    }

    pub fn hi_finite(&self) -> bool {
        self.hi.is_finite()
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn contains_interval(&self, other: &ExtendedInterval) -> bool {
        other.lo >= self.lo && other.hi <= self.hi
    }

    pub fn shifted(&self, z: f64) -> Self {
        ExtendedInterval { lo: self.lo + z, hi: self.hi + z }
    }

    pub fn intersect(&self, other: &ExtendedInterval) -> Option<Self> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo < hi).then_some(ExtendedInterval { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

impl fmt::Display for ExtendedInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Declared behaviour of a function at +-infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TailClass {
    /// Lebesgue integrable in a neighbourhood of infinity.
    AbsolutelyIntegrable,
    /// Conditionally convergent oscillating tails (sin x / x, sin x^2).
    OscillatoryDecaying,
    /// Bounded variation outside a compact set.
    BoundedVariationTail,
    CompactSupport,
}

impl TailClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            TailClass::AbsolutelyIntegrable => "absolutely-integrable",
            TailClass::OscillatoryDecaying => "oscillatory-decaying",
            TailClass::BoundedVariationTail => "bounded-variation-tail",
            TailClass::CompactSupport => "compact-support",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "absolutely-integrable" => Ok(TailClass::AbsolutelyIntegrable),
            "oscillatory-decaying" => Ok(TailClass::OscillatoryDecaying),
            "bounded-variation-tail" => Ok(TailClass::BoundedVariationTail),
            "compact-support" => Ok(TailClass::CompactSupport),
            other => Err(Error::Parse(format!("unknown tail class `{other}`"))),
        }
    }
}

type Eval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type Transform = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// A pure real-valued function together with its support, singular points,
/// tail class and (optionally) its derivative and closed-form transform.
///
/// Points where `eval` is not smooth but finite (jumps, kinks) are listed as
/// breakpoints; quadrature splits at them the same way it splits at singular
/// points, but only singular points get the collar treatment.
#[derive(Clone)]
pub struct RealFn {
    name: String,
    eval: Eval,
    domain: ExtendedInterval,
    singular_points: Vec<f64>,
    breakpoints: Vec<f64>,
    support: Option<ExtendedInterval>,
    tail_class: TailClass,
    known_transform: Option<Transform>,
    derivative: Option<Arc<RealFn>>,
}

impl fmt::Debug for RealFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealFn")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("singular_points", &self.singular_points)
            .field("breakpoints", &self.breakpoints)
            .field("support", &self.support)
            .field("tail_class", &self.tail_class)
            .field("known_transform", &self.known_transform.is_some())
            .field("derivative", &self.derivative.is_some())
            .finish()
    }
}

fn sorted_unique(mut v: Vec<f64>) -> Vec<f64> {
    v.retain(|x| x.is_finite());
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v.dedup();
    v
}

impl RealFn {
    /// A function on the whole real line with absolutely integrable tails.
    pub fn new(name: impl Into<String>, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        RealFn {
            name: name.into(),
            eval: Arc::new(eval),
            domain: ExtendedInterval::real_line(),
            singular_points: Vec::new(),
            breakpoints: Vec::new(),
            support: None,
            tail_class: TailClass::AbsolutelyIntegrable,
            known_transform: None,
            derivative: None,
        }
    }

    pub fn zero() -> Self {
        RealFn::new("zero", |_| 0.0)
            .with_tail_class(TailClass::CompactSupport)
            .with_transform(|_| Complex64::new(0.0, 0.0))
    }

    pub fn constant(c: f64) -> Self {
        RealFn::new(format!("const({c})"), move |_| c).with_tail_class(TailClass::BoundedVariationTail)
    }

    pub fn with_domain(mut self, domain: ExtendedInterval) -> Self {
        self.domain = domain;
        self
    }

    pub fn with_singular_points(mut self, pts: Vec<f64>) -> Self {
        self.singular_points = sorted_unique(pts);
        self
    }

    pub fn with_breakpoints(mut self, pts: Vec<f64>) -> Self {
        self.breakpoints = sorted_unique(pts);
        self
    }

    pub fn with_support(mut self, support: ExtendedInterval) -> Self {
        self.support = Some(support);
        if support.is_bounded() {
            self.tail_class = TailClass::CompactSupport;
        }
        self
    }

    pub fn with_tail_class(mut self, tail: TailClass) -> Self {
        self.tail_class = tail;
        self
    }

    pub fn with_transform(mut self, t: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        self.known_transform = Some(Arc::new(t));
        self
    }

    pub fn with_derivative(mut self, d: RealFn) -> Self {
        self.derivative = Some(Arc::new(d));
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Point evaluation. Returns exactly 0 outside the declared support.
    pub fn eval(&self, x: f64) -> f64 {
        if let Some(s) = &self.support {
            if !s.contains(x) {
                return 0.0;
            }
        }
        (self.eval)(x)
    }

    pub fn domain(&self) -> ExtendedInterval {
        self.domain
    }

    pub fn singular_points(&self) -> &[f64] {
        &self.singular_points
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn support(&self) -> Option<ExtendedInterval> {
        self.support
    }

    pub fn tail_class(&self) -> TailClass {
        self.tail_class
    }

    /// Closed-form transform at `y`, when one is attached.
    pub fn known_transform_at(&self, y: f64) -> Option<Complex64> {
        self.known_transform.as_ref().map(|t| t(y))
    }

    pub fn has_known_transform(&self) -> bool {
        self.known_transform.is_some()
    }

    pub fn derivative(&self) -> Option<&RealFn> {
        self.derivative.as_deref()
    }

    pub fn is_singular_at(&self, x: f64) -> bool {
        self.singular_points.contains(&x)
    }

    /// Every point where quadrature must split: singular points, breakpoints
    /// and finite support endpoints.
    pub fn cut_points(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.singular_points.iter().chain(&self.breakpoints).copied().collect();
        if let Some(s) = &self.support {
            v.push(s.lo());
            v.push(s.hi());
        }
        sorted_unique(v)
    }

    /// `x -> c * f(x)`.
    pub fn scaled(&self, c: f64) -> RealFn {
        let inner = self.clone();
        let mut out = RealFn {
            name: format!("{c}*{}", self.name),
            eval: Arc::new(move |x| c * inner.eval(x)),
            derivative: self.derivative.as_ref().map(|d| Arc::new(d.scaled(c))),
            known_transform: None,
            ..self.clone()
        };
        if let Some(t) = self.known_transform.clone() {
            out.known_transform = Some(Arc::new(move |y| t(y) * c));
        }
        out
    }

    /// Pointwise sum. The tail class is the weaker of the two.
    pub fn sum(&self, other: &RealFn) -> RealFn {
        let (a, b) = (self.clone(), other.clone());
        let support = match (self.support, other.support) {
            (Some(s), Some(t)) => ExtendedInterval::new(s.lo().min(t.lo()), s.hi().max(t.hi())).ok(),
            _ => None,
        };
        let tail = weaker_tail(self.tail_class, other.tail_class);
        let domain = self.domain.intersect(&other.domain).unwrap_or(self.domain);
        let mut out = RealFn::new(format!("{}+{}", self.name, other.name), move |x| a.eval(x) + b.eval(x))
            .with_domain(domain)
            .with_singular_points([self.singular_points.clone(), other.singular_points.clone()].concat())
            .with_breakpoints(
                [self.breakpoints.clone(), other.breakpoints.clone(), support_ends(self), support_ends(other)].concat(),
            )
            .with_tail_class(tail);
        out.support = support;
        if let (Some(t1), Some(t2)) = (self.known_transform.clone(), other.known_transform.clone()) {
            out.known_transform = Some(Arc::new(move |y| t1(y) + t2(y)));
        }
        if let (Some(d1), Some(d2)) = (self.derivative.as_ref(), other.derivative.as_ref()) {
            out.derivative = Some(Arc::new(d1.sum(d2)));
        }
        out
    }

    /// `x -> f(x) * w(x)` for a smooth weight `w`; metadata follows `self`.
    pub fn weighted(&self, label: &str, w: impl Fn(f64) -> f64 + Send + Sync + 'static) -> RealFn {
        let inner = self.clone();
        RealFn {
            name: format!("{label}*{}", self.name),
            eval: Arc::new(move |x| inner.eval(x) * w(x)),
            known_transform: None,
            derivative: None,
            ..self.clone()
        }
    }

    /// Reflection `x -> f(-x)`.
    pub fn reflected(&self) -> RealFn {
        let inner = self.clone();
        let neg = |v: &[f64]| v.iter().map(|p| -p).collect::<Vec<_>>();
        let mut out = RealFn {
            name: format!("{}(-x)", self.name),
            eval: Arc::new(move |x| inner.eval(-x)),
            domain: ExtendedInterval { lo: -self.domain.hi, hi: -self.domain.lo },
            singular_points: sorted_unique(neg(&self.singular_points)),
            breakpoints: sorted_unique(neg(&self.breakpoints)),
            support: self.support.map(|s| ExtendedInterval { lo: -s.hi, hi: -s.lo }),
            tail_class: self.tail_class,
            known_transform: None,
            derivative: self.derivative.as_ref().map(|d| Arc::new(d.reflected().scaled(-1.0))),
        };
        if let Some(t) = self.known_transform.clone() {
            out.known_transform = Some(Arc::new(move |y| t(-y)));
        }
        out
    }
}

fn support_ends(f: &RealFn) -> Vec<f64> {
    f.support.map(|s| vec![s.lo(), s.hi()]).unwrap_or_default()
}

fn weaker_tail(a: TailClass, b: TailClass) -> TailClass {
    use TailClass::*;
    let rank = |t| match t {
        CompactSupport => 0,
        AbsolutelyIntegrable => 1,
        BoundedVariationTail => 2,
        OscillatoryDecaying => 3,
    };
    if rank(a) >= rank(b) {
        a
    } else {
        b
    }
}

/// Translation `tau_z f (x) = f(x - z)`: support, singular points and
/// breakpoints shift by `z`; the transform picks up `e^{-2 pi i z y}`.
pub fn translate(f: &RealFn, z: f64) -> RealFn {
    let inner = f.clone();
    let shift = |v: &[f64]| v.iter().map(|p| p + z).collect::<Vec<_>>();
    let mut out = RealFn {
        name: format!("tau({z})[{}]", f.name),
        eval: Arc::new(move |x| inner.eval(x - z)),
        domain: f.domain.shifted(z),
        singular_points: shift(&f.singular_points),
        breakpoints: shift(&f.breakpoints),
        support: f.support.map(|s| s.shifted(z)),
        tail_class: f.tail_class,
        known_transform: None,
        derivative: f.derivative.as_ref().map(|d| Arc::new(translate(d, z))),
    };
    if let Some(t) = f.known_transform.clone() {
        out.known_transform =
            Some(Arc::new(move |y| t(y) * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * z * y)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_invariants() {
        assert!(ExtendedInterval::new(1.0, 1.0).is_err());
        assert!(ExtendedInterval::new(2.0, 1.0).is_err());
        assert!(ExtendedInterval::new(f64::NAN, 1.0).is_err());
        let r = ExtendedInterval::real_line();
        assert!(!r.lo_finite() && !r.hi_finite());
        let h = ExtendedInterval::new(0.0, f64::INFINITY).unwrap();
        assert!(h.lo_finite() && !h.is_bounded());
        assert!(h.contains(1e300));
        assert!(!h.contains(-1e-300));
    }

    #[test]
    fn support_forces_zero() {
        let f = RealFn::new("one", |_| 1.0).with_support(ExtendedInterval::new(-1.0, 1.0).unwrap());
        assert_eq!(f.eval(0.5), 1.0);
        assert_eq!(f.eval(1.5), 0.0);
        assert_eq!(f.tail_class(), TailClass::CompactSupport);
    }

    #[test]
    fn translate_shifts_metadata() {
        let f = RealFn::new("h", |x| x)
            .with_support(ExtendedInterval::new(0.0, 1.0).unwrap())
            .with_singular_points(vec![0.0])
            .with_breakpoints(vec![0.5]);
        let g = translate(&f, 2.0);
        assert_eq!(g.eval(2.5), 0.5);
        assert_eq!(g.singular_points(), &[2.0]);
        assert_eq!(g.breakpoints(), &[2.5]);
        assert_eq!(g.support().unwrap().lo(), 2.0);
        assert_eq!(g.eval(1.9), 0.0);
    }

    #[test]
    fn reflection_and_sum() {
        let f = RealFn::new("x", |x| x).with_breakpoints(vec![1.0]);
        let r = f.reflected();
        assert_eq!(r.eval(2.0), -2.0);
        assert_eq!(r.breakpoints(), &[-1.0]);
        let s = f.sum(&RealFn::constant(1.0));
        assert_eq!(s.eval(3.0), 4.0);
    }
}
