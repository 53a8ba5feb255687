//! Convolution of a possibly only conditionally integrable f with an
//! integrable g, and the identity and norm-inequality checks built on it.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::function::{translate, ExtendedInterval, RealFn, TailClass};
use crate::quadrature::{
    alexiewicz_norm, integrate_bounded, integrate_improper, CumulativeIntegral, TruncationPolicy, DEFAULT_TOL,
};
use crate::types::{IntegralResult, ResidualReport};

/// Refinement levels when tabulating an inner convolution.
const MAX_TABLE_LEVELS: usize = 7;

/// Doublings when searching for the range outside which a function is
/// negligible.
const MAX_EXTENT_DOUBLINGS: usize = 12;

/// Tolerance, truncation policy and evaluation grid shared by the
/// convolution operations.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvPlan {
    pub policy: TruncationPolicy,
    pub tol: f64,
    pub eval_grid: Vec<f64>,
}

impl ConvPlan {
    pub fn new(tol: f64, eval_grid: Vec<f64>) -> Result<Self> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
        }
        if eval_grid.is_empty() {
            return Err(Error::InvalidArgument("evaluation grid must be nonempty".into()));
        }
        if eval_grid.iter().any(|x| !x.is_finite()) || eval_grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument("evaluation grid must be finite and increasing".into()));
        }
        Ok(ConvPlan { policy: TruncationPolicy::for_tol(tol), tol, eval_grid })
    }

    pub fn with_policy(mut self, policy: TruncationPolicy) -> Self {
        self.policy = policy;
        self
    }

    fn spacing(&self) -> f64 {
        self.eval_grid.windows(2).map(|w| w[1] - w[0]).fold(1.0, f64::min)
    }
}

impl Default for ConvPlan {
    /// Tolerance 1e-8 on 17 points spread over [-4, 4].
    fn default() -> Self {
        ConvPlan::new(DEFAULT_TOL, (0..17).map(|i| -4.0 + 0.5 * i as f64).collect()).expect("valid default plan")
    }
}

/// How (f*g)(x) is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvRoute {
    /// ∫ f(x - y) g(y) dy.
    Direct,
    /// ∫ F(x - y) g'(y) dy with F(t) = ∫_{-inf}^t f.
    ByParts,
}

/// `ByParts` when f has oscillating tails and g is a non-oscillating
/// function with a declared derivative; `Direct` otherwise.
pub fn route_for(f: &RealFn, g: &RealFn) -> ConvRoute {
    if f.tail_class() == TailClass::OscillatoryDecaying
        && g.tail_class() != TailClass::OscillatoryDecaying
        && g.derivative().is_some()
    {
        ConvRoute::ByParts
    } else {
        ConvRoute::Direct
    }
}

fn check_pair(f: &RealFn, g: &RealFn) -> Result<()> {
    if f.tail_class() == TailClass::OscillatoryDecaying && g.tail_class() == TailClass::OscillatoryDecaying {
        return Err(Error::HypothesisViolation(format!(
            "{} and {} are both only conditionally integrable",
            f.name(),
            g.name()
        )));
    }
    Ok(())
}

/// ∫ p over its support (or domain), bounded or improper as needed.
fn integrate_all(p: &RealFn, tol: f64, policy: &TruncationPolicy) -> Result<IntegralResult<f64>> {
    let iv = match p.support() {
        Some(s) => s.intersect(&p.domain()),
        None => Some(p.domain()),
    };
    match iv {
        None => Ok(IntegralResult::exact(0.0)),
        Some(iv) if iv.is_bounded() => integrate_bounded(p, iv.lo(), iv.hi(), tol),
        Some(iv) => integrate_improper(p, iv, tol, policy),
    }
}

/// x -> |f(x)|; the cut points of f stay cut points.
fn absolute(f: &RealFn) -> RealFn {
    let inner = f.clone();
    let tail = match f.tail_class() {
        TailClass::OscillatoryDecaying => TailClass::BoundedVariationTail,
        t => t,
    };
    let mut out = RealFn::new(format!("|{}|", f.name()), move |x| inner.eval(x).abs())
        .with_domain(f.domain())
        .with_singular_points(f.singular_points().to_vec())
        .with_breakpoints(f.cut_points())
        .with_tail_class(tail);
    if let Some(s) = f.support() {
        out = out.with_support(s);
    }
    out
}

/// The range outside which `f` is below `1e-3 tol`: the support when it is
/// bounded, otherwise found by doubling a window [r, 2r] until every sample
/// in it is negligible.
pub fn effective_extent(f: &RealFn, tol: f64) -> Result<(f64, f64)> {
    let support = f.support().unwrap_or_else(ExtendedInterval::real_line);
    let negligible = |a: f64, b: f64| (0..=64).all(|i| f.eval(a + (b - a) * i as f64 / 64.0).abs() < 1e-3 * tol);
    let scan = |dir: f64| -> Result<f64> {
        let mut r = 1.0;
        for _ in 0..MAX_EXTENT_DOUBLINGS {
            let (a, b) = if dir > 0.0 { (r, 2.0 * r) } else { (-2.0 * r, -r) };
            if negligible(a, b) {
                return Ok(dir * r);
            }
            r *= 2.0;
        }
        Err(Error::HypothesisViolation(format!("{} does not decay fast enough to be tabulated", f.name())))
    };
    let lo = if support.lo_finite() { support.lo() } else { scan(-1.0)?.min(support.hi() - 1.0) };
    let hi = if support.hi_finite() { support.hi() } else { scan(1.0)?.max(support.lo() + 1.0) };
    Ok((lo, hi))
}

/// y -> f(x - y) g(y) with singular points, breakpoints and support of both
/// factors; `None` when the supports do not meet.
fn product(f: &RealFn, g: &RealFn, x: f64) -> Option<RealFn> {
    let fx = translate(&f.reflected(), x);
    let support = match (fx.support(), g.support()) {
        (Some(a), Some(b)) => Some(a.intersect(&b)?),
        (a, b) => a.or(b),
    };
    let domain = fx.domain().intersect(&g.domain())?;
    let ends = |h: &RealFn| h.support().map(|s| vec![s.lo(), s.hi()]).unwrap_or_default();
    let breakpoints = [fx.breakpoints().to_vec(), g.breakpoints().to_vec(), ends(&fx), ends(g)].concat();
    let singular = [fx.singular_points().to_vec(), g.singular_points().to_vec()].concat();
    let tail = match (fx.tail_class(), g.tail_class()) {
        (TailClass::AbsolutelyIntegrable | TailClass::CompactSupport, _)
        | (_, TailClass::AbsolutelyIntegrable | TailClass::CompactSupport) => TailClass::AbsolutelyIntegrable,
        (TailClass::OscillatoryDecaying, _) | (_, TailClass::OscillatoryDecaying) => TailClass::OscillatoryDecaying,
        _ => TailClass::BoundedVariationTail,
    };
    let name = format!("{}(x-y){}(y)", f.name(), g.name());
    let gg = g.clone();
    let mut p = RealFn::new(name, move |y| fx.eval(y) * gg.eval(y))
        .with_domain(domain)
        .with_singular_points(singular)
        .with_breakpoints(breakpoints)
        .with_tail_class(tail);
    if let Some(s) = support {
        p = p.with_support(s);
    }
    Some(p)
}

/// F(t) = ∫_{-inf}^t f with anchors covering [lo, hi] and the support of f.
fn primitive(f: &RealFn, lo: f64, hi: f64, plan: &ConvPlan) -> Result<CumulativeIntegral> {
    let (lo, hi) = match f.support() {
        Some(s) if s.is_bounded() => (lo.min(s.lo()), hi.max(s.hi())),
        _ => (lo, hi),
    };
    let spacing = ((hi - lo) / 64.0).min(0.25);
    let c = CumulativeIntegral::new(f, f64::NEG_INFINITY, lo, hi, spacing, plan.tol / 10.0, &plan.policy)?;
    if !c.status().is_converged() {
        return Err(Error::Integration(format!("primitive of {}: {}", f.name(), c.status())));
    }
    Ok(c)
}

/// Evaluator of f*g at points of a fixed range. On the by-parts route the
/// primitive of f is built once and shared by every evaluation.
#[derive(Debug, Clone)]
pub struct Convolver {
    f: RealFn,
    g: RealFn,
    plan: ConvPlan,
    route: ConvRoute,
    primitive: Option<Arc<CumulativeIntegral>>,
}

impl Convolver {
    /// Prepared for evaluation points in [lo, hi], on the route chosen by
    /// [`route_for`].
    pub fn new(f: &RealFn, g: &RealFn, plan: &ConvPlan, lo: f64, hi: f64) -> Result<Self> {
        Self::with_route(f, g, plan, lo, hi, route_for(f, g))
    }

    pub fn with_route(f: &RealFn, g: &RealFn, plan: &ConvPlan, lo: f64, hi: f64, route: ConvRoute) -> Result<Self> {
        check_pair(f, g)?;
        if !(lo <= hi && lo.is_finite() && hi.is_finite()) {
            return Err(Error::InvalidArgument(format!("bad evaluation range [{lo}, {hi}]")));
        }
        let primitive = match route {
            ConvRoute::Direct => None,
            ConvRoute::ByParts => {
                let dg = g
                    .derivative()
                    .ok_or_else(|| Error::HypothesisViolation(format!("{} has no declared derivative", g.name())))?;
                let (ylo, yhi) = effective_extent(dg, plan.tol)?;
                Some(Arc::new(primitive(f, lo - yhi - 1.0, hi - ylo + 1.0, plan)?))
            }
        };
        Ok(Convolver { f: f.clone(), g: g.clone(), plan: plan.clone(), route, primitive })
    }

    pub fn route(&self) -> ConvRoute {
        self.route
    }

    /// (f*g)(x).
    pub fn eval(&self, x: f64) -> Result<IntegralResult<f64>> {
        match &self.primitive {
            None => match product(&self.f, &self.g, x) {
                None => Ok(IntegralResult::exact(0.0)),
                Some(p) => integrate_all(&p, self.plan.tol, &self.plan.policy),
            },
            Some(cum) => {
                let dg = self.g.derivative().expect("checked in constructor");
                let c = Arc::clone(cum);
                let kinks: Vec<f64> =
                    [dg.breakpoints().to_vec(), self.f.cut_points().iter().map(|p| x - p).collect()].concat();
                let p = dg.weighted("F(x-y)", move |y| c.eval(x - y)).with_breakpoints(kinks);
                integrate_all(&p, self.plan.tol, &self.plan.policy)
            }
        }
    }

    /// (f*g)(x), failing unless the integral converged.
    pub fn value(&self, x: f64) -> Result<f64> {
        let r = self.eval(x)?;
        if r.is_converged() {
            Ok(r.value)
        } else {
            Err(Error::Integration(format!("({}*{})({x}): {}", self.f.name(), self.g.name(), r.status)))
        }
    }

    /// x -> (f*g)(x) as a function handle; failed evaluations give NaN.
    pub fn to_fn(&self) -> RealFn {
        let me = self.clone();
        RealFn::new(format!("{}*{}", self.f.name(), self.g.name()), move |x| me.value(x).unwrap_or(f64::NAN))
    }
}

/// (f*g)(x) on the route chosen by [`route_for`].
pub fn convolve(f: &RealFn, g: &RealFn, x: f64, plan: &ConvPlan) -> Result<IntegralResult<f64>> {
    Convolver::new(f, g, plan, x, x)?.eval(x)
}

/// (f*g)(x) on an explicit route.
pub fn convolve_with(f: &RealFn, g: &RealFn, x: f64, plan: &ConvPlan, route: ConvRoute) -> Result<IntegralResult<f64>> {
    Convolver::with_route(f, g, plan, x, x, route)?.eval(x)
}

fn span(xs: &[f64]) -> Result<(f64, f64)> {
    if xs.is_empty() || xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("evaluation points must be nonempty and finite".into()));
    }
    Ok((xs.iter().copied().fold(f64::INFINITY, f64::min), xs.iter().copied().fold(f64::NEG_INFINITY, f64::max)))
}

/// Uniform table of a function with four-point cubic interpolation.
#[derive(Debug, Clone)]
struct Table {
    lo: f64,
    step: f64,
    vals: Vec<f64>,
}

impl Table {
    fn eval(&self, x: f64) -> f64 {
        let n = self.vals.len() - 1;
        let t = (x - self.lo) / self.step;
        let i = (t.floor() as isize).clamp(1, n as isize - 2) as usize;
        let u = t - i as f64;
        let v = &self.vals;
        -u * (u - 1.0) * (u - 2.0) / 6.0 * v[i - 1] + (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0 * v[i]
            - (u + 1.0) * u * (u - 2.0) / 2.0 * v[i + 1]
            + (u + 1.0) * u * (u - 1.0) / 6.0 * v[i + 2]
    }
}

/// f*g tabulated on [lo, hi] and zero outside, with the grid halved until
/// the interpolation error at the new midpoints is below tol / 2. The
/// starting spacing is a quarter of the plan's grid spacing.
pub fn tabulated_convolution(f: &RealFn, g: &RealFn, lo: f64, hi: f64, plan: &ConvPlan) -> Result<RealFn> {
    if !(lo < hi) {
        return Err(Error::InvalidArgument(format!("bad tabulation range [{lo}, {hi}]")));
    }
    let conv = Convolver::new(f, g, plan, lo, hi)?;
    let mut n = ((hi - lo) / (plan.spacing() / 4.0)).ceil().max(4.0) as usize;
    let mut vals = (0..=n).map(|i| conv.value(lo + (hi - lo) * i as f64 / n as f64)).collect::<Result<Vec<_>>>()?;
    for _ in 0..MAX_TABLE_LEVELS {
        let table = Table { lo, step: (hi - lo) / n as f64, vals: vals.clone() };
        let mids: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * (i as f64 + 0.5) / n as f64).collect();
        let mid_vals = mids.iter().map(|&m| conv.value(m)).collect::<Result<Vec<_>>>()?;
        let err = mids.iter().zip(&mid_vals).map(|(&m, v)| (table.eval(m) - v).abs()).fold(0.0, f64::max);
        let mut refined = Vec::with_capacity(2 * n + 1);
        for i in 0..n {
            refined.push(vals[i]);
            refined.push(mid_vals[i]);
        }
        refined.push(vals[n]);
        vals = refined;
        n *= 2;
        if err <= plan.tol / 2.0 {
            let table = Table { lo, step: (hi - lo) / n as f64, vals };
            let name = format!("{}*{}", f.name(), g.name());
            return Ok(RealFn::new(name, move |x| table.eval(x)).with_support(ExtendedInterval::new(lo, hi)?));
        }
    }
    Err(Error::Integration(format!(
        "interpolating {}*{} on [{lo}, {hi}] did not reach {}",
        f.name(),
        g.name(),
        plan.tol / 2.0
    )))
}

/// |(f*g)(x) - (g*f)(x)| at each x.
pub fn commutativity_check(f: &RealFn, g: &RealFn, xs: &[f64], plan: &ConvPlan) -> Result<Vec<ResidualReport>> {
    let (lo, hi) = span(xs)?;
    let fg = Convolver::new(f, g, plan, lo, hi)?;
    let gf = Convolver::new(g, f, plan, lo, hi)?;
    xs.iter().map(|&x| Ok(ResidualReport::new("commutativity", fg.value(x)?, gf.value(x)?))).collect()
}

/// |((f*g)*h)(x) - (f*(g*h))(x)| at each x, with the inner convolutions
/// tabulated. Requires two declared derivatives of g and an integrable h.
pub fn associativity_check(
    f: &RealFn,
    g: &RealFn,
    h: &RealFn,
    xs: &[f64],
    plan: &ConvPlan,
) -> Result<Vec<ResidualReport>> {
    if g.derivative().and_then(|d| d.derivative()).is_none() {
        return Err(Error::HypothesisViolation(format!("{} needs two declared derivatives", g.name())));
    }
    if matches!(h.tail_class(), TailClass::OscillatoryDecaying | TailClass::BoundedVariationTail) {
        return Err(Error::HypothesisViolation(format!("{} is not declared integrable", h.name())));
    }
    let (lo, hi) = span(xs)?;
    let (hlo, hhi) = effective_extent(h, plan.tol)?;
    let fg = tabulated_convolution(f, g, lo - hhi, hi - hlo, plan)?;
    let left = Convolver::new(&fg, h, plan, lo, hi)?;

    let (glo, ghi) = effective_extent(g, plan.tol)?;
    let (mut a, mut b) = (glo + hlo, ghi + hhi);
    if let Some(s) = f.support().filter(|s| s.is_bounded()) {
        a = a.max(lo - s.hi());
        b = b.min(hi - s.lo());
    }
    let right = if a < b {
        let gh = tabulated_convolution(g, h, a, b, plan)?;
        Some(Convolver::new(f, &gh, plan, lo, hi)?)
    } else {
        None
    };
    xs.iter()
        .map(|&x| {
            let r = match &right {
                Some(c) => c.value(x)?,
                None => 0.0,
            };
            Ok(ResidualReport::new("associativity", left.value(x)?, r))
        })
        .collect()
}

/// At each x, (f*g)(x - z) against ((τ_z f)*g)(x) and (f*(τ_z g))(x); two
/// reports per point.
pub fn translation_check(f: &RealFn, g: &RealFn, z: f64, xs: &[f64], plan: &ConvPlan) -> Result<Vec<ResidualReport>> {
    let (lo, hi) = span(xs)?;
    let base = Convolver::new(f, g, plan, lo - z, hi - z)?;
    let tf = Convolver::new(&translate(f, z), g, plan, lo, hi)?;
    let tg = Convolver::new(f, &translate(g, z), plan, lo, hi)?;
    let mut out = Vec::with_capacity(2 * xs.len());
    for &x in xs {
        let v = base.value(x - z)?;
        out.push(ResidualReport::new("translation-f", v, tf.value(x)?));
        out.push(ResidualReport::new("translation-g", v, tg.value(x)?));
    }
    Ok(out)
}

/// One probe of [`support_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct SupportProbe {
    pub x: f64,
    pub outside: bool,
    pub value: f64,
    pub pass: bool,
}

/// Whether f*g vanishes off the sum of the supports.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportReport {
    /// Sum of the supports; `None` when one factor vanishes identically.
    pub sumset: Option<ExtendedInterval>,
    pub probes: Vec<SupportProbe>,
    pub pass: bool,
}

fn bounded_support(f: &RealFn) -> Result<Option<ExtendedInterval>> {
    match f.support() {
        Some(s) if s.is_bounded() => Ok(Some(s)),
        None if f.tail_class() == TailClass::CompactSupport => Ok(None),
        _ => Err(Error::HypothesisViolation(format!("{} has no bounded support", f.name()))),
    }
}

/// |(f*g)(x)| < tol at every probe outside the closed sum of the supports.
pub fn support_check(f: &RealFn, g: &RealFn, probes: &[f64], plan: &ConvPlan) -> Result<SupportReport> {
    let sumset = match (bounded_support(f)?, bounded_support(g)?) {
        (Some(a), Some(b)) => Some(ExtendedInterval::new(a.lo() + b.lo(), a.hi() + b.hi())?),
        _ => None,
    };
    let (lo, hi) = span(probes)?;
    let conv = Convolver::new(f, g, plan, lo, hi)?;
    let probes = probes
        .iter()
        .map(|&x| {
            let value = conv.value(x)?;
            let outside = !sumset.is_some_and(|s| s.contains(x));
            Ok(SupportProbe { x, outside, value, pass: !outside || value.abs() < plan.tol })
        })
        .collect::<Result<Vec<_>>>()?;
    let pass = probes.iter().all(|p| p.pass);
    Ok(SupportReport { sumset, probes, pass })
}

fn converged(what: &str, r: IntegralResult<f64>) -> Result<f64> {
    if r.is_converged() {
        Ok(r.value)
    } else {
        Err(Error::Integration(format!("{what}: {}", r.status)))
    }
}

/// F, G and the hypotheses shared by the norm checks.
struct NormSetup {
    f_prim: CumulativeIntegral,
    big_g: RealFn,
}

fn norm_setup(f: &RealFn, g: &RealFn, plan: &ConvPlan) -> Result<NormSetup> {
    if matches!(g.tail_class(), TailClass::OscillatoryDecaying | TailClass::BoundedVariationTail) {
        return Err(Error::HypothesisViolation(format!("{} is not declared integrable", g.name())));
    }
    if !g.singular_points().is_empty() {
        return Err(Error::HypothesisViolation(format!("{} must be of bounded variation", g.name())));
    }
    let (lo, hi) = (plan.eval_grid[0], plan.eval_grid[plan.eval_grid.len() - 1]);
    let (glo, ghi) = effective_extent(g, plan.tol)?;
    let g_prim = primitive(g, glo.min(lo), ghi.max(hi), plan)?;
    let g_inf = converged("integral of g", g_prim.limit_at_infinity(&plan.policy)?)?;
    if g_inf.abs() >= 10.0 * plan.tol {
        return Err(Error::HypothesisViolation(format!(
            "primitive of {} does not vanish at infinity (limit {g_inf})",
            g.name()
        )));
    }
    let big_g = g_prim.into_fn(format!("int {}", g.name())).with_tail_class(TailClass::AbsolutelyIntegrable);
    let f_prim = primitive(f, lo, hi, plan)?;
    Ok(NormSetup { f_prim, big_g })
}

/// ‖f*G‖_1 ≤ ‖F‖_1 ‖g‖_1 and ‖f*G‖_A ≤ ‖f‖_A ‖G‖_1 with F, G the primitives
/// of f and g from -inf. The Alexiewicz norms are suprema over the plan's
/// grid. ‖F‖_1 is infinite when F does not vanish at +inf. Each report has
/// the left side as `lhs` and the bound as `rhs`.
pub fn norm_inequality_check(f: &RealFn, g: &RealFn, plan: &ConvPlan) -> Result<(ResidualReport, ResidualReport)> {
    let NormSetup { f_prim, big_g } = norm_setup(f, g, plan)?;
    let tol = plan.tol;
    let (lo, hi) = (plan.eval_grid[0], plan.eval_grid[plan.eval_grid.len() - 1]);

    let conv = Convolver::new(f, &big_g, plan, lo, hi)?.to_fn();
    let conv_l1 = converged("L1 norm of f*G", integrate_all(&absolute(&conv), tol, &plan.policy)?)?;
    let conv_a = converged("Alexiewicz norm of f*G", alexiewicz_norm(&conv, &plan.policy, &plan.eval_grid)?)?;

    let f_inf = converged("integral of f", f_prim.limit_at_infinity(&plan.policy)?)?;
    let f_l1 = if f_inf.abs() >= 10.0 * tol {
        f64::INFINITY
    } else {
        let big_f = f_prim.into_fn("F").with_tail_class(TailClass::AbsolutelyIntegrable);
        let r = integrate_all(&absolute(&big_f), tol, &plan.policy)?;
        if r.is_converged() {
            r.value
        } else {
            f64::INFINITY
        }
    };
    let g_l1 = converged("L1 norm of g", integrate_all(&absolute(g), tol, &plan.policy)?)?;
    let big_g_l1 = converged("L1 norm of G", integrate_all(&absolute(&big_g), tol, &plan.policy)?)?;
    let f_a = converged("Alexiewicz norm of f", alexiewicz_norm(f, &plan.policy, &plan.eval_grid)?)?;

    Ok((
        ResidualReport::new("conv-norm-l1", conv_l1, f_l1 * g_l1),
        ResidualReport::new("conv-norm-alexiewicz", conv_a, f_a * big_g_l1),
    ))
}

/// ∫_{-inf}^t (f*G)(x) dx against ∫ F(t - y) G(y) dy, the two orders of the
/// iterated integral of f(x - y) G(y) over (-inf, t] x R.
pub fn primitive_interchange_check(f: &RealFn, g: &RealFn, t: f64, plan: &ConvPlan) -> Result<ResidualReport> {
    let NormSetup { f_prim, big_g } = norm_setup(f, g, plan)?;
    let tol = plan.tol;
    let (lo, hi) = (plan.eval_grid[0], plan.eval_grid[plan.eval_grid.len() - 1]);
    let conv = Convolver::new(f, &big_g, plan, lo.min(t), hi.max(t))?.to_fn();
    let head = ExtendedInterval::new(f64::NEG_INFINITY, t)?;
    let lhs = converged("integral of f*G", integrate_improper(&conv, head, tol, &plan.policy)?)?;
    let big_f = f_prim.into_fn("F");
    let rhs = converged("integral of F(t-y) G(y)", Convolver::new(&big_f, &big_g, plan, t, t)?.eval(t)?)?;
    Ok(ResidualReport::new("conv-primitive-interchange", lhs, rhs))
}
