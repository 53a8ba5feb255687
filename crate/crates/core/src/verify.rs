//! Named verification suites over fixed fixtures. Each check becomes one
//! [`Record`]; failed computations are kept as records carrying the error
//! kind.

use std::f64::consts::PI;

use serde::Serialize;

use crate::convolution::{
    associativity_check, commutativity_check, convolve, norm_inequality_check, primitive_interchange_check,
    support_check, translation_check, ConvPlan,
};
use crate::corpus;
use crate::error::{Error, Result};
use crate::fourier::{
    continuity_ladder, decay_envelope, derivative_rule_check, inversion_roundtrip, invert, multiplication_rule_check,
    parseval_exchange_check, riemann_lebesgue_check, shift_modulation_check, SpectrumProvider,
};
use crate::function::RealFn;
use crate::interchange::{diff_under_integral, fubini_residual, Kernel2D};
use crate::laplace_means::{ftc_check, inversion_condition_check, MeanSpec};
use crate::types::{LadderConfig, ResidualReport, Scalar};

/// Residual accepted by the identity suites.
pub const IDENTITY_LIMIT: f64 = 1e-4;

/// Residual accepted for commutativity and translation.
pub const CONV_LIMIT: f64 = 1e-5;

/// Residual accepted by the smooth Fubini kernels.
pub const FUBINI_LIMIT: f64 = 1e-8;

/// Suites run when none are named.
pub const DEFAULT_SUITES: [&str; 12] = [
    "shift-modulation",
    "derivative-rule",
    "multiplication-rule",
    "riemann-lebesgue",
    "continuity",
    "parseval-exchange",
    "convolution",
    "norm-inequalities",
    "fubini",
    "diff-under-integral",
    "ftc",
    "inversion",
];

/// Suites that must fail; run only when named.
pub const PROBE_SUITES: [&str; 1] = ["broken-hypothesis"];

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub identity_name: String,
    pub fixture: String,
    pub lhs: Option<Scalar>,
    pub rhs: Option<Scalar>,
    pub abs_residual: Option<f64>,
    pub pass: bool,
    /// `ok`, or the kind of error that stopped the check.
    pub status: String,
}

impl Record {
    pub fn from_report(r: &ResidualReport, fixture: impl Into<String>, pass: bool) -> Self {
        Record {
            identity_name: r.identity_name.clone(),
            fixture: fixture.into(),
            lhs: Some(r.lhs),
            rhs: Some(r.rhs),
            abs_residual: Some(r.abs_residual),
            pass,
            status: "ok".into(),
        }
    }

    pub fn from_error(identity: &str, fixture: impl Into<String>, e: &Error) -> Self {
        Record {
            identity_name: identity.into(),
            fixture: fixture.into(),
            lhs: None,
            rhs: None,
            abs_residual: None,
            pass: false,
            status: e.kind().into(),
        }
    }
}

fn push_all(out: &mut Vec<Record>, identity: &str, fixture: &str, res: Result<Vec<ResidualReport>>, limit: f64) {
    match res {
        Ok(reps) => out.extend(reps.iter().map(|r| Record::from_report(r, fixture, r.abs_residual < limit))),
        Err(e) => out.push(Record::from_error(identity, fixture, &e)),
    }
}

fn fixture_at(f: &RealFn, label: &str, v: f64) -> String {
    format!("{} {label}={v}", f.name())
}

fn shift_modulation(out: &mut Vec<Record>) {
    for (f, zeta, eta, ys) in
        [(corpus::expdecay(), 0.7, 0.3, vec![-1.0, 0.0, 0.5]), (corpus::bump(), -0.4, 1.2, vec![0.25, 2.0])]
    {
        let fixture = format!("{} zeta={zeta} eta={eta}", f.name());
        push_all(out, "shift", &fixture, shift_modulation_check(&f, zeta, eta, &ys, 1e-9), IDENTITY_LIMIT);
    }
}

fn derivative_rule(out: &mut Vec<Record>) {
    for f in [corpus::bump(), corpus::gauss(), corpus::lorentz()] {
        push_all(out, "derivative-rule", f.name(), derivative_rule_check(&f, &[-1.1, 0.3, 1.5], 1e-9), IDENTITY_LIMIT);
    }
}

fn multiplication_rule(out: &mut Vec<Record>) {
    for f in [corpus::gauss(), corpus::expdecay()] {
        match multiplication_rule_check(&f, &[-0.6, 0.0, 0.9], 1e-4, 1e-10) {
            Ok(rs) => {
                out.extend(rs.iter().map(|b| {
                    Record::from_report(&b.report, f.name(), b.pass && b.report.abs_residual < IDENTITY_LIMIT)
                }))
            }
            Err(e) => out.push(Record::from_error("multiplication-rule", f.name(), &e)),
        }
    }
}

/// Ladder of t for the decay check; ends just below 64.
pub const DECAY_LADDER: [f64; 7] = [0.75, 1.75, 3.75, 7.75, 15.75, 31.75, 63.75];

/// Bound on max(|f^(t)|, |f^(-t)|) at the end of [`DECAY_LADDER`].
pub const DECAY_LIMIT: f64 = 1e-2;

fn riemann_lebesgue(out: &mut Vec<Record>) {
    for f in [corpus::box_fn(), corpus::bump()] {
        match riemann_lebesgue_check(&f, &DECAY_LADDER, DECAY_LIMIT) {
            Ok(lim) => {
                let env = decay_envelope(&lim.ladder);
                let monotone = env.windows(2).all(|w| w[1] <= w[0]) && env[env.len() - 1] < env[0];
                let r = ResidualReport::new("riemann-lebesgue", lim.value, 0.0);
                out.push(Record::from_report(&r, f.name(), lim.converged && monotone));
            }
            Err(e) => out.push(Record::from_error("riemann-lebesgue", f.name(), &e)),
        }
    }
}

fn continuity(out: &mut Vec<Record>) {
    for (f, y0) in [(corpus::expdecay(), 0.2), (corpus::box_fn(), 1.0)] {
        let fixture = fixture_at(&f, "y", y0);
        match continuity_ladder(&f, y0, 0.1, 5, 1e-10) {
            Ok(reps) => {
                let shrinking = reps.windows(2).all(|w| w[1].abs_residual < w[0].abs_residual);
                let last = reps.last().expect("three radii");
                out.push(Record::from_report(last, fixture, shrinking && last.abs_residual < IDENTITY_LIMIT * 100.0));
            }
            Err(e) => out.push(Record::from_error("continuity", fixture, &e)),
        }
    }
}

fn parseval_exchange(out: &mut Vec<Record>) {
    for (psi, phi) in [(corpus::box_fn(), corpus::gauss()), (corpus::bump(), corpus::gauss())] {
        let fixture = format!("{} {}", psi.name(), phi.name());
        push_all(
            out,
            "parseval-exchange",
            &fixture,
            parseval_exchange_check(&psi, &phi, 1e-7).map(|r| vec![r]),
            IDENTITY_LIMIT,
        );
    }
}

/// Points where box*box is compared with the triangle max(0, 1 - |x|).
pub const TRIANGLE_POINTS: [f64; 9] = [-1.5, -1.0, -0.75, -0.3, 0.0, 0.2, 0.5, 0.9, 1.25];

fn convolution(out: &mut Vec<Record>) {
    let plan = ConvPlan::new(1e-9, (0..17).map(|i| -4.0 + 0.5 * i as f64).collect()).expect("valid plan");
    let (b, g, bump) = (corpus::box_fn(), corpus::gauss(), corpus::bump());
    let xs = [-1.0, 0.0, 0.7];
    push_all(out, "commutativity", "box gauss", commutativity_check(&b, &g, &xs, &plan), CONV_LIMIT);
    push_all(out, "translation", "bump gauss z=0.3", translation_check(&bump, &g, 0.3, &[0.0, 0.8], &plan), CONV_LIMIT);
    let assoc_plan = ConvPlan::new(1e-7, plan.eval_grid.clone()).expect("valid plan");
    push_all(
        out,
        "associativity",
        "box gauss bump",
        associativity_check(&b, &g, &bump, &[0.0, 0.5], &assoc_plan),
        IDENTITY_LIMIT,
    );
    for x in TRIANGLE_POINTS {
        let fixture = format!("box box x={x}");
        match convolve(&b, &b, x, &plan) {
            Ok(r) => {
                let rep = ResidualReport::new("conv-triangle", r.value, (1.0 - x.abs()).max(0.0));
                out.push(Record::from_report(&rep, fixture, r.is_converged() && rep.abs_residual < 1e-6));
            }
            Err(e) => out.push(Record::from_error("conv-triangle", fixture, &e)),
        }
    }
    match support_check(&b, &bump, &[-2.0, -1.5, 0.0, 1.5, 2.5], &plan) {
        Ok(rep) => {
            for p in rep.probes {
                let r = ResidualReport::new("conv-support", p.value, 0.0);
                out.push(Record::from_report(&r, format!("box bump x={} outside={}", p.x, p.outside), p.pass));
            }
        }
        Err(e) => out.push(Record::from_error("conv-support", "box bump", &e)),
    }
}

fn norm_plan() -> ConvPlan {
    ConvPlan::new(1e-8, (0..33).map(|i| -4.0 + 0.25 * i as f64).collect()).expect("valid plan")
}

fn norm_inequalities(out: &mut Vec<Record>) {
    let (f, g) = (corpus::bump_prime(), corpus::gauss_prime());
    let plan = norm_plan();
    match norm_inequality_check(&f, &g, &plan) {
        Ok((l1, a)) => {
            for r in [l1, a] {
                out.push(Record::from_report(&r, "bump_prime gauss_prime", r.bound_holds(0.0)));
            }
        }
        Err(e) => out.push(Record::from_error("conv-norm", "bump_prime gauss_prime", &e)),
    }
    push_all(
        out,
        "conv-primitive-interchange",
        "bump_prime gauss_prime t=1",
        primitive_interchange_check(&f, &g, 1.0, &plan).map(|r| vec![r]),
        IDENTITY_LIMIT,
    );
}

fn broken_hypothesis(out: &mut Vec<Record>) {
    match norm_inequality_check(&corpus::bump_prime(), &corpus::gauss(), &norm_plan()) {
        Ok((l1, a)) => {
            for r in [l1, a] {
                out.push(Record::from_report(&r, "bump_prime gauss", r.bound_holds(0.0)));
            }
        }
        Err(e) => out.push(Record::from_error("conv-norm", "bump_prime gauss", &e)),
    }
}

/// (x^2 - y^2) / (x^2 + y^2)^2 on the unit square, singular at the origin.
pub fn classical_kernel() -> Kernel2D {
    Kernel2D::new(|x, y| (x * x - y * y) / (x * x + y * y).powi(2)).with_singular_point(0.0, 0.0)
}

fn fubini(out: &mut Vec<Record>) {
    let smooth: [(&str, Kernel2D, (f64, f64), (f64, f64)); 3] = [
        ("x y", Kernel2D::new(|x, y| x * y), (0.0, 1.0), (0.0, 1.0)),
        ("exp(x^2 + 2y) cos y", Kernel2D::new(|x, y| (x * x + 2.0 * y).exp() * y.cos()), (0.0, 1.0), (-1.0, 2.0)),
        (
            "gauss(x) cos(2 pi x y)",
            Kernel2D::new(|x: f64, y: f64| (-PI * x * x).exp() * (2.0 * PI * x * y).cos()),
            (-4.0, 4.0),
            (0.0, 1.0),
        ),
    ];
    for (name, k, xr, yr) in smooth {
        push_all(out, "fubini", name, fubini_residual(&k, xr, yr, 1e-10).map(|r| vec![r]), FUBINI_LIMIT);
    }
    match fubini_residual(&classical_kernel(), (0.0, 1.0), (0.0, 1.0), 1e-9) {
        Ok(r) => {
            let pass = (r.abs_residual - PI / 2.0).abs() < 1e-3;
            out.push(Record::from_report(&r, "(x^2 - y^2)/(x^2 + y^2)^2", pass));
        }
        Err(e) => out.push(Record::from_error("fubini", "(x^2 - y^2)/(x^2 + y^2)^2", &e)),
    }
}

fn diff_under(out: &mut Vec<Record>) {
    let spec = MeanSpec::default();
    let kernels = [
        ("x y", Kernel2D::new(|x, y| x * y).with_dx(|_, y| y), 1.0),
        (
            "gauss(x) cos y",
            Kernel2D::new(|x: f64, y: f64| (-PI * x * x).exp() * y.cos())
                .with_dx(|x: f64, y: f64| -2.0 * PI * x * (-PI * x * x).exp() * y.cos()),
            0.5,
        ),
        ("sin(x y)", Kernel2D::new(|x: f64, y: f64| (x * y).sin()).with_dx(|x: f64, y: f64| y * (x * y).cos()), 0.3),
    ];
    for (name, k, x) in kernels {
        let fixture = format!("{name} x={x}");
        push_all(
            out,
            "diff-under-integral",
            &fixture,
            diff_under_integral(&k, x, (0.0, 1.0), &spec, 1e-10).map(|r| vec![r]),
            IDENTITY_LIMIT,
        );
    }
}

/// A function with continuity points, jump points and the half-width of the
/// Laplace means used on its primitive.
pub struct FtcFixture {
    pub f: RealFn,
    pub points: Vec<f64>,
    pub jumps: Vec<f64>,
    pub delta: f64,
}

/// Every corpus function with ten continuity points and its jump points.
pub fn ftc_fixtures() -> Vec<FtcFixture> {
    let grid = |lo: f64, hi: f64| (0..10).map(|k| lo + (hi - lo) * (k as f64 + 0.5) / 10.0).collect::<Vec<_>>();
    let fx = |f: RealFn, points: Vec<f64>, jumps: Vec<f64>| FtcFixture { f, points, jumps, delta: 0.5 };
    vec![
        fx(corpus::gauss(), grid(-2.0, 2.0), vec![]),
        fx(corpus::gauss_prime(), grid(-2.0, 2.0), vec![]),
        fx(corpus::box_fn(), grid(-0.45, 0.45), vec![-0.5, 0.5]),
        fx(corpus::sinc_tail(), grid(-5.0, 5.0), vec![]),
        fx(corpus::fresnel(), grid(-3.0, 3.0), vec![]),
        // Means must not reach the singular point at 0.
        FtcFixture { f: corpus::hk_spike(), points: grid(0.3, 0.95), jumps: vec![1.0], delta: 0.25 },
        fx(corpus::bump(), grid(-1.2, 1.2), vec![]),
        fx(corpus::bump_prime(), grid(-0.95, 0.95), vec![]),
        fx(corpus::expdecay(), grid(0.1, 3.0), vec![0.0]),
        fx(corpus::lorentz(), grid(-3.0, 3.0), vec![]),
        fx(corpus::sinc_window(), grid(-19.0, 19.0), vec![-20.0, 20.0]),
        fx(corpus::sign(), grid(0.1, 2.0), vec![0.0]),
        fx(corpus::abs(), grid(0.1, 2.0), vec![]),
        fx(corpus::identity(), grid(-2.0, 2.0), vec![]),
        fx(RealFn::zero(), grid(-2.0, 2.0), vec![]),
        fx(corpus::lookup("one").expect("corpus member"), grid(-2.0, 2.0), vec![]),
    ]
}

/// Lower limit of the primitive in the fundamental-theorem check.
pub fn ftc_anchor(f: &RealFn) -> f64 {
    match f.support() {
        Some(s) if s.lo_finite() => s.lo(),
        _ => 0.0,
    }
}

fn ftc(out: &mut Vec<Record>) {
    for FtcFixture { f, points, jumps, delta } in ftc_fixtures() {
        let spec = MeanSpec::default().with_tol(1e-6).with_delta(delta);
        let a = ftc_anchor(&f);
        match ftc_check(&f, a, &points, &spec) {
            Ok(rs) => {
                for (x, r) in points.iter().zip(rs) {
                    let fixture = fixture_at(&f, "x", *x);
                    match r {
                        Ok(rep) => out.push(Record::from_report(&rep, fixture, rep.abs_residual < IDENTITY_LIMIT)),
                        Err(e) => out.push(Record::from_error("ftc", fixture, &e)),
                    }
                }
            }
            Err(e) => out.push(Record::from_error("ftc", f.name(), &e)),
        }
        if jumps.is_empty() {
            continue;
        }
        match ftc_check(&f, a, &jumps, &spec) {
            Ok(rs) => {
                for (x, r) in jumps.iter().zip(rs) {
                    let flagged = matches!(r, Err(Error::SidesDisagree { .. }));
                    out.push(Record {
                        identity_name: "ftc-exceptional".into(),
                        fixture: fixture_at(&f, "x", *x),
                        lhs: None,
                        rhs: None,
                        abs_residual: None,
                        pass: flagged,
                        status: match r {
                            Ok(_) => "ok".into(),
                            Err(e) => e.kind().into(),
                        },
                    });
                }
            }
            Err(e) => out.push(Record::from_error("ftc-exceptional", f.name(), &e)),
        }
    }
}

/// Round-trip points of the inversion fixtures.
pub fn inversion_fixtures() -> Vec<(RealFn, Vec<f64>)> {
    vec![
        (corpus::gauss(), vec![-1.0, -0.4, 0.0, 0.3, 0.8]),
        (corpus::bump(), vec![-0.7, -0.2, 0.0, 0.4, 0.9]),
        (corpus::box_fn(), vec![-0.3, -0.1, 0.0, 0.2, 0.35]),
    ]
}

/// Residual accepted by the inversion round trip.
pub const INVERSION_LIMIT: f64 = 1e-3;

fn inversion(out: &mut Vec<Record>) {
    let spec = MeanSpec::default();
    let ladder = LadderConfig::gauss_default();
    let tol = 1e-4;
    for (f, xs) in inversion_fixtures() {
        match inversion_roundtrip(&f, &xs, &ladder, tol, &spec) {
            Ok(pts) => {
                for p in pts {
                    let fixture = fixture_at(&f, "x", p.x);
                    match p.report {
                        Some(r) => out.push(Record::from_report(&r, fixture, r.abs_residual < INVERSION_LIMIT)),
                        None => out.push(Record::from_error(
                            "inversion-roundtrip",
                            fixture,
                            &Error::HypothesisViolation("inversion condition not certified".into()),
                        )),
                    }
                }
            }
            Err(e) => out.push(Record::from_error("inversion-roundtrip", f.name(), &e)),
        }
    }
    let b = corpus::box_fn();
    let fixture = "box x=0.5";
    match inversion_condition_check(&b, 0.5, &spec, 64) {
        Ok(c) => out.push(Record {
            identity_name: "inversion-condition-rejected".into(),
            fixture: fixture.into(),
            lhs: Some(Scalar::Real(c.value)),
            rhs: Some(Scalar::Real(spec.tol)),
            abs_residual: None,
            pass: !crate::laplace_means::condition_certified(&c, spec.tol),
            status: "ok".into(),
        }),
        Err(e) => out.push(Record { pass: true, ..Record::from_error("inversion-condition-rejected", fixture, &e) }),
    }
    let zero = SpectrumProvider::zero();
    for x in [-2.0, 0.0, 0.5, 3.0] {
        let fixture = format!("zero x={x}");
        match invert(&zero, x, &ladder, 1e-10) {
            Ok(v) => {
                let r = ResidualReport::new("inversion-uniqueness", v.value, num_complex::Complex64::new(0.0, 0.0));
                out.push(Record::from_report(&r, fixture, r.abs_residual < 1e-8));
            }
            Err(e) => out.push(Record::from_error("inversion-uniqueness", fixture, &e)),
        }
    }
}

fn suite_fn(name: &str) -> Option<fn(&mut Vec<Record>)> {
    Some(match name {
        "shift-modulation" => shift_modulation,
        "derivative-rule" => derivative_rule,
        "multiplication-rule" => multiplication_rule,
        "riemann-lebesgue" => riemann_lebesgue,
        "continuity" => continuity,
        "parseval-exchange" => parseval_exchange,
        "convolution" => convolution,
        "norm-inequalities" => norm_inequalities,
        "fubini" => fubini,
        "diff-under-integral" => diff_under,
        "ftc" => ftc,
        "inversion" => inversion,
        "broken-hypothesis" => broken_hypothesis,
        _ => return None,
    })
}

/// Expands `all` to the default suites and rejects unknown names.
pub fn resolve_suites(names: Option<&[String]>) -> Result<Vec<String>> {
    let Some(names) = names else {
        return Ok(DEFAULT_SUITES.iter().map(|s| s.to_string()).collect());
    };
    let mut out = Vec::new();
    for n in names {
        if n == "all" {
            out.extend(DEFAULT_SUITES.iter().map(|s| s.to_string()));
        } else if suite_fn(n).is_some() {
            out.push(n.clone());
        } else {
            return Err(Error::Parse(format!("unknown suite `{n}`")));
        }
    }
    Ok(out)
}

/// Runs the named suites in order.
pub fn run_suites(names: &[String]) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for n in names {
        let f = suite_fn(n).ok_or_else(|| Error::Parse(format!("unknown suite `{n}`")))?;
        f(&mut out);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_resolve() {
        assert_eq!(resolve_suites(None).unwrap().len(), DEFAULT_SUITES.len());
        assert!(resolve_suites(Some(&[])).unwrap().is_empty());
        assert!(resolve_suites(Some(&["nope".into()])).is_err());
        for n in DEFAULT_SUITES.iter().chain(&PROBE_SUITES) {
            assert!(suite_fn(n).is_some(), "{n}");
        }
    }

    #[test]
    fn broken_hypothesis_is_reported() {
        let recs = run_suites(&["broken-hypothesis".into()]).unwrap();
        assert_eq!(recs.len(), 1);
        assert!(!recs[0].pass);
        assert_eq!(recs[0].status, "hypothesis-violation");
    }
}
