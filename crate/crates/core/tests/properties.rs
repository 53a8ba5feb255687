use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use laplace_fourier::config::RunConfig;
use laplace_fourier::convolution::{convolve_with, primitive_interchange_check};
use laplace_fourier::corpus;
use laplace_fourier::expr::{Expr, Piecewise};
use laplace_fourier::fourier::gauss_kernel_mass;
use laplace_fourier::laplace_means::{laplace_mean, ld1, MeanSpec, Side};
use laplace_fourier::{
    convolve, diff_under_integral, fourier_transform, fubini_residual, integrate_bounded, integrate_improper, invert,
    iterated_integrals, translate, ConvPlan, ConvRoute, ExtendedInterval, Kernel2D, LadderConfig, RealFn,
    SpectrumProvider, TruncationPolicy,
};

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig::with_cases(n)
}

fn ft(f: &RealFn, y: f64, tol: f64) -> Complex64 {
    fourier_transform(f, y, tol, &TruncationPolicy::for_tol(tol)).unwrap().value
}

fn line_integral(f: &RealFn, tol: f64) -> f64 {
    integrate_improper(f, ExtendedInterval::real_line(), tol, &TruncationPolicy::for_tol(tol)).unwrap().value
}

fn bounded(f: &RealFn, a: f64, b: f64) -> f64 {
    integrate_bounded(f, a, b, 1e-11).unwrap().value
}

fn with_known_transform() -> impl Strategy<Value = RealFn> {
    prop::sample::select(vec!["gauss", "gauss_prime", "box", "bump", "expdecay", "lorentz"])
        .prop_map(|n| corpus::lookup(n).unwrap())
}

fn compact() -> impl Strategy<Value = RealFn> {
    prop::sample::select(vec!["box", "bump", "bump_prime", "hk_spike", "sinc_window"])
        .prop_map(|n| corpus::lookup(n).unwrap())
}

fn smooth() -> impl Strategy<Value = RealFn> {
    prop::sample::select(vec!["gauss", "gauss_prime", "bump", "lorentz"]).prop_map(|n| corpus::lookup(n).unwrap())
}

proptest! {
    #![proptest_config(cases(24))]

    #[test]
    fn transform_matches_closed_form(f in with_known_transform(), y in -2.0f64..2.0) {
        let got = ft(&f, y, 1e-9);
        let want = f.known_transform_at(y).unwrap();
        prop_assert!((got - want).norm() < 1e-7, "{} at {y}: {got} vs {want}", f.name());
    }

    #[test]
    fn translation_round_trip(name in prop::sample::select(corpus::corpus().into_keys().collect::<Vec<_>>()),
                              z in -3.0f64..3.0, x in -5.0f64..5.0) {
        let f = corpus::lookup(&name).unwrap();
        let back = translate(&translate(&f, z), -z);
        prop_assert_eq!(back.eval(x).to_bits(), f.eval((x + z) - z).to_bits(), "{} at {}", name, x);
        if let (Some(s), Some(t)) = (back.support(), f.support()) {
            prop_assert!((s.lo() - t.lo()).abs() < 1e-12 || s.lo() == t.lo());
            prop_assert!((s.hi() - t.hi()).abs() < 1e-12 || s.hi() == t.hi());
        }
    }

    #[test]
    fn zero_outside_support(f in compact(), x in 1.0f64..100.0, left in any::<bool>()) {
        let s = f.support().unwrap();
        let p = if left { s.lo() - x } else { s.hi() + x };
        prop_assert_eq!(f.eval(p), 0.0);
    }

    #[test]
    fn additivity_over_intervals(f in smooth(), a in -4.0f64..0.0, m in 0.0f64..1.0, w in 0.1f64..4.0) {
        let (b, c) = (a + m * w, a + w);
        let whole = bounded(&f, a, c);
        prop_assert!((whole - bounded(&f, a, b) - bounded(&f, b, c)).abs() < 1e-9);
    }

    #[test]
    fn improper_integral_is_linear(alpha in -3.0f64..3.0, beta in -3.0f64..3.0) {
        let (f, g) = (corpus::gauss(), corpus::lorentz());
        let combo = f.scaled(alpha).sum(&g.scaled(beta));
        let lhs = line_integral(&combo, 1e-9);
        let rhs = alpha * 1.0 + beta * PI;
        prop_assert!((lhs - rhs).abs() < 1e-7, "{lhs} vs {rhs}");
    }

    #[test]
    fn improper_integral_is_translation_invariant(z in -5.0f64..5.0,
        name in prop::sample::select(vec!["gauss", "lorentz", "sinc_tail", "expdecay"])) {
        let f = corpus::lookup(name).unwrap();
        let a = line_integral(&f, 1e-8);
        let b = line_integral(&translate(&f, z), 1e-8);
        prop_assert!((a - b).abs() < 1e-6, "{name} shifted by {z}: {a} vs {b}");
    }

    #[test]
    fn integral_is_monotone(a in -3.0f64..0.0, w in 0.1f64..3.0, c in 0.0f64..1.0) {
        let f = corpus::gauss();
        let g = f.sum(&RealFn::constant(c));
        prop_assert!(bounded(&f, a, a + w) <= bounded(&g, a, a + w) + 1e-12);
        prop_assert!(bounded(&f, a, a + w) <= w + 1e-12);
    }

    #[test]
    fn integration_by_parts(a in -8.0f64..-0.5, b in 0.5f64..8.0) {
        // ∫ s G' = [s G] - ∫ s' G with s = sinc_tail and G = gauss
        let s = corpus::sinc_tail();
        let g = corpus::gauss();
        let gp = corpus::gauss_prime();
        let sp = corpus::sinc_prime();
        let lhs = bounded(&s.weighted("gauss'", move |x| gp.eval(x)), a, b);
        let g2 = g.clone();
        let rest = bounded(&sp.weighted("gauss", move |x| g2.eval(x)), a, b);
        let rhs = s.eval(b) * g.eval(b) - s.eval(a) * g.eval(a) - rest;
        prop_assert!((lhs - rhs).abs() < 1e-9, "{lhs} vs {rhs}");
    }

    #[test]
    fn ld1_matches_finite_difference(f in smooth(), x in -0.9f64..0.9) {
        let r = ld1(&f, x, &MeanSpec::default()).unwrap();
        let h = 1e-5;
        let fd = (f.eval(x + h) - f.eval(x - h)) / (2.0 * h);
        prop_assert!((r.value - fd).abs() < 1e-5, "{} at {x}: {} vs {fd}", f.name(), r.value);
    }

    #[test]
    fn ld1_does_not_depend_on_delta(x in -1.5f64..1.5, d1 in 0.1f64..1.0, d2 in 0.1f64..1.0) {
        let f = corpus::gauss();
        let a = ld1(&f, x, &MeanSpec::default().with_delta(d1)).unwrap().value;
        let b = ld1(&f, x, &MeanSpec::default().with_delta(d2)).unwrap().value;
        prop_assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }

    #[test]
    fn ld1_is_linear(x in -1.0f64..1.0, c in -4.0f64..4.0) {
        let spec = MeanSpec::default();
        let (f, g) = (corpus::gauss(), corpus::lorentz());
        let lf = ld1(&f, x, &spec).unwrap().value;
        let lg = ld1(&g, x, &spec).unwrap().value;
        let scaled = ld1(&f.scaled(c), x, &spec).unwrap().value;
        let summed = ld1(&f.sum(&g), x, &spec).unwrap().value;
        prop_assert!((scaled - c * lf).abs() < 1e-6 * (1.0 + c.abs()));
        prop_assert!((summed - lf - lg).abs() < 1e-6);
    }

    #[test]
    fn laplace_mean_is_bounded(x in -2.0f64..2.0, s in 1.0f64..1e4, delta in 0.05f64..1.0, right in any::<bool>()) {
        let side = if right { Side::Right } else { Side::Left };
        let m = laplace_mean(&corpus::gauss(), x, side, s, delta).unwrap();
        prop_assert!(m.value >= 0.0 && m.value <= 1.0 + 1e-12, "{}", m.value);
    }

    #[test]
    fn fubini_is_symmetric_under_transposition(p in 0.5f64..3.0, q in -2.0f64..2.0) {
        let k = Kernel2D::new(move |x: f64, y: f64| (p * x * y).cos() * (q * y).exp() * (1.0 + x * x).recip());
        let (i1, i2) = iterated_integrals(&k, (-1.0, 1.0), (0.0, 1.0), 1e-10).unwrap();
        let (t1, t2) = iterated_integrals(&k.transposed(), (0.0, 1.0), (-1.0, 1.0), 1e-10).unwrap();
        prop_assert!((i1.value - t2.value).abs() < 1e-9 && (i2.value - t1.value).abs() < 1e-9);
        let r = fubini_residual(&k, (-1.0, 1.0), (0.0, 1.0), 1e-10).unwrap().abs_residual;
        let rt = fubini_residual(&k.transposed(), (0.0, 1.0), (-1.0, 1.0), 1e-10).unwrap().abs_residual;
        prop_assert!(r < 1e-8 && (r - rt).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(cases(8))]

    #[test]
    fn interchange_certificate_implies_differentiation(p in 0.5f64..3.0, q in -1.0f64..1.0) {
        let k = Kernel2D::new(move |x: f64, y: f64| (p * x * y).sin() * (q * y).exp())
            .with_dx(move |x: f64, y: f64| p * y * (p * x * y).cos() * (q * y).exp());
        let dk = Kernel2D::new(move |x: f64, y: f64| p * y * (p * x * y).cos() * (q * y).exp());
        let certified = [(-1.0, 1.0), (-1.0, 0.0), (0.0, 1.0), (-0.5, 0.25)]
            .iter()
            .all(|&xr| fubini_residual(&dk, xr, (0.0, 1.0), 1e-10).unwrap().abs_residual < 1e-7);
        prop_assert!(certified);
        for x in [-0.8, -0.4, 0.0, 0.4, 0.8] {
            let r = diff_under_integral(&k, x, (0.0, 1.0), &MeanSpec::default(), 1e-10).unwrap();
            prop_assert!(r.abs_residual < 1e-4, "x={x}: {}", r.abs_residual);
        }
    }
}

proptest! {
    #![proptest_config(cases(12))]

    #[test]
    fn convolution_routes_agree(x in -3.0f64..3.0) {
        let plan = ConvPlan::new(1e-8, vec![x]).unwrap();
        let (f, g) = (corpus::sinc_tail(), corpus::gauss());
        let direct = convolve_with(&f, &g, x, &plan, ConvRoute::Direct).unwrap().value;
        let parts = convolve_with(&f, &g, x, &plan, ConvRoute::ByParts).unwrap().value;
        prop_assert!((direct - parts).abs() < 1e-6, "{direct} vs {parts}");
    }

    #[test]
    fn primitive_interchange_holds(t in -1.5f64..1.5) {
        let plan = ConvPlan::new(1e-8, (0..17).map(|i| -2.0 + 0.25 * i as f64).collect()).unwrap();
        let r = primitive_interchange_check(&corpus::bump_prime(), &corpus::gauss_prime(), t, &plan).unwrap();
        prop_assert!(r.abs_residual < 1e-6, "{}", r.abs_residual);
    }

    #[test]
    fn convolution_is_bilinear(x in -2.0f64..2.0, a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let plan = ConvPlan::new(1e-10, vec![x]).unwrap();
        let (f, g, h) = (corpus::box_fn(), corpus::gauss(), corpus::bump());
        let combo = g.scaled(a).sum(&h.scaled(b));
        let lhs = convolve(&f, &combo, x, &plan).unwrap().value;
        let rhs = a * convolve(&f, &g, x, &plan).unwrap().value + b * convolve(&f, &h, x, &plan).unwrap().value;
        prop_assert!((lhs - rhs).abs() < 1e-8, "{lhs} vs {rhs}");
    }

    #[test]
    fn transform_is_conjugate_symmetric(y in 0.05f64..3.0,
        name in prop::sample::select(vec!["bump", "gauss_prime", "expdecay", "box", "lorentz"])) {
        let f = corpus::lookup(name).unwrap();
        let (p, m) = (ft(&f, y, 1e-9), ft(&f, -y, 1e-9));
        prop_assert!((p - m.conj()).norm() < 1e-8, "{name} at {y}: {p} vs {m}");
    }

    #[test]
    fn transform_is_linear(y in -2.0f64..2.0, a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let (f, g) = (corpus::gauss(), corpus::bump());
        let combo = f.scaled(a).sum(&g.scaled(b));
        let lhs = ft(&combo, y, 1e-9);
        let rhs = ft(&f, y, 1e-9) * a + ft(&g, y, 1e-9) * b;
        prop_assert!((lhs - rhs).norm() < 1e-8, "{lhs} vs {rhs}");
    }

    #[test]
    fn zero_spectrum_inverts_to_zero(x in -10.0f64..10.0) {
        let v = invert(&SpectrumProvider::zero(), x, &LadderConfig::gauss_default(), 1e-10).unwrap();
        prop_assert!(v.value.norm() < 1e-8);
    }
}

fn expr_text() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (0u32..50).prop_map(|n| format!("{}", n as f64 / 4.0)),
        Just("x".to_string()),
        Just("pi".to_string()),
        Just("e".to_string()),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone(), prop::sample::select(vec!["+", "-", "*", "/", "^"]))
                .prop_map(|(a, b, op)| format!("({a}) {op} ({b})")),
            (inner.clone(), prop::sample::select(vec!["sin", "cos", "exp", "abs", "sgn"]))
                .prop_map(|(a, f)| format!("{f}({a})")),
            inner.prop_map(|a| format!("-({a})")),
        ]
    })
}

proptest! {
    #![proptest_config(cases(64))]

    #[test]
    fn expression_canonical_form_round_trips(text in expr_text(), x in -2.0f64..2.0) {
        let e = Expr::parse(&text).unwrap();
        let canon = e.to_string();
        let again = Expr::parse(&canon).unwrap();
        prop_assert_eq!(&again, &e, "{} -> {}", text, canon);
        prop_assert_eq!(again.to_string(), canon);
        let (a, b) = (e.eval(x), again.eval(x));
        prop_assert!(a == b || (a.is_nan() && b.is_nan()));
    }

    #[test]
    fn piecewise_canonical_form_round_trips(b0 in -3.0f64..0.0, w in 0.1f64..3.0, c in 0.0f64..5.0) {
        let text = format!("piecewise({b0}, {}; 0; {c}*(x - ({b0}))*(({}) - x); 0)", b0 + w, b0 + w);
        let p = Piecewise::parse(&text).unwrap();
        prop_assert_eq!(Piecewise::parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn config_canonical_form_round_trips(
        name in prop::sample::select(corpus::corpus().into_keys().collect::<Vec<_>>()),
        lo in -5.0f64..0.0, hi in 0.0f64..5.0, n in 1usize..50,
        tol_exp in 3i32..12, delta in 0.01f64..2.0,
        format in prop::sample::select(vec!["csv", "jsonl"]),
        suites in prop::sample::subsequence(vec!["fubini", "ftc", "inversion", "convolution"], 0..4),
    ) {
        let mut cfg = RunConfig::default();
        cfg.set("fn", &name).unwrap();
        cfg.set("xs", &format!("{lo}:{hi}:{n}")).unwrap();
        cfg.set("ys", &format!("{lo},{hi}")).unwrap();
        cfg.set("tol", &format!("1e-{tol_exp}")).unwrap();
        cfg.set("delta", &delta.to_string()).unwrap();
        cfg.set("ladder", "10,2,8").unwrap();
        cfg.set("format", format).unwrap();
        cfg.set("suite", &suites.join(",")).unwrap();
        let text = cfg.to_string();
        prop_assert_eq!(RunConfig::parse(&text).unwrap(), cfg, "{}", text);
    }
}

#[test]
fn classical_kernel_orders_differ_by_half_pi() {
    let k = laplace_fourier::verify::classical_kernel();
    let r = fubini_residual(&k, (0.0, 1.0), (0.0, 1.0), 1e-10).unwrap();
    assert!((r.abs_residual - PI / 2.0).abs() < 1e-3, "{}", r.abs_residual);
}

#[test]
fn gauss_kernel_mass_concentrates() {
    assert!(gauss_kernel_mass(0.01, 0.5).unwrap() > 1.0 - 1e-8);
}
