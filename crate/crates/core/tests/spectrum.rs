use focusnode::quad::integrate;
use focusnode::spectrum::*;
use num_complex::Complex64 as C;
use proptest::prelude::*;

const B: f64 = 0.3;
const PRC: Determination = Determination::PositiveRealCut;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

#[test]
fn eigenvalue_examples() {
    let e = eigenvalues(c(B, 0.0), B, PRC);
    assert_eq!((e.lambda, e.mu), (c(B, 0.0), c(B, 0.0)));
    let e = eigenvalues(c(B + 1.0, 0.0), B, PRC);
    assert!((e.lambda - B).norm() < 1e-15 && (e.mu - (B + 2.0)).norm() < 1e-15);
    let e = eigenvalues(c(0.0, 0.0), B, PRC);
    assert!((e.lambda - c(0.0, -B.sqrt())).norm() < 1e-15);
    assert!((e.mu - c(0.0, B.sqrt())).norm() < 1e-15);
}

#[test]
fn relief_examples() {
    let v = relief(c(0.0, 0.0), B, Which::Lambda, PRC).unwrap();
    assert!(v.primitive.norm() < 1e-15);
    let v = relief(c(-0.5, 0.0), B, Which::Lambda, PRC).unwrap();
    assert!((v.relief - 0.125).abs() < 1e-15);
    // quadrature of Re lambda along the real axis
    let q = integrate(|t| eigenvalues(c(t, 0.0), B, PRC).lambda.re, 0.0, -0.5, 1e-14);
    assert!((q - 0.125).abs() < 1e-12);
    match relief(c(0.7, 0.0), B, Which::Lambda, PRC) {
        Err(focusnode::Error::OnCut { side_a, side_b, .. }) => {
            assert!((side_a - side_b).norm() > 0.1, "{side_a} {side_b}");
        }
        other => panic!("expected a cut error, got {other:?}"),
    }
}

#[test]
fn critical_point_numbers() {
    let (tc, rc) = critical_point(B).unwrap();
    assert!((tc - c(0.5, 0.223_606_797_749_979)).norm() < 1e-12);
    assert!((rc - (B / 2.0 - 1.0 / 12.0)).abs() < 1e-12);
    assert!((rc - 0.067).abs() < 5e-4);
    assert!(eigenvalues(tc, B, PRC).lambda.norm() < 1e-12);
    assert!(critical_point(0.25).is_err());
    let (tc, _) = critical_point(0.25 + 1e-9).unwrap();
    assert!(tc.im < 1e-4);
}

#[test]
fn crossings_numbers() {
    let r = real_crossings(B).unwrap();
    assert!((r.t_e + 0.365).abs() < 5e-4, "{}", r.t_e);
    assert!((r.t_e + (B - 1.0 / 6.0).sqrt()).abs() < 1e-12);
    assert!((r.t_s1 - 0.346).abs() < 1e-3, "{}", r.t_s1);
    assert!((r.t_s2 - 0.525).abs() < 1e-3, "{}", r.t_s2);
    let (_, rc) = critical_point(B).unwrap();
    assert!((0.5 * r.t_e * r.t_e - rc).abs() < 1e-10);
    assert!((relief_on_cut(r.t_s1, B, Which::Lambda, false) - rc).abs() < 1e-10);
    assert!((relief_on_cut(r.t_s2, B, Which::Lambda, true) - rc).abs() < 1e-10);
    assert!(real_crossings(0.8).is_err());
}

#[test]
fn hopf_example() {
    assert_eq!((HOPF_BUMP, HOPF_ANTI_BUMP), (1.0, -1.0));
    for t in [-2.0, -0.3, 0.0, 0.7, 1.5] {
        assert!((hopf_relief(c(t, 0.0), Which::Lambda) - (t * t - 1.0) / 2.0).abs() < 1e-15);
    }
    // lambda(i) = 0: i is a critical point, with value Re((i - i)^2)/2 = 0
    assert_eq!(hopf_relief(c(0.0, 1.0), Which::Lambda), 0.0);
}

#[test]
fn hypotheses_examples() {
    let h = check_hypotheses(0.3);
    assert!(h.complex_pair && h.focus_node_below_saddle);
    assert!(!check_hypotheses(0.2).complex_pair);
    assert!((b_upper() - (0.5 + 3f64.sqrt() / 6.0)).abs() < 1e-15);
    let h = check_hypotheses(0.8);
    assert!(h.complex_pair && !h.focus_node_below_saddle);
    assert!(matches!(bumps(0.3).unwrap(), Bumps::AfterFocusNode(_)));
    assert!(matches!(bumps(0.75).unwrap(), Bumps::AfterFocusNode(_)));
    match bumps(0.9).unwrap() {
        Bumps::BeforeFocusNode { anti_bump, bump } => {
            assert!(bump < 0.9 && (anti_bump + bump).abs() < 1e-15);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn numeric_hook_matches_closed_form() {
    let jac = |t: C| [[t, c(1.0, 0.0)], [t - B, t]];
    for t in [c(-0.4, 0.1), c(0.2, -0.3), c(1.2, 0.5)] {
        let (a, b) = eigenvalues_numeric(jac, t);
        let e = eigenvalues(t, B, PRC);
        let pair = [e.lambda, e.mu];
        for v in [a, b] {
            assert!(pair.iter().any(|w| (w - v).norm() < 1e-12), "{v} not in {pair:?}");
        }
    }
}

fn segment_primitive(b: f64, which: Which, p: C, q: C) -> C {
    let d = q - p;
    let f = |s: f64| primitive_derivative(p + d * s, b, which, PRC) * d;
    C::new(integrate(|s| f(s).re, 0.0, 1.0, 1e-13), integrate(|s| f(s).im, 0.0, 1.0, 1e-13))
}

proptest! {
    #[test]
    fn trace_and_product(re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let t = c(re, im);
        for det in [PRC, Determination::ShiftedCut] {
            let e = eigenvalues(t, B, det);
            let s = e.lambda + e.mu;
            let p = e.lambda * e.mu;
            let pw = t * t - (t - B);
            prop_assert!((s - 2.0 * t).norm() <= 1e-13 * (2.0 * t).norm().max(1.0));
            prop_assert!((p - pw).norm() <= 1e-13 * pw.norm().max(1.0));
        }
    }

    #[test]
    fn conjugation_symmetry(re in -2.0f64..2.0, im in 0.001f64..2.0) {
        let t = c(re, im);
        let (l, m) = (eigenvalues(t, B, PRC).lambda, eigenvalues(t.conj(), B, PRC).mu);
        prop_assert!((m - l.conj()).norm() < 1e-13);
        let rl = relief_value(t.conj(), B, Which::Lambda, PRC).relief;
        let rm = relief_value(t, B, Which::Mu, PRC).relief;
        prop_assert!((rl - rm).abs() < 1e-13);
    }

    #[test]
    fn real_axis_collapse(t in -3.0f64..B) {
        for which in [Which::Lambda, Which::Mu] {
            let r = relief_value(c(t, 0.0), B, which, PRC).relief;
            prop_assert!((r - 0.5 * t * t).abs() < 1e-13);
        }
    }

    #[test]
    fn closed_form_matches_quadrature(
        pts in proptest::collection::vec((-1.5f64..1.5, -1.5f64..1.5), 1..4),
    ) {
        let mut nodes = vec![c(0.0, 0.0)];
        nodes.extend(pts.iter().map(|&(x, y)| c(x, y)));
        let crosses = nodes.windows(2).any(|w| PRC.segment_crosses_cut(w[0], w[1], B)
            || (w[0] - B).norm() < 1e-3 || (w[1] - B).norm() < 1e-3);
        prop_assume!(!crosses);
        for which in [Which::Lambda, Which::Mu] {
            let q: C = nodes.windows(2).map(|w| segment_primitive(B, which, w[0], w[1])).sum();
            let f = relief_value(*nodes.last().unwrap(), B, which, PRC).primitive;
            prop_assert!((q - f).norm() < 1e-8, "{} vs {}", q, f);
        }
    }
}
