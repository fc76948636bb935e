use focusnode::series::*;
use focusnode::Params;
use num_complex::Complex64 as C;
use proptest::prelude::*;

fn params() -> Params {
    Params::new(0.3, 0.0, -1.0, 0.002).unwrap()
}

#[test]
fn first_term_closed_form() {
    let p = Params::new(0.4, 0.7, -1.3, 0.002).unwrap();
    for t in [-0.8, -0.1, 0.0, 0.4, 1.1] {
        let (x, _) = qss_term(&p, t, 1, 1).unwrap();
        let want = (-p.c1 * t + p.c2) / (t * t - t + p.b);
        assert!((x.value() - want).abs() < 1e-14);
    }
    let (x, _) = qss_term(&params(), 0.0, 1, 1).unwrap();
    assert!((x.value() + 1.0 / 0.3).abs() < 1e-14);
}

#[test]
fn second_term_at_b_matches_display() {
    for (b, c1, c2) in admissible_points(10) {
        let p = Params::new(b, c1, c2, 0.002).unwrap();
        let (x, y) = qss_term(&p, b, 2, 1).unwrap();
        let d = xplus_b_display(b, c1, c2);
        let s = d[0][1].abs().max(d[1][1].abs()).max(1.0);
        assert!((x.value() - d[0][1]).abs() < 1e-12 * s && (y.value() - d[1][1]).abs() < 1e-12 * s);
    }
}

#[test]
fn x_plus_at_b() {
    let (x, y) = xplus_at_b(&params(), 9).unwrap();
    assert!((x.coeff(3).re + 11.111_111_111_111).abs() < 1e-9);
    assert!((y.coeff(3).re - 3.333_333_333_333).abs() < 1e-9);
    let d = xplus_b_display(0.3, 0.0, -1.0);
    assert!((x.coeff(6).re - d[0][1]).abs() < 1e-12 * d[0][1].abs());
    assert!((y.coeff(6).re - d[1][1]).abs() < 1e-12 * d[1][1].abs());
    let z = Params::new(0.3, 0.0, 0.0, 0.002).unwrap();
    let (x, y) = xplus_at_b(&z, 9).unwrap();
    assert!((0..=9).all(|k| x.coeff(k) == C::new(0.0, 0.0) && y.coeff(k) == C::new(0.0, 0.0)));
    assert!(xplus_at_b(&params(), 12).is_err());
}

#[test]
fn displays_agree() {
    for (b, c1, c2) in admissible_points(20) {
        let (u, v) = (xplus_b_display(b, c1, c2), xminus_b_display(b, c1, c2));
        for i in 0..2 {
            for k in 0..2 {
                assert!((u[i][k] - v[i][k]).abs() <= 1e-12 * u[i][k].abs().max(1.0));
            }
        }
        assert!((u[0][0] - (-c1 / b + c2 / (b * b))).abs() <= 1e-12 * u[0][0].abs().max(1.0));
    }
}

#[test]
fn three_point_fit_of_x_minus() {
    let f = xminus_at_b_fit(&params(), &[0.002, 0.001, 0.0005], 6).unwrap();
    assert!((f.x.coeff(3).re + 11.111).abs() <= 0.01 * 11.111, "{}", f.x.coeff(3));
    assert!((f.y.coeff(3).re - 3.3333).abs() <= 0.01 * 3.3333, "{}", f.y.coeff(3));
    assert!(xminus_at_b_fit(&params(), &[0.002, 0.001], 6).is_err());
}

#[test]
fn coincidence_of_expansions() {
    let c = compare_expansions(&params(), 12).unwrap();
    assert!(c.max_discrepancy <= 1e-2, "{:?}", c.discrepancy);
    assert!(c.display_mismatch <= 1e-12);
    let (sx, sy) = c.residual_slope;
    assert!((sx - 9.0).abs() <= 0.7 && (sy - 9.0).abs() <= 0.7, "{sx} {sy}");
    let z = Params::new(0.3, 0.0, 0.0, 0.002).unwrap();
    let f = xminus_at_b_fit(&z, &DEFAULT_FIT_EPS3, 12).unwrap();
    assert!((0..=12).all(|k| f.x.coeff(k).norm() == 0.0 && f.y.coeff(k).norm() == 0.0));
}

#[test]
fn recurrence_residual_order() {
    // residual of the order-N partial sum in eps^3 X' = J X + eps^3 c is O(eps^{3(N+1)})
    let p0 = params();
    for n in [1usize, 2] {
        for t in [-0.4, 0.1, 0.5] {
            let mut pts = Vec::new();
            for e3 in [0.002, 0.001, 0.0005] {
                let p = p0.with_eps3(e3).unwrap();
                let terms = qss_terms(&p, t, n, 2).unwrap();
                let (mut x, mut y, mut dx, mut dy) = (0.0, 0.0, 0.0, 0.0);
                for (k, (a, b)) in terms.iter().enumerate() {
                    let w = e3.powi(k as i32 + 1);
                    x += w * a.value();
                    y += w * b.value();
                    dx += w * a.derivative_value(1);
                    dy += w * b.derivative_value(1);
                }
                let r0 = e3 * dx - (t * x + y + e3 * p.c1);
                let r1 = e3 * dy - ((t - p.b) * x + t * y + e3 * p.c2);
                pts.push((e3.cbrt().ln(), r0.hypot(r1).ln()));
            }
            let slope = (pts[2].1 - pts[0].1) / (pts[2].0 - pts[0].0);
            let want = 3.0 * (n as f64 + 1.0);
            assert!((slope - want).abs() <= 0.5, "N={n}, t={t}: {slope}");
        }
    }
}

#[test]
fn singular_jacobian_is_reported() {
    // t^2 - t + b = 0 has real roots only for b <= 1/4
    let p = Params::new(0.25, 0.0, -1.0, 0.002).unwrap();
    assert!(matches!(qss_term(&p, 0.5, 1, 1), Err(focusnode::Error::SingularJacobian(_))));
}

fn poly_jet(coeffs: &[f64], t0: f64, m: usize) -> Jet {
    let t = Jet::variable(t0, m);
    let mut acc = Jet::constant(0.0, m);
    for &c in coeffs.iter().rev() {
        acc = &(&acc * &t) + &Jet::constant(c, m);
    }
    acc
}

fn poly_eval(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |a, &c| a * t + c)
}

proptest! {
    #[test]
    fn jet_product_rule(
        a in proptest::collection::vec(-2.0f64..2.0, 1..5),
        b in proptest::collection::vec(-2.0f64..2.0, 1..5),
        t0 in -1.0f64..1.0,
    ) {
        let m = 6;
        let prod = &poly_jet(&a, t0, m) * &poly_jet(&b, t0, m);
        // product polynomial coefficients
        let mut c = vec![0.0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (k, y) in b.iter().enumerate() {
                c[i + k] += x * y;
            }
        }
        let direct = poly_jet(&c, t0, m);
        for k in 0..=m {
            let (u, v) = (prod.derivative_value(k), direct.derivative_value(k));
            prop_assert!((u - v).abs() <= 1e-12 * v.abs().max(1.0), "k={} {} {}", k, u, v);
        }
        prop_assert!((prod.value() - poly_eval(&a, t0) * poly_eval(&b, t0)).abs() < 1e-12);
    }

    #[test]
    fn power_series_ops_are_exact_below_truncation(
        a in proptest::collection::vec(-2.0f64..2.0, 1..4),
        b in proptest::collection::vec(-2.0f64..2.0, 1..4),
    ) {
        let (pa, pb) = (PowerSeries::from_real(&a), PowerSeries::from_real(&b));
        let s = &pa * &pb;
        for e in [0.1, 0.3] {
            let want = poly_eval(&a, e) * poly_eval(&b, e);
            let got = s.eval(e);
            // terms at or beyond the truncation order are dropped
            let order = s.order();
            let mut full = vec![0.0; a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (k, y) in b.iter().enumerate() {
                    full[i + k] += x * y;
                }
            }
            let kept: f64 = full.iter().enumerate().take(order).map(|(k, c)| c * e.powi(k as i32)).sum();
            prop_assert!((got.re - kept).abs() < 1e-12 && got.im == 0.0);
            if order >= full.len() {
                prop_assert!((got.re - want).abs() < 1e-12);
            }
        }
    }
}
