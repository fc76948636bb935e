use focusnode::entryexit::*;
use focusnode::flow::{rk4, to_microscope};
use focusnode::par::Strategy;
use focusnode::Params;

fn params() -> Params {
    Params::new(0.3, 0.0, -1.0, 0.002).unwrap()
}

/// First grid point past `from` where `f` changes sign, on a uniform grid of step `h`.
fn scan_root(f: impl Fn(f64) -> f64, from: f64, to: f64, h: f64) -> f64 {
    let n = ((to - from) / h).ceil() as usize;
    let mut prev = f(from);
    for k in 1..=n {
        let t = from + k as f64 * h;
        let v = f(t);
        if prev.signum() != v.signum() {
            return t - 0.5 * h;
        }
        prev = v;
    }
    panic!("no sign change on [{from}, {to}]");
}

#[test]
fn hopf_examples() {
    for (t_e, want) in [(-0.5, 0.5), (-0.2, 0.2)] {
        let r = hopf_canard_exit(|t| t, t_e, 0.0, 2.0).unwrap();
        assert_eq!(r.rule, Rule::HopfIntegral);
        assert!((r.representative() - want).abs() < 1e-10);
    }
    assert!(hopf_canard_exit(|t| t, 0.5, 0.0, 2.0).is_err());
    // integral never closes
    assert!(hopf_canard_exit(|t| t - 5.0, -1.0, 0.0, 2.0).is_err());
}

#[test]
fn synthetic_hopf_against_grid_scan() {
    let re = |t: f64| t - 0.1 * t * t;
    let prim = |t: f64| 0.5 * t * t - t.powi(3) / 30.0;
    let t_e = -0.5;
    let r = hopf_canard_exit(re, t_e, 0.0, 2.0).unwrap();
    let oracle = scan_root(|s| prim(s) - prim(t_e), 1e-3, 2.0, 1e-6);
    assert!((r.representative() - oracle).abs() <= 1e-6, "{} vs {oracle}", r.representative());
}

#[test]
fn bump_relation() {
    assert_eq!(hopf_bump_relation(-2.0).unwrap().kind, IoKind::Point(1.0));
    assert_eq!(hopf_bump_relation(-1.0).unwrap().kind, IoKind::AnyBeyond(1.0));
    assert_eq!(hopf_bump_relation(-1.0).unwrap().rule, Rule::HopfAntiBump);
    let r = hopf_bump_relation(-0.3).unwrap();
    assert_eq!(r.kind, IoKind::Point(0.3));
    assert_eq!(r.rule, Rule::HopfSymmetric);
}

#[test]
fn band_examples() {
    let p = params();
    let (lo, hi) = hfn_band(&p, -0.365).unwrap().bounds();
    assert!((lo - 0.346).abs() <= 1e-3 && (hi - 0.525).abs() <= 1e-3, "[{lo}, {hi}]");
    assert_eq!(hfn_band(&p, -0.2).unwrap().kind, IoKind::Point(0.2));
    assert!(hfn_band(&Params::new(0.2, 0.0, -1.0, 0.002).unwrap(), -0.5).is_err());
    assert!(hfn_band(&p, 0.1).is_err());
}

#[test]
fn band_at_minus_032_against_grid_scan() {
    let p = params();
    let r = hfn_band(&p, -0.32).unwrap();
    let IoKind::Interval { lo, hi, open } = r.kind else {
        panic!("{r:?}")
    };
    assert!(!open);
    let b = p.b;
    let target = 0.5 * 0.32 * 0.32;
    let g = |sign: f64| move |s: f64| 0.5 * s * s + sign * (2.0 / 3.0) * (s - b).powf(1.5) - target;
    let s_mu = scan_root(g(1.0), b, 1.0, 1e-7);
    let s_la = scan_root(g(-1.0), b, 1.0, 1e-7);
    assert!((lo - s_mu).abs() <= 1e-7, "{lo} {s_mu}");
    assert!((hi - s_la).abs() <= 1e-7, "{hi} {s_la}");
}

#[test]
fn band_is_ordered() {
    let p = params();
    for k in 1..60 {
        let t_e = -0.3 - 0.02 * k as f64;
        let (lo, hi) = hfn_band(&p, t_e).unwrap().bounds();
        assert!(lo <= hi && lo > p.b, "t_e = {t_e}: [{lo}, {hi}]");
    }
}

#[test]
fn band_point_case_agrees_with_integral_rule() {
    let p = params();
    for k in 1..30 {
        let t_e = -0.01 * k as f64;
        let band = hfn_band(&p, t_e).unwrap().representative();
        // Re lambda = t below b
        let hopf = hopf_canard_exit(|t| t, t_e, 0.0, p.b).unwrap().representative();
        assert!((band - hopf).abs() <= 1e-9, "{t_e}: {band} {hopf}");
    }
}

#[test]
fn conjecture_examples_and_monotonicity() {
    let p = params();
    assert_eq!(conjectured_exit(&p, -0.8).unwrap().representative(), 0.3);
    assert_eq!(conjectured_exit(&p, -0.2).unwrap().representative(), 0.2);
    assert_eq!(conjectured_exit(&p, -p.b).unwrap().representative(), p.b);
    let grid: Vec<f64> = (1..200).map(|k| -2.0 + 0.01 * k as f64).collect();
    let vals: Vec<f64> = grid.iter().map(|&t| conjectured_exit(&p, t).unwrap().representative()).collect();
    for (w, t) in vals.windows(2).zip(&grid) {
        if *t <= -p.b {
            assert_eq!(w[0], p.b);
        } else {
            assert!((w[0] + t).abs() < 1e-15);
        }
    }
    assert!(conjectured_exit(&p, 0.0).is_err());
}

#[test]
fn measured_exit_from_far_entry() {
    let t = measure_exit(&params(), -0.8, 1e-6, 0.05, 1e-4).unwrap();
    assert!((t - 0.30).abs() <= 0.05, "{t}");
}

#[test]
fn measured_exit_at_saddle_entry_stays_near_b() {
    let t = measure_exit(&params(), -0.365, 1e-6, 0.05, 1e-4).unwrap();
    assert!(t <= 0.35, "{t}");
}

#[test]
fn measured_exit_from_close_entry() {
    let t = measure_exit(&params(), -0.2, 1e-6, 0.05, 1e-4).unwrap();
    assert!((t - 0.20).abs() <= 0.05, "{t}");
}

#[test]
fn measure_protocol_checks() {
    let p = params();
    assert!(measure_exit(&p, 0.1, 1e-6, 0.05, 1e-4).is_err());
    assert!(measure_exit(&p, -0.5, 1e-9, 0.05, 1e-4).is_err());
    assert!(measure_exit(&p, -0.5, 1e-6, 1e-5, 1e-4).is_err());
}

#[test]
fn unforced_rho_track_is_v_shaped() {
    // without forcing the offset decays then grows at rate t, so rho is symmetric about 0
    let p = Params::new(0.3, 0.0, 0.0, 0.002).unwrap();
    let t_e = -0.25;
    let traj = rk4(&p, t_e, [1e-6, 0.0], 0.28, 1e-4).unwrap();
    let m = to_microscope(&traj, &p).unwrap();
    let (k_min, _) = m.rho.iter().enumerate().fold((0, f64::INFINITY), |a, (k, &r)| if r < a.1 { (k, r) } else { a });
    assert!(m.t[k_min].abs() < 0.03, "minimum at {}", m.t[k_min]);
    let k_end = m.t.iter().position(|&t| t >= 0.25).unwrap();
    assert!((m.rho[k_end] - m.rho[0]).abs() < 0.01, "{} {}", m.rho[k_end], m.rho[0]);
}

#[test]
fn sweep_strategies_agree() {
    let p = params();
    let entries = [-0.8, -0.4, -0.25];
    let s = MeasureSettings::default();
    let a = sweep_with(&p, &entries, s, Strategy::Sequential).unwrap();
    let b = sweep_with(&p, &entries, s, Strategy::Parallel).unwrap();
    assert_eq!(a, b);
    assert_eq!(a[0].predicted, 0.3);
    assert!(a.iter().all(|r| r.measured.is_some()));
}
