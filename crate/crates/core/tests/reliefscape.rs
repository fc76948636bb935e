use focusnode::reliefscape::*;
use focusnode::spectrum::*;
use num_complex::Complex64 as C;

const B: f64 = 0.3;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn hopf_pair() -> [Relief; 2] {
    [Relief::Hopf { which: Which::Lambda }, Relief::Hopf { which: Which::Mu }]
}

#[test]
fn descent_examples() {
    let seg = ComplexPath::new(vec![c(-2.0, 0.0), c(-1.0, 0.0)]).unwrap();
    let h = Relief::Hopf { which: Which::Lambda };
    assert!(is_descending(&seg, &h, 1e-9).unwrap().descending);

    // R = (x^2 - (y-1)^2)/2 is constant on x = y - 1
    let level = ComplexPath::new(vec![c(0.0, 1.0), c(1.0, 2.0)]).unwrap();
    assert!(!is_descending(&level, &h, 1e-9).unwrap().descending);

    let path = xm_path(B, 0.5, 1.2).unwrap();
    let lam = Relief::lambda(B);
    let head = path.without_last_segment().unwrap();
    assert!(is_descending(&head, &lam, 1e-9).unwrap().descending);
    let tail = ComplexPath::new(vec![c(B, 0.5), c(B, 0.0)]).unwrap();
    assert!(!is_descending(&tail, &lam, 1e-9).unwrap().descending);
    assert!(xm_path(B, 0.95, 1.2).is_err());

    // conjugate path descends R_mu
    let conj = head.conj();
    assert!(is_descending(&conj, &Relief::mu(B), 1e-9).unwrap().descending);
}

#[test]
fn hopf_domain_from_minus_two() {
    let r = descending_reachability(c(-2.0, 0.0), hopf_pair(), BBox::new(-3.0, 3.0, -3.0, 3.0).unwrap(), 241).unwrap();
    let m = &r.both;
    let h = 6.0 / 240.0;
    for t in [-1.9, -1.0, -0.5, 0.0, 0.5, 0.95] {
        assert!(m.at_point(c(t, 0.0)), "{t} should be reachable");
    }
    for t in [1.0 + 2.0 * h, 1.5, 2.5, -2.5] {
        assert!(!m.at_point(c(t, 0.0)), "{t} should not be reachable");
    }
    assert!(!m.single_sheet_caveat);
}

#[test]
fn saddle_is_unreachable() {
    let (tc, rc) = critical_point(B).unwrap();
    // y-axis chosen so that t_c is a grid node
    let bb = BBox::new(-1.5, 2.5, -2.0 * tc.im, 2.0 * tc.im).unwrap();
    let g = ReliefGrid::evaluate(&Relief::lambda(B), bb, 401);
    let (ix, iy) = g.nearest(tc);
    assert!((g.point(ix, iy) - tc).norm() < 1e-12);
    assert!((g.at(ix, iy) - rc).abs() < 1e-12);
    let t_e = real_crossings(B).unwrap().t_e;
    let r = descending_reachability(c(t_e, 0.0), [Relief::lambda(B), Relief::mu(B)], bb, 401).unwrap();
    assert!(!r.first.get(ix, iy) && !r.both.get(ix, iy));
}

#[test]
fn domain_below_plus_infinity_single_sheet() {
    let rl = Relief::lambda(B).with_determination(Determination::ShiftedCut);
    let rm = Relief::mu(B).with_determination(Determination::ShiftedCut);
    let n = 1201;
    let bb = BBox::new(-1.5, 4.5, -1.5, 1.5).unwrap();
    let r = descending_reachability(c(4.0, 0.0), [rl, rm], bb, n).unwrap();
    let h = 6.0 / (n - 1) as f64;
    let runs = r.both.real_axis_runs();
    assert_eq!(runs.len(), 2, "{runs:?}");
    let (a, b) = (runs[0], runs[1]);
    assert!(a.0 >= -0.1 && a.0 <= 0.05, "{runs:?}");
    assert!((a.1 - (B - h)).abs() < 1e-9 && (b.0 - (B + h)).abs() < 1e-9, "{runs:?}");
    assert!((b.1 - 4.0).abs() < 1e-9);
    assert!(r.both.single_sheet_caveat);
}

#[test]
fn mask_is_mirror_symmetric() {
    let bb = BBox::new(-1.5, 1.5, -1.5, 1.5).unwrap();
    let r = descending_reachability(c(-1.0, 0.0), [Relief::lambda(B), Relief::mu(B)], bb, 201).unwrap();
    let m = &r.both;
    let ny = m.ny();
    for iy in 0..ny {
        assert_eq!(m.ys[iy], -m.ys[ny - 1 - iy]);
        for ix in 0..m.nx() {
            assert_eq!(m.get(ix, iy), m.get(ix, ny - 1 - iy), "({ix}, {iy})");
        }
    }
    assert!(m.count() > 0);
}

#[test]
fn refinement_moves_only_the_boundary() {
    let bb = BBox::new(-1.5, 1.5, -1.5, 1.5).unwrap();
    let seed = c(-1.0, 0.0);
    let pair = [Relief::lambda(B), Relief::mu(B)];
    let coarse = descending_reachability(seed, pair, bb, 101).unwrap().both;
    let fine = descending_reachability(seed, pair, bb, 201).unwrap().both;
    let n = coarse.nx();
    let boundary = |ix: usize, iy: usize| {
        let v = coarse.get(ix, iy);
        (ix.saturating_sub(1)..=(ix + 1).min(n - 1))
            .any(|jx| (iy.saturating_sub(1)..=(iy + 1).min(n - 1)).any(|jy| coarse.get(jx, jy) != v))
    };
    let mut changed = 0;
    for iy in 0..n {
        for ix in 0..n {
            assert!((coarse.point(ix, iy) - fine.point(2 * ix, 2 * iy)).norm() < 1e-12);
            if coarse.get(ix, iy) != fine.get(2 * ix, 2 * iy) {
                changed += 1;
                assert!(boundary(ix, iy), "interior change at {}", coarse.point(ix, iy));
            }
        }
    }
    assert!(changed < n * n / 20);
}

fn check_level(relief: &Relief, level: f64, bb: BBox, n: usize, through: C) {
    let curves = level_curves(relief, level, bb, n).unwrap();
    assert!(!curves.is_empty());
    let cell = ((bb.x1 - bb.x0) / (n - 1) as f64).hypot((bb.y1 - bb.y0) / (n - 1) as f64);
    let mut grad: f64 = 0.0;
    let mut nearest = f64::INFINITY;
    for v in curves.iter().flatten() {
        grad = grad.max(relief.slope(*v).norm());
        nearest = nearest.min((v - through).norm());
    }
    for v in curves.iter().flatten() {
        let err = (relief.value(*v) - level).abs();
        assert!(err <= 2.0 * cell * grad, "vertex {v}: |R - level| = {err:e}");
    }
    assert!(nearest <= cell, "closest vertex {nearest} from {through}");
}

#[test]
fn level_curve_examples() {
    let bb = BBox::new(-1.5, 1.5, -1.5, 1.5).unwrap();
    let (tc, rc) = critical_point(B).unwrap();
    check_level(&Relief::lambda(B), rc, bb, 161, tc);
    check_level(&Relief::lambda(B), 0.0, bb, 161, c(0.0, 0.0));
    check_level(&Relief::Hopf { which: Which::Lambda }, -0.5, bb, 161, c(0.0, 0.0));
    assert!(level_curves(&Relief::lambda(B), 1e6, bb, 64).unwrap().is_empty());
    assert!(level_curves(&Relief::lambda(B), 0.0, bb, 8).is_err());
}

#[test]
fn strategies_give_the_same_grid() {
    use focusnode::par::Strategy;
    let bb = BBox::new(-1.5, 1.5, -1.5, 1.5).unwrap();
    let a = ReliefGrid::evaluate_with(&Relief::lambda(B), bb, 64, Strategy::Sequential);
    let b = ReliefGrid::evaluate_with(&Relief::lambda(B), bb, 64, Strategy::Parallel);
    assert_eq!(a.values, b.values);
}
