//! Truncated power series in `eps`, Taylor jets in `t`, the slow-manifold
//! recurrence for `X_+`, and the expansions of both distinguished solutions at `b`.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::cquad::{explicit_solution, Side};
use crate::error::{invalid, Error, Result};
use crate::par::Strategy;
use crate::spectrum::Params;

type C = Complex64;

/// `sum_k coeffs[k] eps^k`, known for powers `< order`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    pub coeffs: Vec<C>,
}

impl PowerSeries {
    pub fn zero(order: usize) -> Self {
        PowerSeries {
            coeffs: vec![C::new(0.0, 0.0); order],
        }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        PowerSeries {
            coeffs: coeffs.iter().map(|&c| C::new(c, 0.0)).collect(),
        }
    }

    /// First untracked power.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).copied().unwrap_or(C::new(0.0, 0.0))
    }

    pub fn set(&mut self, k: usize, v: C) {
        if k < self.coeffs.len() {
            self.coeffs[k] = v;
        }
    }

    pub fn scale(&self, s: C) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn eval(&self, eps: f64) -> C {
        self.coeffs.iter().rev().fold(C::new(0.0, 0.0), |acc, c| acc * eps + c)
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, o: &PowerSeries) -> PowerSeries {
        let n = self.order().min(o.order());
        PowerSeries {
            coeffs: (0..n).map(|k| self.coeffs[k] + o.coeffs[k]).collect(),
        }
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, o: &PowerSeries) -> PowerSeries {
        let n = self.order().min(o.order());
        PowerSeries {
            coeffs: (0..n).map(|k| self.coeffs[k] - o.coeffs[k]).collect(),
        }
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, o: &PowerSeries) -> PowerSeries {
        let n = self.order().min(o.order());
        let mut out = PowerSeries::zero(n);
        for i in 0..n {
            for k in 0..n - i {
                out.coeffs[i + k] += self.coeffs[i] * o.coeffs[k];
            }
        }
        out
    }
}

/// Truncated Taylor expansion `sum_k c[k] (t - t0)^k` of a real function.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub c: Vec<f64>,
}

impl Jet {
    pub fn constant(v: f64, m: usize) -> Self {
        let mut c = vec![0.0; m + 1];
        c[0] = v;
        Jet { c }
    }

    /// The identity function at `t0`.
    pub fn variable(t0: f64, m: usize) -> Self {
        let mut j = Jet::constant(t0, m);
        if m >= 1 {
            j.c[1] = 1.0;
        }
        j
    }

    /// Highest derivative order carried.
    pub fn depth(&self) -> usize {
        self.c.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// `k`-th derivative at `t0`.
    pub fn derivative_value(&self, k: usize) -> f64 {
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        self.c.get(k).copied().unwrap_or(0.0) * fact
    }

    /// Jet of the derivative (one order shorter).
    pub fn derivative(&self) -> Jet {
        if self.c.len() == 1 {
            return Jet { c: vec![0.0] };
        }
        Jet {
            c: (1..self.c.len()).map(|k| self.c[k] * k as f64).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet {
            c: self.c.iter().map(|x| x * s).collect(),
        }
    }

    pub fn truncate(&self, m: usize) -> Jet {
        Jet {
            c: self.c.iter().take(m + 1).copied().collect(),
        }
    }

    pub fn div(&self, o: &Jet) -> Result<Jet> {
        let n = self.c.len().min(o.c.len());
        if o.c[0] == 0.0 {
            return Err(Error::InvalidParameter("jet division by a zero value".into()));
        }
        let mut q = vec![0.0; n];
        for k in 0..n {
            let s: f64 = (1..=k).map(|i| o.c[i] * q[k - i]).sum();
            q[k] = (self.c[k] - s) / o.c[0];
        }
        Ok(Jet { c: q })
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, o: &Jet) -> Jet {
        let n = self.c.len().min(o.c.len());
        Jet {
            c: (0..n).map(|k| self.c[k] + o.c[k]).collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, o: &Jet) -> Jet {
        let n = self.c.len().min(o.c.len());
        Jet {
            c: (0..n).map(|k| self.c[k] - o.c[k]).collect(),
        }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, o: &Jet) -> Jet {
        let n = self.c.len().min(o.c.len());
        let mut out = vec![0.0; n];
        for i in 0..n {
            for k in 0..n - i {
                out[i + k] += self.c[i] * o.c[k];
            }
        }
        Jet { c: out }
    }
}

/// `t^2 - t + b`, the determinant of `J(t)`.
pub fn jacobian_det(b: f64, t: f64) -> f64 {
    t * t - t + b
}

/// `X_1(t) = -J(t)^{-1} c` in closed form.
pub fn qss_first(p: &Params, t: f64) -> Result<[f64; 2]> {
    let d = jacobian_det(p.b, t);
    if d.abs() < 1e-14 {
        return Err(Error::SingularJacobian(t));
    }
    Ok([(-p.c1 * t + p.c2) / d, ((t - p.b) * p.c1 - t * p.c2) / d])
}

/// Jets (depth `m`) of `X_1 .. X_n` at `t`, from `J X_k = X_{k-1}' - delta_{k,1} c`.
pub fn qss_terms(p: &Params, t: f64, n: usize, m: usize) -> Result<Vec<(Jet, Jet)>> {
    if n < 1 || m < 1 {
        return invalid("qss_term needs n >= 1 and m >= 1");
    }
    if jacobian_det(p.b, t).abs() < 1e-14 {
        return Err(Error::SingularJacobian(t));
    }
    let depth = m + n;
    let tj = Jet::variable(t, depth);
    let det = &(&(&tj * &tj) - &tj) + &Jet::constant(p.b, depth);
    let tmb = &tj - &Jet::constant(p.b, depth);
    let mut out = Vec::with_capacity(n);
    let (mut r1, mut r2) = (Jet::constant(-p.c1, depth), Jet::constant(-p.c2, depth));
    for _ in 0..n {
        let x = (&(&tj * &r1) - &r2).div(&det)?;
        let y = (&(&tj * &r2) - &(&tmb * &r1)).div(&det)?;
        r1 = x.derivative();
        r2 = y.derivative();
        out.push((x, y));
    }
    Ok(out.into_iter().map(|(x, y)| (x.truncate(m), y.truncate(m))).collect())
}

/// Jet pair of `X_n` at `t` to derivative order `m`.
pub fn qss_term(p: &Params, t: f64, n: usize, m: usize) -> Result<(Jet, Jet)> {
    Ok(qss_terms(p, t, n, m)?.pop().unwrap())
}

/// `X_+(b) = sum_n X_n(b) eps^{3n}` for powers `<= order` (`order <= 9`).
pub fn xplus_at_b(p: &Params, order: usize) -> Result<(PowerSeries, PowerSeries)> {
    if order > 9 {
        return invalid(format!("xplus_at_b supports order <= 9, got {order}"));
    }
    let (mut xs, mut ys) = (PowerSeries::zero(order + 1), PowerSeries::zero(order + 1));
    let nmax = order / 3;
    if nmax == 0 {
        return Ok((xs, ys));
    }
    for (k, (x, y)) in qss_terms(p, p.b, nmax, 1)?.into_iter().enumerate() {
        xs.set(3 * (k + 1), C::new(x.value(), 0.0));
        ys.set(3 * (k + 1), C::new(y.value(), 0.0));
    }
    Ok((xs, ys))
}

/// Closed-form `eps^3`, `eps^6` coefficients of `X_+(b)`: `[[x3, x6], [y3, y6]]`.
pub fn xplus_b_display(b: f64, c1: f64, c2: f64) -> [[f64; 2]; 2] {
    let (b2, b3, b4, b5) = (b * b, b.powi(3), b.powi(4), b.powi(5));
    [
        [
            -c1 / b + c2 / b2,
            (1.0 / b3 - 2.0 / b4) * c1 + (-3.0 / b4 + 2.0 / b5) * c2,
        ],
        [-c2 / b, c1 / b3 + (1.0 / b3 - 1.0 / b4) * c2],
    ]
}

/// Closed-form `eps^3`, `eps^6` coefficients of `X_-(b)`: `[[x3, x6], [y3, y6]]`.
pub fn xminus_b_display(b: f64, c1: f64, c2: f64) -> [[f64; 2]; 2] {
    let x3 = -(1.0 / b) * c1 + (1.0 / (b * b)) * c2;
    let x6 = (1.0 / b.powi(3) - 2.0 / b.powi(4)) * c1 + (-3.0 / b.powi(4) + 2.0 / b.powi(5)) * c2;
    let y3 = -(1.0 / b) * c2;
    let y6 = (1.0 / b.powi(3)) * c1 + (1.0 / b.powi(3) - 1.0 / b.powi(4)) * c2;
    [[x3, x6], [y3, y6]]
}

/// `eps^3` values used by default for the fits.
pub const DEFAULT_FIT_EPS3: [f64; 5] = [0.002, 0.001, 0.0005, 0.00025, 0.000125];

/// Least-squares fit of `X_-(b)` in powers `3, 6, ..., order` of `eps`.
#[derive(Debug, Clone)]
pub struct ExpansionFit {
    pub powers: Vec<usize>,
    pub x: PowerSeries,
    pub y: PowerSeries,
    pub residual_norm: f64,
    /// Condition number of the column-normalised design matrix.
    pub condition: f64,
    /// `(eps^3, x, y)` per sample.
    pub samples: Vec<(f64, f64, f64)>,
}

/// `X_-(b)` by quadrature for each `eps^3`.
pub fn xminus_at_b_samples(
    template: &Params,
    eps3_list: &[f64],
    strategy: Strategy,
) -> Result<Vec<(f64, f64, f64)>> {
    strategy
        .map(eps3_list, |&e3| {
            let p = template.with_eps3(e3)?;
            let s = explicit_solution(&p, p.b, Side::Minus)?;
            Ok((e3, s.x, s.y))
        })
        .into_iter()
        .collect()
}

/// Least squares `min |A c - v|` with column scaling; returns coefficients,
/// residual norms and the condition number of the scaled design.
pub fn least_squares(design: &DMatrix<f64>, rhs: &[DVector<f64>]) -> Result<(Vec<DVector<f64>>, Vec<f64>, f64)> {
    let norms: Vec<f64> = design.column_iter().map(|c| c.norm()).collect();
    let mut scaled = design.clone();
    for (k, mut col) in scaled.column_iter_mut().enumerate() {
        col /= norms[k];
    }
    let svd = scaled.clone().svd(true, true);
    let sv = &svd.singular_values;
    let cond = sv.max() / sv.min();
    if !(cond <= 1e10) {
        return Err(Error::IllConditioned(cond));
    }
    let mut sols = Vec::new();
    let mut res = Vec::new();
    for v in rhs {
        let c = svd
            .solve(v, 0.0)
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
        res.push((&scaled * &c - v).norm());
        sols.push(DVector::from_iterator(c.len(), c.iter().zip(&norms).map(|(a, n)| a / n)));
    }
    Ok((sols, res, cond))
}

pub fn xminus_at_b_fit(template: &Params, eps3_list: &[f64], order: usize) -> Result<ExpansionFit> {
    xminus_at_b_fit_with(template, eps3_list, order, Strategy::default())
}

pub fn xminus_at_b_fit_with(
    template: &Params,
    eps3_list: &[f64],
    order: usize,
    strategy: Strategy,
) -> Result<ExpansionFit> {
    let powers: Vec<usize> = (1..=order / 3).map(|k| 3 * k).collect();
    if powers.is_empty() {
        return invalid("order must be at least 3");
    }
    let mut distinct = eps3_list.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < order / 3 + 1 {
        return invalid(format!(
            "need at least {} distinct eps^3 values for order {order}",
            order / 3 + 1
        ));
    }
    if distinct.iter().any(|&e| !(e > 0.0 && e <= 0.002)) {
        return invalid("eps^3 values must lie in (0, 0.002]");
    }
    let samples = xminus_at_b_samples(template, &distinct, strategy)?;
    fit_samples(&samples, &powers)
}

/// Fit given samples `(eps^3, x, y)` in the listed powers of `eps`.
pub fn fit_samples(samples: &[(f64, f64, f64)], powers: &[usize]) -> Result<ExpansionFit> {
    let n = samples.len();
    let design = DMatrix::from_fn(n, powers.len(), |i, k| samples[i].0.cbrt().powi(powers[k] as i32));
    let vx = DVector::from_iterator(n, samples.iter().map(|s| s.1));
    let vy = DVector::from_iterator(n, samples.iter().map(|s| s.2));
    let (sol, res, cond) = least_squares(&design, &[vx, vy])?;
    let top = powers.iter().max().copied().unwrap_or(0) + 1;
    let (mut x, mut y) = (PowerSeries::zero(top), PowerSeries::zero(top));
    for (k, &pw) in powers.iter().enumerate() {
        x.set(pw, C::new(sol[0][k], 0.0));
        y.set(pw, C::new(sol[1][k], 0.0));
    }
    Ok(ExpansionFit {
        powers: powers.to_vec(),
        x,
        y,
        residual_norm: res[0].hypot(res[1]),
        condition: cond,
        samples: samples.to_vec(),
    })
}

/// Log-log slope in `eps` of `|X_-(b) - (closed eps^3, eps^6 terms)|`, for `x` and `y`.
pub fn residual_slope(samples: &[(f64, f64, f64)], closed: &[[f64; 2]; 2]) -> (f64, f64) {
    let le: Vec<f64> = samples.iter().map(|s| s.0.cbrt().ln()).collect();
    let resid = |i: usize, v: f64, e3: f64| (v - closed[i][0] * e3 - closed[i][1] * e3 * e3).abs().ln();
    let lx: Vec<f64> = samples.iter().map(|s| resid(0, s.1, s.0)).collect();
    let ly: Vec<f64> = samples.iter().map(|s| resid(1, s.2, s.0)).collect();
    (ls_slope(&le, &lx), ls_slope(&le, &ly))
}

fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Fitted `X_-(b)` coefficients against the closed form of `X_+(b)`.
#[derive(Debug, Clone)]
pub struct ExpansionComparison {
    pub fit: ExpansionFit,
    /// `[[x3, x6], [y3, y6]]` from the recurrence.
    pub closed: [[f64; 2]; 2],
    /// Relative discrepancy per coefficient, same layout.
    pub discrepancy: [[f64; 2]; 2],
    pub max_discrepancy: f64,
    /// Largest difference between the two transcribed displays over 20 parameter points.
    pub display_mismatch: f64,
    /// Residual slopes over the three largest `eps^3`.
    pub residual_slope: (f64, f64),
}

/// Deterministic quasi-random admissible `(b, c1, c2)` (golden-ratio sequences).
pub fn admissible_points(n: usize) -> Vec<(f64, f64, f64)> {
    let g = [0.618_033_988_749_894_9, 0.414_213_562_373_095, 0.732_050_807_568_877_2];
    (1..=n)
        .map(|k| {
            let u = |a: f64| (k as f64 * a).fract();
            (0.26 + 0.5 * u(g[0]), -2.0 + 4.0 * u(g[1]), -2.0 + 4.0 * u(g[2]))
        })
        .collect()
}

pub fn compare_expansions(p: &Params, order: usize) -> Result<ExpansionComparison> {
    let need = order / 3 + 1;
    if need > DEFAULT_FIT_EPS3.len() {
        return invalid(format!("order {order} needs more than {} eps values", DEFAULT_FIT_EPS3.len()));
    }
    let fit = xminus_at_b_fit(p, &DEFAULT_FIT_EPS3[..need], order)?;
    let (xs, ys) = xplus_at_b(p, order.min(9))?;
    let closed = [[xs.coeff(3).re, xs.coeff(6).re], [ys.coeff(3).re, ys.coeff(6).re]];
    let fitted = [[fit.x.coeff(3).re, fit.x.coeff(6).re], [fit.y.coeff(3).re, fit.y.coeff(6).re]];
    let mut discrepancy = [[0.0; 2]; 2];
    let mut max_discrepancy: f64 = 0.0;
    for i in 0..2 {
        for k in 0..2 {
            let d = (fitted[i][k] - closed[i][k]).abs();
            let s = closed[i][k].abs();
            discrepancy[i][k] = if d == 0.0 { 0.0 } else { d / s.max(1e-300) };
            max_discrepancy = max_discrepancy.max(discrepancy[i][k]);
        }
    }
    let display_mismatch = admissible_points(20)
        .into_iter()
        .map(|(b, c1, c2)| {
            let (u, v) = (xplus_b_display(b, c1, c2), xminus_b_display(b, c1, c2));
            (0..2)
                .flat_map(|i| (0..2).map(move |k| (i, k)))
                .map(|(i, k)| (u[i][k] - v[i][k]).abs() / u[i][k].abs().max(1.0))
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    let residual_slope = if p.c1 == 0.0 && p.c2 == 0.0 {
        (f64::NAN, f64::NAN)
    } else {
        residual_slope(&fit.samples[fit.samples.len() - 3..], &closed)
    };
    Ok(ExpansionComparison {
        fit,
        closed,
        discrepancy,
        max_discrepancy,
        display_mismatch,
        residual_slope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> Params {
        Params::new(0.3, 0.0, -1.0, 0.002).unwrap()
    }

    #[test]
    fn first_term_matches_closed_form() {
        let p = params();
        for t in [-1.0, 0.0, 0.3, 1.7] {
            let (x, y) = qss_term(&p, t, 1, 2).unwrap();
            let [cx, cy] = qss_first(&p, t).unwrap();
            assert!((x.value() - cx).abs() < 1e-14 && (y.value() - cy).abs() < 1e-14);
        }
        let (x, _) = qss_term(&p, 0.0, 1, 1).unwrap();
        assert!((x.value() + 1.0 / 0.3).abs() < 1e-13);
    }

    #[test]
    fn second_term_at_b_matches_display() {
        for (b, c1, c2) in admissible_points(10) {
            let p = Params::new(b, c1, c2, 0.001).unwrap();
            let (xs, ys) = xplus_at_b(&p, 9).unwrap();
            let d = xplus_b_display(b, c1, c2);
            for (got, want) in [(xs.coeff(3).re, d[0][0]), (xs.coeff(6).re, d[0][1]), (ys.coeff(3).re, d[1][0]), (ys.coeff(6).re, d[1][1])] {
                assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0), "{got} vs {want}");
            }
        }
    }

    #[test]
    fn closed_coefficients_example() {
        let p = params();
        let (xs, ys) = xplus_at_b(&p, 9).unwrap();
        assert!((xs.coeff(3).re + 1.0 / 0.09).abs() < 1e-12);
        assert!((ys.coeff(3).re - 1.0 / 0.3).abs() < 1e-12);
        let z = Params::new(0.3, 0.0, 0.0, 0.002).unwrap();
        let (xz, yz) = xplus_at_b(&z, 9).unwrap();
        assert!(xz.coeffs.iter().chain(&yz.coeffs).all(|c| c.norm() == 0.0));
        assert!(xplus_at_b(&p, 12).is_err());
    }

    #[test]
    fn jet_division_and_derivative() {
        let t = Jet::variable(0.5, 6);
        let one = Jet::constant(1.0, 6);
        let q = one.div(&(&one - &t)).unwrap(); // 1/(1-t) at 0.5: derivatives k!/0.5^{k+1}
        for k in 0..=6 {
            let fact: f64 = (1..=k).map(|i| i as f64).product();
            assert!((q.derivative_value(k) - fact / 0.5f64.powi(k as i32 + 1)).abs() < 1e-9 * fact * 2f64.powi(k as i32 + 1));
        }
        assert_eq!(q.derivative().depth(), 5);
    }

    #[test]
    fn power_series_ops() {
        let a = PowerSeries::from_real(&[1.0, 2.0, 0.0, 0.0]);
        let b = PowerSeries::from_real(&[0.0, 1.0, 1.0]);
        let m = &a * &b;
        assert_eq!(m.order(), 3);
        assert_eq!(m.coeffs, PowerSeries::from_real(&[0.0, 1.0, 3.0]).coeffs);
        assert!(((&a + &b).eval(0.5) - C::new(1.0 + 1.0 + 0.5 + 0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn fit_recovers_polynomial() {
        let samples: Vec<(f64, f64, f64)> = DEFAULT_FIT_EPS3
            .iter()
            .map(|&e3| (e3, -11.0 * e3 + 400.0 * e3 * e3 - 4e4 * e3 * e3 * e3, 3.0 * e3))
            .collect();
        let f = fit_samples(&samples, &[3, 6, 9, 12]).unwrap();
        assert!((f.x.coeff(3).re + 11.0).abs() < 1e-8);
        assert!((f.x.coeff(6).re - 400.0).abs() < 1e-4);
        assert!(f.condition < 1e10);
        let bad = [(0.002, 0.0, 0.0), (0.002 * (1.0 + 1e-12), 0.0, 0.0)];
        assert!(matches!(fit_samples(&bad, &[3, 6]), Err(Error::IllConditioned(_))));
    }
}
