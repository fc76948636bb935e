//! Quadrature along complex paths in log-scaled arithmetic, and the explicit
//! Airy-integral formulas for the distinguished trajectories.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::logcomplex::LogComplex;
use crate::par::Strategy;
use crate::quad::gl16;
use crate::reliefscape::{descending_path_to, xm_path, ComplexPath, Relief};
use crate::series::fit_samples;
use crate::specfun::{airy_a_pair, airy_b_pair, fundamental_matrix, j, j2, AI0, AIP0};
use crate::spectrum::Params;

type C = Complex64;

/// An integrand that reports its values in log form.
pub trait ScaledIntegrand: Sync {
    fn log_value(&self, tau: C) -> LogComplex;
}

impl<F: Fn(C) -> LogComplex + Sync> ScaledIntegrand for F {
    fn log_value(&self, tau: C) -> LogComplex {
        self(tau)
    }
}

/// Result of a path integral with diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: LogComplex,
    /// Deepest bisection level used below the initial panels.
    pub max_depth: usize,
    pub evaluations: usize,
}

const INITIAL_PANELS: usize = 32;
const MAX_DEPTH: usize = 20;
const REL_TOL: f64 = 1e-10;

struct Panel {
    a: C,
    b: C,
    value: LogComplex,
    abs: f64,
    depth: usize,
}

fn panel<I: ScaledIntegrand + ?Sized>(f: &I, a: C, b: C, evals: &mut usize) -> (LogComplex, f64) {
    let (x, w) = gl16();
    let (m, h) = ((a + b) * 0.5, (b - a) * 0.5);
    let vals: Vec<LogComplex> = x.iter().map(|&xi| f.log_value(m + h * xi)).collect();
    *evals += vals.len();
    let top = vals.iter().map(|v| v.logmag).fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return (LogComplex::ZERO, f64::NEG_INFINITY);
    }
    let (mut s, mut sa) = (C::new(0.0, 0.0), 0.0);
    for (v, wi) in vals.iter().zip(w) {
        let e = (v.logmag - top).exp();
        s += C::from_polar(wi * e, v.phase);
        sa += wi * e;
    }
    let shift = C::new(top, 0.0);
    let hl = LogComplex::from_complex(h);
    (
        (LogComplex::from_complex(s) * hl).scale_exp(shift),
        top + sa.ln() + h.norm().ln(),
    )
}

fn logsumexp(xs: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.collect();
    let m = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Composite 16-point Gauss-Legendre along each segment, bisecting panels until
/// two successive levels agree to `1e-10` of the panel (or of the whole
/// integral's absolute mass for negligible panels).
pub fn path_integral<I: ScaledIntegrand + ?Sized>(f: &I, path: &ComplexPath) -> Result<Quadrature> {
    let mut evals = 0usize;
    let mut initial: Vec<(usize, Panel)> = Vec::new();
    for (si, (a, b)) in path.segments().enumerate() {
        for k in 0..INITIAL_PANELS {
            let pa = a + (b - a) * (k as f64 / INITIAL_PANELS as f64);
            let pb = a + (b - a) * ((k + 1) as f64 / INITIAL_PANELS as f64);
            let (value, abs) = panel(f, pa, pb, &mut evals);
            initial.push((si, Panel { a: pa, b: pb, value, abs, depth: 0 }));
        }
    }
    let mass = logsumexp(initial.iter().map(|(_, p)| p.abs));
    let mut accepted: Vec<LogComplex> = Vec::new();
    let mut max_depth = 0;
    for (si, p0) in initial {
        let mut stack = vec![p0];
        while let Some(p) = stack.pop() {
            let mid = (p.a + p.b) * 0.5;
            let (l, la) = panel(f, p.a, mid, &mut evals);
            let (r, ra) = panel(f, mid, p.b, &mut evals);
            let halves = l + r;
            let diff = halves - p.value;
            let scale = halves.logmag.max(mass + (1e-3f64).ln());
            if diff.is_zero() || diff.logmag <= REL_TOL.ln() + scale {
                accepted.push(halves);
                max_depth = max_depth.max(p.depth + 1);
                continue;
            }
            if p.depth + 1 >= MAX_DEPTH {
                return Err(Error::NoConvergence { segment: si, depth: MAX_DEPTH });
            }
            stack.push(Panel { a: mid, b: p.b, value: r, abs: ra, depth: p.depth + 1 });
            stack.push(Panel { a: p.a, b: mid, value: l, abs: la, depth: p.depth + 1 });
        }
    }
    Ok(Quadrature {
        value: LogComplex::sum(accepted),
        max_depth,
        evaluations: evals,
    })
}

/// `-tau^2 / (2 eps^3)`.
fn gauss_exponent(tau: C, eps3: f64) -> C {
    -(tau * tau) / (2.0 * eps3)
}

/// Row `row` (0 or 1) of `e^{-tau^2/(2 eps^3)} M^{-1}(tau) c`.
fn forcing_row(p: &Params, row: usize, tau: C) -> LogComplex {
    let eps = p.eps();
    let s = (tau - p.b) / (eps * eps);
    let k = LogComplex::new(0.5 * (PI / eps).ln() + 2f64.ln(), -0.5 * PI);
    let (c1, c2) = (C::new(p.c1, 0.0), C::new(p.c2, 0.0));
    let v = if row == 0 {
        let (a, ap) = airy_a_pair(j2() * s);
        ap * (eps * j2() * c1) - a * c2
    } else {
        let (a, ap) = airy_a_pair(j() * s);
        a * c2 - ap * (eps * j() * c1)
    };
    (k * v).scale_exp(gauss_exponent(tau, p.eps3))
}

/// Row `row` of `e^{-tau^2/(2 eps^3)} N^{-1}(tau) c` for the real basis
/// `N = sqrt(pi/eps) [[A(s), B(s)], [eps A'(s), eps B'(s)]]` (`det N = 1`).
fn balanced_forcing_row(p: &Params, row: usize, tau: C) -> LogComplex {
    let eps = p.eps();
    let s = (tau - p.b) / (eps * eps);
    let k = LogComplex::new(0.5 * (PI / eps).ln(), 0.0);
    let (c1, c2) = (C::new(p.c1, 0.0), C::new(p.c2, 0.0));
    let v = if row == 0 {
        let (b, bp) = airy_b_pair(s);
        bp * (eps * c1) - b * c2
    } else {
        let (a, ap) = airy_a_pair(s);
        a * c2 - ap * (eps * c1)
    };
    (k * v).scale_exp(gauss_exponent(tau, p.eps3))
}

fn balanced_matrix(p: &Params, t: f64) -> [[LogComplex; 2]; 2] {
    let eps = p.eps();
    let s = C::new((t - p.b) / (eps * eps), 0.0);
    let k = LogComplex::new(0.5 * (PI / eps).ln(), 0.0);
    let (a, ap) = airy_a_pair(s);
    let (b, bp) = airy_b_pair(s);
    let e = C::new(eps, 0.0);
    [[k * a, k * b], [k * ap * e, k * bp * e]]
}

/// Distinguished solution from the explicit formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExplicitSolution {
    pub x: f64,
    pub y: f64,
    /// `|Im X| / |X|` of the assembled vector (zero in exact arithmetic).
    pub imag_residual: f64,
    /// Log of the bound on the discarded semi-infinite tail, relative to the peak.
    pub tail_log_bound: f64,
    pub max_depth: usize,
    pub evaluations: usize,
}

/// Which distinguished trajectory.
pub use crate::flow::Side;

const TAIL_EXPONENT: f64 = 60.0;
const PATH_BETA: f64 = 0.5;
/// The chord to `t + i beta` only descends when it starts far enough left.
const MIN_FAR: f64 = 1.5;

fn solve_far_end<F: Fn(f64) -> f64>(rel: F, from: f64, dir: f64, target: f64) -> f64 {
    let mut t = from + dir * 0.3;
    while rel(t) < target {
        t += dir * 0.05;
    }
    t
}

/// Integration paths for the two rows.
pub fn solution_paths(p: &Params, t: f64, side: Side) -> Result<(ComplexPath, ComplexPath)> {
    let b = p.b;
    let lam = Relief::lambda(b);
    match side {
        Side::Minus => {
            if t > b + 0.2 {
                return invalid(format!("X_- explicit formula needs t <= b + 0.2, got {t}"));
            }
            let end = t.min(b);
            let r_min = lam.value(C::new(end.max(0.0).min(b), 0.0)).min(0.5 * end * end);
            let far = solve_far_end(|x| 0.5 * x * x - r_min, -end.abs(), -1.0, TAIL_EXPONENT * p.eps3)
                .min(-MIN_FAR);
            let path = if t <= 0.0 {
                ComplexPath::new(vec![C::new(far, 0.0), C::new(t, 0.0)])?
            } else {
                let head = descending_path_to(end, b, PATH_BETA, -far - end.abs())?;
                if t > b {
                    let mut nodes = head.nodes().to_vec();
                    nodes.push(C::new(t, 0.0));
                    ComplexPath::new(nodes)?
                } else {
                    head
                }
            };
            let conj = path.conj();
            Ok((path, conj))
        }
        Side::Plus => {
            if t < -b + 0.05 {
                return invalid(format!("X_+ explicit formula needs t >= -b + 0.05, got {t}"));
            }
            let r_at = |x: f64| {
                if x <= b {
                    0.5 * x * x
                } else {
                    0.5 * x * x - (2.0 / 3.0) * (x - b).powf(1.5)
                }
            };
            let r_min = if t >= 0.0 { r_at(t) } else { 0.0 };
            let far = solve_far_end(|x| r_at(x) - r_min, t.max(b), 1.0, TAIL_EXPONENT * p.eps3);
            let path = ComplexPath::new(vec![C::new(t, 0.0), C::new(far, 0.0)])?;
            Ok((path.clone(), path))
        }
    }
}

/// `X_-(t)` or `X_+(t)` from
/// `X_-(t) = e^{t^2/2eps^3} M(t) int_{-inf}^t e^{-tau^2/2eps^3} M^{-1}(tau) c dtau`
/// (and `X_+ = -e^{..} M(t) int_t^{+inf} ...`).
pub fn explicit_solution(p: &Params, t: f64, side: Side) -> Result<ExplicitSolution> {
    if p.c1 == 0.0 && p.c2 == 0.0 {
        return Ok(ExplicitSolution {
            x: 0.0,
            y: 0.0,
            imag_residual: 0.0,
            tail_log_bound: -TAIL_EXPONENT,
            max_depth: 0,
            evaluations: 0,
        });
    }
    let (p1, p2) = solution_paths(p, t, side)?;
    // X_- uses M (rows integrated along the lambda- and mu-descending paths);
    // X_+ runs along the real axis in the real (A, B) basis, where neither
    // column of the fundamental matrix is cancelled by the other.
    let (q1, q2, e) = match side {
        Side::Minus => (
            path_integral(&|tau: C| forcing_row(p, 0, tau), &p1)?,
            path_integral(&|tau: C| forcing_row(p, 1, tau), &p2)?,
            fundamental_matrix(C::new(t, 0.0), p).entries,
        ),
        Side::Plus => (
            path_integral(&|tau: C| balanced_forcing_row(p, 0, tau), &p1)?,
            path_integral(&|tau: C| balanced_forcing_row(p, 1, tau), &p2)?,
            balanced_matrix(p, t),
        ),
    };
    let (mut i1, mut i2) = (q1.value, q2.value);
    if side == Side::Plus {
        // the path runs t -> +inf and X_+ carries a minus sign
        i1 = -i1;
        i2 = -i2;
    }
    let pre = C::new(t * t / (2.0 * p.eps3), 0.0);
    let x = (e[0][0] * i1 + e[0][1] * i2).scale_exp(pre).to_complex();
    let y = (e[1][0] * i1 + e[1][1] * i2).scale_exp(pre).to_complex();
    let size = x.norm().hypot(y.norm());
    Ok(ExplicitSolution {
        x: x.re,
        y: y.re,
        imag_residual: if size > 0.0 { x.im.hypot(y.im) / size } else { 0.0 },
        tail_log_bound: -TAIL_EXPONENT,
        max_depth: q1.max_depth.max(q2.max_depth),
        evaluations: q1.evaluations + q2.evaluations,
    })
}

/// The four integrals of the expansion lemma.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemmaForm {
    /// `A(j^2 (tau-b)/eps^2)`
    AJ2,
    /// `A'(j^2 (tau-b)/eps^2)`
    APrimeJ2,
    /// `A(j (tau-b)/eps^2)`
    AJ,
    /// `A'(j (tau-b)/eps^2)`
    APrimeJ,
}

impl LemmaForm {
    fn rotation(self) -> C {
        match self {
            LemmaForm::AJ2 | LemmaForm::APrimeJ2 => j2(),
            LemmaForm::AJ | LemmaForm::APrimeJ => j(),
        }
    }

    fn derivative(self) -> bool {
        matches!(self, LemmaForm::APrimeJ2 | LemmaForm::APrimeJ)
    }

    fn upper(self) -> bool {
        matches!(self, LemmaForm::AJ2 | LemmaForm::APrimeJ2)
    }
}

/// `e^{(b^2 - tau^2)/(2 eps^3)} Airy(j^k (tau - b)/eps^2)`.
pub fn lemma_integrand(p: &Params, form: LemmaForm, tau: C) -> LogComplex {
    let eps = p.eps();
    let s = form.rotation() * (tau - p.b) / (eps * eps);
    let (a, ap) = airy_a_pair(s);
    let v = if form.derivative() { ap } else { a };
    v.scale_exp((C::new(p.b * p.b, 0.0) - tau * tau) / (2.0 * p.eps3))
}

fn lemma_path(p: &Params, form: LemmaForm, beta: f64) -> Result<ComplexPath> {
    let far = (p.b * p.b + 2.0 * TAIL_EXPONENT * p.eps3).sqrt().max(MIN_FAR);
    let path = xm_path(p.b, beta, far - p.b)?;
    Ok(if form.upper() { path } else { path.conj() })
}

/// `int_{-inf}^{b} e^{(b^2-tau^2)/2eps^3} Airy(j^k (tau-b)/eps^2) dtau` along the
/// descending path and its final vertical segment.
pub fn lemma_da(p: &Params, form: LemmaForm) -> Result<C> {
    let path = lemma_path(p, form, PATH_BETA)?;
    Ok(path_integral(&|tau: C| lemma_integrand(p, form, tau), &path)?.value.to_complex())
}

/// The vertical piece `b + i beta -> b` alone.
pub fn lemma_vertical_piece(p: &Params, form: LemmaForm, beta: f64) -> Result<C> {
    let top = if form.upper() { C::new(p.b, beta) } else { C::new(p.b, -beta) };
    let path = ComplexPath::new(vec![top, C::new(p.b, 0.0)])?;
    Ok(path_integral(&|tau: C| lemma_integrand(p, form, tau), &path)?.value.to_complex())
}

/// The head of the path, `-T -> b + i beta`, in log form.
pub fn lemma_head_piece(p: &Params, form: LemmaForm, beta: f64) -> Result<LogComplex> {
    let path = lemma_path(p, form, beta)?.without_last_segment()?;
    Ok(path_integral(&|tau: C| lemma_integrand(p, form, tau), &path)?.value)
}

/// Displayed expansion of the lemma, terms `eps^3 .. eps^7` as `[c3, c4, c5, c6, c7]`.
pub fn lemma_da_display(b: f64, form: LemmaForm) -> [C; 5] {
    let (jj, jj2) = (j(), j2());
    let z = C::new(0.0, 0.0);
    let r = |x: f64| C::new(x, 0.0);
    let (b2, b3, b4, b5) = (b * b, b.powi(3), b.powi(4), b.powi(5));
    match form {
        LemmaForm::AJ2 => [
            r(-AI0 / b),
            -jj2 * AIP0 / b2,
            z,
            r((1.0 / b3 - 1.0 / b4) * AI0),
            (3.0 * jj2 / b4 - 2.0 * jj2 / b5) * AIP0,
        ],
        LemmaForm::APrimeJ2 => [
            r(-AIP0 / b),
            z,
            -jj * AI0 / b3,
            r((1.0 / b3 - 2.0 / b4) * AIP0),
            z,
        ],
        LemmaForm::AJ => [
            r(-AI0 / b),
            -jj * AIP0 / b2,
            z,
            r((1.0 / b3 - 1.0 / b4) * AI0),
            (3.0 * jj / b4 - 2.0 * jj / b5) * AIP0,
        ],
        LemmaForm::APrimeJ => [
            r(-AIP0 / b),
            z,
            -jj2 * AI0 / b3,
            r((1.0 / b3 - 2.0 / b4) * AIP0),
            z,
        ],
    }
}

/// `eps^3` values for the lemma fits.
pub const LEMMA_FIT_EPS3: [f64; 7] = [0.002, 0.001, 0.0005, 0.00025, 0.000125, 6.25e-5, 3.125e-5];
/// Powers of `eps` in the lemma fit. The `eps^8` term (`-4 j A(0)/b^6` for `A'`) is
/// too large to leave out at `b = 0.3`.
pub const LEMMA_FIT_POWERS: [usize; 6] = [3, 4, 5, 6, 7, 8];

/// `eps^3` coefficient of `lemma_da`, fitted over `LEMMA_FIT_EPS3`.
pub fn lemma_da_leading(template: &Params, form: LemmaForm, strategy: Strategy) -> Result<C> {
    let samples: Vec<(f64, f64, f64)> = strategy
        .map(&LEMMA_FIT_EPS3, |&e3| {
            let v = lemma_da(&template.with_eps3(e3)?, form)?;
            Ok((e3, v.re, v.im))
        })
        .into_iter()
        .collect::<Result<_>>()?;
    let fit = fit_samples(&samples, &LEMMA_FIT_POWERS)?;
    Ok(C::new(fit.x.coeff(3).re, fit.y.coeff(3).re))
}

/// Evaluate the displayed expansion at `eps`.
pub fn eval_display(coeffs: &[C; 5], eps: f64) -> C {
    coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c * eps.powi(k as i32 + 3))
        .sum()
}

/// Decay constants of `f(b + i sigma eps^2)` on the vertical segment.
#[derive(Debug, Clone, PartialEq)]
pub struct MajorationReport {
    /// `|f(b)|`, equal to `A(0)`.
    pub value_at_b: f64,
    /// Slope of `ln |A(i j^2 sigma)|` against `sigma^{3/2}` on `[5, 30]`.
    pub airy_decay_exponent: f64,
    /// Slope of `ln |f(b + i sigma eps^2)|` against `sigma^{3/2}` on `[5, 30]`
    /// (includes the `e^{sigma^2 eps / 2}` growth of the Gaussian factor).
    pub raw_decay_exponent: f64,
    /// `delta = sqrt2/3 - sqrt(beta)/2`, the decay rate the bound is checked with.
    pub delta: f64,
    /// Smallest `k` with `|f(b + i sigma eps^2)| <= k e^{-delta sigma^{3/2}}` on `[0, beta/eps^2]`.
    pub k: f64,
    /// `eps^3 ln|f(tau)|` and `-(R_lambda(tau) - R_lambda(b))` at `tau = b + 0.3 e^{2 i pi/3}`.
    pub region_sample: (f64, f64),
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

pub fn majoration_check(p: &Params, beta: f64) -> Result<MajorationReport> {
    if !(beta > 0.0 && beta < 8.0 / 9.0) {
        return invalid(format!("beta must lie in (0, 8/9), got {beta}"));
    }
    let eps = p.eps();
    let f = |sigma: f64| lemma_integrand(p, LemmaForm::AJ2, C::new(p.b, sigma * eps * eps));
    let sig: Vec<f64> = (0..=250).map(|k| 5.0 + 25.0 * k as f64 / 250.0).collect();
    let x: Vec<f64> = sig.iter().map(|s| s.powf(1.5)).collect();
    let raw: Vec<f64> = sig.iter().map(|&s| f(s).logmag).collect();
    let airy: Vec<f64> = sig
        .iter()
        .map(|&s| airy_a_pair(C::new(0.0, 1.0) * j2() * s).0.logmag)
        .collect();
    let delta = 2f64.sqrt() / 3.0 - 0.5 * beta.sqrt();
    let smax = beta / (eps * eps);
    let n = 4000;
    let k = (0..=n)
        .map(|i| {
            let s = smax * i as f64 / n as f64;
            (f(s).logmag + delta * s.powf(1.5)).exp()
        })
        .fold(0.0, f64::max);
    let tau = C::new(p.b, 0.0) + C::from_polar(0.3, 2.0 * PI / 3.0);
    let lam = Relief::lambda(p.b);
    let region = (
        p.eps3 * lemma_integrand(p, LemmaForm::AJ2, tau).logmag,
        -(lam.value(tau) - lam.value(C::new(p.b, 0.0))),
    );
    Ok(MajorationReport {
        value_at_b: f(0.0).to_complex().norm(),
        airy_decay_exponent: slope(&x, &airy),
        raw_decay_exponent: slope(&x, &raw),
        delta,
        k,
        region_sample: region,
    })
}

/// Tail of the lemma integral before `b + i beta`, against its bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailReport {
    /// `ln |int_{-inf}^{b + i beta} f|`.
    pub log_tail: f64,
    /// `-(R_lambda(b + i beta) - R_lambda(b) - tol)/eps^3`.
    pub log_bound: f64,
}

pub fn debut_tail(p: &Params, beta: f64, tol: f64) -> Result<TailReport> {
    let head = lemma_head_piece(p, LemmaForm::AJ2, beta)?;
    let lam = Relief::lambda(p.b);
    let drop = lam.value(C::new(p.b, beta)) - lam.value(C::new(p.b, 0.0));
    Ok(TailReport {
        log_tail: head.logmag,
        log_bound: -(drop - tol) / p.eps3,
    })
}
