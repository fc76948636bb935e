//! Airy functions of complex argument.
//!
//! `A = Ai`, `B = Bi`. Evaluation regions (r = |z|, theta = arg z):
//!
//! * Maclaurin series for r <= 2, and for r <= 7 when |theta| >= pi/3;
//! * the full asymptotic expansion (optimally truncated) for r >= 12, |theta| <= 2pi/3;
//! * `A(z) = -j A(jz) - j^2 A(j^2 z)` for r >= 12, |theta| > 2pi/3;
//! * Taylor stepping of `y'' = z y` along the ray otherwise, inward from r = 12
//!   where A decays outward and outward from r = 7 elsewhere.
//!
//! `B` comes from the series for r <= 7 and from
//! `B(z) = e^{i pi/6} A(jz) + e^{-i pi/6} A(j^2 z)` beyond.

use std::f64::consts::{FRAC_PI_3, PI};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::logcomplex::LogComplex;
use crate::spectrum::Params;

type C = Complex64;

/// `A(0) = 3^{-2/3} / Gamma(2/3)`.
pub const AI0: f64 = 0.355_028_053_887_817_239_26;
/// `A'(0) = -3^{-1/3} / Gamma(1/3)`.
pub const AIP0: f64 = -0.258_819_403_792_806_798_41;
/// `B(0) = 3^{-1/6} / Gamma(2/3)`.
pub const BI0: f64 = 0.614_926_627_446_000_735_15;
/// `B'(0) = 3^{1/6} / Gamma(1/3)`.
pub const BIP0: f64 = 0.448_288_357_353_826_357_91;

const R_SERIES: f64 = 2.0;
const R_SERIES_WIDE: f64 = 7.0;
const R_ASYMPTOTIC: f64 = 12.0;
const R_PLAIN_MAX: f64 = 30.0;

/// `j = e^{2 i pi / 3}`.
pub fn j() -> C {
    C::from_polar(1.0, 2.0 * FRAC_PI_3)
}

/// `j^2 = e^{-2 i pi / 3}`.
pub fn j2() -> C {
    C::from_polar(1.0, -2.0 * FRAC_PI_3)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AiryKind {
    A,
    APrime,
    B,
    BPrime,
}

/// `e^{exp} * (a, ap)`.
#[derive(Debug, Clone, Copy)]
struct Scaled {
    exp: C,
    a: C,
    ap: C,
}

impl Scaled {
    fn plain(a: C, ap: C) -> Self {
        Scaled {
            exp: C::new(0.0, 0.0),
            a,
            ap,
        }
    }

    /// `ca * self + cb * other` (values), `cap * self' + cbp * other'` (derivatives).
    fn combine(self, ca: C, cap: C, other: Scaled, cb: C, cbp: C) -> Scaled {
        let (hi, lo, chi, chip, clo, clop) = if self.exp.re >= other.exp.re {
            (self, other, ca, cap, cb, cbp)
        } else {
            (other, self, cb, cbp, ca, cap)
        };
        let rel = (lo.exp - hi.exp).exp();
        Scaled {
            exp: hi.exp,
            a: chi * hi.a + clo * lo.a * rel,
            ap: chip * hi.ap + clop * lo.ap * rel,
        }
    }

    fn value(&self, deriv: bool) -> LogComplex {
        let v = if deriv { self.ap } else { self.a };
        LogComplex::from_complex(v).scale_exp(self.exp)
    }
}

/// Maclaurin series: returns `(f, f', g, g')` with `A = AI0 f + AIP0 g`, `B = BI0 f + BIP0 g`.
fn maclaurin(z: C) -> (C, C, C, C) {
    let z3 = z * z * z;
    let (mut f, mut fp, mut g, mut gp) = (C::new(1.0, 0.0), z * z * 0.5, z, C::new(1.0, 0.0));
    let (mut tf, mut tfp, mut tg, mut tgp) = (f, fp, g, gp);
    for k in 0..200usize {
        let kf = k as f64;
        tf *= z3 / ((3.0 * kf + 2.0) * (3.0 * kf + 3.0));
        tfp *= z3 / (3.0 * (kf + 1.0) * (3.0 * kf + 5.0));
        tg *= z3 / ((3.0 * kf + 3.0) * (3.0 * kf + 4.0));
        tgp *= z3 / ((3.0 * kf + 1.0) * (3.0 * kf + 3.0));
        f += tf;
        fp += tfp;
        g += tg;
        gp += tgp;
        let small = |t: C, s: C| t.norm() <= 1e-18 * s.norm().max(1e-300);
        if small(tf, f) && small(tfp, fp) && small(tg, g) && small(tgp, gp) {
            break;
        }
    }
    (f, fp, g, gp)
}

fn series_a(z: C) -> Scaled {
    let (f, fp, g, gp) = maclaurin(z);
    Scaled::plain(AI0 * f + AIP0 * g, AI0 * fp + AIP0 * gp)
}

fn series_b(z: C) -> Scaled {
    let (f, fp, g, gp) = maclaurin(z);
    Scaled::plain(BI0 * f + BIP0 * g, BI0 * fp + BIP0 * gp)
}

/// Coefficients `(u_k, v_k)` of the asymptotic expansions.
fn asymptotic_coeffs() -> &'static [(f64, f64)] {
    static COEFFS: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut out = vec![(1.0, 1.0)];
        let mut u = 1.0;
        for k in 1..90 {
            let kf = k as f64;
            u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / ((2.0 * kf - 1.0) * 216.0 * kf);
            let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
            out.push((u, v));
        }
        out
    })
}

/// Asymptotic expansion of A, valid for |arg z| < pi (used up to 2pi/3).
fn asymptotic_a(z: C) -> Scaled {
    let sq = z.sqrt();
    let zeta = z * sq * (2.0 / 3.0);
    let q = sq.sqrt();
    let inv = 1.0 / zeta;
    let (mut su, mut sv) = (C::new(1.0, 0.0), C::new(1.0, 0.0));
    let mut pow = C::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for &(u, v) in asymptotic_coeffs().iter().skip(1) {
        pow *= -inv;
        let tu = pow * u;
        let tv = pow * v;
        let m = tu.norm().max(tv.norm());
        if m > last {
            break;
        }
        su += tu;
        sv += tv;
        last = m;
        if m < 1e-18 {
            break;
        }
    }
    let norm = 0.5 / PI.sqrt();
    Scaled {
        exp: -zeta,
        a: su * norm / q,
        ap: -sv * norm * q,
    }
}

/// One Taylor step of `y'' = z y` from `z0` by `h`.
fn taylor_step(z0: C, y: C, yp: C, h: C) -> (C, C) {
    let zh2 = z0 * h * h;
    let h3 = h * h * h;
    let mut c = [y, yp * h, zh2 * y * 0.5];
    let mut sum = c[0] + c[1] + c[2];
    let mut dsum = c[1] + c[2] * 2.0;
    for k in 1..150usize {
        let next = (zh2 * c[1] + h3 * c[0]) / (((k + 2) * (k + 1)) as f64);
        c = [c[1], c[2], next];
        sum += next;
        dsum += next * (k + 2) as f64;
        let scale = sum.norm() + dsum.norm();
        if k > 3 && (c[0].norm() + c[1].norm() + c[2].norm()) * (k as f64 + 3.0) <= 1e-18 * scale {
            break;
        }
    }
    (sum, dsum / h)
}

/// Integrate `y'' = z y` along the straight segment from `from` to `to`.
fn walk(from: C, (mut y, mut yp): (C, C), to: C) -> (C, C) {
    let rmax = from.norm().max(to.norm()).max(1.0);
    let hmax = 0.5f64.min(1.5 / rmax.sqrt());
    let n = ((to - from).norm() / hmax).ceil().max(1.0) as usize;
    let h = (to - from) / n as f64;
    for k in 0..n {
        let z0 = from + h * k as f64;
        (y, yp) = taylor_step(z0, y, yp, h);
    }
    (y, yp)
}

fn eval_a(z: C) -> Scaled {
    let r = z.norm();
    let th = z.arg();
    if r <= R_SERIES || (r <= R_SERIES_WIDE && th.abs() >= FRAC_PI_3) {
        return series_a(z);
    }
    if r >= R_ASYMPTOTIC {
        if th.abs() <= 2.0 * FRAC_PI_3 {
            return asymptotic_a(z);
        }
        // rotate into the sectors |arg| <= 2pi/3
        let p = asymptotic_a(C::from_polar(r, th + 2.0 * FRAC_PI_3 - if th > 0.0 { 2.0 * PI } else { 0.0 }));
        let q = asymptotic_a(C::from_polar(r, th - 2.0 * FRAC_PI_3 + if th < 0.0 { 2.0 * PI } else { 0.0 }));
        let (jj, jj2) = (j(), j2());
        return p.combine(-jj, -jj2, q, -jj2, -jj);
    }
    if th.abs() < FRAC_PI_3 {
        let start = C::from_polar(R_ASYMPTOTIC, th);
        let s = asymptotic_a(start);
        let e = s.exp.exp();
        let (a, ap) = walk(start, (s.a * e, s.ap * e), z);
        Scaled::plain(a, ap)
    } else {
        let start = C::from_polar(R_SERIES_WIDE, th);
        let s = series_a(start);
        let (a, ap) = walk(start, (s.a, s.ap), z);
        Scaled::plain(a, ap)
    }
}

fn eval_b(z: C) -> Scaled {
    if z.norm() <= R_SERIES_WIDE {
        return series_b(z);
    }
    let w = C::from_polar(1.0, PI / 6.0);
    let (jj, jj2) = (j(), j2());
    let p = eval_a(jj * z);
    let q = eval_a(jj2 * z);
    p.combine(w, w * jj, q, w.conj(), w.conj() * jj2)
}

fn eval(z: C, kind: AiryKind) -> LogComplex {
    match kind {
        AiryKind::A => eval_a(z).value(false),
        AiryKind::APrime => eval_a(z).value(true),
        AiryKind::B => eval_b(z).value(false),
        AiryKind::BPrime => eval_b(z).value(true),
    }
}

/// Plain Airy value; refuses |z| > 30 where `e^{2/3 |z|^{3/2}}` would overflow.
pub fn airy(z: C, kind: AiryKind) -> Result<C> {
    let r = z.norm();
    if !(r <= R_PLAIN_MAX) {
        return Err(Error::AiryArgumentTooLarge(r));
    }
    Ok(eval(z, kind).to_complex())
}

/// Airy value in log form, valid at any |z|.
pub fn airy_scaled(z: C, kind: AiryKind) -> LogComplex {
    eval(z, kind)
}

/// `(A(z), A'(z))` in log form.
pub fn airy_a_pair(z: C) -> (LogComplex, LogComplex) {
    let s = eval_a(z);
    (s.value(false), s.value(true))
}

/// `(B(z), B'(z))` in log form.
pub fn airy_b_pair(z: C) -> (LogComplex, LogComplex) {
    let s = eval_b(z);
    (s.value(false), s.value(true))
}

fn rel_diff(lhs: LogComplex, terms: &[LogComplex]) -> f64 {
    let rhs = LogComplex::sum(terms.iter().copied());
    let diff = lhs - rhs;
    let scale = terms
        .iter()
        .map(|t| t.logmag)
        .fold(lhs.logmag, f64::max);
    if diff.is_zero() {
        0.0
    } else {
        (diff.logmag - scale).exp()
    }
}

/// Largest relative residual of the four connection formulas expressing
/// `A(jz), A(j^2 z), B(jz), B(j^2 z)` through `A(z), B(z)`.
pub fn connection_residual(z: C) -> f64 {
    let (jj, jj2) = (j(), j2());
    let i = C::new(0.0, 1.0);
    let a = airy_scaled(z, AiryKind::A);
    let b = airy_scaled(z, AiryKind::B);
    let aj = airy_scaled(jj * z, AiryKind::A);
    let aj2 = airy_scaled(jj2 * z, AiryKind::A);
    let bj = airy_scaled(jj * z, AiryKind::B);
    let bj2 = airy_scaled(jj2 * z, AiryKind::B);
    let r1 = rel_diff(aj, &[a * (-0.5 * jj2), b * (0.5 * i * jj2)]);
    let r2 = rel_diff(aj2, &[a * (-0.5 * jj), b * (-0.5 * i * jj)]);
    let r3 = rel_diff(bj, &[a * (1.5 * i * jj2), b * (-0.5 * jj2)]);
    let r4 = rel_diff(bj2, &[a * (-1.5 * i * jj), b * (-0.5 * jj)]);
    r1.max(r2).max(r3).max(r4)
}

/// Above `e^5` the direct determinant products lose more than ~1e-14.
const DIRECT_LIMIT: f64 = 5.0;

/// Connection coefficients: `A(j z) = a1 A(z) + b1 B(z)`, `A(j^2 z) = a2 A(z) + b2 B(z)`.
fn connection_coeffs() -> (C, C, C, C) {
    let (jj, jj2) = (j(), j2());
    let i = C::new(0.0, 1.0);
    (-0.5 * jj2, 0.5 * i * jj2, -0.5 * jj, -0.5 * i * jj)
}

/// `j^2 A(jt) A'(j^2 t) - j A(j^2 t) A'(jt)`, identically `i/(2pi)`.
///
/// Where both products are large (both functions dominant) the expression is
/// evaluated in the (A, B) basis as `(a1 b2 - a2 b1) W(A, B)(t)`.
pub fn base_determinant(t: C) -> C {
    let (jj, jj2) = (j(), j2());
    let (a1, ap1) = airy_a_pair(jj * t);
    let (a2, ap2) = airy_a_pair(jj2 * t);
    let p = a1 * ap2 * jj2;
    let q = a2 * ap1 * jj;
    if p.logmag.max(q.logmag) < DIRECT_LIMIT {
        return (p - q).to_complex();
    }
    let (ca1, cb1, ca2, cb2) = connection_coeffs();
    (ca1 * cb2 - ca2 * cb1) * wronskian_ab(t)
}

/// Wronskian `A B' - A' B` (identically `1/pi`), computed in log form.
pub fn wronskian_ab(z: C) -> C {
    let (a, ap) = airy_a_pair(z);
    let (b, bp) = airy_b_pair(z);
    (a * bp - ap * b).to_complex()
}

/// Fundamental matrix of the scaled linear part,
/// `M(t) = sqrt(pi/eps) [[A(js), A(j^2 s)], [eps j A'(js), eps j^2 A'(j^2 s)]]`, `s = (t-b)/eps^2`.
///
/// `e^{t^2/(2 eps^3)} M(t)` solves `eps^3 X' = J(t) X`.
#[derive(Debug, Clone)]
pub struct FundamentalMatrix {
    pub t: C,
    pub eps: f64,
    pub s: C,
    pub entries: [[LogComplex; 2]; 2],
    aj: (LogComplex, LogComplex),
    aj2: (LogComplex, LogComplex),
}

pub fn fundamental_matrix(t: C, params: &Params) -> FundamentalMatrix {
    let eps = params.eps();
    let s = (t - params.b) / (eps * eps);
    let (jj, jj2) = (j(), j2());
    let aj = airy_a_pair(jj * s);
    let aj2 = airy_a_pair(jj2 * s);
    let k = LogComplex::new(0.5 * (PI / eps).ln(), 0.0);
    let entries = [
        [k * aj.0, k * aj2.0],
        [k * aj.1 * (eps * jj), k * aj2.1 * (eps * jj2)],
    ];
    FundamentalMatrix {
        t,
        eps,
        s,
        entries,
        aj,
        aj2,
    }
}

impl FundamentalMatrix {
    /// Determinant from the entries; loses everything when both columns are dominant.
    pub fn determinant_direct(&self) -> LogComplex {
        let e = &self.entries;
        e[0][0] * e[1][1] - e[0][1] * e[1][0]
    }

    /// Determinant, `i/2` in exact arithmetic.
    ///
    /// When the two products in the direct formula are large the columns are
    /// rewritten in the (A, B) basis, where the determinant is
    /// `pi * (alpha1 beta2 - alpha2 beta1) * W(A, B)(s)` with no cancellation.
    pub fn determinant(&self) -> C {
        let e = &self.entries;
        let p = (e[0][0] * e[1][1]).logmag.max((e[0][1] * e[1][0]).logmag);
        if p < DIRECT_LIMIT {
            return self.determinant_direct().to_complex();
        }
        let (a1, b1, a2, b2) = connection_coeffs();
        PI * (a1 * b2 - a2 * b1) * wronskian_ab(self.s)
    }

    /// `M^{-1} = -2i sqrt(pi/eps) [[eps j^2 A'(j^2 s), -A(j^2 s)], [-eps j A'(js), A(js)]]`.
    pub fn inverse_entries(&self) -> [[LogComplex; 2]; 2] {
        inverse_entries(self.eps, self.aj, self.aj2)
    }
}

pub(crate) fn inverse_entries(
    eps: f64,
    aj: (LogComplex, LogComplex),
    aj2: (LogComplex, LogComplex),
) -> [[LogComplex; 2]; 2] {
    let (jj, jj2) = (j(), j2());
    let k = LogComplex::new(0.5 * (PI / eps).ln() + 2f64.ln(), -0.5 * PI);
    [
        [k * aj2.1 * (eps * jj2), -(k * aj2.0)],
        [-(k * aj.1 * (eps * jj)), k * aj.0],
    ]
}

fn wrapped(d: C) -> C {
    let mut im = d.im.rem_euclid(2.0 * PI);
    if im > PI {
        im -= 2.0 * PI;
    }
    C::new(d.re, im)
}

/// Relative residual of `eps^3 M' = [[0, 1], [t-b, 0]] M` for both columns of `M`,
/// from centred differences of `ln M` with step `h`.
pub fn column_ode_residual(t: f64, params: &Params, h: f64) -> f64 {
    let eps3 = params.eps3;
    let m0 = fundamental_matrix(C::new(t, 0.0), params);
    let mp = fundamental_matrix(C::new(t + h, 0.0), params);
    let mm = fundamental_matrix(C::new(t - h, 0.0), params);
    let mut worst: f64 = 0.0;
    for col in 0..2 {
        let x = m0.entries[0][col];
        let y = m0.entries[1][col];
        let dlx = wrapped(mp.entries[0][col].ln() - mm.entries[0][col].ln()) / (2.0 * h);
        let dly = wrapped(mp.entries[1][col].ln() - mm.entries[1][col].ln()) / (2.0 * h);
        let rx = (y / x).to_complex();
        let ry = ((x / y) * C::new(t - params.b, 0.0)).to_complex();
        let ex = (dlx * eps3 - rx).norm() / rx.norm().max((dlx * eps3).norm());
        let ey = (dly * eps3 - ry).norm() / ry.norm().max((dly * eps3).norm());
        worst = worst.max(ex).max(ey);
    }
    worst
}
