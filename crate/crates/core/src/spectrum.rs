//! Eigenvalues of the linear part and their reliefs.
//!
//! For `J(t) = [[t, 1], [t-b, t]]` the eigenvalues are `t -+ (t-b)^{1/2}`.
//! The square root needs a cut from the branch point `b`; two determinations
//! are offered. Primitives are taken from the base point `b`:
//! `F = t^2/2 -+ 2/3 (t-b)^{3/2} -+ 2/3 i b^{3/2}`, relief `R = Re F`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

type C = Complex64;

/// Parameters of the normal form `eps^3 x' = t x + y + eps^3 c1`, `eps^3 y' = (t-b) x + t y + eps^3 c2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub b: f64,
    pub c1: f64,
    pub c2: f64,
    /// The small parameter `eps^3`.
    pub eps3: f64,
}

impl Params {
    pub fn new(b: f64, c1: f64, c2: f64, eps3: f64) -> Result<Self> {
        if !b.is_finite() || !c1.is_finite() || !c2.is_finite() {
            return invalid("b, c1, c2 must be finite");
        }
        if !(eps3 > 0.0 && eps3.is_finite()) {
            return invalid(format!("eps^3 must be positive, got {eps3}"));
        }
        Ok(Params { b, c1, c2, eps3 })
    }

    /// `eps = (eps^3)^{1/3}`.
    pub fn eps(&self) -> f64 {
        self.eps3.cbrt()
    }

    pub fn with_eps3(&self, eps3: f64) -> Result<Self> {
        Params::new(self.b, self.c1, self.c2, eps3)
    }
}

/// `b` above which the eigenvalues are complex on the real axis before `t = b`.
pub const B_LOWER: f64 = 0.25;

/// Upper end of the band where the relief value at `b` stays below that of the saddle.
pub fn b_upper() -> f64 {
    0.5 + 3f64.sqrt() / 6.0
}

/// Lower end of that band, `1/2 - sqrt(3)/6`.
pub fn b_lower_hfn() -> f64 {
    0.5 - 3f64.sqrt() / 6.0
}

/// Choice of square root `(t-b)^{1/2} = |t-b|^{1/2} e^{i theta/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Determination {
    /// `theta` in `[0, 2pi)`: cut along `(b, +inf)`.
    PositiveRealCut,
    /// `theta` in `[-pi/2, 3pi/2)`: cut along `b - i(0, +inf)`.
    ShiftedCut,
}

impl Determination {
    fn theta_lo(self) -> f64 {
        match self {
            Determination::PositiveRealCut => 0.0,
            Determination::ShiftedCut => -0.5 * PI,
        }
    }

    /// Direction of the cut ray from `b`.
    pub fn cut_direction(self) -> C {
        C::from_polar(1.0, self.theta_lo())
    }

    /// Angle of `w` in `[theta_lo, theta_lo + 2pi)`.
    pub fn angle(self, w: C) -> f64 {
        let lo = self.theta_lo();
        let mut th = (w.arg() - lo).rem_euclid(TAU) + lo;
        if th >= lo + TAU {
            th = lo;
        }
        th
    }

    /// `w^{p}` with this determination (`w = t - b`).
    pub fn pow(self, w: C, p: f64) -> C {
        if w.norm() == 0.0 {
            return C::new(0.0, 0.0);
        }
        C::from_polar(w.norm().powf(p), p * self.angle(w))
    }

    /// True when `t` lies on the open cut ray.
    pub fn on_cut(self, t: C, b: f64) -> bool {
        let w = t - b;
        if w.norm() == 0.0 {
            return false;
        }
        let d = self.cut_direction();
        let along = w.re * d.re + w.im * d.im;
        let across = w.re * d.im - w.im * d.re;
        along > 0.0 && across == 0.0
    }

    /// True when the open segment `p -> q` crosses or touches the cut ray.
    pub fn segment_crosses_cut(self, p: C, q: C, b: f64) -> bool {
        let d = self.cut_direction();
        let rot = |t: C| (t - b) * d.conj();
        let (p, q) = (rot(p), rot(q));
        // cut is now the positive real axis
        if p.im == 0.0 && p.re > 0.0 || q.im == 0.0 && q.re > 0.0 {
            return true;
        }
        if (p.im > 0.0) == (q.im > 0.0) {
            return false;
        }
        let x = p.re - p.im * (q.re - p.re) / (q.im - p.im);
        x > 0.0
    }
}

/// Which eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Which {
    /// `lambda = t - (t-b)^{1/2}`.
    Lambda,
    /// `mu = t + (t-b)^{1/2}`.
    Mu,
}

impl Which {
    fn sign(self) -> f64 {
        match self {
            Which::Lambda => -1.0,
            Which::Mu => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    pub lambda: C,
    pub mu: C,
}

pub fn eigenvalues(t: C, b: f64, det: Determination) -> EigenPair {
    let r = det.pow(t - b, 0.5);
    EigenPair {
        lambda: t - r,
        mu: t + r,
    }
}

/// Eigenvalues of an arbitrary 2x2 matrix function at `t`, for callers that
/// supply their own Jacobian. Ordered by increasing imaginary part.
pub fn eigenvalues_numeric<F>(jacobian: F, t: C) -> (C, C)
where
    F: Fn(C) -> [[C; 2]; 2],
{
    let m = jacobian(t);
    let tr = m[0][0] + m[1][1];
    let dt = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = (tr * tr * 0.25 - dt).sqrt();
    let (a, b) = (tr * 0.5 - disc, tr * 0.5 + disc);
    if a.im <= b.im {
        (a, b)
    } else {
        (b, a)
    }
}

/// Primitive `F` and relief `R = Re F` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReliefValue {
    pub primitive: C,
    pub relief: f64,
}

fn primitive(t: C, b: f64, which: Which, det: Determination) -> C {
    let s = which.sign();
    let w = det.pow(t - b, 1.5);
    let base = C::new(0.0, b.abs().powf(1.5));
    t * t * 0.5 + (w + base) * (s * 2.0 / 3.0)
}

/// Relief with the determination's half-open convention on the cut itself.
pub fn relief_value(t: C, b: f64, which: Which, det: Determination) -> ReliefValue {
    let f = primitive(t, b, which, det);
    ReliefValue {
        primitive: f,
        relief: f.re,
    }
}

/// Relief; a point on the cut is an error naming both one-sided limits.
pub fn relief(t: C, b: f64, which: Which, det: Determination) -> Result<ReliefValue> {
    if det.on_cut(t, b) {
        let n = det.cut_direction() * C::new(0.0, 1e-300_f64.max(1e-12 * (t - b).norm()));
        let side_a = primitive(t + n, b, which, det);
        let side_b = primitive(t - n, b, which, det);
        return Err(Error::OnCut { t, side_a, side_b });
    }
    Ok(relief_value(t, b, which, det))
}

/// Relief of a point on the positive real cut, taken on the sheet `theta = 0`
/// (`upper = true`) or `theta = 2pi`.
pub fn relief_on_cut(t: f64, b: f64, which: Which, upper: bool) -> f64 {
    let w = (t - b).max(0.0).powf(1.5);
    let w = if upper { w } else { -w };
    0.5 * t * t + which.sign() * (2.0 / 3.0) * w
}

/// Derivative of the primitive, i.e. the eigenvalue.
pub fn primitive_derivative(t: C, b: f64, which: Which, det: Determination) -> C {
    let e = eigenvalues(t, b, det);
    match which {
        Which::Lambda => e.lambda,
        Which::Mu => e.mu,
    }
}

/// Saddle of the relief in the upper half plane and its relief level.
///
/// `lambda(t_c) = 0` at `t_c = 1/2 + i sqrt(b - 1/4)`, with `R_c = b/2 - 1/12`
/// (both reliefs agree there under the positive-real cut).
pub fn critical_point(b: f64) -> Result<(C, f64)> {
    if !(b > B_LOWER) {
        return Err(Error::Hypothesis(format!("critical point needs b > 1/4, got {b}")));
    }
    let tc = C::new(0.5, (b - 0.25).sqrt());
    let rc = relief_value(tc, b, Which::Lambda, Determination::PositiveRealCut).relief;
    Ok((tc, rc))
}

/// Real points where the reliefs reach the saddle level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealCrossings {
    /// Anti-bump `t_e < 0`: `t_e^2/2 = R_c`.
    pub t_e: f64,
    /// Point past `b` where the `theta = 2pi` sheet (`R_mu` from above) reaches `R_c`.
    pub t_s1: f64,
    /// Point past `b` where the `theta = 0` sheet (`R_lambda` from above) reaches `R_c`.
    pub t_s2: f64,
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> Result<f64> {
    let (flo, fhi) = (f(lo), f(hi));
    if flo.signum() == fhi.signum() {
        return Err(Error::NoRoot(format!("no sign change on [{lo}, {hi}]")));
    }
    let up = flo < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) == up {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 * hi.abs().max(1.0) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub(crate) fn root_bisect_newton<F, D>(f: F, df: D, lo: f64, hi: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut x = bisect(&f, lo, hi)?;
    for _ in 0..3 {
        let d = df(x);
        if d == 0.0 {
            break;
        }
        let nx = x - f(x) / d;
        if nx > lo && nx < hi {
            x = nx;
        }
    }
    Ok(x)
}

/// Requires `1/4 < b < 1/2 + sqrt(3)/6`.
pub fn real_crossings(b: f64) -> Result<RealCrossings> {
    if !(b > B_LOWER && b < b_upper()) {
        return Err(Error::Hypothesis(format!(
            "real crossings need 1/4 < b < {:.6}, got {b}",
            b_upper()
        )));
    }
    let (tc, rc) = critical_point(b)?;
    let t_e = -(2.0 * rc).sqrt();
    let hi = tc.re + 2.0;
    let lo = b + 1e-12;
    let g = |sign: f64| {
        move |t: f64| 0.5 * t * t + sign * (2.0 / 3.0) * (t - b).max(0.0).powf(1.5) - rc
    };
    let dg = |sign: f64| move |t: f64| t + sign * (t - b).max(0.0).sqrt();
    let t_s1 = root_bisect_newton(g(1.0), dg(1.0), lo, hi)?;
    let t_s2 = root_bisect_newton(g(-1.0), dg(-1.0), lo, hi)?;
    Ok(RealCrossings { t_e, t_s1, t_s2 })
}

/// Relief of the delayed Hopf example with eigenvalues `t -+ i`: `R = Re (t -+ i)^2 / 2`.
pub fn hopf_relief(t: C, which: Which) -> f64 {
    let s = match which {
        Which::Lambda => C::new(0.0, -1.0),
        Which::Mu => C::new(0.0, 1.0),
    };
    0.5 * ((t + s) * (t + s)).re
}

/// Bump of the Hopf example (real point beyond which exits cannot reach).
pub const HOPF_BUMP: f64 = 1.0;
/// Anti-bump of the Hopf example.
pub const HOPF_ANTI_BUMP: f64 = -1.0;

/// Which hypotheses of the focus-node setting hold for `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypothesisReport {
    /// `b > 1/4`: the Jacobian has a Hopf-type pair on `(-inf, b)` near `t = 0`.
    pub complex_pair: bool,
    /// `R(b) < R_c`.
    pub focus_node_below_saddle: bool,
    pub relief_at_b: f64,
    pub saddle_level: Option<f64>,
}

pub fn check_hypotheses(b: f64) -> HypothesisReport {
    let complex_pair = b > B_LOWER;
    let relief_at_b = 0.5 * b * b;
    let saddle_level = critical_point(b).ok().map(|(_, r)| r);
    HypothesisReport {
        complex_pair,
        focus_node_below_saddle: saddle_level.is_some_and(|r| relief_at_b < r),
        relief_at_b,
        saddle_level,
    }
}

/// Bump structure for any `b > 1/4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bumps {
    /// `R(b) < R_c`: the saddle level is reached only past `b`.
    AfterFocusNode(RealCrossings),
    /// `R(b) >= R_c`: a bump `sqrt(b - 1/6)` sits before `b`.
    BeforeFocusNode { anti_bump: f64, bump: f64 },
}

pub fn bumps(b: f64) -> Result<Bumps> {
    let h = check_hypotheses(b);
    if !h.complex_pair {
        return Err(Error::Hypothesis(format!("bumps need b > 1/4, got {b}")));
    }
    if h.focus_node_below_saddle {
        Ok(Bumps::AfterFocusNode(real_crossings(b)?))
    } else {
        let s = (b - 1.0 / 6.0).sqrt();
        Ok(Bumps::BeforeFocusNode {
            anti_bump: -s,
            bump: s,
        })
    }
}
