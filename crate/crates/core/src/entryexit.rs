//! Input-output (entry-exit) relations.
//!
//! Four predictions of where a trajectory that starts tracking the slow curve
//! at `t_e` leaves it, plus the RK4 measurement they are compared against.

use crate::error::{invalid, Error, Result};
use crate::flow::{exit_time, qss_seed, rk4};
use crate::par::Strategy;
use crate::quad::integrate;
use crate::spectrum::{check_hypotheses, root_bisect_newton, Params};

/// Shape of a predicted exit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IoKind {
    Point(f64),
    /// `lo <= hi`. With `open` set, `hi` is unknown and reported as infinity.
    Interval { lo: f64, hi: f64, open: bool },
    /// Any exit beyond the bound is possible.
    AnyBeyond(f64),
}

/// Which rule produced a prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// Zero of `int Re lambda` past the bifurcation.
    HopfIntegral,
    /// Entry before the anti-bump: exit at the bump.
    HopfBump,
    /// Entry exactly at the anti-bump.
    HopfAntiBump,
    /// Entry after the anti-bump: symmetric exit.
    HopfSymmetric,
    /// Both integral conditions agree below `b`.
    BandCollapsed,
    /// `[s_mu, s_lambda]` past `b`.
    Band,
    /// `min(-t_e, b)`.
    Conjecture,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IoResult {
    pub t_e: f64,
    pub kind: IoKind,
    pub rule: Rule,
}

impl IoResult {
    /// Single value for a point, the bound for any-beyond, the midpoint of a closed interval.
    pub fn representative(&self) -> f64 {
        match self.kind {
            IoKind::Point(t) | IoKind::AnyBeyond(t) => t,
            IoKind::Interval { lo, hi, open } => {
                if open {
                    lo
                } else {
                    0.5 * (lo + hi)
                }
            }
        }
    }

    /// `(lo, hi)`; a point gives `(t, t)`, any-beyond `(t, inf)`.
    pub fn bounds(&self) -> (f64, f64) {
        match self.kind {
            IoKind::Point(t) => (t, t),
            IoKind::AnyBeyond(t) => (t, f64::INFINITY),
            IoKind::Interval { lo, hi, .. } => (lo, hi),
        }
    }
}

fn require_negative(t_e: f64) -> Result<()> {
    if t_e.is_finite() && t_e < 0.0 {
        Ok(())
    } else {
        invalid(format!("entry time must be negative, got {t_e}"))
    }
}

/// Exit `t_s > a` with `int_{t_e}^{t_s} re_lambda = 0`, searched up to `t_max`.
pub fn hopf_canard_exit<F>(re_lambda: F, t_e: f64, a: f64, t_max: f64) -> Result<IoResult>
where
    F: Fn(f64) -> f64,
{
    if !(t_e < a && re_lambda(t_e) < 0.0 && t_max > a) {
        return invalid(format!(
            "need t_e < a < t_max and Re lambda(t_e) < 0 (t_e = {t_e}, a = {a}, t_max = {t_max})"
        ));
    }
    const TOL: f64 = 1e-13;
    let base = integrate(&re_lambda, t_e, a, TOL);
    let n = 400;
    let h = (t_max - a) / n as f64;
    let mut acc = base;
    for k in 0..n {
        let lo = a + k as f64 * h;
        let hi = lo + h;
        let next = acc + integrate(&re_lambda, lo, hi, TOL);
        if acc < 0.0 && next >= 0.0 {
            let start = acc;
            let g = |s: f64| start + integrate(&re_lambda, lo, s, TOL);
            let t_s = root_bisect_newton(g, &re_lambda, lo, hi)?;
            return Ok(IoResult {
                t_e,
                kind: IoKind::Point(t_s),
                rule: Rule::HopfIntegral,
            });
        }
        acc = next;
    }
    Err(Error::NoRoot(format!(
        "int Re lambda from {t_e} stays negative up to {t_max}"
    )))
}

/// Pure Hopf example (`lambda = t -+ i`, bump 1, anti-bump -1).
pub fn hopf_bump_relation(t_e: f64) -> Result<IoResult> {
    require_negative(t_e)?;
    use crate::spectrum::{HOPF_ANTI_BUMP, HOPF_BUMP};
    let (kind, rule) = if t_e < HOPF_ANTI_BUMP {
        (IoKind::Point(HOPF_BUMP), Rule::HopfBump)
    } else if t_e == HOPF_ANTI_BUMP {
        (IoKind::AnyBeyond(HOPF_BUMP), Rule::HopfAntiBump)
    } else {
        (IoKind::Point(-t_e), Rule::HopfSymmetric)
    };
    Ok(IoResult { t_e, kind, rule })
}

/// Integral of `Re lambda` (sign -1) or `Re mu` (+1) from 0 to `s`.
fn band_primitive(s: f64, b: f64, sign: f64) -> f64 {
    0.5 * s * s + sign * (2.0 / 3.0) * (s - b).max(0.0).powf(1.5)
}

/// Exit band from the two integral conditions past `b`.
pub fn hfn_band(p: &Params, t_e: f64) -> Result<IoResult> {
    require_negative(t_e)?;
    let h = check_hypotheses(p.b);
    if !(h.complex_pair && h.focus_node_below_saddle) {
        return Err(Error::Hypothesis(format!(
            "band needs b > 1/4 and R(b) < R_c, got b = {}",
            p.b
        )));
    }
    let b = p.b;
    if -t_e <= b {
        return Ok(IoResult {
            t_e,
            kind: IoKind::Point(-t_e),
            rule: Rule::BandCollapsed,
        });
    }
    let target = 0.5 * t_e * t_e;
    let root = |sign: f64| -> Result<f64> {
        let f = move |s: f64| band_primitive(s, b, sign) - target;
        let df = move |s: f64| s + sign * (s - b).max(0.0).sqrt();
        // f(b) < 0 and f grows at least like s^2/2 - 2 s^{3/2}/3
        let mut hi = b + 1.0;
        while f(hi) < 0.0 {
            hi = b + 2.0 * (hi - b);
            if hi > 1e6 {
                return Err(Error::NoRoot(format!("sign {sign} band end")));
            }
        }
        root_bisect_newton(f, df, b, hi)
    };
    let lo = root(1.0)?;
    let (hi, open) = match root(-1.0) {
        Ok(s) => (s, false),
        Err(_) => (f64::INFINITY, true),
    };
    Ok(IoResult {
        t_e,
        kind: IoKind::Interval { lo, hi, open },
        rule: Rule::Band,
    })
}

/// `t_s = min(-t_e, b)`.
pub fn conjectured_exit(p: &Params, t_e: f64) -> Result<IoResult> {
    require_negative(t_e)?;
    Ok(IoResult {
        t_e,
        kind: IoKind::Point((-t_e).min(p.b)),
        rule: Rule::Conjecture,
    })
}

/// Integration horizon for `measure_exit`.
pub const MEASURE_END: f64 = 2.0;

/// RK4 from `eps^3 X_1(t_e) + (r0, 0)`; first exit above `delta`.
pub fn measure_exit(p: &Params, t_e: f64, r0: f64, delta: f64, h: f64) -> Result<f64> {
    require_negative(t_e)?;
    if !(1e-8..=1e-3).contains(&r0) {
        return invalid(format!("r0 must lie in [1e-8, 1e-3], got {r0}"));
    }
    if !(delta >= 100.0 * r0) {
        return invalid(format!("delta must be at least 100 r0, got {delta}"));
    }
    let q = qss_seed(p, t_e)?;
    let traj = rk4(p, t_e, [q[0] + r0, q[1]], MEASURE_END, h)?;
    exit_time(&traj, delta).ok_or(Error::NoExit(MEASURE_END))
}

/// Settings shared by every point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureSettings {
    pub r0: f64,
    pub delta: f64,
    pub h: f64,
}

impl Default for MeasureSettings {
    fn default() -> Self {
        MeasureSettings {
            r0: 1e-6,
            delta: 0.05,
            h: 1e-4,
        }
    }
}

/// One line of an input-output table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IoRow {
    pub t_e: f64,
    pub predicted: f64,
    pub band_lo: f64,
    pub band_hi: f64,
    /// `None` when no exit was seen before `MEASURE_END`.
    pub measured: Option<f64>,
}

pub fn sweep(p: &Params, entries: &[f64], s: MeasureSettings) -> Result<Vec<IoRow>> {
    sweep_with(p, entries, s, Strategy::default())
}

pub fn sweep_with(p: &Params, entries: &[f64], s: MeasureSettings, strategy: Strategy) -> Result<Vec<IoRow>> {
    strategy
        .map(entries, |&t_e| -> Result<IoRow> {
            let predicted = conjectured_exit(p, t_e)?.representative();
            let (band_lo, band_hi) = hfn_band(p, t_e)?.bounds();
            let measured = match measure_exit(p, t_e, s.r0, s.delta, s.h) {
                Ok(t) => Some(t),
                Err(Error::NoExit(_)) => None,
                Err(e) => return Err(e),
            };
            Ok(IoRow {
                t_e,
                predicted,
                band_lo,
                band_hi,
                measured,
            })
        })
        .into_iter()
        .collect()
}
