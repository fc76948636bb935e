//! Real-time integration of the normal form, distinguished trajectories,
//! exit detection and the exponential microscope.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::series::qss_first;
use crate::spectrum::Params;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

impl Sample {
    pub fn norm_inf(&self) -> f64 {
        self.x.abs().max(self.y.abs())
    }
}

/// Samples at every step, in integration order.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub h: f64,
    /// Integration stopped early because the state left `|X| < 1e300`.
    pub halted: bool,
}

impl Trajectory {
    /// Linear interpolation of the state at `t` (inside the covered range).
    pub fn at(&self, t: f64) -> Option<[f64; 2]> {
        let s = &self.samples;
        let fwd = s.last()?.t >= s[0].t;
        let k = s.partition_point(|p| if fwd { p.t < t } else { p.t > t });
        if k == 0 {
            return (s[0].t == t).then_some([s[0].x, s[0].y]);
        }
        if k >= s.len() {
            return None;
        }
        let (a, b) = (s[k - 1], s[k]);
        let w = (t - a.t) / (b.t - a.t);
        Some([a.x + w * (b.x - a.x), a.y + w * (b.y - a.y)])
    }
}

/// `dX/dt` of the normal form.
pub fn vector_field(p: &Params, t: f64, x: f64, y: f64) -> [f64; 2] {
    [
        (t * x + y) / p.eps3 + p.c1,
        ((t - p.b) * x + t * y) / p.eps3 + p.c2,
    ]
}

/// Classical fourth-order Runge-Kutta from `t0` to `t1` with step close to `h`
/// (adjusted so the last step lands on `t1`). Requires `h <= eps^3/10`.
pub fn rk4(p: &Params, t0: f64, x0: [f64; 2], t1: f64, h: f64) -> Result<Trajectory> {
    if !(h > 0.0 && h <= 0.1 * p.eps3 * (1.0 + 1e-12)) {
        return invalid(format!("step {h} must lie in (0, eps^3/10 = {}]", 0.1 * p.eps3));
    }
    if !(t0.is_finite() && t1.is_finite()) || t0 == t1 {
        return invalid("integration interval is empty");
    }
    let n = ((t1 - t0).abs() / h).round().max(1.0) as usize;
    let dt = (t1 - t0) / n as f64;
    let mut samples = Vec::with_capacity(n + 1);
    let [mut x, mut y] = x0;
    samples.push(Sample { t: t0, x, y });
    let mut halted = false;
    for k in 0..n {
        let t = t0 + dt * k as f64;
        let k1 = vector_field(p, t, x, y);
        let k2 = vector_field(p, t + 0.5 * dt, x + 0.5 * dt * k1[0], y + 0.5 * dt * k1[1]);
        let k3 = vector_field(p, t + 0.5 * dt, x + 0.5 * dt * k2[0], y + 0.5 * dt * k2[1]);
        let k4 = vector_field(p, t + dt, x + dt * k3[0], y + dt * k3[1]);
        x += dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        y += dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        samples.push(Sample {
            t: t0 + dt * (k + 1) as f64,
            x,
            y,
        });
        if !(x.abs() < 1e300 && y.abs() < 1e300) {
            halted = true;
            break;
        }
    }
    Ok(Trajectory {
        samples,
        h: dt.abs(),
        halted,
    })
}

/// Which distinguished trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `X_-`, bounded as `t -> -inf`; integrated forward.
    Minus,
    /// `X_+`, bounded as `t -> +inf`; integrated backward.
    Plus,
}

/// Slow-manifold seed `eps^3 X_1(t)`.
pub fn qss_seed(p: &Params, t: f64) -> Result<[f64; 2]> {
    let [x, y] = qss_first(p, t)?;
    Ok([p.eps3 * x, p.eps3 * y])
}

/// Distinguished trajectory seeded on the slow manifold at `t_far`
/// (`t_far <= -3` for `X_-`, `>= 3` for `X_+`) and integrated to `t_end`.
pub fn distinguished(p: &Params, side: Side, t_far: f64, t_end: f64, h: f64) -> Result<Trajectory> {
    match side {
        Side::Minus if !(t_far <= -3.0 && t_end > t_far) => {
            invalid("X_- needs t_far <= -3 < t_end")
        }
        Side::Plus if !(t_far >= 3.0 && t_end < t_far) => {
            invalid("X_+ needs t_end < t_far, t_far >= 3")
        }
        _ => rk4(p, t_far, qss_seed(p, t_far)?, t_end, h),
    }
}

/// Relative difference at `t_far/2` between the distinguished trajectory and
/// one seeded `size` away.
pub fn seed_contraction(p: &Params, side: Side, t_far: f64, h: f64, size: f64) -> Result<f64> {
    let seed = qss_seed(p, t_far)?;
    let a = rk4(p, t_far, seed, t_far / 2.0, h)?;
    let b = rk4(p, t_far, [seed[0] + size, seed[1] + size], t_far / 2.0, h)?;
    let (sa, sb) = (a.samples.last().unwrap(), b.samples.last().unwrap());
    let _ = side;
    Ok((sa.x - sb.x).abs().max((sa.y - sb.y).abs()) / sa.norm_inf())
}

/// Default time the state must stay below `delta/2` before an exit counts.
pub const DEFAULT_DWELL: f64 = 0.1;

/// First time (in integration order) where `|X|_inf > delta`, after the
/// state has stayed `<= delta/2` for 0.1 time units.
pub fn exit_time(traj: &Trajectory, delta: f64) -> Option<f64> {
    exit_time_with(traj, delta, DEFAULT_DWELL)
}

pub fn exit_time_with(traj: &Trajectory, delta: f64, dwell: f64) -> Option<f64> {
    first_excursion(traj, dwell, |s| s.norm_inf(), |_| delta)
}

fn first_excursion<G, L>(traj: &Trajectory, dwell: f64, gauge: G, limit: L) -> Option<f64>
where
    G: Fn(&Sample) -> f64,
    L: Fn(&Sample) -> f64,
{
    let mut run_start: Option<f64> = None;
    let mut armed = false;
    for s in &traj.samples {
        let (g, l) = (gauge(s), limit(s));
        if armed && g > l {
            return Some(s.t);
        }
        if g <= 0.5 * l {
            let st = *run_start.get_or_insert(s.t);
            if (s.t - st).abs() >= dwell {
                armed = true;
            }
        } else {
            run_start = None;
        }
    }
    None
}

/// First time the trajectory is farther from the slow manifold `eps^3 X_1`
/// than the manifold is from zero, after staying within half of that for `dwell`.
pub fn departure_time(traj: &Trajectory, p: &Params, dwell: f64) -> Option<f64> {
    let qss = |s: &Sample| qss_seed(p, s.t).unwrap_or([f64::NAN, f64::NAN]);
    first_excursion(
        traj,
        dwell,
        |s| {
            let q = qss(s);
            (s.x - q[0]).abs().max((s.y - q[1]).abs())
        },
        |s| {
            let q = qss(s);
            q[0].abs().max(q[1].abs())
        },
    )
}

/// Polar "exponential microscope" coordinates: `X = e^{rho/eps^3} (cos theta, sin theta)`.
#[derive(Debug, Clone)]
pub struct MicroscopeTrack {
    pub t: Vec<f64>,
    pub rho: Vec<f64>,
    /// Continuous (unwrapped) angle.
    pub theta: Vec<f64>,
    pub eps3: f64,
}

impl MicroscopeTrack {
    pub fn reconstruct(&self, k: usize) -> [f64; 2] {
        let r = (self.rho[k] / self.eps3).exp();
        [r * self.theta[k].cos(), r * self.theta[k].sin()]
    }
}

/// `rho = eps^3 ln |X|_2`, `theta` unwrapped.
pub fn to_microscope(traj: &Trajectory, p: &Params) -> Result<MicroscopeTrack> {
    let n = traj.samples.len();
    let (mut t, mut rho, mut theta) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    let mut prev: Option<f64> = None;
    for s in &traj.samples {
        let r = s.x.hypot(s.y);
        if r == 0.0 {
            return Err(Error::ZeroSample(s.t));
        }
        let mut th = s.y.atan2(s.x);
        if let Some(pv) = prev {
            th += ((pv - th) / (2.0 * PI)).round() * 2.0 * PI;
        }
        prev = Some(th);
        t.push(s.t);
        rho.push(p.eps3 * r.ln());
        theta.push(th);
    }
    Ok(MicroscopeTrack {
        t,
        rho,
        theta,
        eps3: p.eps3,
    })
}

/// Angles `theta` in `(-pi/2, pi/2]` where `theta' = 0` for the linear system
/// `[[alpha, beta], [gamma, delta]]`: roots of `gamma c^2 + (delta - alpha) c s - beta s^2`.
/// Returns 0 or 2 values (a double root is repeated).
pub fn slow_curve_angles(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Vec<f64> {
    let d = delta - alpha;
    if beta == 0.0 {
        // gamma c^2 + d c s = 0: c = 0 or tan = -gamma/d
        let mut v = vec![PI / 2.0];
        v.push(if d != 0.0 { (-gamma / d).atan() } else { PI / 2.0 });
        return v;
    }
    // beta u^2 - d u - gamma = 0 with u = tan theta
    let disc = d * d + 4.0 * beta * gamma;
    if disc < 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    let mut v = vec![((d - sq) / (2.0 * beta)).atan(), ((d + sq) / (2.0 * beta)).atan()];
    v.sort_by(f64::total_cmp);
    v
}

/// Slow-curve angles of the normal form: `theta = arctan(-+ sqrt(t - b))` for `t >= b`.
pub fn theta_slow_branches(t: f64, p: &Params) -> Vec<f64> {
    slow_curve_angles(t, 1.0, t - p.b, t)
}

/// Average of `rho'` over one turn of `theta` (weighted by the time spent),
/// for `t < b` where the angle rotates monotonically. Requires the radius
/// `e^{rho/eps^3}` to be at most `1e-6` so that the forcing is negligible.
pub fn averaged_rho_rate(t: f64, p: &Params, rho: f64) -> Result<f64> {
    if !(rho < 0.0 && (rho / p.eps3) <= (1e-6f64).ln()) {
        return invalid(format!("rho = {rho} is not deep enough below 0 (need e^(rho/eps^3) <= 1e-6)"));
    }
    let (a, b, g, d) = (t, 1.0, t - p.b, t);
    let n = 512;
    let (mut num, mut den) = (0.0, 0.0);
    let mut sign = 0.0;
    for k in 0..n {
        let th = 2.0 * PI * k as f64 / n as f64;
        let (s, c) = th.sin_cos();
        let dth = g * c * c + (d - a) * c * s - b * s * s;
        if sign == 0.0 {
            sign = dth.signum();
        }
        if dth.abs() < 1e-12 || dth.signum() != sign {
            return Err(Error::SingularAveraging(th));
        }
        let drho = a * c * c + (b + g) * c * s + d * s * s;
        num += drho / dth.abs();
        den += 1.0 / dth.abs();
    }
    Ok(num / den)
}
