//! Level curves, descending paths and descending domains of a relief.

use std::collections::{HashMap, VecDeque};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::par::Strategy;
use crate::spectrum::{hopf_relief, primitive_derivative, relief_value, Determination, Which};

type C = Complex64;

/// Polyline in the complex plane.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPath {
    nodes: Vec<C>,
    /// Sampling step used by `samples` and by the descent check.
    pub max_step: f64,
}

impl ComplexPath {
    pub fn new(nodes: Vec<C>) -> Result<Self> {
        if nodes.len() < 2 {
            return invalid("a path needs at least two nodes");
        }
        if nodes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return invalid("path nodes must be finite");
        }
        if nodes.windows(2).any(|w| w[0] == w[1]) {
            return invalid("consecutive path nodes must differ");
        }
        Ok(ComplexPath {
            nodes,
            max_step: 1e-3,
        })
    }

    pub fn with_max_step(mut self, h: f64) -> Self {
        self.max_step = h;
        self
    }

    pub fn nodes(&self) -> &[C] {
        &self.nodes
    }

    pub fn start(&self) -> C {
        self.nodes[0]
    }

    pub fn end(&self) -> C {
        *self.nodes.last().unwrap()
    }

    pub fn segments(&self) -> impl Iterator<Item = (C, C)> + '_ {
        self.nodes.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn conj(&self) -> Self {
        ComplexPath {
            nodes: self.nodes.iter().map(|z| z.conj()).collect(),
            max_step: self.max_step,
        }
    }

    pub fn length(&self) -> f64 {
        self.segments().map(|(a, b)| (b - a).norm()).sum()
    }

    /// Path without its last node.
    pub fn without_last_segment(&self) -> Result<Self> {
        let mut nodes = self.nodes.clone();
        nodes.pop();
        Ok(ComplexPath::new(nodes)?.with_max_step(self.max_step))
    }

    /// Points spaced at most `max_step` apart, both ends included.
    pub fn samples(&self) -> Vec<C> {
        let mut out = vec![self.nodes[0]];
        for (a, b) in self.segments() {
            let n = ((b - a).norm() / self.max_step).ceil().max(1.0) as usize;
            for k in 1..=n {
                out.push(a + (b - a) * (k as f64 / n as f64));
            }
        }
        out
    }
}

/// A relief to walk on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Relief {
    /// Normal form with focus-node at `b`.
    Normal {
        b: f64,
        which: Which,
        det: Determination,
    },
    /// Delayed Hopf example with eigenvalues `t -+ i`.
    Hopf { which: Which },
}

impl Relief {
    pub fn lambda(b: f64) -> Self {
        Relief::Normal {
            b,
            which: Which::Lambda,
            det: Determination::PositiveRealCut,
        }
    }

    pub fn mu(b: f64) -> Self {
        Relief::Normal {
            b,
            which: Which::Mu,
            det: Determination::PositiveRealCut,
        }
    }

    pub fn with_determination(self, det: Determination) -> Self {
        match self {
            Relief::Normal { b, which, .. } => Relief::Normal { b, which, det },
            h => h,
        }
    }

    pub fn value(&self, t: C) -> f64 {
        match *self {
            Relief::Normal { b, which, det } => relief_value(t, b, which, det).relief,
            Relief::Hopf { which } => hopf_relief(t, which),
        }
    }

    /// Derivative of the primitive; `dR/ds = Re(F'(t) d)` along the unit direction `d`.
    pub fn slope(&self, t: C) -> C {
        match *self {
            Relief::Normal { b, which, det } => primitive_derivative(t, b, which, det),
            Relief::Hopf { which } => match which {
                Which::Lambda => t - C::new(0.0, 1.0),
                Which::Mu => t + C::new(0.0, 1.0),
            },
        }
    }

    pub fn on_cut(&self, t: C) -> bool {
        match *self {
            Relief::Normal { b, det, .. } => det.on_cut(t, b),
            Relief::Hopf { .. } => false,
        }
    }

    /// True for the branch point itself.
    pub fn is_branch_point(&self, t: C) -> bool {
        matches!(*self, Relief::Normal { b, .. } if (t - b).norm() <= 1e-12 * b.abs().max(1.0))
    }

    pub fn segment_blocked(&self, p: C, q: C) -> bool {
        match *self {
            Relief::Normal { b, det, .. } => det.segment_crosses_cut(p, q, b),
            Relief::Hopf { .. } => false,
        }
    }
}

/// Outcome of a descent check.
#[derive(Debug, Clone, PartialEq)]
pub struct Descent {
    pub descending: bool,
    pub first_violation: Option<C>,
    /// Largest `dR/ds` seen (negative on a descending path).
    pub max_rate: f64,
}

/// Does `R` strictly decrease along `path` (`dR/ds < -tol` at every sample)?
pub fn is_descending(path: &ComplexPath, relief: &Relief, tol: f64) -> Result<Descent> {
    let mut first_violation = None;
    let mut max_rate = f64::NEG_INFINITY;
    for (a, b) in path.segments() {
        if relief.segment_blocked(a, b) || relief.on_cut(a) || relief.on_cut(b) {
            let t = if relief.on_cut(a) { a } else { b };
            let s = relief.slope(t);
            return Err(Error::OnCut {
                t,
                side_a: s,
                side_b: -s,
            });
        }
        let d = (b - a) / (b - a).norm();
        let n = ((b - a).norm() / path.max_step).ceil().max(1.0) as usize;
        for k in 0..=n {
            let t = a + (b - a) * (k as f64 / n as f64);
            let rate = (relief.slope(t) * d).re;
            max_rate = max_rate.max(rate);
            if rate >= -tol && first_violation.is_none() {
                first_violation = Some(t);
            }
        }
    }
    Ok(Descent {
        descending: first_violation.is_none(),
        first_violation,
        max_rate,
    })
}

/// Axis-aligned box `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl BBox {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        if !(x1 > x0 && y1 > y0) {
            return invalid("empty bounding box");
        }
        Ok(BBox { x0, x1, y0, y1 })
    }

    pub fn contains(&self, t: C) -> bool {
        t.re >= self.x0 && t.re <= self.x1 && t.im >= self.y0 && t.im <= self.y1
    }
}

fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    let mut v: Vec<f64> = (0..n).map(|k| lo + step * k as f64).collect();
    v[n - 1] = hi;
    if lo == -hi {
        // exact mirror symmetry keeps conjugate masks identical
        for k in 0..n / 2 {
            v[n - 1 - k] = -v[k];
        }
        if n % 2 == 1 {
            v[n / 2] = 0.0;
        }
    }
    v
}

/// Relief sampled on a regular `nx x ny` node grid.
#[derive(Debug, Clone)]
pub struct ReliefGrid {
    pub bbox: BBox,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Row-major, `values[iy * nx + ix]`.
    pub values: Vec<f64>,
}

impl ReliefGrid {
    pub fn evaluate(relief: &Relief, bbox: BBox, n: usize) -> Self {
        Self::evaluate_with(relief, bbox, n, Strategy::default())
    }

    pub fn evaluate_with(relief: &Relief, bbox: BBox, n: usize, strategy: Strategy) -> Self {
        let xs = axis(bbox.x0, bbox.x1, n);
        let ys = axis(bbox.y0, bbox.y1, n);
        let rows: Vec<Vec<f64>> = strategy.map(&ys, |&y| {
            xs.iter().map(|&x| relief.value(C::new(x, y))).collect()
        });
        ReliefGrid {
            bbox,
            xs,
            ys,
            values: rows.concat(),
        }
    }

    pub fn nx(&self) -> usize {
        self.xs.len()
    }

    pub fn ny(&self) -> usize {
        self.ys.len()
    }

    pub fn point(&self, ix: usize, iy: usize) -> C {
        C::new(self.xs[ix], self.ys[iy])
    }

    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.nx() + ix]
    }

    pub fn nearest(&self, t: C) -> (usize, usize) {
        let near = |v: &[f64], x: f64| {
            let mut best = 0;
            for (k, &c) in v.iter().enumerate() {
                if (c - x).abs() < (v[best] - x).abs() {
                    best = k;
                }
            }
            best
        };
        (near(&self.xs, t.re), near(&self.ys, t.im))
    }

    pub fn range(&self) -> f64 {
        let lo = self.values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    }
}

/// Marching-squares level set of `relief` at `level`, as polylines.
///
/// Cells touching the cut are skipped: the relief jumps there.
pub fn level_curves(relief: &Relief, level: f64, bbox: BBox, n: usize) -> Result<Vec<Vec<C>>> {
    if n < 16 {
        return invalid(format!("level_curves needs n >= 16, got {n}"));
    }
    let g = ReliefGrid::evaluate(relief, bbox, n);
    Ok(contours(&g, relief, level))
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Edge {
    H(usize, usize),
    V(usize, usize),
}

pub(crate) fn contours(g: &ReliefGrid, relief: &Relief, level: f64) -> Vec<Vec<C>> {
    let (nx, ny) = (g.nx(), g.ny());
    let above = |ix: usize, iy: usize| g.at(ix, iy) >= level;
    let cross = |e: Edge| -> Option<C> {
        let ((ax, ay), (bx, by)) = match e {
            Edge::H(i, j) => ((i, j), (i + 1, j)),
            Edge::V(i, j) => ((i, j), (i, j + 1)),
        };
        if above(ax, ay) == above(bx, by) {
            return None;
        }
        let (va, vb) = (g.at(ax, ay), g.at(bx, by));
        let s = (level - va) / (vb - va);
        let (pa, pb) = (g.point(ax, ay), g.point(bx, by));
        Some(pa + (pb - pa) * s)
    };
    let mut segs: Vec<(Edge, Edge)> = Vec::new();
    for iy in 0..ny - 1 {
        for ix in 0..nx - 1 {
            let corners = [
                g.point(ix, iy),
                g.point(ix + 1, iy),
                g.point(ix + 1, iy + 1),
                g.point(ix, iy + 1),
            ];
            let cut = corners.iter().any(|&p| relief.on_cut(p) || relief.is_branch_point(p))
                || (0..4).any(|k| relief.segment_blocked(corners[k], corners[(k + 1) % 4]));
            if cut {
                continue;
            }
            let e = [Edge::H(ix, iy), Edge::V(ix + 1, iy), Edge::H(ix, iy + 1), Edge::V(ix, iy)];
            let hit: Vec<Edge> = e.iter().copied().filter(|&x| cross(x).is_some()).collect();
            match hit.len() {
                2 => segs.push((hit[0], hit[1])),
                4 => {
                    let centre = 0.25
                        * (g.at(ix, iy) + g.at(ix + 1, iy) + g.at(ix + 1, iy + 1) + g.at(ix, iy + 1));
                    if (centre >= level) == above(ix, iy) {
                        segs.push((e[0], e[1]));
                        segs.push((e[2], e[3]));
                    } else {
                        segs.push((e[0], e[3]));
                        segs.push((e[1], e[2]));
                    }
                }
                _ => {}
            }
        }
    }
    // chain segments through shared edges
    let mut by_edge: HashMap<Edge, Vec<usize>> = HashMap::new();
    for (k, &(a, b)) in segs.iter().enumerate() {
        by_edge.entry(a).or_default().push(k);
        by_edge.entry(b).or_default().push(k);
    }
    let mut used = vec![false; segs.len()];
    let mut out = Vec::new();
    let mut order: Vec<usize> = (0..segs.len()).collect();
    // start from open ends first so open curves come out whole
    order.sort_by_key(|&k| {
        let (a, b) = segs[k];
        let open = by_edge[&a].len() == 1 || by_edge[&b].len() == 1;
        !open
    });
    for start in order {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (a, b) = segs[start];
        let (first, mut cur) = if by_edge[&b].len() == 1 { (b, a) } else { (a, b) };
        let mut chain = vec![first, cur];
        loop {
            let next = by_edge[&cur].iter().copied().find(|&k| !used[k]);
            let Some(k) = next else { break };
            used[k] = true;
            let (p, q) = segs[k];
            cur = if p == cur { q } else { p };
            chain.push(cur);
        }
        out.push(chain.into_iter().filter_map(cross).collect());
    }
    out
}

/// Reachable nodes of a grid under strict descent.
#[derive(Debug, Clone)]
pub struct DomainMask {
    pub bbox: BBox,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub reachable: Vec<bool>,
    pub relief: Option<Relief>,
    /// Set when the mask is a single-sheet approximation of a domain that
    /// extends onto a second sheet of the square root.
    pub single_sheet_caveat: bool,
}

impl DomainMask {
    pub fn nx(&self) -> usize {
        self.xs.len()
    }

    pub fn ny(&self) -> usize {
        self.ys.len()
    }

    pub fn get(&self, ix: usize, iy: usize) -> bool {
        self.reachable[iy * self.nx() + ix]
    }

    pub fn count(&self) -> usize {
        self.reachable.iter().filter(|&&r| r).count()
    }

    pub fn point(&self, ix: usize, iy: usize) -> C {
        C::new(self.xs[ix], self.ys[iy])
    }

    /// Reachability of the node nearest to `t`.
    pub fn at_point(&self, t: C) -> bool {
        let near = |v: &[f64], x: f64| {
            (0..v.len())
                .min_by(|&a, &b| (v[a] - x).abs().total_cmp(&(v[b] - x).abs()))
                .unwrap()
        };
        self.get(near(&self.xs, t.re), near(&self.ys, t.im))
    }

    pub fn intersect(&self, other: &DomainMask) -> DomainMask {
        DomainMask {
            bbox: self.bbox,
            xs: self.xs.clone(),
            ys: self.ys.clone(),
            reachable: self
                .reachable
                .iter()
                .zip(&other.reachable)
                .map(|(a, b)| *a && *b)
                .collect(),
            relief: None,
            single_sheet_caveat: self.single_sheet_caveat || other.single_sheet_caveat,
        }
    }

    /// Maximal runs of reachable nodes on the row `y = 0`, as `[first, last]` abscissae.
    pub fn real_axis_runs(&self) -> Vec<(f64, f64)> {
        let Some(iy) = self.ys.iter().position(|&y| y == 0.0) else {
            return Vec::new();
        };
        let mut runs = Vec::new();
        let mut start: Option<usize> = None;
        for ix in 0..self.nx() {
            match (self.get(ix, iy), start) {
                (true, None) => start = Some(ix),
                (false, Some(s)) => {
                    runs.push((self.xs[s], self.xs[ix - 1]));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            runs.push((self.xs[s], self.xs[self.nx() - 1]));
        }
        runs
    }
}

/// Breadth-first search from the node nearest `seed` along 8-neighbour edges
/// on which the relief drops by more than `tol`; edges crossing the cut are closed.
pub fn descend_from(grid: &ReliefGrid, relief: &Relief, seed: C, tol: f64) -> DomainMask {
    let (nx, ny) = (grid.nx(), grid.ny());
    let mut reach = vec![false; nx * ny];
    let (sx, sy) = grid.nearest(seed);
    reach[sy * nx + sx] = true;
    let mut queue = VecDeque::from([(sx, sy)]);
    while let Some((ix, iy)) = queue.pop_front() {
        let here = grid.point(ix, iy);
        let r0 = grid.at(ix, iy);
        for dy in -1i64..=1 {
            for dx in -1i64..=1 {
                if dx == 0 && dy == 0 {
                    continue;
                }
                let (jx, jy) = (ix as i64 + dx, iy as i64 + dy);
                if jx < 0 || jy < 0 || jx >= nx as i64 || jy >= ny as i64 {
                    continue;
                }
                let (jx, jy) = (jx as usize, jy as usize);
                if reach[jy * nx + jx] || grid.at(jx, jy) >= r0 - tol {
                    continue;
                }
                let there = grid.point(jx, jy);
                if relief.on_cut(there)
                    || relief.is_branch_point(there)
                    || relief.segment_blocked(here, there)
                {
                    continue;
                }
                reach[jy * nx + jx] = true;
                queue.push_back((jx, jy));
            }
        }
    }
    DomainMask {
        bbox: grid.bbox,
        xs: grid.xs.clone(),
        ys: grid.ys.clone(),
        reachable: reach,
        relief: Some(*relief),
        single_sheet_caveat: false,
    }
}

/// Per-relief masks and their intersection.
#[derive(Debug, Clone)]
pub struct Reachability {
    pub first: DomainMask,
    pub second: DomainMask,
    pub both: DomainMask,
}

/// Descending domains from `seed` for a pair of reliefs on an `n x n` grid,
/// with strict-descent margin `1e-9 * (relief range over the box)`.
pub fn descending_reachability(
    seed: C,
    reliefs: [Relief; 2],
    bbox: BBox,
    n: usize,
) -> Result<Reachability> {
    descending_reachability_with(seed, reliefs, bbox, n, Strategy::default())
}

pub fn descending_reachability_with(
    seed: C,
    reliefs: [Relief; 2],
    bbox: BBox,
    n: usize,
    strategy: Strategy,
) -> Result<Reachability> {
    if !bbox.contains(seed) {
        return invalid(format!("seed {seed} outside the bounding box"));
    }
    if n < 3 {
        return invalid("grid needs at least 3 nodes per axis");
    }
    let masks: Vec<DomainMask> = reliefs
        .iter()
        .map(|r| {
            let g = ReliefGrid::evaluate_with(r, bbox, n, strategy);
            let tol = 1e-9 * g.range();
            let mut m = descend_from(&g, r, seed, tol);
            m.single_sheet_caveat = matches!(r, Relief::Normal { .. });
            m
        })
        .collect();
    let both = masks[0].intersect(&masks[1]);
    let mut it = masks.into_iter();
    Ok(Reachability {
        first: it.next().unwrap(),
        second: it.next().unwrap(),
        both,
    })
}

/// Relief drop from `b + i beta` to `b` along the vertical segment:
/// `-beta^2/2 + (sqrt 2 / 3) beta^{3/2}`, independent of `b`.
pub fn vertical_drop(beta: f64) -> f64 {
    -0.5 * beta * beta + (2f64.sqrt() / 3.0) * beta.powf(1.5)
}

/// Path `-T -> end + i beta -> end` for the lower distinguished trajectory,
/// `T = end + pad`. The first leg is checked to descend `R_lambda`.
pub fn descending_path_to(end: f64, b: f64, beta: f64, pad: f64) -> Result<ComplexPath> {
    if !(beta > 0.0 && beta < 8.0 / 9.0) {
        return invalid(format!("beta must lie in (0, 8/9), got {beta}"));
    }
    if !(pad > 0.0) {
        return invalid("pad must be positive");
    }
    let t_far = -(end.abs() + pad);
    let corner = C::new(end, beta);
    let path = ComplexPath::new(vec![C::new(t_far, 0.0), corner, C::new(end, 0.0)])?;
    let relief = Relief::lambda(b);
    let head = path.without_last_segment()?;
    let g = ReliefGrid::evaluate(&relief, BBox::new(t_far, end.max(b) + 0.5, -0.5, beta + 0.5)?, 33);
    let d = is_descending(&head, &relief, 1e-9 * g.range())?;
    if let Some(at) = d.first_violation {
        return Err(Error::PathBlocked {
            at,
            level: relief.value(at),
        });
    }
    Ok(path)
}

/// The integration path `-T -> b + i beta -> b` with `T = b + pad`.
pub fn xm_path(b: f64, beta: f64, pad: f64) -> Result<ComplexPath> {
    if !(beta > 0.0 && beta < 8.0 / 9.0) {
        return invalid(format!("beta must lie in (0, 8/9), got {beta}"));
    }
    descending_path_to(b, b, beta, pad)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn hopf_segment_descends() {
        let p = ComplexPath::new(vec![c(-2.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let d = is_descending(&p, &Relief::Hopf { which: Which::Lambda }, 1e-12).unwrap();
        assert!(d.descending);
    }

    #[test]
    fn level_path_fails() {
        // R_lambda Hopf = (x^2 - (y-1)^2)/2 is constant on y = 1 + x
        let p = ComplexPath::new(vec![c(0.2, 1.2), c(0.6, 1.6)]).unwrap();
        let d = is_descending(&p, &Relief::Hopf { which: Which::Lambda }, 0.0).unwrap();
        assert!(!d.descending);
    }

    #[test]
    fn xm_path_shape() {
        let p = xm_path(0.3, 0.5, 1.2).unwrap();
        assert_eq!(p.nodes().len(), 3);
        let r = Relief::lambda(0.3);
        assert!(is_descending(&p.without_last_segment().unwrap(), &r, 1e-12).unwrap().descending);
        let whole = is_descending(&p, &r, 0.0).unwrap();
        assert!(!whole.descending);
        assert!(matches!(xm_path(0.3, 0.95, 1.0), Err(Error::InvalidParameter(_))));
        let conj = p.without_last_segment().unwrap().conj();
        assert!(is_descending(&conj, &Relief::mu(0.3), 1e-12).unwrap().descending);
    }

    #[test]
    fn vertical_drop_peaks_at_half() {
        let best = vertical_drop(0.5);
        assert!((best - 1.0 / 24.0).abs() < 1e-15);
        for beta in [0.3, 0.45, 0.55, 0.8] {
            assert!(vertical_drop(beta) < best);
        }
        let r = Relief::lambda(0.3);
        let d = r.value(c(0.3, 0.5)) - r.value(c(0.3, 0.0));
        assert!((d - best).abs() < 1e-14);
    }

    #[test]
    fn hopf_level_through_origin() {
        let bb = BBox::new(-1.0, 1.0, -1.0, 1.0).unwrap();
        let curves = level_curves(&Relief::Hopf { which: Which::Lambda }, -0.5, bb, 41).unwrap();
        let d = curves
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(f64::INFINITY, f64::min);
        assert!(d < 0.05);
    }
}
