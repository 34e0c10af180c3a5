//! Metrics on subsets of a finite cloud (d_H, d₁, δ_μ), inner/outer
//! convergence probes, and Busemann functions on planar Riemannian grids.

use rayon::prelude::*;
use serde::Serialize;

use crate::chron::Chronology;
use crate::error::{Error, Result};
use crate::gallery::fmm::FmmGrid;
use crate::gallery::grapefruit;
use crate::ip::{member, IpHandle};
use crate::point::{Point, PointSet, SampleWindow};

/// A finite metric sample with base point and optional weights.
#[derive(Clone, Debug)]
pub struct MetricCloud {
    pub points: Vec<Point>,
    pub periods: [Option<f64>; 3],
    pub base: Point,
    pub weights: Option<Vec<f64>>,
}

impl MetricCloud {
    pub fn new(points: Vec<Point>, base: Point) -> Self {
        MetricCloud { points, periods: [None; 3], base, weights: None }
    }

    /// Planar Euclidean grid `[lo, hi]²` at pitch `h`.
    pub fn euclidean_grid(lo: f64, hi: f64, h: f64, base: Point) -> Self {
        let n = ((hi - lo) / h).round() as usize;
        let mut pts = Vec::with_capacity((n + 1) * (n + 1));
        for i in 0..=n {
            for j in 0..=n {
                pts.push(Point::new(lo + i as f64 * h, lo + j as f64 * h));
            }
        }
        Self::new(pts, base)
    }

    /// The window's points with its periods.
    pub fn from_window(window: &SampleWindow, base: Point) -> Self {
        MetricCloud { points: window.points.clone(), periods: window.periods, base, weights: None }
    }

    /// Uniform weights summing to one.
    pub fn with_uniform_weights(mut self) -> Self {
        let w = 1.0 / self.points.len().max(1) as f64;
        self.weights = Some(vec![w; self.points.len()]);
        self
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.points.len() || weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::Precondition("weights must be positive, one per point".into()));
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dist(&self, p: &Point, q: &Point) -> f64 {
        let mut s = 0.0;
        for a in 0..3 {
            let mut d = (p.coord(a) - q.coord(a)).abs();
            if let Some(per) = self.periods[a] {
                d = d.rem_euclid(per);
                d = d.min(per - d);
            }
            s += d * d;
        }
        s.sqrt()
    }

    /// `d(p, A)` for every cloud point; infinite when `A` is empty.
    pub fn dist_field(&self, a: &PointSet) -> Vec<f64> {
        let members: Vec<usize> = a.ones().collect();
        self.points
            .par_iter()
            .enumerate()
            .map(|(i, p)| {
                if a.contains(i) {
                    0.0
                } else {
                    members.iter().map(|&j| self.dist(p, &self.points[j])).fold(f64::INFINITY, f64::min)
                }
            })
            .collect()
    }
}

/// Two-sided Hausdorff distance; `∞` iff exactly one set is empty.
pub fn hausdorff(a: &PointSet, b: &PointSet, cloud: &MetricCloud) -> f64 {
    match (a.is_clear(), b.is_clear()) {
        (true, true) => return 0.0,
        (true, false) | (false, true) => return f64::INFINITY,
        _ => {}
    }
    let fa = cloud.dist_field(a);
    let fb = cloud.dist_field(b);
    let one = |s: &PointSet, f: &[f64]| s.ones().map(|i| f[i]).fold(0.0, f64::max);
    one(a, &fb).max(one(b, &fa))
}

/// `sup_x |d(x,A) − d(x,B)|·e^{−d(x₀,x)}` over the cloud.
pub fn d1(a: &PointSet, b: &PointSet, cloud: &MetricCloud) -> Result<f64> {
    if a.is_clear() || b.is_clear() {
        return Err(Error::Domain(cloud.base, "d1 is defined on nonempty closed sets".into()));
    }
    Ok(d1_fields(&cloud.dist_field(a), &cloud.dist_field(b), cloud))
}

/// `d₁` from precomputed distance fields.
pub fn d1_fields(fa: &[f64], fb: &[f64], cloud: &MetricCloud) -> f64 {
    cloud
        .points
        .par_iter()
        .enumerate()
        .map(|(i, p)| (fa[i] - fb[i]).abs() * (-cloud.dist(&cloud.base, p)).exp())
        .reduce(|| 0.0, f64::max)
}

/// `μ(A Δ B)`.
pub fn delta_mu(a: &PointSet, b: &PointSet, cloud: &MetricCloud) -> Result<f64> {
    let w = cloud.weights.as_ref().ok_or_else(|| Error::Precondition("delta_mu needs weights on the cloud".into()))?;
    let mut d = a.clone();
    d.symmetric_difference_with(b);
    Ok(d.ones().map(|i| w[i]).sum())
}

/// Membership oracle of a sequence of open sets, for inner/outer probes.
pub trait MemberFamily: Sync {
    fn contains(&self, n: usize, p: &Point) -> bool;

    /// Whether the closed ball `B̄(c, r)` lies inside `a(n)`, when decidable exactly.
    fn contains_ball(&self, _n: usize, _c: &Point, _r: f64) -> Option<bool> {
        None
    }
}

/// A sequence of indecomposable pasts of an oracle.
pub struct HandleMembers<'a> {
    pub oracle: &'a dyn Chronology,
    pub eval: &'a (dyn Fn(usize) -> IpHandle + Sync),
    pub depth: usize,
}

impl MemberFamily for HandleMembers<'_> {
    fn contains(&self, n: usize, p: &Point) -> bool {
        member(self.oracle, &(self.eval)(n), p, self.depth)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IoWitness {
    pub side: String,
    pub probe: Point,
    pub index: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct IoVerdict {
    /// `None` when a probe fails only in the earlier tail.
    pub inner: Option<bool>,
    pub outer: Option<bool>,
    pub witness: Option<IoWitness>,
    pub inner_probes: usize,
    pub outer_probes: usize,
    pub horizon: usize,
}

impl IoVerdict {
    pub fn converges(&self) -> Option<bool> {
        match (self.inner, self.outer) {
            (Some(true), Some(true)) => Some(true),
            (Some(false), _) | (_, Some(false)) => Some(false),
            _ => None,
        }
    }
}

/// Inner/outer convergence against finite probe sets. A compact test set is a
/// closed ball of radius `radius` around each probe where the family decides
/// balls exactly, else the probe point itself. A probe failing in both tails
/// `[H/2, H]` and `[H, 2H]` is a witness; failing nowhere in the last tail is
/// convergence.
pub fn io_converges(fam: &dyn MemberFamily, inner: &[Point], outer: &[Point], radius: f64, horizon: usize) -> IoVerdict {
    let h = horizon.max(2);
    let early: Vec<usize> = (h / 2..h).collect();
    let late: Vec<usize> = (h..=2 * h).collect();
    let inside = |n: usize, c: &Point, ball: bool| {
        if ball {
            fam.contains_ball(n, c, radius).unwrap_or_else(|| fam.contains(n, c))
        } else {
            fam.contains(n, c)
        }
    };
    let fails_in = |c: &Point, idx: &[usize], want_in: bool| idx.iter().copied().find(|&n| inside(n, c, want_in) != want_in);
    let side = |probes: &[Point], want_in: bool| -> (Option<bool>, Option<(Point, usize)>) {
        let results: Vec<(Option<usize>, Option<usize>)> =
            probes.par_iter().map(|c| (fails_in(c, &late, want_in), fails_in(c, &early, want_in))).collect();
        let mut undecided = false;
        for (c, (l, e)) in probes.iter().zip(&results) {
            match (l, e) {
                (Some(n), Some(_)) => return (Some(false), Some((*c, *n))),
                (Some(_), None) => undecided = true,
                _ => {}
            }
        }
        (if undecided { None } else { Some(true) }, None)
    };
    // outer probes are decided through point membership
    let (vi, wi) = side(inner, true);
    let (vo, wo) = side(outer, false);
    let witness = wi
        .map(|(p, n)| IoWitness { side: "inner".into(), probe: p, index: n })
        .or(wo.map(|(p, n)| IoWitness { side: "outer".into(), probe: p, index: n }));
    IoVerdict { inner: vi, outer: vo, witness, inner_probes: inner.len(), outer_probes: outer.len(), horizon: h }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// The first `count` points of ℚ² ∩ B(0,1), listed once each by increasing
/// least common denominator.
pub fn rational_ball(count: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(count);
    let mut q = 1i64;
    while out.len() < count {
        for a in -q..=q {
            for b in -q..=q {
                if a * a + b * b < q * q && gcd(gcd(a, b), q) == 1 {
                    out.push((a as f64 / q as f64, b as f64 / q as f64));
                }
            }
        }
        q += 1;
    }
    out.truncate(count);
    out
}

/// `a(n) = B(0,1) ∖ B̄(x(n), 1/n)` for a rational enumeration `x`, in the plane
/// with coordinates `(t, x)` read as `(x, y)`.
pub struct PunchedBall {
    pub centers: Vec<(f64, f64)>,
}

impl PunchedBall {
    pub fn new(max_index: usize) -> Self {
        PunchedBall { centers: rational_ball(max_index + 1) }
    }

    pub fn center(&self, n: usize) -> (f64, f64) {
        self.centers[n]
    }

    pub fn radius(n: usize) -> f64 {
        1.0 / n.max(1) as f64
    }

    /// Cloud points of `a(n)`.
    pub fn on_cloud(&self, n: usize, cloud: &MetricCloud) -> PointSet {
        let mut s = PointSet::with_capacity(cloud.len());
        for (i, p) in cloud.points.iter().enumerate() {
            if self.contains(n, p) {
                s.insert(i);
            }
        }
        s
    }
}

impl MemberFamily for PunchedBall {
    fn contains(&self, n: usize, p: &Point) -> bool {
        let (cx, cy) = self.center(n);
        p.t.hypot(p.x) < 1.0 && (p.t - cx).hypot(p.x - cy) > Self::radius(n)
    }

    fn contains_ball(&self, n: usize, c: &Point, r: f64) -> Option<bool> {
        let (cx, cy) = self.center(n);
        Some(c.t.hypot(c.x) + r < 1.0 && (c.t - cx).hypot(c.x - cy) > r + Self::radius(n))
    }
}

/// A unit-speed ray `origin + s·(cos θ, sin θ)` in the plane.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Ray {
    pub origin: (f64, f64),
    pub angle: f64,
}

impl Ray {
    pub fn at(&self, s: f64) -> (f64, f64) {
        (self.origin.0 + s * self.angle.cos(), self.origin.1 + s * self.angle.sin())
    }
}

#[derive(Clone, Debug)]
pub struct BusemannResult {
    /// Extrapolated `b(x)` per grid node; `+∞` everywhere when divergent.
    pub values: Vec<f64>,
    /// `b_T` at `T_max`.
    pub raw: Vec<f64>,
    pub stable: bool,
    /// Largest increments `b_{T/2} − b_{T/4}` and `b_T − b_{T/2}`.
    pub increments: (f64, f64),
}

/// `b(x) = lim (T − d(c(T), x))` on the grid. Distances from `c(T)` come from
/// fast marching seeded with exact Euclidean distances on the nodes of `flat`,
/// a convex region of unit index containing the ray. The values at `T_max/4`,
/// `T_max/2` and `T_max` must increase with shrinking increments; the limit is
/// the Richardson extrapolant `2b_T − b_{T/2}`.
pub fn busemann(grid: &FmmGrid, ray: &Ray, t_max: f64, flat: &(dyn Fn(f64, f64) -> bool + Sync)) -> BusemannResult {
    let at = |t: f64| -> Vec<f64> {
        let c = ray.at(t);
        let sources: Vec<(usize, f64)> = (0..grid.len())
            .filter_map(|k| {
                let (x, y) = grid.node(k);
                flat(x, y).then(|| (k, (x - c.0).hypot(y - c.1)))
            })
            .collect();
        grid.solve(&sources).into_iter().map(|d| t - d).collect()
    };
    let (b1, b2, b3) = (at(t_max / 4.0), at(t_max / 2.0), at(t_max));
    fn inc(u: &[f64], v: &[f64]) -> Vec<f64> {
        u.iter().zip(v).filter(|(a, b)| a.is_finite() && b.is_finite()).map(|(a, b)| b - a).collect()
    }
    let (i1, i2) = (inc(&b1, &b2), inc(&b2, &b3));
    let d1 = i1.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let d2 = i2.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let monotone = i1.iter().chain(&i2).all(|&d| d >= -1e-9);
    let stable = monotone && d2 <= 0.75 * d1 + 1e-9;
    let values = if stable {
        b2.iter().zip(&b3).map(|(u, v)| 2.0 * v - u).collect()
    } else {
        vec![f64::INFINITY; grid.len()]
    };
    BusemannResult { values, raw: b3, stable, increments: (d1, d2) }
}

/// Distance between Busemann functions modulo additive constants over the nodes
/// in `keep`: half the oscillation of their difference.
pub fn busemann_distance(a: &[f64], b: &[f64], keep: &[usize]) -> f64 {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &k in keep {
        let d = a[k] - b[k];
        if !d.is_finite() {
            return f64::INFINITY;
        }
        lo = lo.min(d);
        hi = hi.max(d);
    }
    if keep.is_empty() {
        0.0
    } else {
        (hi - lo) / 2.0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryRay {
    pub side: String,
    pub ray: Ray,
    pub stable: bool,
}

/// Busemann parametrisation of the grapefruit boundary.
#[derive(Clone, Debug, Serialize)]
pub struct GrapefruitBoundary {
    pub h: f64,
    pub t_max: f64,
    pub rays: Vec<BoundaryRay>,
    /// Pairwise distances modulo constants on the sup-window `[−2,2]²`.
    pub distances: Vec<Vec<f64>>,
    /// Single-linkage component of each ray.
    pub components: Vec<usize>,
    pub component_count: usize,
    pub min_cross: f64,
    pub max_adjacent: f64,
    /// Distances from each ray grow with angular separation up to four steps.
    pub monotone: bool,
    pub monotone_witnesses: Vec<(usize, usize)>,
}

/// Rays above the stick start at `(0, 2.5)` with angles in `[0, π]`, rays
/// below at `(0, −2.5)` with angles in `[π, 2π]`; each side gets `per_side`
/// rays. Components are single-linkage clusters at threshold `link`.
pub fn grapefruit_boundary(h: f64, t_max: f64, per_side: usize, link: f64) -> GrapefruitBoundary {
    let grid = FmmGrid::new(h, (-5.0, 5.0), (-3.0, 3.0), |_, y| grapefruit::index(y));
    let keep: Vec<usize> = (0..grid.len())
        .filter(|&k| {
            let (x, y) = grid.node(k);
            x.abs() <= 2.0 + 1e-9 && y.abs() <= 2.0 + 1e-9
        })
        .collect();
    let step = std::f64::consts::PI / (per_side - 1) as f64;
    let mut specs = Vec::new();
    for k in 0..per_side {
        specs.push(("upper", Ray { origin: (0.0, 2.5), angle: k as f64 * step }));
    }
    for k in 0..per_side {
        specs.push(("lower", Ray { origin: (0.0, -2.5), angle: std::f64::consts::PI + k as f64 * step }));
    }
    let fields: Vec<BusemannResult> = specs
        .par_iter()
        .map(|(side, ray)| {
            let upper = *side == "upper";
            let flat = move |_: f64, y: f64| if upper { y >= 2.0 - 1e-12 } else { y <= -2.0 + 1e-12 };
            busemann(&grid, ray, t_max, &flat)
        })
        .collect();
    let m = specs.len();
    let distances: Vec<Vec<f64>> =
        (0..m).into_par_iter().map(|i| (0..m).map(|j| busemann_distance(&fields[i].values, &fields[j].values, &keep)).collect()).collect();
    // single linkage by union–find
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut Vec<usize>, i: usize) -> usize {
        if p[i] != i {
            let r = find(p, p[i]);
            p[i] = r;
        }
        p[i]
    }
    for i in 0..m {
        for j in i + 1..m {
            if distances[i][j] < link {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut labels = Vec::new();
    let components: Vec<usize> = (0..m)
        .map(|i| {
            let r = find(&mut parent, i);
            match labels.iter().position(|&x| x == r) {
                Some(p) => p,
                None => {
                    labels.push(r);
                    labels.len() - 1
                }
            }
        })
        .collect();
    let mut min_cross = f64::INFINITY;
    let mut max_adjacent: f64 = 0.0;
    for i in 0..m {
        for j in 0..m {
            if components[i] != components[j] {
                min_cross = min_cross.min(distances[i][j]);
            }
        }
        if i + 1 < m && i + 1 != per_side {
            max_adjacent = max_adjacent.max(distances[i][i + 1]);
        }
    }
    let mut monotone_witnesses = Vec::new();
    for side in 0..2 {
        for j in 0..per_side {
            let base = side * per_side + j;
            for dir in [-1i64, 1] {
                let mut prev = 0.0;
                for s in 1..=4i64 {
                    let k = j as i64 + dir * s;
                    if k < 0 || k >= per_side as i64 {
                        break;
                    }
                    let d = distances[base][side * per_side + k as usize];
                    if d + 1e-9 < prev {
                        monotone_witnesses.push((base, side * per_side + k as usize));
                    }
                    prev = d;
                }
            }
        }
    }
    GrapefruitBoundary {
        h,
        t_max,
        rays: specs.iter().zip(&fields).map(|((s, r), f)| BoundaryRay { side: s.to_string(), ray: *r, stable: f.stable }).collect(),
        distances,
        component_count: labels.len(),
        components,
        min_cross,
        max_adjacent,
        monotone: monotone_witnesses.is_empty(),
        monotone_witnesses,
    }
}
