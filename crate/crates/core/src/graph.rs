//! Graph functions of past sets in static products `(floor, ceil) x S` with a
//! one-dimensional spatial factor (a line or a circle), and exact set metrics
//! between the corresponding subgraphs.
//!
//! The past of a point `g` has graph `x ↦ g.t − d_S(g.x, x)`; the past of a
//! chain is the upper envelope of such cones. Envelopes are piecewise linear
//! with slopes ±1, so the subgraph `{lo ≤ t ≤ min(f(x), hi)}` of a band is a
//! finite union of trapezoids with vertical sides, and point-to-set distances
//! are exact. Distance to a subgraph grows with `t` above it, so Hausdorff
//! suprema are attained on top curves.

use rayon::prelude::*;
use serde::Serialize;

use crate::chron::Chronology;
use crate::error::{Error, Result};
use crate::ip::{check_certificate, Generator, IpHandle};
use crate::point::Point;

/// Upper envelope of cones `x ↦ g.t − d(g.x, x)`, apexes as `(t, x)`.
#[derive(Clone, Debug, Serialize)]
pub struct Cones {
    pub apexes: Vec<(f64, f64)>,
    pub period: Option<f64>,
}

impl Cones {
    pub fn new(apexes: Vec<(f64, f64)>, period: Option<f64>) -> Self {
        Cones { apexes, period }
    }

    /// Cones of a handle's generator points on a product space.
    pub fn of_handle(oracle: &dyn Chronology, handle: &IpHandle, depth: usize) -> Result<Self> {
        let info = oracle
            .product()
            .filter(|p| p.spatial_dims == 1)
            .ok_or_else(|| Error::Unsupported(format!("{} has no product structure with one spatial factor", oracle.name())))?;
        let gens: Vec<Point> = match &handle.generator {
            Generator::Point(p) => vec![*p],
            Generator::Chain(c) => {
                if check_certificate(oracle, handle, depth)? {
                    vec![handle.top(depth).unwrap()]
                } else {
                    (0..depth).map_while(|n| c.at(n)).collect()
                }
            }
        };
        Ok(Cones { apexes: gens.iter().map(|g| (g.t, g.x)).collect(), period: info.period })
    }

    pub fn dx(&self, a: f64, b: f64) -> f64 {
        let d = (a - b).abs();
        match self.period {
            Some(p) => {
                let d = d.rem_euclid(p);
                d.min(p - d)
            }
            None => d,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.apexes.iter().map(|&(t, gx)| t - self.dx(gx, x)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Every kink of the envelope inside `[a, b]`, plus the ends.
    pub fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        let lifts: Vec<f64> = match self.period {
            Some(p) => {
                let k = ((b - a) / p).ceil() as i64 + 1;
                (-k..=k).map(|i| i as f64 * p).collect()
            }
            None => vec![0.0],
        };
        let half = self.period.map(|p| p / 2.0);
        let mut xs = vec![a, b];
        for &(_, x1) in &self.apexes {
            for &s1 in &lifts {
                xs.push(x1 + s1);
                if let Some(h) = half {
                    xs.push(x1 + s1 + h);
                }
            }
        }
        if self.apexes.len() > 1 {
            for &(t1, x1) in &self.apexes {
                for &(t2, x2) in &self.apexes {
                    // t1 − (x − c1) = t2 + (x − c2) over all lifts
                    for &s1 in &lifts {
                        for &s2 in &lifts {
                            let (c1, c2) = (x1 + s1, x2 + s2);
                            xs.push((t1 - t2 + c1 + c2) / 2.0);
                        }
                    }
                }
            }
        }
        xs.retain(|x| *x >= a && *x <= b);
        xs.sort_by(f64::total_cmp);
        xs.dedup_by(|u, v| (*u - *v).abs() < 1e-13);
        xs
    }
}

/// `{(t, x) | x ∈ [a, b], lo ≤ t ≤ linear interpolation of (ta, tb)}`.
#[derive(Clone, Copy, Debug, Serialize)]
struct Piece {
    a: f64,
    b: f64,
    ta: f64,
    tb: f64,
}

fn seg_dist(px: f64, pt: f64, ax: f64, at: f64, bx: f64, bt: f64) -> f64 {
    let (dx, dt) = (bx - ax, bt - at);
    let l2 = dx * dx + dt * dt;
    let s = if l2 == 0.0 { 0.0 } else { (((px - ax) * dx + (pt - at) * dt) / l2).clamp(0.0, 1.0) };
    (px - ax - s * dx).hypot(pt - at - s * dt)
}

impl Piece {
    fn top(&self, x: f64) -> f64 {
        if self.b == self.a {
            self.ta.max(self.tb)
        } else {
            self.ta + (self.tb - self.ta) * (x - self.a) / (self.b - self.a)
        }
    }

    fn dist(&self, lo: f64, t: f64, x: f64) -> f64 {
        if x >= self.a && x <= self.b && t >= lo && t <= self.top(x) {
            return 0.0;
        }
        [
            seg_dist(x, t, self.a, lo, self.b, lo),
            seg_dist(x, t, self.b, lo, self.b, self.tb),
            seg_dist(x, t, self.a, self.ta, self.b, self.tb),
            seg_dist(x, t, self.a, lo, self.a, self.ta),
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min)
    }
}

/// Closure of the subgraph of a cone envelope inside the box `[lo, hi] x [xa, xb]`.
#[derive(Clone, Debug, Serialize)]
pub struct Subgraph {
    pub lo: f64,
    pub hi: f64,
    pub xa: f64,
    pub xb: f64,
    /// Set when the box spans a full period, so distances wrap.
    pub period: Option<f64>,
    pieces: Vec<Piece>,
}

impl Subgraph {
    /// For a circle, `[xa, xb]` must span at most one period.
    pub fn new(cones: &Cones, lo: f64, hi: f64, xa: f64, xb: f64) -> Self {
        let mut pieces = Vec::new();
        let bp = cones.breakpoints(xa, xb);
        for w in bp.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (fa, fb) = (cones.eval(a), cones.eval(b));
            let lin = |x: f64| fa + (fb - fa) * (x - a) / (b - a);
            let mut cuts = vec![a, b];
            for level in [lo, hi] {
                if (fa - level) * (fb - level) < 0.0 {
                    cuts.push(a + (level - fa) * (b - a) / (fb - fa));
                }
            }
            cuts.sort_by(f64::total_cmp);
            for c in cuts.windows(2) {
                let (u, v) = (c[0], c[1]);
                let (tu, tv) = (lin(u), lin(v));
                if tu.max(tv) <= lo || (tu + tv) / 2.0 <= lo {
                    continue;
                }
                pieces.push(Piece { a: u, b: v, ta: tu.min(hi), tb: tv.min(hi) });
            }
        }
        let full = cones.period.is_some_and(|p| (xb - xa - p).abs() < 1e-9);
        Subgraph { lo, hi, xa, xb, period: if full { cones.period } else { None }, pieces }
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Distance from `(t, x)`; infinite for the empty set.
    pub fn dist(&self, t: f64, x: f64) -> f64 {
        let shifts: &[f64] = match self.period {
            Some(p) => &[-p, 0.0, p],
            None => &[0.0],
        };
        let mut best = f64::INFINITY;
        for pc in &self.pieces {
            for s in shifts {
                best = best.min(pc.dist(self.lo, t, x + s));
            }
        }
        best
    }

    /// Points of the top curve at spacing at most `step`, including all
    /// vertices and the feet of vertical sides.
    pub fn top_curve(&self, step: f64) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for pc in &self.pieces {
            let n = ((pc.b - pc.a) / step).ceil().max(1.0) as usize;
            for k in 0..=n {
                let x = pc.a + (pc.b - pc.a) * k as f64 / n as f64;
                out.push((pc.top(x), x));
            }
            out.push((self.lo, pc.a));
            out.push((self.lo, pc.b));
        }
        out
    }
}

/// Hausdorff distance between subgraphs; the far points lie on top curves.
pub fn subgraph_hausdorff(a: &Subgraph, b: &Subgraph, step: f64) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return 0.0,
        (true, false) | (false, true) => return f64::INFINITY,
        _ => {}
    }
    let one = |p: &Subgraph, q: &Subgraph| p.top_curve(step).par_iter().map(|&(t, x)| q.dist(t, x)).reduce(|| 0.0, f64::max);
    one(a, b).max(one(b, a))
}

/// A cloud over a band, sorted by distance from the base point, for `d₁`.
#[derive(Clone, Debug)]
pub struct BandCloud {
    pub base: (f64, f64),
    /// `(r, t, x)` by increasing `r`.
    pts: Vec<(f64, f64, f64)>,
}

impl BandCloud {
    /// Grid of pitch `h` over `[lo, hi] x [xa, xb]`.
    pub fn new(lo: f64, hi: f64, xa: f64, xb: f64, h: f64, base: (f64, f64), period: Option<f64>) -> Self {
        let nt = ((hi - lo) / h).round() as usize;
        let nx = ((xb - xa) / h).round() as usize;
        let cones = Cones::new(Vec::new(), period);
        let mut pts = Vec::with_capacity((nt + 1) * (nx + 1));
        for i in 0..=nt {
            let t = lo + i as f64 * h;
            for j in 0..=nx {
                let x = xa + j as f64 * h;
                pts.push(((t - base.0).hypot(cones.dx(x, base.1)), t, x));
            }
        }
        pts.sort_by(|p, q| p.0.total_cmp(&q.0));
        BandCloud { base, pts }
    }

    pub fn len(&self) -> usize {
        self.pts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pts.is_empty()
    }

    /// Busemann's `d₁` over the cloud. Visits points by increasing distance
    /// from the base and stops once `e^{−r}·bound` cannot beat the running
    /// supremum, where `bound ≥ |d(x,A) − d(x,B)|` (for instance `d_H(A,B)`).
    pub fn d1(&self, a: &Subgraph, b: &Subgraph, bound: f64) -> Result<f64> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::Precondition("d1 is defined on nonempty sets".into()));
        }
        let mut sup: f64 = 0.0;
        for chunk in self.pts.chunks(4096) {
            if (-chunk[0].0).exp() * bound <= sup {
                break;
            }
            let m = chunk.par_iter().map(|&(r, t, x)| (a.dist(t, x) - b.dist(t, x)).abs() * (-r).exp()).reduce(|| 0.0, f64::max);
            sup = sup.max(m);
        }
        Ok(sup)
    }
}

/// Largest gap `|clip f_a − clip f_b|` over `[xa, xb]`, exact at the kinks.
pub fn graph_gap(a: &Cones, b: &Cones, lo: f64, hi: f64, xa: f64, xb: f64) -> f64 {
    let mut xs = a.breakpoints(xa, xb);
    xs.extend(b.breakpoints(xa, xb));
    xs.iter().map(|&x| (a.eval(x).clamp(lo, hi) - b.eval(x).clamp(lo, hi)).abs()).fold(0.0, f64::max)
}

/// Sampled graph function, for plots and Lipschitz checks.
#[derive(Clone, Debug, Serialize)]
pub struct GraphFunction {
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
}

/// `f(t, A)` at the given spatial samples; `−∞` where the column is empty.
pub fn graph_fn(oracle: &dyn Chronology, handle: &IpHandle, xs: &[f64], depth: usize) -> Result<GraphFunction> {
    let cones = Cones::of_handle(oracle, handle, depth)?;
    let info = oracle.product().unwrap();
    let values = xs
        .iter()
        .map(|&x| {
            let v = cones.eval(x).min(info.ceil);
            if v <= info.floor {
                f64::NEG_INFINITY
            } else {
                v
            }
        })
        .collect();
    Ok(GraphFunction { xs: xs.to_vec(), values })
}

/// Finite positive weights on a compact box.
#[derive(Clone, Debug, Serialize)]
pub enum Weighting {
    Uniform,
    /// `e^{−|p − base|}`, base as `(t, x)`.
    Radial { base: (f64, f64) },
    /// Piecewise constant on an `8 x 8` cell grid, values in `[0.5, 1.5]`.
    Random { seed: u64 },
}

impl Weighting {
    pub fn name(&self) -> String {
        match self {
            Weighting::Uniform => "uniform".into(),
            Weighting::Radial { .. } => "radial".into(),
            Weighting::Random { seed } => format!("random-{seed}"),
        }
    }
}

/// A compact box `[t0, t1] x [x0, x1]` in product coordinates.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Compact {
    pub t: (f64, f64),
    pub x: (f64, f64),
}

struct WeightField<'a> {
    kind: &'a Weighting,
    cells: Vec<f64>,
    k: Compact,
    cones: Cones,
}

impl<'a> WeightField<'a> {
    fn new(kind: &'a Weighting, k: Compact, period: Option<f64>) -> Self {
        use rand::{Rng, SeedableRng};
        let cells = match kind {
            Weighting::Random { seed } => {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(*seed);
                (0..64).map(|_| rng.gen_range(0.5..1.5)).collect()
            }
            _ => Vec::new(),
        };
        WeightField { kind, cells, k, cones: Cones::new(Vec::new(), period) }
    }

    /// `∫_a^b w(t, x) dt` for `a ≤ b`.
    fn integrate(&self, x: f64, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        match self.kind {
            Weighting::Uniform => b - a,
            Weighting::Radial { base } => {
                let dx = self.cones.dx(x, base.1);
                let pieces = ((b - a) * 32.0).ceil().max(1.0) as usize;
                let len = (b - a) / pieces as f64;
                const NODES: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
                const WTS: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];
                (0..pieces)
                    .map(|k| {
                        let m = a + (k as f64 + 0.5) * len;
                        NODES.iter().zip(WTS).map(|(z, w)| w * (-(m + z * len / 2.0 - base.0).hypot(dx)).exp()).sum::<f64>() * len / 2.0
                    })
                    .sum()
            }
            Weighting::Random { .. } => {
                let cx = (((x - self.k.x.0) / (self.k.x.1 - self.k.x.0) * 8.0).floor().clamp(0.0, 7.0)) as usize;
                let dt = (self.k.t.1 - self.k.t.0) / 8.0;
                (0..8)
                    .map(|ct| {
                        let (c0, c1) = (self.k.t.0 + ct as f64 * dt, self.k.t.0 + (ct + 1) as f64 * dt);
                        let (u, v) = (a.max(c0), b.min(c1));
                        if v > u {
                            (v - u) * self.cells[ct * 8 + cx]
                        } else {
                            0.0
                        }
                    })
                    .sum()
            }
        }
    }
}

/// `μ(Δ(A ∩ K, B ∩ K)) / μ(K)` by midpoint quadrature over `columns` spatial
/// cells and exact or Gauss integration in time.
pub fn delta_mu(a: &Cones, b: &Cones, k: Compact, weighting: &Weighting, columns: usize) -> f64 {
    let field = WeightField::new(weighting, k, a.period);
    let w = (k.x.1 - k.x.0) / columns as f64;
    let cells: Vec<(f64, f64)> = (0..columns)
        .into_par_iter()
        .map(|j| {
            let x = k.x.0 + (j as f64 + 0.5) * w;
            let (u, v) = (a.eval(x).clamp(k.t.0, k.t.1), b.eval(x).clamp(k.t.0, k.t.1));
            (field.integrate(x, u.min(v), u.max(v)), field.integrate(x, k.t.0, k.t.1))
        })
        .collect();
    // summed in order so the result does not depend on the worker count
    let (num, den) = cells.iter().fold((0.0, 0.0), |p, q| (p.0 + q.0, p.1 + q.1));
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{Flat, FlatKind};
    use std::f64::consts::PI;

    #[test]
    fn pip_graph_is_a_cone() {
        let s = Flat::new(FlatKind::Strip);
        let xs: Vec<f64> = (0..=64).map(|k| k as f64 / 64.0).collect();
        let g = graph_fn(&s, &IpHandle::pip("p", Point::new(1.0, 0.5)), &xs, 1).unwrap();
        for (x, v) in g.xs.iter().zip(&g.values) {
            assert!((v - (1.0 - (x - 0.5).abs())).abs() < 1e-12);
        }
        let low = graph_fn(&s, &IpHandle::pip("p", Point::new(0.25, 0.5)), &xs, 1).unwrap();
        assert_eq!(low.values[0], f64::NEG_INFINITY);
    }

    #[test]
    fn subgraph_distances_match_geometry() {
        let c = Cones::new(vec![(0.0, 0.0)], None);
        let a = Subgraph::new(&c, -1.0, 1.0, -2.0, 2.0);
        assert!((a.dist(1.0, 0.0) - 1.0).abs() < 1e-12);
        assert!((a.dist(0.0, 0.5) - 0.5 / 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(a.dist(-0.5, 0.2), 0.0);
        assert!((a.dist(-1.5, 0.0) - 0.5).abs() < 1e-12);
        // beyond the foot of the cone at (−1, ±1)
        assert!((a.dist(-1.0, 1.5) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn hausdorff_of_shifted_cones() {
        let a = Subgraph::new(&Cones::new(vec![(0.0, 0.0)], None), -1.0, 1.0, -3.0, 3.0);
        let b = Subgraph::new(&Cones::new(vec![(0.25, 0.0)], None), -1.0, 1.0, -3.0, 3.0);
        // inside the band the clipped feet of the cones are 0.25 apart
        assert!((subgraph_hausdorff(&a, &b, 1e-3) - 0.25).abs() < 1e-12);
        let cloud = BandCloud::new(-1.0, 1.0, -3.0, 3.0, 1.0 / 64.0, (0.0, 0.0), None);
        let d1 = cloud.d1(&a, &b, 0.25).unwrap();
        assert!(d1 > 0.0 && d1 <= 0.25 + 1e-12);
        assert_eq!(cloud.d1(&a, &a, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn delta_mu_of_cones_matches_area() {
        let a = Cones::new(vec![(0.5, 0.5)], None);
        let b = Cones::new(vec![(0.6, 0.5)], None);
        let k = Compact { t: (0.0, 1.0), x: (0.0, 1.0) };
        // areas 0.25 and 0.35 once the wider cone is clipped to the square
        assert!((delta_mu(&a, &b, k, &Weighting::Uniform, 4096) - 0.10).abs() < 1e-6);
        for w in [Weighting::Radial { base: (0.5, 0.5) }, Weighting::Random { seed: 7 }] {
            let m = delta_mu(&a, &b, k, &w, 1024);
            assert!(m > 0.03 && m < 0.3, "{} {m}", w.name());
            assert_eq!(delta_mu(&a, &a, k, &w, 64), 0.0);
        }
    }

    #[test]
    fn circle_subgraph_wraps() {
        let c = Cones::new(vec![(0.0, 3.0)], Some(2.0 * PI));
        let a = Subgraph::new(&c, -1.0, 1.0, -PI, PI);
        // (0, −3) sits 2π − 6 across the seam from the apex column
        let d = a.dist(0.0, -3.0);
        let expect = (2.0 * PI - 6.0) / 2f64.sqrt();
        assert!((d - expect).abs() < 1e-12, "{d} {expect}");
        assert_eq!(a.dist(-0.5, -3.0), 0.0);
    }

    #[test]
    fn envelope_of_two_cones() {
        let c = Cones::new(vec![(0.0, -1.0), (0.0, 1.0)], None);
        let a = Subgraph::new(&c, -3.0, 3.0, -4.0, 4.0);
        // the notch between the apexes bottoms out at (−1, 0)
        assert!((a.dist(0.0, 0.0) - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        assert!((graph_gap(&c, &Cones::new(vec![(0.0, 0.0)], None), -3.0, 3.0, -4.0, 4.0) - 1.0).abs() < 1e-12);
    }
}
