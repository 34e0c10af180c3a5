//! Multiply warped products `(a,b) x K₁ x … x K_m` with metric `−dt² + Σ fᵢ(t) hᵢ`,
//! where the factors are finite metric graphs.
//!
//! Chronology is reachability by discrete good paths: between time slices `T_k < T_l`
//! a jump moving graph distance `dᵢ` in factor `i` is timelike when
//! `Σ (dᵢ / Bᵢ(k,l))² < 1`, with `Bᵢ(k,l) = ∫_{T_k}^{T_l} fᵢ^{−1/2}` the largest
//! distance a path with Lipschitz budget one can cover in that factor. Paths chain
//! jumps, so budgets can be spent unevenly over time.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use super::expr::WarpExpr;
use crate::chron::Chronology;
use crate::error::{Error, Result};
use crate::ip::{bs_chron, ChainSpec, IpHandle};
use crate::point::{Point, SampleWindow, WindowBounds};

const EPS: f64 = 1e-9;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphSpec {
    Cycle { n: usize, edge: f64 },
    Segment { n: usize, edge: f64 },
    Explicit { vertices: usize, edges: Vec<(usize, usize, f64)> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FactorSpec {
    pub graph: GraphSpec,
    /// Warping function in the expression grammar of [`WarpExpr`].
    pub warp: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WarpSpec {
    pub interval: (f64, f64),
    /// First time slice; defaults to `a + dt`.
    #[serde(default)]
    pub t0: Option<f64>,
    pub dt: f64,
    /// Number of geometric slices between the last uniform slice and `b`.
    #[serde(default = "default_refine")]
    pub refine: usize,
    #[serde(default)]
    pub factors: Vec<FactorSpec>,
}

fn default_refine() -> usize {
    8
}

impl WarpSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn single(interval: (f64, f64), dt: f64, graph: GraphSpec, warp: &str) -> Self {
        WarpSpec { interval, t0: None, dt, refine: default_refine(), factors: vec![FactorSpec { graph, warp: warp.into() }] }
    }
}

#[derive(Clone, Debug)]
struct Factor {
    n: usize,
    dist: Vec<f64>,
    expr: WarpExpr,
}

impl Factor {
    fn d(&self, u: usize, v: usize) -> f64 {
        self.dist[u * self.n + v]
    }
}

fn graph_distances(g: &GraphSpec) -> Result<(usize, Vec<f64>)> {
    let (n, edges): (usize, Vec<(usize, usize, f64)>) = match g {
        GraphSpec::Cycle { n, edge } => (*n, (0..*n).map(|i| (i, (i + 1) % n, *edge)).collect()),
        GraphSpec::Segment { n, edge } => (*n, (0..n.saturating_sub(1)).map(|i| (i, i + 1, *edge)).collect()),
        GraphSpec::Explicit { vertices, edges } => (*vertices, edges.clone()),
    };
    if n == 0 {
        return Err(Error::Precondition("factor graph has no vertices".into()));
    }
    let mut d = vec![f64::INFINITY; n * n];
    for i in 0..n {
        d[i * n + i] = 0.0;
    }
    for &(i, j, w) in &edges {
        if i >= n || j >= n || !(w > 0.0) {
            return Err(Error::Precondition(format!("bad edge ({i},{j},{w})")));
        }
        d[i * n + j] = d[i * n + j].min(w);
        d[j * n + i] = d[j * n + i].min(w);
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[i * n + k];
            if dik.is_infinite() {
                continue;
            }
            for j in 0..n {
                let c = dik + d[k * n + j];
                if c < d[i * n + j] {
                    d[i * n + j] = c;
                }
            }
        }
    }
    Ok((n, d))
}

pub struct WarpSpace {
    pub spec: WarpSpec,
    pub b: f64,
    pub times: Vec<f64>,
    /// Index of the last uniform slice.
    pub last_uniform: usize,
    factors: Vec<Factor>,
    cum: Vec<Vec<f64>>,
    cache: Mutex<HashMap<(usize, usize, bool), Arc<Vec<u32>>>>,
}

impl std::fmt::Debug for WarpSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WarpSpace").field("spec", &self.spec).field("slices", &self.times.len()).finish()
    }
}

impl WarpSpace {
    pub fn new(spec: WarpSpec) -> Result<Self> {
        let (a, b) = spec.interval;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::Precondition(format!("interval ({a},{b}) must be finite and nonempty")));
        }
        if !(spec.dt > 0.0) {
            return Err(Error::Precondition("dt must be positive".into()));
        }
        if spec.factors.len() > 2 {
            return Err(Error::Unsupported("at most two warped factors".into()));
        }
        let t0 = spec.t0.unwrap_or(a + spec.dt);
        if !(t0 > a && t0 < b) {
            return Err(Error::Precondition(format!("t0 = {t0} outside ({a},{b})")));
        }
        let mut times = vec![t0];
        while times.last().unwrap() + 2.0 * spec.dt <= b + 1e-12 {
            times.push(t0 + times.len() as f64 * spec.dt);
        }
        let last_uniform = times.len() - 1;
        let gap = b - times[last_uniform];
        for j in 1..=spec.refine {
            times.push(b - gap * 0.5f64.powi(j as i32));
        }
        let mut factors = Vec::new();
        for (i, f) in spec.factors.iter().enumerate() {
            let (n, dist) = graph_distances(&f.graph)?;
            let expr = WarpExpr::parse(&f.warp)?;
            if let Some(t) = times.iter().find(|&&t| !(expr.eval(b, t) > 0.0)) {
                return Err(Error::Precondition(format!("warping function of factor {i} not positive at t = {t}")));
            }
            factors.push(Factor { n, dist, expr });
        }
        let cum = factors
            .iter()
            .map(|f| {
                let mut c = vec![0.0; times.len()];
                for k in 1..times.len() {
                    c[k] = c[k - 1] + f.expr.inv_sqrt_integral(b, times[k - 1], times[k]);
                }
                c
            })
            .collect();
        Ok(WarpSpace { spec, b, times, last_uniform, factors, cum, cache: Mutex::new(HashMap::new()) })
    }

    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    pub fn states(&self) -> usize {
        self.factors.iter().map(|f| f.n).product()
    }

    fn split(&self, s: usize) -> [usize; 2] {
        match self.factors.len() {
            0 => [0, 0],
            1 => [s, 0],
            _ => [s % self.factors[0].n, s / self.factors[0].n],
        }
    }

    pub fn state_point(&self, k: usize, s: usize) -> Point {
        let v = self.split(s);
        Point::new3(self.times[k], v[0] as f64, v[1] as f64)
    }

    /// Slice index of a lattice time.
    pub fn slice_of(&self, t: f64) -> Option<usize> {
        let tol = 1e-9 * (1.0 + t.abs());
        self.times.iter().position(|&s| (s - t).abs() <= tol)
    }

    fn state_of(&self, p: &Point) -> Option<usize> {
        let coords = [p.x, p.y];
        let mut s = 0;
        let mut stride = 1;
        for (i, f) in self.factors.iter().enumerate() {
            let c = coords[i];
            if c < 0.0 || c.fract() != 0.0 || c as usize >= f.n {
                return None;
            }
            s += c as usize * stride;
            stride *= f.n;
        }
        for &c in &coords[self.factors.len()..] {
            if c != 0.0 {
                return None;
            }
        }
        Some(s)
    }

    /// Validates a lattice point, naming the failure.
    pub fn locate(&self, p: &Point) -> Result<(usize, usize)> {
        let k = self
            .slice_of(p.t)
            .ok_or_else(|| Error::Stepping(format!("time {} is not on the slice lattice (dt = {})", p.t, self.spec.dt)))?;
        let s = self.state_of(p).ok_or_else(|| Error::Domain(*p, "warped".into()))?;
        Ok((k, s))
    }

    /// Per-factor budget between two times (`s` may be `b`).
    fn budget(&self, i: usize, k: usize, l: Option<usize>) -> f64 {
        match l {
            Some(l) => self.cum[i][l] - self.cum[i][k],
            None => self.factors[i].expr.inv_sqrt_integral(self.b, self.times[k], self.b),
        }
    }

    fn jump_ok(&self, k: usize, u: usize, l: Option<usize>, v: usize, strict: bool) -> bool {
        let (su, sv) = (self.split(u), self.split(v));
        let mut r = 0.0;
        for (i, f) in self.factors.iter().enumerate() {
            let d = f.d(su[i], sv[i]);
            if d == 0.0 {
                continue;
            }
            let bud = self.budget(i, k, l);
            if !(bud > 0.0) || d.is_infinite() {
                return false;
            }
            r += (d / bud).powi(2);
        }
        if strict {
            r < 1.0 - EPS
        } else {
            r <= 1.0 + EPS
        }
    }

    /// Earliest slice at which each state is reachable from `(k, u)`.
    /// Arriving earlier never hurts since budgets grow with the interval.
    fn earliest(&self, k: usize, u: usize, strict: bool) -> Arc<Vec<u32>> {
        if let Some(e) = self.cache.lock().unwrap().get(&(k, u, strict)) {
            return e.clone();
        }
        let n = self.states();
        let mut e = vec![u32::MAX; n];
        e[u] = k as u32;
        let mut active = vec![u];
        for l in k + 1..self.times.len() {
            let fresh: Vec<usize> = (0..n)
                .filter(|&v| e[v] == u32::MAX)
                .filter(|&v| active.iter().any(|&w| self.jump_ok(e[w] as usize, w, Some(l), v, strict)))
                .collect();
            for v in fresh {
                e[v] = l as u32;
                active.push(v);
            }
        }
        let e = Arc::new(e);
        self.cache.lock().unwrap().insert((k, u, strict), e.clone());
        e
    }

    pub fn try_chron(&self, p: &Point, q: &Point) -> Result<bool> {
        let (k, u) = self.locate(p)?;
        let (l, v) = self.locate(q)?;
        Ok(l > k && self.earliest(k, u, true)[v] as usize <= l)
    }

    /// Chart relation of `(t,u)` to the boundary point `(b, v)`.
    pub fn chart_chron_to_boundary(&self, p: &Point, v: usize) -> Result<bool> {
        let (k, u) = self.locate(p)?;
        let e = self.earliest(k, u, true);
        Ok((0..self.states()).any(|w| e[w] != u32::MAX && self.jump_ok(e[w] as usize, w, None, v, true)))
    }

    /// Largest graph distance reachable from `(k, u)` by slice `l` in factor 0.
    pub fn reach_radius(&self, k: usize, u: usize, l: usize) -> f64 {
        let e = self.earliest(k, u, true);
        (0..self.states())
            .filter(|&v| (e[v] as usize) <= l)
            .map(|v| self.factors[0].d(self.split(u)[0], self.split(v)[0]))
            .fold(0.0, f64::max)
    }

    /// `∫_{t0}^{b} fᵢ^{−1/2}` per factor.
    pub fn star_integrals(&self) -> Vec<f64> {
        self.factors.iter().map(|f| f.expr.inv_sqrt_integral(self.b, self.times[0], self.b)).collect()
    }

    pub fn lattice_window(&self) -> SampleWindow {
        let mut pts = Vec::new();
        for k in 0..self.times.len() {
            for s in 0..self.states() {
                pts.push(self.state_point(k, s));
            }
        }
        SampleWindow::from_points(pts)
    }
}

impl Chronology for WarpSpace {
    fn name(&self) -> String {
        "warped".into()
    }

    fn dim(&self) -> usize {
        1 + self.factors.len()
    }

    fn admissible(&self, p: &Point) -> bool {
        self.locate(p).is_ok()
    }

    fn chron(&self, p: &Point, q: &Point) -> bool {
        self.try_chron(p, q).unwrap_or(false)
    }

    fn dist(&self, p: &Point, q: &Point) -> f64 {
        let (a, b) = (self.state_of(p), self.state_of(q));
        let mut s = (q.t - p.t).powi(2);
        if let (Some(a), Some(b)) = (a, b) {
            let (sa, sb) = (self.split(a), self.split(b));
            for (i, f) in self.factors.iter().enumerate() {
                s += f.d(sa[i], sb[i]).powi(2);
            }
        }
        s.sqrt()
    }

    fn sample(&self, _h: f64, bounds: &WindowBounds) -> SampleWindow {
        let mut w = self.lattice_window();
        w.points.retain(|p| p.t >= bounds.lo[0] - 1e-12 && p.t <= bounds.hi[0] + 1e-12);
        w
    }

    fn causal(&self, p: &Point, q: &Point) -> Option<bool> {
        let (k, u) = self.locate(p).ok()?;
        let (l, v) = self.locate(q).ok()?;
        Some((k, u) == (l, v) || (l > k && self.earliest(k, u, false)[v] as usize <= l))
    }

    fn alpha(&self, p: &Point, q: &Point) -> Option<bool> {
        self.causal(p, q)
    }
}

/// A future boundary point of a warped completion.
#[derive(Clone, Debug, Serialize)]
pub struct WarpBoundaryPoint {
    pub label: String,
    /// Limit of the chain's projection to K.
    pub state: Vec<usize>,
    /// Extrapolated endpoint time.
    pub t_limit: f64,
    pub endpoint_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WarpCompletion {
    pub star_integrals: Vec<f64>,
    pub chart_size: usize,
    pub boundary: Vec<WarpBoundaryPoint>,
    /// Every chart point `{b} x K` is the limit of some boundary chain.
    pub chart_covered: bool,
    pub max_endpoint_error: f64,
    pub family: Vec<String>,
    pub bs_pairs: usize,
    pub bs_agree: usize,
    pub mismatches: Vec<(String, String)>,
}

impl WarpCompletion {
    pub fn passes(&self, h: f64) -> bool {
        self.chart_covered && self.max_endpoint_error <= 2.0 * h && self.bs_agree == self.bs_pairs
    }
}

impl WarpSpace {
    fn chain_handle(&self, label: String, pts: Vec<Point>) -> IpHandle {
        IpHandle::tip(label, ChainSpec::Explicit { points: pts })
    }

    /// Chain entering `target` from a neighbouring state, moving one edge per
    /// slice while the budget allows, then waiting.
    fn moving_chain(&self, target: usize) -> Vec<Point> {
        let n = self.states();
        let start = if self.factors.is_empty() { 0 } else { (target + 1) % n };
        let mut cur = start;
        let mut pts = vec![self.state_point(0, cur)];
        for l in 1..self.times.len() {
            if cur != target && self.jump_ok(l - 1, cur, Some(l), target, true) {
                cur = target;
            }
            pts.push(self.state_point(l, cur));
        }
        pts
    }

    fn classify(&self, label: String, pts: &[Point]) -> Result<WarpBoundaryPoint> {
        for (i, w) in pts.windows(2).enumerate() {
            if !self.chron(&w[0], &w[1]) {
                return Err(Error::Certificate(i, i + 1));
            }
        }
        let m = pts.len();
        let (t1, t2, t3) = (pts[m - 3].t, pts[m - 2].t, pts[m - 1].t);
        let (d1, d2) = (t2 - t1, t3 - t2);
        let t_limit = if (d1 - d2).abs() > 1e-15 { t3 + d2 * d2 / (d1 - d2) } else { t3 };
        let last = pts[m - 1];
        let s = self.state_of(&last).unwrap();
        Ok(WarpBoundaryPoint {
            label,
            state: self.split(s)[..self.factors.len()].to_vec(),
            t_limit,
            endpoint_error: (t_limit - self.b).abs(),
        })
    }

    /// Boundary chart `{b} x K` and its agreement with the computed completion.
    pub fn completion(&self) -> Result<WarpCompletion> {
        let star = self.star_integrals();
        for (i, f) in self.factors.iter().enumerate() {
            if !f.expr.star_holds() || !star[i].is_finite() {
                return Err(Error::Divergent {
                    factor: i,
                    reason: format!("∫ f^(-1/2) diverges at b = {} for f = {}", self.b, f.expr.source),
                });
            }
        }
        let n = self.states();
        let mut boundary = Vec::new();
        let mut hit = vec![false; n];
        for s in 0..n {
            let constant: Vec<Point> = (self.last_uniform..self.times.len()).map(|k| self.state_point(k, s)).collect();
            for (label, pts) in [(format!("const-{s}"), constant), (format!("moving-{s}"), self.moving_chain(s))] {
                let bp = self.classify(label, &pts)?;
                let state = self.state_of(pts.last().unwrap()).unwrap();
                hit[state] = true;
                boundary.push(bp);
            }
        }
        let max_err = boundary.iter().map(|b| b.endpoint_error).fold(0.0, f64::max);

        // family: five PIPs spread over K and time, five boundary TIPs
        let window = self.lattice_window();
        let depth = self.times.len();
        let mut family: Vec<(IpHandle, Option<usize>)> = Vec::new();
        let pip_slices = [0, self.last_uniform / 4, self.last_uniform / 2, 3 * self.last_uniform / 4, self.last_uniform];
        for (j, &k) in pip_slices.iter().enumerate() {
            let s = (j * n / 5 + j) % n;
            family.push((IpHandle::pip(format!("pip-{j}"), self.state_point(k, s)), None));
        }
        for j in 0..5 {
            let s = (j * n / 5 + n / 10) % n;
            let pts: Vec<Point> = (self.last_uniform..self.times.len()).map(|k| self.state_point(k, s)).collect();
            family.push((self.chain_handle(format!("tip-{j}"), pts), Some(s)));
        }
        let mut agree = 0;
        let mut pairs = 0;
        let mut mismatches = Vec::new();
        for (a, ba) in &family {
            for (b, bb) in &family {
                let computed = bs_chron(self, a, b, &window, depth)?.related;
                let chart = match (a.point(), ba, bb) {
                    (_, Some(_), _) => false,
                    (Some(p), None, None) => self.chron(&p, &b.point().unwrap()),
                    (Some(p), None, Some(v)) => self.chart_chron_to_boundary(&p, *v)?,
                    _ => unreachable!(),
                };
                pairs += 1;
                if computed == chart {
                    agree += 1;
                } else {
                    mismatches.push((a.label.clone(), b.label.clone()));
                }
            }
        }
        Ok(WarpCompletion {
            star_integrals: star,
            chart_size: n,
            boundary,
            chart_covered: hit.iter().all(|&x| x),
            max_endpoint_error: max_err,
            family: family.iter().map(|(h, _)| h.label.clone()).collect(),
            bs_pairs: pairs,
            bs_agree: agree,
            mismatches,
        })
    }
}
