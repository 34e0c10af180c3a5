//! The convergence battery: the equivalent characterisations of IP convergence
//! evaluated side by side on one family and candidate limit.
//!
//! Metric items (d₁, δ_μ, d_H, graph functions) are computed exactly on the
//! continuum subgraphs of [`crate::graph`] and judged by the decay of the tail
//! supremum over three horizons. Set-theoretic items (liminf/limsup forms,
//! L₊) are judged on a sample window.

use serde::Serialize;

use crate::chron::{chron_past, Chronology};
use crate::error::{Error, Result};
use crate::graph::{delta_mu, graph_gap, subgraph_hausdorff, BandCloud, Compact, Cones, Subgraph, Weighting};
use crate::ip::{realize, ChainSpec, IpHandle};
use crate::limits::{l_plus, set_limits, tail_indices, HandleFamily, LimitConfig};
use crate::point::{Point, PointSet, SampleWindow, WindowBounds};

#[derive(Clone, Debug, Serialize)]
pub struct TfaeConfig {
    pub h: f64,
    pub horizon: usize,
    /// Indices sampled per tail `[H'/2, H']`.
    pub samples: usize,
    pub tol: f64,
    pub depth: usize,
    pub margin: f64,
    pub cloud_h: f64,
    /// Half-width of the band for `d₁` where the space is unbounded.
    pub band_radius: f64,
    pub columns_per_unit: usize,
    pub seed: u64,
}

impl Default for TfaeConfig {
    fn default() -> Self {
        TfaeConfig {
            h: 1.0 / 64.0,
            horizon: 256,
            samples: 8,
            tol: 1e-3,
            depth: 64,
            margin: 2.0,
            cloud_h: 1.0 / 64.0,
            band_radius: 12.0,
            columns_per_unit: 2048,
            seed: 7,
        }
    }
}

/// Geometry shared by every family on one space.
pub struct TfaeSetup {
    pub window: SampleWindow,
    /// Base point `(t, x)` of `d₁` and of the radial weight.
    pub base: (f64, f64),
    pub band_t: (f64, f64),
    pub band_x: (f64, f64),
    pub compacts: Vec<Compact>,
    /// Spatial window for the graph gap.
    pub gap_x: (f64, f64),
    pub period: Option<f64>,
    pub cloud: BandCloud,
}

impl TfaeSetup {
    /// `bounds` is a `(t, x)` rectangle inside the space.
    pub fn new(oracle: &dyn Chronology, bounds: &WindowBounds, cfg: &TfaeConfig) -> Result<Self> {
        let info = oracle
            .product()
            .filter(|p| p.spatial_dims == 1)
            .ok_or_else(|| Error::Unsupported(format!("{} has no product structure with one spatial factor", oracle.name())))?;
        let (t0, t1) = (bounds.lo[0], bounds.hi[0]);
        let (x0, x1) = (bounds.lo[1], bounds.hi[1]);
        let base = ((t0 + t1) / 2.0, (x0 + x1) / 2.0);
        let band_t = (
            if info.floor.is_finite() { info.floor } else { base.0 - cfg.band_radius },
            if info.ceil.is_finite() { info.ceil } else { base.0 + cfg.band_radius },
        );
        let full = |a: f64, b: f64| info.period.is_some_and(|p| (b - a - p).abs() < 1e-9);
        let band_x = match info.period {
            Some(p) => (base.1 - p / 2.0, base.1 + p / 2.0),
            None => (base.1 - cfg.band_radius, base.1 + cfg.band_radius),
        };
        let (ht, hx) = ((t1 - t0) / 4.0, (x1 - x0) / 4.0);
        let compacts = vec![
            Compact { t: (t0.max(info.floor + cfg.h), t1.min(info.ceil - cfg.h)), x: (x0, x1) },
            Compact { t: (base.0 - ht, base.0 + ht), x: (base.1 - hx, base.1 + hx) },
        ];
        let gap_x = if full(x0, x1) { (x0, x1) } else { (x0 + 2.0 * cfg.h, x1 - 2.0 * cfg.h) };
        let cloud = BandCloud::new(band_t.0, band_t.1, band_x.0, band_x.1, cfg.cloud_h, base, info.period);
        Ok(TfaeSetup { window: oracle.sample(cfg.h, bounds), base, band_t, band_x, compacts, gap_x, period: info.period, cloud })
    }

    fn compact_subgraph(&self, c: &Cones, k: &Compact) -> Subgraph {
        Subgraph::new(c, k.t.0, k.t.1, k.x.0, k.x.1)
    }
}

/// Distances of one family member from the candidate.
#[derive(Clone, Debug, Serialize)]
pub struct TraceRow {
    pub n: usize,
    pub d1: f64,
    /// Maximum over compacts and weightings.
    pub delta_mu: f64,
    /// Maximum over compacts.
    pub d_h: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Condition {
    pub item: String,
    /// `None` when indeterminate; never coerced.
    pub verdict: Option<bool>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TfaeReport {
    pub family: String,
    pub candidate: String,
    pub conditions: Vec<Condition>,
    pub trace: Vec<TraceRow>,
}

impl TfaeReport {
    pub fn vector(&self) -> Vec<Option<bool>> {
        self.conditions.iter().map(|c| c.verdict).collect()
    }

    /// All items decided and equal.
    pub fn agrees(&self) -> Option<bool> {
        let v = self.vector();
        let first = v.first().copied().flatten()?;
        v.iter().all(|x| *x == Some(first)).then_some(first)
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        for r in &self.trace {
            wr.serialize(r)?;
        }
        wr.flush()?;
        Ok(())
    }
}

/// Limit of a decreasing tail sequence `x₀, x₁, x₂` by Aitken's rule, or the
/// last value when the decay is not geometric.
pub fn extrapolate(x: [f64; 3]) -> f64 {
    let (d1, d2) = (x[1] - x[0], x[2] - x[1]);
    if d1 != 0.0 {
        let r = d2 / d1;
        if r > 0.0 && r < 1.0 && d2 < 0.0 {
            return (x[2] + d2 * r / (1.0 - r)).max(0.0);
        }
    }
    x[2]
}

/// Tail verdict from suprema at three horizons.
pub fn tail_converges(x: [f64; 3], tol: f64) -> (bool, f64) {
    if x[2] < tol {
        return (true, x[2]);
    }
    let l = extrapolate(x);
    (l < tol, l)
}

fn sample_indices(fam: &HandleFamily, horizon: usize, samples: usize) -> Vec<usize> {
    let (a, b) = (horizon / 2, horizon);
    let mut idx: Vec<usize> = (0..samples).map(|k| a + (b - a) * k / (samples - 1).max(1)).collect();
    if let Some(t) = &fam.tail {
        idx.extend(&t.recurring);
    }
    idx.sort_unstable();
    idx.dedup();
    idx
}

fn fmt3(x: [f64; 3], l: f64) -> String {
    format!("tail sups {:.3e} {:.3e} {:.3e}, limit {:.3e}", x[0], x[1], x[2], l)
}

/// Both `a` and `b` equal `target` up to `tol`, compared away from the
/// window edges where truncated erosion balls keep spurious boundary points.
fn eq_both(w: &SampleWindow, a: &PointSet, b: &PointSet, target: &PointSet, tol: f64) -> bool {
    let inner = w.interior(2.0 * tol);
    let cut = |s: &PointSet| {
        let mut s = s.clone();
        s.intersect_with(&inner);
        s
    };
    let t = cut(target);
    w.equal_up_to(&cut(a), &t, tol) && w.equal_up_to(&cut(b), &t, tol)
}

/// Evaluates every item for `fam` against its candidate.
pub fn tfae_battery(oracle: &dyn Chronology, fam: &HandleFamily, setup: &TfaeSetup, cfg: &TfaeConfig) -> Result<TfaeReport> {
    fam.check_tail()?;
    let cand = fam.candidate.clone().ok_or_else(|| Error::Precondition(format!("family `{}` has no candidate limit", fam.name)))?;
    let c_inf = Cones::of_handle(oracle, &cand, cfg.depth)?;
    let band_inf = Subgraph::new(&c_inf, setup.band_t.0, setup.band_t.1, setup.band_x.0, setup.band_x.1);
    let k_inf: Vec<Subgraph> = setup.compacts.iter().map(|k| setup.compact_subgraph(&c_inf, k)).collect();
    let weights = [Weighting::Uniform, Weighting::Radial { base: setup.base }, Weighting::Random { seed: cfg.seed }];
    let step = 1.0 / cfg.columns_per_unit as f64;

    let row = |n: usize| -> Result<TraceRow> {
        let c = Cones::of_handle(oracle, &fam.at(n), cfg.depth)?;
        let band = Subgraph::new(&c, setup.band_t.0, setup.band_t.1, setup.band_x.0, setup.band_x.1);
        let bound = subgraph_hausdorff(&band, &band_inf, step);
        let d1 = setup.cloud.d1(&band, &band_inf, bound)?;
        let mut d_h: f64 = 0.0;
        let mut dm: f64 = 0.0;
        for (k, ki) in setup.compacts.iter().zip(&k_inf) {
            d_h = d_h.max(subgraph_hausdorff(&setup.compact_subgraph(&c, k), ki, step));
            let cols = ((k.x.1 - k.x.0) * cfg.columns_per_unit as f64).ceil() as usize;
            for w in &weights {
                dm = dm.max(delta_mu(&c, &c_inf, *k, w, cols));
            }
        }
        let gap = graph_gap(&c, &c_inf, setup.band_t.0, setup.band_t.1, setup.gap_x.0, setup.gap_x.1);
        Ok(TraceRow { n, d1, delta_mu: dm, d_h, gap })
    };

    let horizons = [cfg.horizon / 4, cfg.horizon / 2, cfg.horizon];
    let mut trace: Vec<TraceRow> = Vec::new();
    let mut sups = [[0.0f64; 3]; 4];
    for (j, &hz) in horizons.iter().enumerate() {
        for n in sample_indices(fam, hz, cfg.samples) {
            let r = match trace.iter().find(|r| r.n == n) {
                Some(r) => r.clone(),
                None => {
                    let r = row(n)?;
                    trace.push(r.clone());
                    r
                }
            };
            for (i, v) in [r.d1, r.delta_mu, r.d_h, r.gap].into_iter().enumerate() {
                sups[i][j] = sups[i][j].max(v);
            }
        }
    }
    trace.sort_by_key(|r| r.n);
    let metric = |item: &str, i: usize| {
        let (v, l) = tail_converges(sups[i], cfg.tol);
        Condition { item: item.into(), verdict: Some(v), detail: fmt3(sups[i], l) }
    };

    let w = &setup.window;
    let tol = cfg.margin * w.h;
    let lcfg = LimitConfig { horizon: cfg.horizon, depth: cfg.depth, margin: cfg.margin };
    let r_inf = realize(oracle, &cand, w, cfg.depth)?;
    let cl_inf = w.dilate(&r_inf, w.h);
    let lim = match set_limits(oracle, fam, w, &lcfg) {
        Ok(l) => Some(l),
        Err(Error::Indeterminate(_)) => None,
        Err(e) => return Err(e),
    };
    let set_item = |item: &str, f: &dyn Fn(&PointSet, &PointSet) -> bool| match &lim {
        Some(l) => Condition { item: item.into(), verdict: Some(f(&l.liminf, &l.limsup)), detail: l.mode.clone() },
        None => Condition { item: item.into(), verdict: None, detail: "tail limits not stable".into() },
    };
    let c4 = set_item("4 I-(lim)", &|i, s| eq_both(w, &chron_past(oracle, i, w), &chron_past(oracle, s, w), &r_inf, tol));
    let c5 = set_item("5 interior", &|i, s| eq_both(w, &w.erode(i, w.h), &w.erode(s, w.h), &r_inf, tol));
    let c6 = set_item("6 closure", &|i, s| eq_both(w, &w.dilate(i, w.h), &w.dilate(s, w.h), &cl_inf, tol));

    // accumulation probes: p is a limit of points x(n) ∈ a(n) when it is
    // within 1.5h of every tail member, an accumulation point when within
    // 1.5h of members arbitrarily late
    let tail = tail_indices(fam, cfg.horizon);
    let late: Vec<usize> = match &fam.tail {
        Some(_) => tail.clone(),
        None => (3 * cfg.horizon / 4..=cfg.horizon).collect(),
    };
    let mut t_inf = w.full_set();
    let mut t_sup = w.empty_set();
    for &n in &tail {
        let near = w.dilate(&realize(oracle, &fam.at(n), w, cfg.depth)?, 1.5 * w.h);
        t_inf.intersect_with(&near);
        if late.contains(&n) {
            t_sup.union_with(&near);
        }
    }
    let c7 = Condition { item: "7 ~lim".into(), verdict: Some(eq_both(w, &t_inf, &t_sup, &cl_inf, tol)), detail: format!("{} tail sets", tail.len()) };

    let c8 = match l_plus(oracle, fam, std::slice::from_ref(&cand), w, &lcfg) {
        Ok(v) => Condition { item: "8 L+".into(), verdict: Some(v.converges_to(&cand)), detail: v.diagnostics.join("; ") },
        Err(e @ (Error::Indeterminate(_) | Error::Consistency(_))) => Condition { item: "8 L+".into(), verdict: None, detail: e.to_string() },
        Err(e) => return Err(e),
    };
    let c9 = Condition { item: "9 tau+".into(), verdict: c8.verdict, detail: "sequential convergence in tau+ is L+".into() };

    let conditions = vec![metric("1 d1", 0), metric("2 delta_mu", 1), metric("3 d_H", 2), c4, c5, c6, c7, c8, c9, metric("* graph", 3)];
    Ok(TfaeReport { family: fam.name.clone(), candidate: cand.label.clone(), conditions, trace })
}

/// A family with the verdict every item should reach.
pub struct CorpusEntry {
    pub space: &'static str,
    pub family: HandleFamily,
    pub converges: bool,
}

fn pip(label: &str, t: f64, x: f64) -> IpHandle {
    IpHandle::pip(label, Point::new(t, x))
}

fn strip_tip(label: &str, c: f64) -> IpHandle {
    IpHandle::tip(label, ChainSpec::Geometric { start: Point::new(0.5, c), target: Point::new(1.0, c), ratio: 0.5 })
}

fn alt(n: usize) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Convergent and non-convergent families on the strip and the cylinder.
pub fn corpus() -> Vec<CorpusEntry> {
    let e = |space, family, converges| CorpusEntry { space, family, converges };
    vec![
        e(
            "strip",
            HandleFamily::new("strip rising PIPs", |n| pip("a", 0.75 - 0.2 / (n + 1) as f64, 0.5)).with_candidate(pip("lim", 0.75, 0.5)),
            true,
        ),
        e(
            "strip",
            HandleFamily::new("strip swaying PIPs", |n| pip("a", 0.6, 0.5 + alt(n) * 0.2 / (n + 1) as f64)).with_candidate(pip("lim", 0.6, 0.5)),
            true,
        ),
        e(
            "strip",
            HandleFamily::new("strip TIPs", |n| strip_tip("a", 0.5 + 0.25 / (n + 1) as f64)).with_candidate(strip_tip("lim", 0.5)),
            true,
        ),
        e(
            "strip",
            HandleFamily::new("strip constant", |_| pip("a", 0.5, 0.5)).with_tail(0, vec![0]).with_candidate(pip("lim", 0.5, 0.5)),
            true,
        ),
        e(
            "cylinder",
            HandleFamily::new("cylinder rising PIPs", |n| pip("a", 1.0 / (n + 1) as f64, 0.0)).with_candidate(pip("lim", 0.0, 0.0)),
            true,
        ),
        e(
            "cylinder",
            HandleFamily::new("cylinder swaying PIPs", |n| pip("a", 0.0, alt(n) / (n + 1) as f64)).with_candidate(pip("lim", 0.0, 0.0)),
            true,
        ),
        e(
            "cylinder",
            HandleFamily::new("cylinder alternating", |n| pip("a", 0.0, alt(n))).with_tail(0, vec![0, 1]).with_candidate(pip("lim", 0.0, 1.0)),
            false,
        ),
        e(
            "strip",
            HandleFamily::new("strip 3-cycle", |n| pip("a", 0.5, [0.3, 0.5, 0.7][n % 3])).with_tail(0, vec![0, 1, 2]).with_candidate(pip("lim", 0.5, 0.5)),
            false,
        ),
        e(
            "strip",
            HandleFamily::new("strip constant, wrong candidate", |_| pip("a", 0.5, 0.5)).with_tail(0, vec![0]).with_candidate(pip("lim", 0.6, 0.5)),
            false,
        ),
    ]
}
