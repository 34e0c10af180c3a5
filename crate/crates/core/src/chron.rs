//! Chronological structures, the derived causal relation and window relation algebra.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{Point, PointSet, SampleWindow, WindowBounds};
use crate::relation::{RelationMatrix, DENSE_LIMIT};

/// Slack in strict cone comparisons; subadditive, so transitivity survives rounding.
pub const CHRON_TOL: f64 = 1e-12;

/// Static product structure `(floor, ceil) x S` with `p ≪ q ⇔ d_S(p,q) < q.t − p.t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProductInfo {
    pub floor: f64,
    pub ceil: f64,
    pub spatial_dims: usize,
    pub period: Option<f64>,
}

/// A chronological structure given intensionally.
pub trait Chronology: Send + Sync {
    fn name(&self) -> String;

    /// Number of coordinates including time.
    fn dim(&self) -> usize;

    fn admissible(&self, p: &Point) -> bool;

    /// `p ≪ q`.
    fn chron(&self, p: &Point, q: &Point) -> bool;

    /// A compatible metric.
    fn dist(&self, p: &Point, q: &Point) -> f64;

    fn periods(&self) -> [Option<f64>; 3] {
        [None; 3]
    }

    fn sample(&self, h: f64, bounds: &WindowBounds) -> SampleWindow {
        SampleWindow::grid(bounds, h, self.periods(), |p| self.admissible(p))
    }

    /// Curve-causal relation, when known in closed form.
    fn causal(&self, _p: &Point, _q: &Point) -> Option<bool> {
        None
    }

    /// `p α(≪) q` in closed form, when known.
    fn alpha(&self, _p: &Point, _q: &Point) -> Option<bool> {
        None
    }

    /// `I⁻(p) ⊆ I⁻(q)` in closed form, when known.
    fn past_contained(&self, p: &Point, q: &Point) -> Option<bool> {
        self.alpha(p, q)
    }

    fn product(&self) -> Option<ProductInfo> {
        None
    }

    /// Spatial distance for product spaces.
    fn spatial_dist(&self, _p: &Point, _q: &Point) -> f64 {
        f64::NAN
    }
}

/// Checks that every window point is admissible.
pub fn check_window(oracle: &dyn Chronology, window: &SampleWindow) -> Result<()> {
    match window.points.iter().find(|p| !oracle.admissible(p)) {
        Some(p) => Err(Error::Domain(*p, oracle.name())),
        None => Ok(()),
    }
}

/// Dense `≪` matrix on the window.
pub fn chron_matrix(oracle: &dyn Chronology, window: &SampleWindow) -> RelationMatrix {
    let pts = &window.points;
    RelationMatrix::from_fn(pts.len(), |i, j| oracle.chron(&pts[i], &pts[j]))
}

/// Outcome of the chronological-set axioms on a window.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct RelationReport {
    pub irreflexive: bool,
    pub transitive: bool,
    pub connex: bool,
    pub separable: bool,
    pub irreflexive_witnesses: Vec<usize>,
    pub transitive_witnesses: Vec<(usize, usize, usize)>,
    pub connex_witnesses: Vec<usize>,
    pub separable_witnesses: Vec<(usize, usize)>,
}

const WITNESS_CAP: usize = 16;

/// Evaluates irreflexivity, transitivity, connexity and separability exhaustively.
pub fn validate_chron(oracle: &dyn Chronology, window: &SampleWindow) -> Result<RelationReport> {
    if window.is_empty() {
        return Err(Error::Precondition("window is empty".into()));
    }
    check_window(oracle, window)?;
    let n = window.len();
    let mut rep = RelationReport::default();
    if n <= DENSE_LIMIT {
        let m = chron_matrix(oracle, window);
        rep.irreflexive_witnesses = (0..n).filter(|&i| m.get(i, i)).take(WITNESS_CAP).collect();
        for i in 0..n {
            for j in m.succ(i).ones() {
                let mut missing = m.succ(j).clone();
                missing.difference_with(m.succ(i));
                for k in missing.ones() {
                    if rep.transitive_witnesses.len() < WITNESS_CAP {
                        rep.transitive_witnesses.push((i, j, k));
                    }
                }
            }
        }
        rep.connex_witnesses =
            (0..n).filter(|&i| m.succ(i).is_clear() && m.pred(i).is_clear()).take(WITNESS_CAP).collect();
        for (i, j) in m.pairs() {
            if m.succ(i).is_disjoint(m.pred(j)) && rep.separable_witnesses.len() < WITNESS_CAP {
                rep.separable_witnesses.push((i, j));
            }
        }
    } else {
        let pts = &window.points;
        let rel = |i: usize, j: usize| oracle.chron(&pts[i], &pts[j]);
        rep.irreflexive_witnesses = (0..n).filter(|&i| rel(i, i)).take(WITNESS_CAP).collect();
        'outer: for i in 0..n {
            for j in (0..n).filter(|&j| rel(i, j)) {
                for k in (0..n).filter(|&k| rel(j, k)) {
                    if !rel(i, k) {
                        rep.transitive_witnesses.push((i, j, k));
                        if rep.transitive_witnesses.len() >= WITNESS_CAP {
                            break 'outer;
                        }
                    }
                }
            }
        }
        rep.connex_witnesses =
            (0..n).filter(|&i| (0..n).all(|j| !rel(i, j) && !rel(j, i))).take(WITNESS_CAP).collect();
        'sep: for i in 0..n {
            for j in (0..n).filter(|&j| rel(i, j)) {
                if !(0..n).any(|k| rel(i, k) && rel(k, j)) {
                    rep.separable_witnesses.push((i, j));
                    if rep.separable_witnesses.len() >= WITNESS_CAP {
                        break 'sep;
                    }
                }
            }
        }
    }
    rep.irreflexive = rep.irreflexive_witnesses.is_empty();
    rep.transitive = rep.transitive_witnesses.is_empty();
    rep.connex = rep.connex_witnesses.is_empty();
    rep.separable = rep.separable_witnesses.is_empty();
    Ok(rep)
}

/// Groups window points by spatial position; returns (column of each point, column representatives).
fn columns(window: &SampleWindow) -> (Vec<usize>, Vec<Point>) {
    let mut map: HashMap<(u64, u64), usize> = HashMap::new();
    let mut reps = Vec::new();
    let col = window
        .points
        .iter()
        .map(|p| {
            *map.entry((p.x.to_bits(), p.y.to_bits())).or_insert_with(|| {
                reps.push(*p);
                reps.len() - 1
            })
        })
        .collect();
    (col, reps)
}

/// Past or future of `a` through the product fast path: the highest member per
/// column bounds the past everywhere.
fn product_cone(oracle: &dyn Chronology, a: &PointSet, window: &SampleWindow, past: bool) -> PointSet {
    let (col, reps) = columns(window);
    let sign = if past { 1.0 } else { -1.0 };
    let mut top = vec![f64::NEG_INFINITY; reps.len()];
    for i in a.ones() {
        let v = sign * window.points[i].t;
        if v > top[col[i]] {
            top[col[i]] = v;
        }
    }
    let occupied: Vec<usize> = (0..reps.len()).filter(|&c| top[c] > f64::NEG_INFINITY).collect();
    let bound: Vec<f64> = (0..reps.len())
        .into_par_iter()
        .map(|c| {
            occupied
                .iter()
                .map(|&c2| top[c2] - oracle.spatial_dist(&reps[c2], &reps[c]))
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    window.set_from_indexed(|i, p| sign * p.t < bound[col[i]] - CHRON_TOL)
}

fn cone_of(oracle: &dyn Chronology, a: &PointSet, window: &SampleWindow, past: bool) -> PointSet {
    if a.is_clear() {
        return window.empty_set();
    }
    if oracle.product().is_some() {
        return product_cone(oracle, a, window, past);
    }
    let members: Vec<usize> = a.ones().collect();
    let pts = &window.points;
    let flags: Vec<bool> = (0..pts.len())
        .into_par_iter()
        .map(|i| {
            members.iter().any(|&j| if past { oracle.chron(&pts[i], &pts[j]) } else { oracle.chron(&pts[j], &pts[i]) })
        })
        .collect();
    window.set_from_indexed(|i, _| flags[i])
}

/// `{x ∈ window | ∃a ∈ A: x ≪ a}`.
pub fn chron_past(oracle: &dyn Chronology, a: &PointSet, window: &SampleWindow) -> PointSet {
    cone_of(oracle, a, window, true)
}

/// `{x ∈ window | ∃a ∈ A: a ≪ x}`.
pub fn chron_future(oracle: &dyn Chronology, a: &PointSet, window: &SampleWindow) -> PointSet {
    cone_of(oracle, a, window, false)
}

/// Window points causally below some member of `a` (curve-causal predicate when
/// available, otherwise window-literal α).
pub fn causal_past(oracle: &dyn Chronology, a: &PointSet, window: &SampleWindow) -> PointSet {
    let pts = &window.points;
    let members: Vec<usize> = a.ones().collect();
    if let Some(first) = members.first() {
        if oracle.causal(&pts[*first], &pts[*first]).is_some() {
            return window.set_from_indexed(|_, x| {
                members.iter().any(|&j| oracle.causal(x, &pts[j]).unwrap_or(false))
            });
        }
    }
    let al = alpha_causal(oracle, window);
    al.down_of(a)
}

/// `α(≪)` computed literally from window-restricted pasts and futures.
pub fn alpha_causal(oracle: &dyn Chronology, window: &SampleWindow) -> RelationMatrix {
    chron_matrix(oracle, window).alpha()
}

/// Window-literal `p α q` for arbitrary points, evaluated against the window.
pub fn alpha_window(oracle: &dyn Chronology, window: &SampleWindow, p: &Point, q: &Point) -> bool {
    window.points.iter().all(|w| {
        (!oracle.chron(q, w) || oracle.chron(p, w)) && (!oracle.chron(w, p) || oracle.chron(w, q))
    })
}

/// Counterexamples to `x ≤ y ≪ z ⇒ x ≪ z` and `x ≪ y ≤ z ⇒ x ≪ z`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct PushupReport {
    pub violations: usize,
    pub witnesses: Vec<(usize, usize, usize)>,
}

impl PushupReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

pub fn check_pushup(chron: &RelationMatrix, leq: &RelationMatrix) -> PushupReport {
    let n = chron.len();
    let mut rep = PushupReport::default();
    for x in 0..n {
        for y in leq.succ(x).ones() {
            // x ≤ y ≪ z
            let mut bad = chron.succ(y).clone();
            bad.difference_with(chron.succ(x));
            // x ≪ ... handled below; here record z
            for z in bad.ones() {
                rep.violations += 1;
                if rep.witnesses.len() < WITNESS_CAP {
                    rep.witnesses.push((x, y, z));
                }
            }
        }
        for y in chron.succ(x).ones() {
            // x ≪ y ≤ z
            let mut bad = leq.succ(y).clone();
            bad.difference_with(chron.succ(x));
            for z in bad.ones() {
                rep.violations += 1;
                if rep.witnesses.len() < WITNESS_CAP {
                    rep.witnesses.push((x, y, z));
                }
            }
        }
    }
    rep
}

/// Explicit finite relation; point `i` is encoded as `Point::new(i, 0)`.
#[derive(Clone, Debug)]
pub struct ExplicitRelation {
    pub ids: Vec<String>,
    pub rel: RelationMatrix,
}

#[derive(Serialize, Deserialize)]
struct ExplicitDoc {
    points: Vec<serde_json::Value>,
    chron: Vec<[usize; 2]>,
}

impl ExplicitRelation {
    pub fn new(ids: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = ids.len();
        if let Some(&(i, j)) = pairs.iter().find(|&&(i, j)| i >= n || j >= n) {
            return Err(Error::Precondition(format!("pair ({i},{j}) refers to a missing point")));
        }
        Ok(ExplicitRelation { ids, rel: RelationMatrix::from_pairs(n, pairs.iter().copied()) })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: ExplicitDoc = serde_json::from_str(s)?;
        let ids = doc
            .points
            .iter()
            .map(|v| match v {
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            })
            .collect();
        let pairs: Vec<(usize, usize)> = doc.chron.iter().map(|p| (p[0], p[1])).collect();
        Self::new(ids, &pairs)
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = ExplicitDoc {
            points: self.ids.iter().map(|s| serde_json::Value::String(s.clone())).collect(),
            chron: self.rel.pairs().map(|(i, j)| [i, j]).collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn point(i: usize) -> Point {
        Point::new(i as f64, 0.0)
    }

    pub fn window(&self) -> SampleWindow {
        SampleWindow::from_points((0..self.ids.len()).map(Self::point).collect())
    }

    fn index(&self, p: &Point) -> Option<usize> {
        let i = p.t as usize;
        (p.t >= 0.0 && p.t.fract() == 0.0 && p.x == 0.0 && i < self.ids.len()).then_some(i)
    }
}

impl Chronology for ExplicitRelation {
    fn name(&self) -> String {
        "explicit".into()
    }

    fn dim(&self) -> usize {
        1
    }

    fn admissible(&self, p: &Point) -> bool {
        self.index(p).is_some()
    }

    fn chron(&self, p: &Point, q: &Point) -> bool {
        match (self.index(p), self.index(q)) {
            (Some(i), Some(j)) => self.rel.get(i, j),
            _ => false,
        }
    }

    fn dist(&self, p: &Point, q: &Point) -> f64 {
        if p == q {
            0.0
        } else {
            1.0
        }
    }
}

impl SampleWindow {
    pub fn set_from_indexed(&self, pred: impl Fn(usize, &Point) -> bool) -> PointSet {
        let mut s = self.empty_set();
        for (i, p) in self.points.iter().enumerate() {
            if pred(i, p) {
                s.insert(i);
            }
        }
        s
    }
}
