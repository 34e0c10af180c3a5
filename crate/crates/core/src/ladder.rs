//! Causal-ladder audits. Finite explicit relations are decided exactly; oracle
//! windows are probed at sampled points and pairs, so those verdicts are
//! window-approximate.
//!
//! Probe points are a random sample of the window interior plus the points
//! next to holes, ordered so that ends of removed sets come first; that is
//! where closedness and reflection fail.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;

use crate::chron::{Chronology, ExplicitRelation};
use crate::point::{Point, PointSet, SampleWindow, WindowBounds};
use crate::relation::RelationMatrix;

pub const RUNGS: [&str; 13] = [
    "past-full",
    "full",
    "preregular",
    "chronologically-dense",
    "I-distinguishing",
    "J-distinguishing",
    "past-reflecting",
    "causally-continuous",
    "causally-simple",
    "almost-strongly-causal",
    "strongly-causal",
    "Alexandrov",
    "globally-hyperbolic",
];

#[derive(Clone, Debug, Serialize)]
pub struct Rung {
    pub name: String,
    pub verdict: Option<bool>,
    /// `exact` or `window-approximate`.
    pub mode: String,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LadderAudit {
    pub space: String,
    pub h: f64,
    pub probes: usize,
    pub rungs: Vec<Rung>,
    /// Broken implications between verdicts; these indicate an audit defect.
    pub violations: Vec<String>,
}

impl LadderAudit {
    pub fn verdict(&self, name: &str) -> Option<bool> {
        self.rungs.iter().find(|r| r.name == name).and_then(|r| r.verdict)
    }

    pub fn table(&self) -> String {
        let mut s = format!("{} (h = {}, {} probes)\n", self.space, self.h, self.probes);
        for r in &self.rungs {
            let v = match r.verdict {
                Some(true) => "yes",
                Some(false) => "no",
                None => "?",
            };
            s += &format!("  {:<24} {:<4} {:<19} {}\n", r.name, v, r.mode, r.witnesses.first().map(String::as_str).unwrap_or(""));
        }
        for v in &self.violations {
            s += &format!("  violation: {v}\n");
        }
        s
    }

    fn check_implications(&mut self) {
        for (a, b) in [("causally-simple", "causally-continuous"), ("causally-continuous", "strongly-causal"), ("globally-hyperbolic", "causally-simple")] {
            if self.verdict(a) == Some(true) && self.verdict(b) == Some(false) {
                self.violations.push(format!("{a} holds but {b} fails"));
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LadderConfig {
    /// Distance from window edges and holes for interior probes, in units of `h`.
    pub margin: f64,
    pub samples: usize,
    pub defect_samples: usize,
    pub seed: u64,
    /// Separations of continuity test sets and sizes of diamond
    /// neighbourhoods, in units of `h`.
    pub radii: Vec<f64>,
    pub directions: usize,
    pub refinements: usize,
}

impl Default for LadderConfig {
    fn default() -> Self {
        LadderConfig { margin: 4.0, samples: 48, defect_samples: 48, seed: 11, radii: vec![1.0, 2.0, 4.0], directions: 16, refinements: 6 }
    }
}

fn rung(name: &str, mode: &str, witnesses: Vec<String>, decided: bool) -> Rung {
    Rung {
        name: name.into(),
        verdict: decided.then_some(witnesses.is_empty()),
        mode: mode.into(),
        witnesses: witnesses.into_iter().take(8).collect(),
    }
}

/// Exact audit of a finite chronology with the discrete topology. Topological
/// rungs degenerate there: every singleton is open.
pub fn audit_explicit(rel: &ExplicitRelation) -> LadderAudit {
    let r = &rel.rel;
    let n = r.len();
    let id = |i: usize| rel.ids[i].clone();
    let past = |i: usize| r.pred(i);
    let fut = |i: usize| r.succ(i);
    let mut w_pf = Vec::new();
    let mut w_full = Vec::new();
    let mut w_pre = Vec::new();
    let mut w_dense = Vec::new();
    let mut w_i = Vec::new();
    let mut w_j = Vec::new();
    let mut w_refl = Vec::new();
    let leq = r.alpha();
    for i in 0..n {
        if past(i).count_ones(..) == 0 {
            w_pf.push(format!("I-({}) empty", id(i)));
        }
        if past(i).count_ones(..) == 0 || fut(i).count_ones(..) == 0 {
            w_full.push(format!("{} has an empty I+ or I-", id(i)));
        }
        // directedness of I⁻(i)
        let members: Vec<usize> = past(i).ones().collect();
        'outer: for (a, &y) in members.iter().enumerate() {
            for &z in &members[a + 1..] {
                if !members.iter().any(|&w| r.get(y, w) && r.get(z, w)) {
                    w_pre.push(format!("{} and {} have no common upper bound in I-({})", id(y), id(z), id(i)));
                    break 'outer;
                }
            }
        }
        // in the discrete topology p ∈ cl I±(p) means p ∈ I±(p)
        let interior = past(i).count_ones(..) > 0 && fut(i).count_ones(..) > 0;
        if interior {
            w_dense.push(format!("{} is isolated from its own past", id(i)));
        }
        for j in i + 1..n {
            if past(i) == past(j) || fut(i) == fut(j) {
                w_i.push(format!("{} and {} share I+ or I-", id(i), id(j)));
            }
            if leq.get(i, j) && leq.get(j, i) {
                w_j.push(format!("{} and {} share J+ and J-", id(i), id(j)));
            }
        }
        for j in 0..n {
            if i != j && past(i).is_subset(past(j)) && !fut(j).is_subset(fut(i)) {
                w_refl.push(format!("I-({}) in I-({}) but I+({}) not in I+({})", id(i), id(j), id(j), id(i)));
            }
        }
    }
    let dist = w_i.is_empty() || w_j.is_empty();
    let topo = |name: &str| rung(name, "exact", if dist { Vec::new() } else { vec!["not distinguishing".into()] }, true);
    let rungs = vec![
        rung("past-full", "exact", w_pf, true),
        rung("full", "exact", w_full, true),
        rung("preregular", "exact", w_pre, true),
        rung("chronologically-dense", "exact", w_dense, true),
        rung("I-distinguishing", "exact", w_i, true),
        rung("J-distinguishing", "exact", w_j, true),
        rung("past-reflecting", "exact", w_refl, true),
        topo("causally-continuous"),
        topo("causally-simple"),
        topo("almost-strongly-causal"),
        topo("strongly-causal"),
        topo("Alexandrov"),
        topo("globally-hyperbolic"),
    ];
    let mut a = LadderAudit { space: "explicit".into(), h: 0.0, probes: n, rungs, violations: Vec::new() };
    a.check_implications();
    a
}

/// Points at least `r` from every non-periodic window edge.
fn away_from_edges(w: &SampleWindow, p: &Point, r: f64) -> bool {
    match &w.bounds {
        Some(b) => (0..b.dim()).all(|a| w.periods[a].is_some() || (p.coord(a) - b.lo[a] >= r - 1e-12 && b.hi[a] - p.coord(a) >= r - 1e-12)),
        None => true,
    }
}

struct Probes {
    interior: Vec<usize>,
    defects: Vec<usize>,
}

fn probes(w: &SampleWindow, cfg: &LadderConfig) -> Probes {
    let m = cfg.margin * w.h;
    let mut interior: Vec<usize> = w.interior(m).ones().collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
    interior.shuffle(&mut rng);
    interior.truncate(cfg.samples);
    interior.sort_unstable();
    let mut defects: Vec<(usize, usize)> = w
        .points
        .iter()
        .enumerate()
        .filter(|(_, p)| away_from_edges(w, p, m))
        .filter_map(|(i, p)| {
            let near = w.holes.iter().filter(|q| w.coord_dist(p, q) <= 1.5 * w.h + 1e-12).count();
            (near > 0).then_some((near, i))
        })
        .collect();
    defects.sort_unstable();
    Probes { interior, defects: defects.into_iter().take(cfg.defect_samples).map(|(_, i)| i).collect() }
}

fn past_set(o: &dyn Chronology, w: &SampleWindow, p: &Point) -> PointSet {
    w.set_from(|x| o.chron(x, p))
}

fn future_set(o: &dyn Chronology, w: &SampleWindow, p: &Point) -> PointSet {
    w.set_from(|x| o.chron(p, x))
}

fn causal(o: &dyn Chronology, w: &SampleWindow, p: &Point, q: &Point) -> bool {
    o.causal(p, q).unwrap_or_else(|| crate::chron::alpha_window(o, w, p, q))
}

fn perturbations(dim: usize, count: usize) -> Vec<Point> {
    (0..count)
        .map(|k| {
            let a = std::f64::consts::TAU * k as f64 / count as f64;
            let axis = if dim >= 3 && k % 2 == 1 { 2 } else { 1 };
            Point::new3(a.cos(), 0.0, 0.0).with_coord(axis, a.sin())
        })
        .collect()
}

fn shift(p: &Point, d: &Point, s: f64) -> Point {
    Point::new3(p.t + s * d.t, p.x + s * d.x, p.y + s * d.y)
}

fn label(p: &Point) -> String {
    format!("({:.4}, {:.4}{})", p.t, p.x, if p.y != 0.0 { format!(", {:.4}", p.y) } else { String::new() })
}

/// A common upper bound of `y` and `z` in `I⁻(p)` on lattices of pitch `h/4`
/// and `h/16` over the slab between them and `p`; the set of such bounds can
/// be a sliver thinner than the window pitch.
fn refined_bound(o: &dyn Chronology, w: &SampleWindow, y: &Point, z: &Point, p: &Point) -> bool {
    let Some(b) = &w.bounds else { return false };
    let t0 = y.t.max(z.t);
    [4.0, 16.0].iter().any(|f| {
        let step = w.h / f;
        let nt = ((p.t - t0) / step).ceil() as usize;
        let axes: Vec<usize> = (1..b.dim()).collect();
        let counts: Vec<usize> = axes.iter().map(|&a| ((b.hi[a] - b.lo[a]) / step).round() as usize + 1).collect();
        let cells: usize = counts.iter().product();
        (1..nt).any(|k| {
            let t = t0 + k as f64 * step;
            (0..cells).any(|c| {
                let mut u = Point::new3(t, 0.0, 0.0);
                let mut rest = c;
                for (&a, &n) in axes.iter().zip(&counts) {
                    u = u.with_coord(a, b.lo[a] + (rest % n) as f64 * step);
                    rest /= n;
                }
                o.admissible(&u) && o.chron(&u, p) && o.chron(y, &u) && o.chron(z, &u)
            })
        })
    })
}

/// Window-approximate audit of an oracle.
pub fn audit(o: &dyn Chronology, w: &SampleWindow, cfg: &LadderConfig) -> LadderAudit {
    let h = w.h;
    let pr = probes(w, cfg);
    let all: Vec<usize> = pr.interior.iter().chain(&pr.defects).copied().collect::<BTreeSet<_>>().into_iter().collect();
    let pts = &w.points;
    let pasts: Vec<PointSet> = all.par_iter().map(|&i| past_set(o, w, &pts[i])).collect();
    let futs: Vec<PointSet> = all.par_iter().map(|&i| future_set(o, w, &pts[i])).collect();
    let slot = |i: usize| all.binary_search(&i).unwrap();
    let mode = "window-approximate";

    let mut w_pf = Vec::new();
    let mut w_full = Vec::new();
    let mut w_dense = Vec::new();
    for &i in &pr.interior {
        let s = slot(i);
        let (np, nf) = (pasts[s].count_ones(..) == 0, futs[s].count_ones(..) == 0);
        if np {
            w_pf.push(format!("I-{} empty", label(&pts[i])));
        }
        if np || nf {
            w_full.push(format!("I+ or I- of {} empty", label(&pts[i])));
        }
        let close = |set: &PointSet| set.ones().any(|j| w.coord_dist(&pts[i], &pts[j]) <= 2.0 * h + 1e-12);
        if !close(&pasts[s]) || !close(&futs[s]) {
            w_dense.push(format!("no chronological neighbour within 2h of {}", label(&pts[i])));
        }
    }

    // directedness of I⁻(p) on sampled member pairs
    let w_pre: Vec<String> = pr
        .interior
        .par_iter()
        .filter_map(|&i| {
            // pairs from well inside I⁻(p); near its boundary the grid may hold no upper bound
            let members: Vec<usize> = pasts[slot(i)].ones().collect();
            let inner: Vec<usize> = w.erode(&pasts[slot(i)], 2.0 * h).ones().filter(|&j| away_from_edges(w, &pts[j], 2.0 * h)).collect();
            if inner.len() < 2 {
                return None;
            }
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed ^ i as u64);
            for _ in 0..6 {
                let y = *inner.choose(&mut rng).unwrap();
                let z = *inner.choose(&mut rng).unwrap();
                if !members.iter().any(|&u| o.chron(&pts[y], &pts[u]) && o.chron(&pts[z], &pts[u])) && !refined_bound(o, w, &pts[y], &pts[z], &pts[i]) {
                    return Some(format!("{} and {} have no common upper bound in I-{}", label(&pts[y]), label(&pts[z]), label(&pts[i])));
                }
            }
            None
        })
        .collect();

    // distinguishing on neighbouring pairs
    let (w_i, w_j): (Vec<Vec<String>>, Vec<Vec<String>>) = pr
        .interior
        .par_iter()
        .map(|&i| {
            let s = slot(i);
            let mut wi = Vec::new();
            let mut wj = Vec::new();
            for j in w.neighbors(i, 1.5 * h) {
                let (p, q) = (&pts[i], &pts[j]);
                if past_set(o, w, q) == pasts[s] || future_set(o, w, q) == futs[s] {
                    wi.push(format!("{} and {} share I+ or I-", label(p), label(q)));
                }
                if causal(o, w, p, q) && causal(o, w, q, p) {
                    wj.push(format!("{} and {} share J+ and J-", label(p), label(q)));
                }
            }
            (wi, wj)
        })
        .unzip();
    let w_i: Vec<String> = w_i.concat();
    let w_j: Vec<String> = w_j.concat();

    // past reflection on all probe pairs; the conclusion is tested up to h
    let dil_fut: Vec<PointSet> = futs.par_iter().map(|f| w.dilate(f, 1.5 * h)).collect();
    let w_refl: Vec<String> = (0..all.len())
        .into_par_iter()
        .flat_map_iter(|a| {
            let (pasts, futs, dil_fut, all) = (&pasts, &futs, &dil_fut, &all);
            (0..all.len()).filter_map(move |b| {
                if a == b {
                    return None;
                }
                let (x, y) = (&pts[all[a]], &pts[all[b]]);
                let premise = o.past_contained(x, y).unwrap_or_else(|| pasts[a].is_subset(&pasts[b]));
                (premise && !futs[b].is_subset(&dil_fut[a])).then(|| format!("I-{} in I-{} but I+{} not in I+{}", label(x), label(y), label(y), label(x)))
            })
        })
        .collect();

    // closedness of J⁺ under perturbed sequences
    let dirs = perturbations(o.dim(), cfg.directions);
    let steps: Vec<f64> = (1..=cfg.refinements).map(|k| h / 2f64.powi(k as i32)).collect();
    let tail = &steps[steps.len().saturating_sub(3)..];
    let w_cs: Vec<String> = (0..all.len())
        .into_par_iter()
        .flat_map_iter(|a| {
            let (all, dirs) = (&all, &dirs);
            (0..all.len()).filter_map(move |b| {
                let (x, y) = (&pts[all[a]], &pts[all[b]]);
                if a == b || y.t <= x.t || causal(o, w, x, y) {
                    return None;
                }
                for d in dirs.iter() {
                    for moved_y in [true, false] {
                        let hit = tail.iter().all(|&e| {
                            let (u, v) = if moved_y { (*x, shift(y, d, e)) } else { (shift(x, d, e), *y) };
                            o.admissible(&u) && o.admissible(&v) && causal(o, w, &u, &v)
                        });
                        if hit {
                            return Some(format!("({}, {}) is a limit of causal pairs but not causal", label(x), label(y)));
                        }
                    }
                }
                None
            })
        })
        .collect();

    // inner and outer continuity of I±: for test sets at separation r from the
    // boundary of I±(p), some off-grid ball around p keeps I±(q) clear of the
    // outer set and over the inner one
    let radii: Vec<f64> = cfg.radii.iter().map(|r| r * h).collect();
    let w_cc: Vec<String> = pr
        .interior
        .par_iter()
        .filter_map(|&i| {
            let s = slot(i);
            let p = &pts[i];
            for (set, fwd) in [(&pasts[s], false), (&futs[s], true)] {
                let of = |q: &Point| if fwd { future_set(o, w, q) } else { past_set(o, w, q) };
                for &r in &radii {
                    let outside = w.complement(&w.dilate(set, r));
                    let inside = w.erode(set, r);
                    let ok = [4.0, 16.0, 64.0].iter().any(|f| {
                        dirs.iter().map(|d| shift(p, d, r / f)).filter(|q| o.admissible(q)).all(|q| {
                            let iq = of(&q);
                            inside.is_subset(&iq) && iq.is_disjoint(&outside)
                        })
                    });
                    if !ok {
                        return Some(format!("I{} of points near {} leaves the {r} band", if fwd { "+" } else { "-" }, label(p)));
                    }
                }
            }
            None
        })
        .collect();

    // diamond neighbourhoods inside B(p, max radius)
    let big = radii.iter().copied().fold(0.0, f64::max);
    let diamond_test = |kind: u8| -> Vec<String> {
        pr.interior
            .par_iter()
            .filter_map(|&i| {
                let p = &pts[i];
                let nbhd: Vec<usize> = w.neighbors(i, h);
                let found = (2..=3).any(|k| {
                    let (y, z) = (p.with_coord(0, p.t - k as f64 * h), p.with_coord(0, p.t + k as f64 * h));
                    if !o.admissible(&y) || !o.admissible(&z) {
                        return false;
                    }
                    let (ks, ls): (Vec<Point>, Vec<Point>) = if kind == 2 {
                        let around = |c: &Point| -> Vec<Point> {
                            let mut v: Vec<Point> = w.points.iter().filter(|q| w.coord_dist(q, c) <= h / 2.0 + 1e-12).copied().collect();
                            v.push(*c);
                            v
                        };
                        (around(&y), around(&z))
                    } else {
                        (vec![y], vec![z])
                    };
                    let inside = |q: &Point| match kind {
                        0 => ks.iter().any(|a| o.chron(a, q)) && ls.iter().any(|b| o.chron(q, b)),
                        _ => ks.iter().any(|a| causal(o, w, a, q)) && ls.iter().any(|b| causal(o, w, q, b)),
                    };
                    nbhd.iter().all(|&j| inside(&pts[j]))
                        && inside(p)
                        && w.points.iter().all(|q| w.coord_dist(p, q) <= big + 1e-12 || !inside(q))
                });
                (!found).then(|| format!("no diamond neighbourhood of {} inside B(p, {big})", label(p)))
            })
            .collect()
    };
    let w_asc = diamond_test(0);
    let w_alex = diamond_test(1);
    let w_sc = diamond_test(2);

    // compactness of diamonds: a diamond reaching a hole that lies between its
    // tips in the ambient chart is not compact
    let between = |o_: &Point, y: &Point, z: &Point| {
        let sp = |a: &Point, b: &Point| ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt();
        o_.t - y.t >= sp(o_, y) - 1e-12 && z.t - o_.t >= sp(z, o_) - 1e-12
    };
    let w_gh: Vec<String> = all
        .par_iter()
        .filter_map(|&i| {
            let p = &pts[i];
            for a in [4.0 * h, 0.25] {
                let (y, z) = (p.with_coord(0, p.t - a), p.with_coord(0, p.t + a));
                if !o.admissible(&y) || !o.admissible(&z) {
                    continue;
                }
                for hole in w.holes.iter().filter(|q| between(q, &y, &z)) {
                    let reaches = w.points.iter().any(|q| w.coord_dist(q, hole) <= 1.5 * h + 1e-12 && causal(o, w, &y, q) && causal(o, w, q, &z));
                    if reaches {
                        return Some(format!("J+{} ∩ J-{} runs into the hole at {}", label(&y), label(&z), label(hole)));
                    }
                }
            }
            None
        })
        .collect();
    let sc_ok = w_sc.is_empty();
    let mut gh = rung("globally-hyperbolic", mode, w_gh, true);
    if !sc_ok {
        gh.verdict = Some(false);
        gh.witnesses.insert(0, "not strongly causal".into());
    }

    let rungs = vec![
        rung("past-full", mode, w_pf, true),
        rung("full", mode, w_full, true),
        rung("preregular", mode, w_pre, true),
        rung("chronologically-dense", mode, w_dense, true),
        rung("I-distinguishing", mode, w_i, true),
        rung("J-distinguishing", mode, w_j, true),
        rung("past-reflecting", mode, w_refl, true),
        rung("causally-continuous", mode, w_cc, true),
        rung("causally-simple", mode, w_cs, true),
        rung("almost-strongly-causal", mode, w_asc, true),
        rung("strongly-causal", mode, w_sc, true),
        rung("Alexandrov", mode, w_alex, true),
        gh,
    ];
    let mut out = LadderAudit { space: o.name(), h, probes: all.len(), rungs, violations: Vec::new() };
    out.check_implications();
    out
}

/// Window points with nonempty `I⁺` and `I⁻`, judged against the window
/// padded by `margin` on every non-periodic axis so that the window edge does
/// not fake an empty cone.
pub fn underline(o: &dyn Chronology, w: &SampleWindow, margin: f64) -> PointSet {
    let padded = match &w.bounds {
        Some(b) => {
            let lo: Vec<f64> = (0..b.dim()).map(|a| if w.periods[a].is_some() { b.lo[a] } else { b.lo[a] - margin }).collect();
            let hi: Vec<f64> = (0..b.dim()).map(|a| if w.periods[a].is_some() { b.hi[a] } else { b.hi[a] + margin }).collect();
            o.sample(w.h, &WindowBounds::new(&lo, &hi))
        }
        None => w.clone(),
    };
    let keep: Vec<bool> = w
        .points
        .par_iter()
        .map(|p| padded.points.iter().any(|q| o.chron(q, p)) && padded.points.iter().any(|q| o.chron(p, q)))
        .collect();
    w.set_from_indexed(|i, _| keep[i])
}

/// Boundary-free relation on an explicit window: the rows of `underline`.
pub fn underline_explicit(rel: &RelationMatrix) -> Vec<usize> {
    (0..rel.len()).filter(|&i| rel.succ(i).count_ones(..) > 0 && rel.pred(i).count_ones(..) > 0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::flat::default_bounds;
    use crate::gallery::{Flat, FlatKind};

    fn run(kind: FlatKind, h: f64) -> LadderAudit {
        let s = Flat::new(kind);
        let w = s.sample(h, &default_bounds(kind));
        audit(&s, &w, &LadderConfig { samples: 24, defect_samples: 24, ..Default::default() })
    }

    #[test]
    fn strip_passes_every_rung() {
        let a = run(FlatKind::Strip, 1.0 / 32.0);
        for r in &a.rungs {
            assert_eq!(r.verdict, Some(true), "{}", a.table());
        }
        assert!(a.violations.is_empty());
    }

    #[test]
    fn slit_is_not_past_reflecting() {
        let a = run(FlatKind::Slit, 1.0 / 16.0);
        assert_eq!(a.verdict("past-reflecting"), Some(false), "{}", a.table());
        assert_eq!(a.verdict("causally-continuous"), Some(true), "{}", a.table());
        assert!(a.violations.is_empty());
    }

    #[test]
    fn punctured_is_not_causally_simple() {
        let a = run(FlatKind::Punctured, 1.0 / 16.0);
        assert_eq!(a.verdict("causally-simple"), Some(false), "{}", a.table());
        assert_eq!(a.verdict("causally-continuous"), Some(true), "{}", a.table());
        assert_eq!(a.verdict("globally-hyperbolic"), Some(false), "{}", a.table());
        assert!(a.violations.is_empty());
    }

    #[test]
    fn explicit_chain_is_exact() {
        let rel = ExplicitRelation::new(vec!["a".into(), "b".into(), "c".into()], &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let a = audit_explicit(&rel);
        assert_eq!(a.verdict("past-full"), Some(false));
        assert_eq!(a.verdict("I-distinguishing"), Some(true));
        assert_eq!(a.verdict("past-reflecting"), Some(true));
        assert!(a.rungs.iter().all(|r| r.mode == "exact"));
        assert_eq!(underline_explicit(&rel.rel), vec![1]);
    }

    #[test]
    fn underline_drops_the_layer_below_the_ceiling() {
        let s = Flat::new(FlatKind::Strip);
        let w = s.sample(1.0 / 8.0, &default_bounds(FlatKind::Strip));
        let u = underline(&s, &w, 0.5);
        for (i, p) in w.points.iter().enumerate() {
            assert_eq!(u.contains(i), p.t < 1.0 - 1.0 / 8.0 - 1e-9 && p.t > 1.0 / 8.0 + 1e-9, "{p:?}");
        }
        // a window well inside the strip loses nothing
        let inner = s.sample(1.0 / 8.0, &WindowBounds::rect((0.25, 0.75), (0.0, 1.0)));
        assert_eq!(underline(&s, &inner, 0.5).count_ones(..), inner.len());
    }
}
