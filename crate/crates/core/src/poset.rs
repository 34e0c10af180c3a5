//! Chronologies derived from finite partial orders, and achronality of the
//! future boundary in gallery windows.

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chron::{validate_chron, Chronology, ExplicitRelation, RelationReport};
use crate::error::{Error, Result};
use crate::ip::{bs_chron, IpHandle};
use crate::point::{Point, WindowBounds};
use crate::relation::RelationMatrix;

/// A finite partial order; `leq` is reflexive.
#[derive(Clone, Debug)]
pub struct FinitePoset {
    pub points: Vec<String>,
    pub leq: RelationMatrix,
}

#[derive(Serialize, Deserialize)]
struct PosetJson {
    points: Vec<String>,
    leq: Vec<(usize, usize)>,
}

impl FinitePoset {
    /// Adds the diagonal and rejects relations that are not partial orders.
    pub fn new(points: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = points.len();
        if let Some(&(i, j)) = pairs.iter().find(|(i, j)| *i >= n || *j >= n) {
            return Err(Error::Precondition(format!("pair ({i}, {j}) out of range for {n} points")));
        }
        let mut leq = RelationMatrix::from_pairs(n, pairs.iter().copied());
        for i in 0..n {
            leq.insert(i, i);
        }
        if !leq.is_antisymmetric() {
            return Err(Error::Precondition("relation is not antisymmetric".into()));
        }
        if !leq.is_transitive() {
            return Err(Error::Precondition("relation is not transitive".into()));
        }
        Ok(FinitePoset { points, leq })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: PosetJson = serde_json::from_str(s)?;
        Self::new(j.points, &j.leq)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&PosetJson { points: self.points.clone(), leq: self.leq.pairs().collect() })?)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq.get(i, j)
    }

    pub fn total_order(n: usize) -> Self {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        Self::new((0..n).map(|i| i.to_string()).collect(), &pairs).unwrap()
    }

    pub fn antichain(n: usize) -> Self {
        Self::new((0..n).map(|i| i.to_string()).collect(), &[]).unwrap()
    }

    /// Product of chains of lengths `a` and `b`; point `(i, j)` has index `i*b + j`.
    pub fn grid(a: usize, b: usize) -> Self {
        let idx = |i: usize, j: usize| i * b + j;
        let mut pairs = Vec::new();
        for i in 0..a {
            for j in 0..b {
                for k in i..a {
                    for l in j..b {
                        pairs.push((idx(i, j), idx(k, l)));
                    }
                }
            }
        }
        let names = (0..a).flat_map(|i| (0..b).map(move |j| format!("({i},{j})"))).collect();
        Self::new(names, &pairs).unwrap()
    }

    /// The closed-cone order `|Δx| ≤ Δt` on the pitch-`h` grid of `[0,1]²`.
    pub fn minkowski_grid(h: f64) -> (Self, Vec<Point>) {
        let m = (1.0 / h).round() as usize;
        let pts: Vec<Point> = (0..=m).flat_map(|i| (0..=m).map(move |j| Point::new(i as f64 * h, j as f64 * h))).collect();
        let n = pts.len();
        let leq = RelationMatrix::from_fn(n, |a, b| pts[b].t - pts[a].t >= (pts[b].x - pts[a].x).abs() - 1e-12);
        let names = pts.iter().map(|p| format!("{p}")).collect();
        (FinitePoset { points: names, leq }, pts)
    }

    fn strict_up(&self, i: usize) -> FixedBitSet {
        let mut s = self.leq.succ(i).clone();
        s.set(i, false);
        s
    }

    fn strict_down(&self, i: usize) -> FixedBitSet {
        let mut s = self.leq.pred(i).clone();
        s.set(i, false);
        s
    }
}

fn meets(a: &FixedBitSet, b: &FixedBitSet) -> bool {
    !a.is_disjoint(b)
}

/// `x β y ⇔ x ≤ y ∧ ∃u,v: x < u < v < y` with `J⁺(u) ∩ J⁻(v)` not totally ordered.
pub fn derive_beta(p: &FinitePoset) -> RelationMatrix {
    let n = p.len();
    let up: Vec<FixedBitSet> = (0..n).map(|i| p.strict_up(i)).collect();
    let down: Vec<FixedBitSet> = (0..n).map(|i| p.strict_down(i)).collect();
    let comparable: Vec<FixedBitSet> = (0..n)
        .map(|i| {
            let mut c = p.leq.succ(i).clone();
            c.union_with(p.leq.pred(i));
            c
        })
        .collect();
    // nc[u] = {v > u | [u, v] is not a chain}
    let nc: Vec<FixedBitSet> = (0..n)
        .into_par_iter()
        .map(|u| {
            let mut out = FixedBitSet::with_capacity(n);
            for v in up[u].ones() {
                let mut iv = p.leq.succ(u).clone();
                iv.intersect_with(p.leq.pred(v));
                if iv.ones().any(|a| !iv.is_subset(&comparable[a])) {
                    out.insert(v);
                }
            }
            out
        })
        .collect();
    RelationMatrix::from_fn(n, |x, y| {
        p.leq.get(x, y)
            && up[x].intersection(&down[y]).any(|u| {
                let mut vs = nc[u].clone();
                vs.intersect_with(&down[y]);
                vs.count_ones(..) > 0
            })
    })
}

/// `∀a > p ∃b: a > b > p ∧ b ≤ q`, the first conjunct of γ.
fn gamma_parts(p: &FinitePoset) -> (Vec<FixedBitSet>, Vec<FixedBitSet>) {
    let n = p.len();
    let up: Vec<FixedBitSet> = (0..n).map(|i| p.strict_up(i)).collect();
    let down: Vec<FixedBitSet> = (0..n).map(|i| p.strict_down(i)).collect();
    let first: Vec<FixedBitSet> = (0..n)
        .into_par_iter()
        .map(|x| {
            let gaps: Vec<FixedBitSet> = up[x]
                .ones()
                .map(|a| {
                    let mut g = up[x].clone();
                    g.intersect_with(&down[a]);
                    g
                })
                .collect();
            let mut out = FixedBitSet::with_capacity(n);
            for q in 0..n {
                if gaps.iter().all(|g| meets(g, p.leq.pred(q))) {
                    out.insert(q);
                }
            }
            out
        })
        .collect();
    // second conjunct, by duality: ∀c < q ∃d: c < d < q ∧ p ≤ d
    let second: Vec<FixedBitSet> = (0..n)
        .into_par_iter()
        .map(|q| {
            let gaps: Vec<FixedBitSet> = down[q]
                .ones()
                .map(|c| {
                    let mut g = down[q].clone();
                    g.intersect_with(&up[c]);
                    g
                })
                .collect();
            let mut out = FixedBitSet::with_capacity(n);
            for x in 0..n {
                if gaps.iter().all(|g| meets(g, p.leq.succ(x))) {
                    out.insert(x);
                }
            }
            out
        })
        .collect();
    (first, second)
}

/// γ with both quantifiers read literally. Maximal `p` and minimal `q` satisfy
/// them vacuously, so this relation can relate unrelated or equal points.
pub fn derive_gamma_literal(p: &FinitePoset) -> RelationMatrix {
    let (first, second) = gamma_parts(p);
    RelationMatrix::from_fn(p.len(), |x, q| first[x].contains(q) && second[q].contains(x))
}

/// γ restricted to `p < q`, which is what a chronology derived from `≤` needs.
pub fn derive_gamma(p: &FinitePoset) -> RelationMatrix {
    let (first, second) = gamma_parts(p);
    RelationMatrix::from_fn(p.len(), |x, q| p.lt(x, q) && first[x].contains(q) && second[q].contains(x))
}

#[derive(Clone, Debug, Serialize)]
pub struct CausalSetVerdict {
    pub is_causal_set: bool,
    pub gamma_pairs: usize,
    pub report: RelationReport,
    pub failing: Vec<String>,
}

/// Whether `(X, γ(≤))` is a chronological set.
pub fn is_causal_set(p: &FinitePoset) -> Result<CausalSetVerdict> {
    let g = derive_gamma(p);
    let rel = ExplicitRelation { ids: p.points.clone(), rel: g.clone() };
    let report = validate_chron(&rel, &rel.window())?;
    let mut failing = Vec::new();
    for (ok, name) in [(report.irreflexive, "irreflexive"), (report.transitive, "transitive"), (report.connex, "connex"), (report.separable, "separable")] {
        if !ok {
            failing.push(name.to_string());
        }
    }
    Ok(CausalSetVerdict { is_causal_set: failing.is_empty(), gamma_pairs: g.count(), report, failing })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Comparison {
    Equal,
    ProperSubset,
    Superset,
    Incomparable,
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundTrip {
    /// How `α(γ(≤))` compares with `≤`.
    pub comparison: Comparison,
    /// Pairs of `≤` missing from `α(γ(≤))`.
    pub missing: Vec<(usize, usize)>,
    /// Pairs of `α(γ(≤))` outside `≤`.
    pub extra: Vec<(usize, usize)>,
}

pub fn alpha_gamma_roundtrip(p: &FinitePoset) -> RoundTrip {
    let ag = derive_gamma(p).alpha();
    let missing: Vec<(usize, usize)> = p.leq.pairs().filter(|&(i, j)| !ag.get(i, j)).collect();
    let extra: Vec<(usize, usize)> = ag.pairs().filter(|&(i, j)| !p.leq.get(i, j)).collect();
    let comparison = match (missing.is_empty(), extra.is_empty()) {
        (true, true) => Comparison::Equal,
        (false, true) => Comparison::ProperSubset,
        (true, false) => Comparison::Superset,
        (false, false) => Comparison::Incomparable,
    };
    RoundTrip { comparison, missing, extra }
}

#[derive(Clone, Debug, Serialize)]
pub struct FilterReport {
    /// Nonempty up-directed down-closed subsets.
    pub ideals: Vec<Vec<usize>>,
    pub principal: usize,
    pub non_principal: Vec<Vec<usize>>,
}

/// Enumerates the directed down-sets of a poset with at most 16 points and
/// compares them with the principal ideals `J⁻(x)`.
pub fn directed_down_sets(p: &FinitePoset) -> Result<FilterReport> {
    let n = p.len();
    if n > 16 {
        return Err(Error::Precondition(format!("directed down-set enumeration is brute force; {n} points exceed 16")));
    }
    let mut ideals = Vec::new();
    for mask in 1u32..(1u32 << n) {
        let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let down = members.iter().all(|&m| p.leq.pred(m).ones().all(|k| mask >> k & 1 == 1));
        let directed = down && members.iter().all(|&a| members.iter().all(|&b| members.iter().any(|&c| p.leq.get(a, c) && p.leq.get(b, c))));
        if directed {
            ideals.push(members);
        }
    }
    let principal_sets: Vec<Vec<usize>> = (0..n).map(|x| p.leq.pred(x).ones().collect()).collect();
    let non_principal: Vec<Vec<usize>> = ideals.iter().filter(|s| !principal_sets.contains(s)).cloned().collect();
    Ok(FilterReport { principal: ideals.len() - non_principal.len(), ideals, non_principal })
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaDisagreement {
    pub h: f64,
    /// Ordered pairs of common-window points.
    pub pairs: usize,
    /// Pairs where γ differs from the open cone `|Δx| < Δt`.
    pub disagreements: usize,
    pub gamma_pairs: usize,
}

/// γ of the Minkowski grid order at pitch `h`, compared with the open-cone
/// chronology on the points of the `coarse` grid.
pub fn gamma_disagreement(h: f64, coarse: f64) -> GammaDisagreement {
    let (poset, pts) = FinitePoset::minkowski_grid(h);
    let g = derive_gamma(&poset);
    let on_coarse = |p: &Point| {
        let r = |v: f64| ((v / coarse).round() * coarse - v).abs() < 1e-9;
        r(p.t) && r(p.x)
    };
    let common: Vec<usize> = (0..pts.len()).filter(|&i| on_coarse(&pts[i])).collect();
    let mut disagreements = 0;
    for &a in &common {
        for &b in &common {
            let cone = pts[b].t - pts[a].t > (pts[b].x - pts[a].x).abs() + 1e-12;
            if cone != g.get(a, b) {
                disagreements += 1;
            }
        }
    }
    GammaDisagreement { h, pairs: common.len() * common.len(), disagreements, gamma_pairs: g.count() }
}

#[derive(Clone, Debug, Serialize)]
pub struct AchronalityWitness {
    pub handle: String,
    pub point: Point,
    pub h: f64,
    /// `subset` for `p ⊆ I⁻(x)`, `chron` for `p ≪_BS I⁻(x)`.
    pub kind: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AchronalityReport {
    pub handles: Vec<String>,
    pub resolutions: Vec<f64>,
    pub points_checked: usize,
    pub witnesses: Vec<AchronalityWitness>,
}

impl AchronalityReport {
    pub fn holds(&self) -> bool {
        self.witnesses.is_empty()
    }
}

/// Searches window points `x` with `p ⊆ I⁻(x)` (every generator point below
/// `x`) or `p ≪_BS I⁻(x)`, for each handle `p` and resolution.
pub fn achronality_check(oracle: &dyn Chronology, handles: &[IpHandle], bounds: &WindowBounds, hs: &[f64], depth: usize) -> Result<AchronalityReport> {
    let mut witnesses = Vec::new();
    let mut checked = 0;
    for &h in hs {
        let w = oracle.sample(h, bounds);
        checked += w.len();
        for hd in handles {
            let gens: Vec<Point> = match hd.chain() {
                Some(c) => (0..depth).map_while(|n| c.at(n)).collect(),
                None => vec![hd.point().unwrap()],
            };
            let found: Vec<AchronalityWitness> = w
                .points
                .par_iter()
                .filter_map(|x| {
                    if gens.iter().all(|g| oracle.chron(g, x)) {
                        return Some(AchronalityWitness { handle: hd.label.clone(), point: *x, h, kind: "subset".into() });
                    }
                    None
                })
                .collect();
            let n_found = found.len();
            witnesses.extend(found);
            if n_found == 0 {
                // Budić–Sachs relation to a few PIPs near the top of the window
                for x in w.points.iter().rev().step_by((w.len() / 64).max(1)) {
                    if bs_chron(oracle, hd, &IpHandle::pip("x", *x), &w, depth)?.related {
                        witnesses.push(AchronalityWitness { handle: hd.label.clone(), point: *x, h, kind: "chron".into() });
                        break;
                    }
                }
            }
        }
    }
    Ok(AchronalityReport { handles: handles.iter().map(|h| h.label.clone()).collect(), resolutions: hs.to_vec(), points_checked: checked, witnesses })
}
