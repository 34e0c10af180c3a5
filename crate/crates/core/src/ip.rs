//! Indecomposable past sets: handles, realisation on windows, the GKP
//! characterisation, the Budic–Sachs chronology and endpoint maps.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chron::{alpha_window, chron_matrix, Chronology};
use crate::error::{Error, Result};
use crate::point::{Point, PointSet, SampleWindow};
use crate::relation::RelationMatrix;

pub const DEFAULT_DEPTH: usize = 64;
pub const MAX_DEPTH: usize = 1024;

/// Rule generating a chain `n ↦ c(n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainSpec {
    /// `c(n) = target + (start − target)·ratioⁿ`.
    Geometric { start: Point, target: Point, ratio: f64 },
    /// `c(n) = start + n·step`.
    Linear { start: Point, step: Point },
    /// A finite chain.
    Explicit { points: Vec<Point> },
}

impl ChainSpec {
    pub fn at(&self, n: usize) -> Option<Point> {
        match self {
            ChainSpec::Geometric { start, target, ratio } => {
                let r = ratio.powi(n as i32);
                Some(Point::new3(
                    target.t + (start.t - target.t) * r,
                    target.x + (start.x - target.x) * r,
                    target.y + (start.y - target.y) * r,
                ))
            }
            ChainSpec::Linear { start, step } => {
                let k = n as f64;
                Some(Point::new3(start.t + k * step.t, start.x + k * step.x, start.y + k * step.y))
            }
            ChainSpec::Explicit { points } => points.get(n).copied(),
        }
    }

    pub fn len(&self) -> Option<usize> {
        match self {
            ChainSpec::Explicit { points } => Some(points.len()),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    Point(Point),
    Chain(ChainSpec),
}

/// An indecomposable past set given by its generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IpHandle {
    pub label: String,
    pub generator: Generator,
}

impl IpHandle {
    pub fn pip(label: impl Into<String>, p: Point) -> Self {
        IpHandle { label: label.into(), generator: Generator::Point(p) }
    }

    pub fn tip(label: impl Into<String>, chain: ChainSpec) -> Self {
        IpHandle { label: label.into(), generator: Generator::Chain(chain) }
    }

    pub fn point(&self) -> Option<Point> {
        match &self.generator {
            Generator::Point(p) => Some(*p),
            Generator::Chain(_) => None,
        }
    }

    pub fn chain(&self) -> Option<&ChainSpec> {
        match &self.generator {
            Generator::Chain(c) => Some(c),
            Generator::Point(_) => None,
        }
    }

    /// Number of generator points used at depth `depth`; geometric chains stop
    /// once consecutive points coincide in floating point.
    fn used(&self, depth: usize) -> usize {
        match &self.generator {
            Generator::Point(_) => 1,
            Generator::Chain(c @ ChainSpec::Geometric { .. }) => {
                let mut prev = c.at(0).unwrap();
                for n in 1..depth {
                    let cur = c.at(n).unwrap();
                    if cur == prev {
                        return n;
                    }
                    prev = cur;
                }
                depth
            }
            Generator::Chain(c) => c.len().map_or(depth, |l| l.min(depth)),
        }
    }

    /// The last generator point used at depth `depth`.
    pub fn top(&self, depth: usize) -> Option<Point> {
        match &self.generator {
            Generator::Point(p) => Some(*p),
            Generator::Chain(c) => self.used(depth).checked_sub(1).and_then(|n| c.at(n)),
        }
    }
}

/// How consecutive chain points are related.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Link {
    Chron,
    Alpha,
    Curve,
}

fn link(oracle: &dyn Chronology, a: &Point, b: &Point) -> Option<Link> {
    if oracle.chron(a, b) {
        Some(Link::Chron)
    } else if a != b && oracle.alpha(a, b) == Some(true) {
        Some(Link::Alpha)
    } else if a != b && oracle.causal(a, b) == Some(true) {
        Some(Link::Curve)
    } else {
        None
    }
}

/// Verifies the chain certificate up to `depth`; returns whether every link
/// pushes pasts up, so that the last point alone decides membership.
pub fn check_certificate(oracle: &dyn Chronology, handle: &IpHandle, depth: usize) -> Result<bool> {
    let Some(chain) = handle.chain() else { return Ok(true) };
    let n = handle.used(depth);
    let mut monotone = true;
    let mut prev = match chain.at(0) {
        Some(p) => p,
        None => return Err(Error::Precondition(format!("chain `{}` is empty", handle.label))),
    };
    for k in 1..n {
        let cur = chain.at(k).unwrap();
        match link(oracle, &prev, &cur) {
            Some(Link::Curve) => monotone = false,
            Some(_) => {}
            None => return Err(Error::Certificate(k - 1, k)),
        }
        prev = cur;
    }
    Ok(monotone)
}

/// `∃n < depth: x ≪ c(n)`.
pub fn member(oracle: &dyn Chronology, handle: &IpHandle, x: &Point, depth: usize) -> bool {
    match &handle.generator {
        Generator::Point(p) => oracle.chron(x, p),
        Generator::Chain(c) => (0..handle.used(depth)).any(|n| oracle.chron(x, &c.at(n).unwrap())),
    }
}

/// Window points in the handle's past at chain depth `depth`.
pub fn realize(oracle: &dyn Chronology, handle: &IpHandle, window: &SampleWindow, depth: usize) -> Result<PointSet> {
    if depth == 0 {
        return Err(Error::Precondition("depth must be at least 1".into()));
    }
    let monotone = check_certificate(oracle, handle, depth)?;
    let pts = &window.points;
    let flags: Vec<bool> = if monotone {
        let top = handle.top(depth).unwrap();
        pts.par_iter().map(|x| oracle.chron(x, &top)).collect()
    } else {
        pts.par_iter().map(|x| member(oracle, handle, x, depth)).collect()
    };
    Ok(window.set_from_indexed(|i, _| flags[i]))
}

/// Realisation with depth doubling from the default until the window set stabilises.
pub fn realize_stable(oracle: &dyn Chronology, handle: &IpHandle, window: &SampleWindow) -> Result<(PointSet, usize)> {
    let mut depth = DEFAULT_DEPTH;
    let mut cur = realize(oracle, handle, window, depth)?;
    if handle.chain().and_then(|c| c.len()).is_some() || handle.point().is_some() {
        return Ok((cur, depth));
    }
    while depth < MAX_DEPTH {
        let next = realize(oracle, handle, window, depth * 2)?;
        if next == cur {
            return Ok((cur, depth));
        }
        depth *= 2;
        cur = next;
    }
    Err(Error::Indeterminate(format!("handle `{}` not stable at depth {MAX_DEPTH}", handle.label)))
}

/// Outcome of the two indecomposability tests.
#[derive(Clone, Debug, Serialize)]
pub struct IndecompVerdict {
    pub indecomposable: bool,
    /// Directedness of the set under the causal preorder.
    pub directed: bool,
    /// Result of the decomposition search (`None` above 20 points).
    pub decomposition_search: Option<bool>,
    /// A pair with no common upper bound inside the set.
    pub witness: Option<(usize, usize)>,
    /// A decomposition found by the search, as two window index lists.
    pub decomposition: Option<(Vec<usize>, Vec<usize>)>,
}

pub const SEARCH_LIMIT: usize = 20;

/// Tests indecomposability of `a` under the window preorder `pre`
/// (reflexive, transitive): directedness, and for small sets an exhaustive
/// search for two proper down-closed subsets covering `a`.
pub fn is_indecomposable(pre: &RelationMatrix, a: &PointSet) -> Result<IndecompVerdict> {
    let members: Vec<usize> = a.ones().collect();
    if members.is_empty() {
        return Err(Error::Precondition("indecomposability of the empty set".into()));
    }
    let mut witness = None;
    'outer: for (ii, &p) in members.iter().enumerate() {
        for &q in &members[ii + 1..] {
            let mut ub = pre.succ(p).clone();
            ub.intersect_with(pre.succ(q));
            ub.intersect_with(a);
            if ub.is_clear() {
                witness = Some((p, q));
                break 'outer;
            }
        }
    }
    let directed = witness.is_none();
    let mut search = None;
    let mut decomposition = None;
    if members.len() <= SEARCH_LIMIT {
        let k = members.len();
        let full: u32 = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };
        // below[i]: members ⪯ members[i], as a mask over members
        let below: Vec<u32> = members
            .iter()
            .map(|&m| (0..k).filter(|&j| pre.get(members[j], m)).fold(0u32, |acc, j| acc | (1 << j)))
            .collect();
        let mut found = None;
        for d1 in 1..full {
            let closed = (0..k).filter(|&i| d1 & (1 << i) != 0).all(|i| below[i] & !d1 == 0);
            if !closed {
                continue;
            }
            let d2 = (0..k).filter(|&i| d1 & (1 << i) == 0).fold(0u32, |acc, i| acc | below[i]);
            if d2 != full {
                found = Some((d1, d2));
                break;
            }
        }
        search = Some(found.is_some());
        decomposition = found.map(|(d1, d2)| {
            let pick = |m: u32| (0..k).filter(|&i| m & (1 << i) != 0).map(|i| members[i]).collect();
            (pick(d1), pick(d2))
        });
        if found.is_some() == directed {
            return Err(Error::Consistency(format!(
                "indecomposability tests disagree: directed = {directed}, decomposition = {decomposition:?}, witness = {witness:?}"
            )));
        }
    }
    Ok(IndecompVerdict { indecomposable: directed, directed, decomposition_search: search, witness, decomposition })
}

/// Chain produced by the inductive synoptic construction.
#[derive(Clone, Debug)]
pub struct ChainResult {
    /// Window indices of the chain, increasing.
    pub indices: Vec<usize>,
    pub points: Vec<Point>,
    /// Window points chronologically below some chain point.
    pub realized: PointSet,
}

impl ChainResult {
    pub fn handle(&self, label: impl Into<String>) -> IpHandle {
        IpHandle::tip(label, ChainSpec::Explicit { points: self.points.clone() })
    }
}

/// Builds a chain inside `a` whose past recovers `a`: walk through the members
/// and at each step pick a common upper bound (in `a`) of the current chain
/// point and the next member, preferring chronological successors.
pub fn chain_for_ip(chron: &RelationMatrix, pre: &RelationMatrix, window: &SampleWindow, a: &PointSet, label: &str) -> Result<ChainResult> {
    let members: Vec<usize> = a.ones().collect();
    let Some(&first) = members.first() else {
        return Err(Error::Precondition("chain for an empty set".into()));
    };
    let mut chain = vec![first];
    let mut cur = first;
    for &q in &members[1..] {
        if pre.get(q, cur) {
            continue;
        }
        let mut ub = pre.succ(cur).clone();
        ub.intersect_with(pre.succ(q));
        ub.intersect_with(a);
        let mut strict = chron.succ(cur).clone();
        strict.intersect_with(&ub);
        let pick = |s: &PointSet| s.ones().min_by(|&i, &j| window.points[i].t.total_cmp(&window.points[j].t).then(i.cmp(&j)));
        let next = pick(&strict).or_else(|| pick(&ub).filter(|&i| i != cur));
        match next {
            Some(n) => {
                chain.push(n);
                cur = n;
            }
            None => return Err(Error::NotSynoptic(label.into(), cur, q)),
        }
    }
    let realized = chron.down_of(&{
        let mut s = window.empty_set();
        for &i in &chain {
            s.insert(i);
        }
        s
    });
    Ok(ChainResult { points: chain.iter().map(|&i| window.points[i]).collect(), indices: chain, realized })
}

/// `I⁻(p) ⊆ I⁻(z)`, analytically when possible, else on the window.
fn past_contained(oracle: &dyn Chronology, window: &SampleWindow, p: &Point, z: &Point) -> bool {
    oracle
        .past_contained(p, z)
        .unwrap_or_else(|| window.points.iter().all(|w| !oracle.chron(w, p) || oracle.chron(w, z)))
}

#[derive(Clone, Debug, Serialize)]
pub struct BsVerdict {
    pub related: bool,
    pub witness: Option<Point>,
    /// No witness was found in the window; a larger window might contain one.
    pub window_limited: bool,
}

/// `A ≪_BS B`: some window point of `B` lies in the joint future of `A`. For a
/// point or chain generator the joint future of the past is exactly the set of
/// `z` with `I⁻(top) ⊆ I⁻(z)`.
pub fn bs_chron(oracle: &dyn Chronology, a: &IpHandle, b: &IpHandle, window: &SampleWindow, depth: usize) -> Result<BsVerdict> {
    check_certificate(oracle, a, depth)?;
    let monotone_b = check_certificate(oracle, b, depth)?;
    let top_a = a.top(depth).ok_or_else(|| Error::Precondition(format!("empty handle `{}`", a.label)))?;
    let top_b = b.top(depth).unwrap();
    let witness = window.points.iter().find(|z| {
        let in_b = if monotone_b { oracle.chron(z, &top_b) } else { member(oracle, b, z, depth) };
        in_b && past_contained(oracle, window, &top_a, z)
    });
    Ok(BsVerdict { related: witness.is_some(), witness: witness.copied(), window_limited: witness.is_none() })
}

/// Handle ⊆ handle as window inclusion after erosion by `margin`.
pub fn handle_subset(
    oracle: &dyn Chronology,
    a: &IpHandle,
    b: &IpHandle,
    window: &SampleWindow,
    depth: usize,
    margin: f64,
) -> Result<bool> {
    let ra = realize(oracle, a, window, depth)?;
    let rb = realize(oracle, b, window, depth)?;
    Ok(window.subset_up_to(&ra, &rb, margin))
}

/// A family of handles with its pairwise relations on one window.
#[derive(Clone, Debug)]
pub struct IpFamilyWindow {
    pub handles: Vec<IpHandle>,
    pub realized: Vec<PointSet>,
    pub bs: RelationMatrix,
    pub subset: RelationMatrix,
    pub h: f64,
    pub margin: f64,
    pub depth: usize,
}

#[derive(Serialize)]
struct FamilyDoc<'a> {
    handles: &'a [IpHandle],
    bs: Vec<(usize, usize)>,
    subset: Vec<(usize, usize)>,
    window_points: usize,
    h: f64,
    margin: f64,
    depth: usize,
}

impl IpFamilyWindow {
    pub fn build(oracle: &dyn Chronology, handles: Vec<IpHandle>, window: &SampleWindow, depth: usize, margin: f64) -> Result<Self> {
        let realized = handles.iter().map(|hd| realize(oracle, hd, window, depth)).collect::<Result<Vec<_>>>()?;
        let n = handles.len();
        let bs_rows: Vec<Vec<bool>> = (0..n)
            .into_par_iter()
            .map(|i| (0..n).map(|j| bs_chron(oracle, &handles[i], &handles[j], window, depth).map(|v| v.related)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let bs = RelationMatrix::from_fn(n, |i, j| bs_rows[i][j]);
        let eroded: Vec<PointSet> = realized.iter().map(|r| window.erode(r, margin)).collect();
        let subset = RelationMatrix::from_fn(n, |i, j| eroded[i].is_subset(&realized[j]));
        Ok(IpFamilyWindow { handles, realized, bs, subset, h: window.h, margin, depth })
    }

    pub fn to_json(&self, window: &SampleWindow) -> Result<String> {
        let doc = FamilyDoc {
            handles: &self.handles,
            bs: self.bs.pairs().collect(),
            subset: self.subset.pairs().collect(),
            window_points: window.len(),
            h: self.h,
            margin: self.margin,
            depth: self.depth,
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    /// Pairs related by ⊆ both ways although their handles differ.
    pub fn antisymmetry_failures(&self) -> Vec<(usize, usize)> {
        self.subset.pairs().filter(|&(i, j)| i < j && self.subset.get(j, i)).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BsIdentityReport {
    pub pairs: usize,
    /// `(i, j, alpha, subset)` for disagreeing ordered pairs.
    pub mismatches: Vec<(usize, usize, bool, bool)>,
    pub past_reflecting: bool,
    pub reflection_witnesses: Vec<(usize, usize)>,
}

impl BsIdentityReport {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty() && self.past_reflecting
    }
}

/// Compares `α(≪_BS)` with window inclusion on the first `members` handles of
/// `family`; the remaining handles act as probes sampling `I±_BS`.
pub fn check_bs_identity(family: &IpFamilyWindow, members: usize) -> BsIdentityReport {
    let al = family.bs.alpha();
    let mut rep = BsIdentityReport { pairs: 0, mismatches: Vec::new(), past_reflecting: true, reflection_witnesses: Vec::new() };
    for i in 0..members {
        for j in 0..members {
            rep.pairs += 1;
            let (a, s) = (al.get(i, j), family.subset.get(i, j));
            if a != s {
                rep.mismatches.push((i, j, a, s));
            }
            // I⁻(A) ⊆ I⁻(B) ⇒ I⁺(B) ⊆ I⁺(A)
            if family.bs.pred(i).is_subset(family.bs.pred(j)) && !family.bs.succ(j).is_subset(family.bs.succ(i)) {
                rep.past_reflecting = false;
                rep.reflection_witnesses.push((i, j));
            }
        }
    }
    rep
}

/// `x ↦ I⁻(x)`.
pub fn i_embed(oracle: &dyn Chronology, p: Point) -> Result<IpHandle> {
    if !oracle.admissible(&p) {
        return Err(Error::Domain(p, oracle.name()));
    }
    Ok(IpHandle::pip(format!("I-{p}"), p))
}

/// Chain generators whose limit is not a point of the space.
pub fn is_boundary_handle(oracle: &dyn Chronology, handle: &IpHandle) -> bool {
    match handle.chain() {
        None => false,
        Some(_) => match chain_limit(handle, &|p| *p, MAX_DEPTH, 1e-9) {
            Ok(p) => !oracle.admissible(&p),
            Err(_) => true,
        },
    }
}

/// Members of the family with no ≪_BS successor in the family.
pub fn future_boundary(family: &IpFamilyWindow) -> Vec<usize> {
    (0..family.handles.len()).filter(|&i| family.bs.succ(i).is_clear()).collect()
}

fn chain_limit(handle: &IpHandle, embed: &dyn Fn(&Point) -> Point, depth: usize, tol: f64) -> Result<Point> {
    let chain = handle.chain().unwrap();
    let n = handle.used(depth);
    if n == 0 {
        return Err(Error::Precondition("empty chain".into()));
    }
    let img: Vec<Point> = (0..n).map(|k| embed(&chain.at(k).unwrap())).collect();
    let d = |a: &Point, b: &Point| ((a.t - b.t).powi(2) + (a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt();
    if n < 3 {
        return Ok(img[n - 1]);
    }
    let steps: Vec<f64> = img.windows(2).map(|w| d(&w[0], &w[1])).collect();
    let last = steps[steps.len() - 1];
    let prev = steps[steps.len() - 2];
    // geometric tail estimate of the remaining distance
    let rest = if last < prev {
        last * last / (prev - last)
    } else if last <= 1e-12 {
        // steps at rounding level
        last
    } else {
        f64::INFINITY
    };
    if !(rest <= tol || last == 0.0) {
        return Err(Error::Convergence(format!(
            "image of chain `{}` is not Cauchy at depth {n} (last step {last:.3e})",
            handle.label
        )));
    }
    let (a, b, c) = (img[n - 3], img[n - 2], img[n - 1]);
    let aitken = |x0: f64, x1: f64, x2: f64| {
        let den = x2 - 2.0 * x1 + x0;
        if den.abs() < 1e-300 {
            x2
        } else {
            x2 - (x2 - x1).powi(2) / den
        }
    };
    Ok(Point::new3(aitken(a.t, b.t, c.t), aitken(a.x, b.x, c.x), aitken(a.y, b.y, c.y)))
}

/// An embedding of a space into a larger one, with its partial inverse.
pub struct Cfc {
    pub name: String,
    pub source: std::sync::Arc<dyn Chronology>,
    pub target: std::sync::Arc<dyn Chronology>,
    pub embed: fn(&Point) -> Point,
    pub inverse: fn(&Point) -> Point,
}

/// `ε_E`: the endpoint of `E ∘ c`, by Cauchy detection with depth doubling.
pub fn endpoint_map(cfc: &Cfc, handle: &IpHandle, tol: f64) -> Result<Point> {
    match &handle.generator {
        Generator::Point(p) => Ok((cfc.embed)(p)),
        Generator::Chain(c) => {
            if c.len().is_some() {
                return chain_limit(handle, &cfc.embed, MAX_DEPTH, tol);
            }
            let mut depth = DEFAULT_DEPTH;
            loop {
                match chain_limit(handle, &cfc.embed, depth, tol) {
                    Ok(p) => return Ok(p),
                    Err(e) if depth >= MAX_DEPTH => return Err(e),
                    Err(_) => depth *= 2,
                }
            }
        }
    }
}

/// `s̄(p) = E⁻¹(I⁻_N(p))` as a handle: a PIP for points of the source,
/// otherwise a chain climbing to `p` from below in time.
pub fn s_bar(cfc: &Cfc, p: &Point) -> IpHandle {
    let q = (cfc.inverse)(p);
    if cfc.source.admissible(&q) {
        IpHandle::pip(format!("sbar{p}"), q)
    } else {
        let start = Point::new3(q.t - 0.25, q.x, q.y);
        IpHandle::tip(format!("sbar{p}"), ChainSpec::Geometric { start, target: q, ratio: 0.5 })
    }
}

/// Window preorder `⪯ = α(≪)` and the chronology matrix.
pub fn window_orders(oracle: &dyn Chronology, window: &SampleWindow) -> (RelationMatrix, RelationMatrix) {
    let c = chron_matrix(oracle, window);
    let a = c.alpha();
    (c, a)
}

/// Window-literal `α` between arbitrary points (used when no closed form exists).
pub fn alpha_on_window(oracle: &dyn Chronology, window: &SampleWindow, p: &Point, q: &Point) -> bool {
    oracle.alpha(p, q).unwrap_or_else(|| alpha_window(oracle, window, p, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{make_space, Flat, FlatKind};
    use crate::point::WindowBounds;

    fn strip_window(h: f64) -> (Flat, SampleWindow) {
        let s = Flat::new(FlatKind::Strip);
        let w = s.sample(h, &WindowBounds::rect((0.0, 1.0), (0.0, 1.0)));
        (s, w)
    }

    #[test]
    fn pip_realizes_open_cone() {
        let (s, w) = strip_window(1.0 / 16.0);
        let r = realize(&s, &IpHandle::pip("p", Point::new(0.5, 0.5)), &w, 1).unwrap();
        let expect = w.set_from(|x| (x.x - 0.5).abs() < 0.5 - x.t);
        assert_eq!(r, expect);
        assert!(realize(&s, &IpHandle::pip("p", Point::new(0.5, 0.5)), &w, 0).is_err());
    }

    #[test]
    fn vertical_chain_realizes_boundary_tip() {
        let (s, w) = strip_window(1.0 / 16.0);
        let tip = IpHandle::tip(
            "t",
            ChainSpec::Geometric { start: Point::new(0.5, 0.5), target: Point::new(1.0, 0.5), ratio: 0.5 },
        );
        let r = realize(&s, &tip, &w, DEFAULT_DEPTH).unwrap();
        let expect = w.set_from(|x| x.t < 1.0 - (x.x - 0.5).abs());
        assert!(w.equal_up_to(&r, &expect, 2.0 / 16.0));
        assert!(is_boundary_handle(&s, &tip));
    }

    #[test]
    fn non_monotone_chain_is_rejected() {
        let (s, w) = strip_window(0.25);
        let bad = IpHandle::tip("bad", ChainSpec::Explicit { points: vec![Point::new(0.5, 0.5), Point::new(0.25, 0.5)] });
        assert!(matches!(realize(&s, &bad, &w, 4), Err(Error::Certificate(0, 1))));
    }

    #[test]
    fn bs_chron_examples() {
        let (s, w) = strip_window(1.0 / 16.0);
        let a = IpHandle::pip("a", Point::new(0.5, 0.5));
        let b = IpHandle::pip("b", Point::new(0.9, 0.5));
        let v = bs_chron(&s, &a, &b, &w, 1).unwrap();
        assert!(v.related);
        let z = v.witness.unwrap();
        assert!(s.chron(&z, &Point::new(0.9, 0.5)) && (z.x - 0.5).abs() <= z.t - 0.5);
        assert!(!bs_chron(&s, &a, &a, &w, 1).unwrap().related);
        let cyl = make_space("cylinder", 0.125).unwrap();
        let cw = cyl.window();
        let p = IpHandle::pip("p", Point::new(0.0, -1.0));
        let q = IpHandle::pip("q", Point::new(2.0, -1.0));
        assert!(bs_chron(cyl.oracle.as_ref(), &p, &q, &cw, 1).unwrap().related);
    }

    #[test]
    fn indecomposability_of_cones_and_unions() {
        let (s, w) = strip_window(1.0 / 8.0);
        let (c, pre) = window_orders(&s, &w);
        let p = w.locate(&Point::new(0.5, 0.5)).unwrap();
        let mut single = w.empty_set();
        single.insert(p);
        let cone = pre.down_of(&single);
        let v = is_indecomposable(&pre, &cone).unwrap();
        assert!(v.indecomposable && v.directed);
        let ch = chain_for_ip(&c, &pre, &w, &cone, "cone").unwrap();
        assert!(w.subset_up_to(&cone, &ch.realized, 2.0 / 8.0) && ch.realized.is_subset(&cone));

        let mut two = w.empty_set();
        two.insert(w.locate(&Point::new(0.25, 0.125)).unwrap());
        two.insert(w.locate(&Point::new(0.25, 0.875)).unwrap());
        let union = pre.down_of(&two);
        let v = is_indecomposable(&pre, &union).unwrap();
        assert!(!v.indecomposable);
        assert_eq!(v.decomposition_search, Some(true));
        assert!(matches!(chain_for_ip(&c, &pre, &w, &union, "u"), Err(Error::NotSynoptic(..))));
    }

    #[test]
    fn punctured_embedding_gap() {
        let s = make_space("punctured", 1.0 / 16.0).unwrap();
        let w = s.window();
        let a = i_embed(s.oracle.as_ref(), Point::new(-1.0, -1.0)).unwrap();
        let b = i_embed(s.oracle.as_ref(), Point::new(1.0, 1.0)).unwrap();
        assert!(handle_subset(s.oracle.as_ref(), &a, &b, &w, 1, 2.0 / 16.0).unwrap());
        assert_eq!(s.oracle.causal(&Point::new(-1.0, -1.0), &Point::new(1.0, 1.0)), Some(false));
        assert!(i_embed(s.oracle.as_ref(), Point::new(0.0, 0.0)).is_err());
    }
}
