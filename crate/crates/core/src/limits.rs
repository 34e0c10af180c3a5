//! Limit operators on sequences of indecomposable past sets: set-theoretic
//! liminf/limsup, the order-theoretic liminf±/limsup±, L₊ and L₋, and the
//! first-order diagnostics.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::chron::{chron_past, Chronology};
use crate::error::{Error, Result};
use crate::ip::{check_certificate, realize, Generator, IpHandle};
use crate::point::{Point, PointSet, SampleWindow};

/// Finite-range tail: from `n0` on, every value equals the value at one of
/// the `recurring` indices, and each of those recurs infinitely often.
#[derive(Clone, Debug, Serialize)]
pub struct TailDescriptor {
    pub n0: usize,
    pub recurring: Vec<usize>,
}

/// `n ↦ a(n)` as handles, with optional tail descriptor and limit candidate.
#[derive(Clone)]
pub struct HandleFamily {
    pub name: String,
    pub eval: Arc<dyn Fn(usize) -> IpHandle + Send + Sync>,
    pub tail: Option<TailDescriptor>,
    pub candidate: Option<IpHandle>,
}

impl std::fmt::Debug for HandleFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HandleFamily").field("name", &self.name).field("tail", &self.tail).finish()
    }
}

impl HandleFamily {
    pub fn new(name: impl Into<String>, eval: impl Fn(usize) -> IpHandle + Send + Sync + 'static) -> Self {
        HandleFamily { name: name.into(), eval: Arc::new(eval), tail: None, candidate: None }
    }

    pub fn with_tail(mut self, n0: usize, recurring: Vec<usize>) -> Self {
        self.tail = Some(TailDescriptor { n0, recurring });
        self
    }

    pub fn with_candidate(mut self, c: IpHandle) -> Self {
        self.candidate = Some(c);
        self
    }

    pub fn at(&self, n: usize) -> IpHandle {
        (self.eval)(n)
    }

    /// `m ↦ a(index(m))`; a tail descriptor is dropped unless the caller re-adds one.
    pub fn subsequence(&self, name: impl Into<String>, index: impl Fn(usize) -> usize + Send + Sync + 'static) -> Self {
        let eval = self.eval.clone();
        HandleFamily { name: name.into(), eval: Arc::new(move |m| eval(index(m))), tail: None, candidate: self.candidate.clone() }
    }

    /// Spot-checks the tail descriptor on `[n0, n0 + 64)`.
    pub fn check_tail(&self) -> Result<()> {
        let Some(t) = &self.tail else { return Ok(()) };
        if t.recurring.is_empty() {
            return Err(Error::Precondition(format!("family `{}`: empty recurring set", self.name)));
        }
        let reps: Vec<Generator> = t.recurring.iter().map(|&r| self.at(r).generator).collect();
        for n in t.n0..t.n0 + 64 {
            let g = self.at(n).generator;
            if !reps.contains(&g) {
                return Err(Error::Precondition(format!("family `{}`: value at {n} is outside the recurring set", self.name)));
            }
        }
        Ok(())
    }
}

/// Tolerances and horizon shared by the limit evaluations.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LimitConfig {
    pub horizon: usize,
    pub depth: usize,
    /// Set equality up to `margin · h`.
    pub margin: f64,
}

impl Default for LimitConfig {
    fn default() -> Self {
        LimitConfig { horizon: 256, depth: crate::ip::DEFAULT_DEPTH, margin: 2.0 }
    }
}

/// Set-theoretic liminf and limsup on a window.
#[derive(Clone, Debug)]
pub struct SetLimits {
    pub liminf: PointSet,
    pub limsup: PointSet,
    /// `exact` from a tail descriptor, else `tail[a,b]` with the stability check.
    pub mode: String,
}

/// liminf/limsup of window sets `n ↦ s(n)`; exact from `recurring` when
/// given, else tail intersections/unions over `[H/2, H]` that must agree with
/// those over `[H/4, H/2]` up to `tol`.
pub fn set_limits_of(
    sets: &(dyn Fn(usize) -> Result<PointSet> + Sync),
    recurring: Option<&[usize]>,
    window: &SampleWindow,
    horizon: usize,
    tol: f64,
) -> Result<SetLimits> {
    if horizon < 2 {
        return Err(Error::Precondition("horizon must be at least 2".into()));
    }
    let fold = |idx: Vec<usize>| -> Result<(PointSet, PointSet)> {
        let vals = idx.par_iter().map(|&n| sets(n)).collect::<Result<Vec<_>>>()?;
        let mut inf = window.full_set();
        let mut sup = window.empty_set();
        for v in &vals {
            inf.intersect_with(v);
            sup.union_with(v);
        }
        Ok((inf, sup))
    };
    if let Some(rec) = recurring {
        let (liminf, limsup) = fold(rec.to_vec())?;
        return Ok(SetLimits { liminf, limsup, mode: "exact".into() });
    }
    let (i1, s1) = fold((horizon / 4..=horizon / 2).collect())?;
    let (i2, s2) = fold((horizon / 2..=horizon).collect())?;
    if !window.equal_up_to(&i1, &i2, tol) || !window.equal_up_to(&s1, &s2, tol) {
        return Err(Error::Indeterminate(format!("tail limits not stable between horizons {} and {horizon}", horizon / 2)));
    }
    Ok(SetLimits { liminf: i2, limsup: s2, mode: format!("tail[{},{}]", horizon / 2, horizon) })
}

/// `set_liminf` / `set_limsup` of a handle family realised on a window.
pub fn set_limits(oracle: &dyn Chronology, fam: &HandleFamily, window: &SampleWindow, cfg: &LimitConfig) -> Result<SetLimits> {
    fam.check_tail()?;
    let sets = |n: usize| realize(oracle, &fam.at(n), window, cfg.depth);
    set_limits_of(&sets, fam.tail.as_ref().map(|t| t.recurring.as_slice()), window, cfg.horizon, cfg.margin * window.h)
}

/// Indices standing for the tail: the recurring ones, or `[H/2, H]`.
pub fn tail_indices(fam: &HandleFamily, horizon: usize) -> Vec<usize> {
    match &fam.tail {
        Some(t) => t.recurring.clone(),
        None => (horizon / 2..=horizon).collect(),
    }
}

/// `I⁻(v) ⊆ A` for a point `v` and a handle `A`, through the generator's top
/// point; `None` when the space has no closed form for past containment.
fn probe_in_handle(oracle: &dyn Chronology, v: &Point, a: &IpHandle, depth: usize) -> Option<bool> {
    let top = a.top(depth)?;
    oracle.past_contained(v, &top)
}

/// The order-theoretic liminf⁻ and limsup⁻, represented by the union of the
/// probe pasts `I⁻(v)` over window probes `v` whose past lies in every tail
/// value (liminf⁻) or in some tail value (limsup⁻).
#[derive(Clone, Debug)]
pub struct PmLimits {
    pub liminf: PointSet,
    pub limsup: PointSet,
    pub probes: usize,
}

pub fn pm_limits(oracle: &dyn Chronology, fam: &HandleFamily, window: &SampleWindow, cfg: &LimitConfig) -> Result<PmLimits> {
    let idx = tail_indices(fam, cfg.horizon);
    let handles: Vec<IpHandle> = idx.iter().map(|&n| fam.at(n)).collect();
    for hd in &handles {
        check_certificate(oracle, hd, cfg.depth)?;
    }
    let flags: Vec<Option<(bool, bool)>> = window
        .points
        .par_iter()
        .map(|v| {
            let mut all = true;
            let mut any = false;
            for hd in &handles {
                let c = probe_in_handle(oracle, v, hd, cfg.depth)?;
                all &= c;
                any |= c;
            }
            Some((all, any))
        })
        .collect();
    if flags.iter().any(Option::is_none) {
        return Err(Error::FamilyIncomplete(format!("{} has no closed-form past containment", oracle.name())));
    }
    let inf = window.set_from_indexed(|i, _| flags[i].unwrap().0);
    let sup = window.set_from_indexed(|i, _| flags[i].unwrap().1);
    Ok(PmLimits { liminf: chron_past(oracle, &inf, window), limsup: chron_past(oracle, &sup, window), probes: window.len() })
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitVerdict {
    pub operator: String,
    pub family: String,
    pub limits: Vec<IpHandle>,
    pub diagnostics: Vec<String>,
}

impl LimitVerdict {
    pub fn converges_to(&self, c: &IpHandle) -> bool {
        self.limits.iter().any(|l| l.generator == c.generator)
    }
}

/// `L₊`: candidates `v` with `I⁻(liminf) = I⁻(v) = I⁻(limsup)` up to the margin.
/// The liminf⁻/limsup⁻ probe form is evaluated as a cross-check where the
/// space has closed-form past containment; the two must agree.
pub fn l_plus(oracle: &dyn Chronology, fam: &HandleFamily, candidates: &[IpHandle], window: &SampleWindow, cfg: &LimitConfig) -> Result<LimitVerdict> {
    let tol = cfg.margin * window.h;
    let lim = set_limits(oracle, fam, window, cfg)?;
    let past_inf = chron_past(oracle, &lim.liminf, window);
    let past_sup = chron_past(oracle, &lim.limsup, window);
    let pm = match pm_limits(oracle, fam, window, cfg) {
        Ok(p) => Some(p),
        Err(Error::FamilyIncomplete(_)) => None,
        Err(e) => return Err(e),
    };
    let mut diagnostics = vec![
        format!("mode {}", lim.mode),
        format!("liminf {} limsup {} I-(liminf) {} I-(limsup) {}", lim.liminf.count_ones(..), lim.limsup.count_ones(..), past_inf.count_ones(..), past_sup.count_ones(..)),
    ];
    let mut limits = Vec::new();
    for c in candidates {
        let r = realize(oracle, c, window, cfg.depth)?;
        let set_form = |t: f64| window.equal_up_to(&past_inf, &r, t) && window.equal_up_to(&past_sup, &r, t);
        let primary = set_form(tol);
        if let Some(pm) = &pm {
            let probe_form = |t: f64| window.equal_up_to(&pm.liminf, &r, t) && window.equal_up_to(&pm.limsup, &r, t);
            let cross = probe_form(tol);
            // candidates at the tolerance edge may fall either way; only a
            // disagreement that survives doubling the tolerance is reported
            if (primary && !probe_form(2.0 * tol)) || (cross && !set_form(2.0 * tol)) {
                return Err(Error::Consistency(format!(
                    "L+ of `{}` at `{}`: set form says {primary}, probe form says {cross}",
                    fam.name, c.label
                )));
            }
        }
        if primary {
            limits.push(c.clone());
        }
    }
    if pm.is_none() {
        diagnostics.push("probe cross-check skipped: no closed-form past containment".into());
    }
    Ok(LimitVerdict { operator: "L+".into(), family: fam.name.clone(), limits, diagnostics })
}

/// `L₋`: enumerated IPs `P` with `P ⊆ liminf`, `P ⊆ limsup`, and no enumerated
/// `Q ⊆ limsup` strictly larger than `P` (inclusions after erosion by the margin,
/// strictness beyond twice the margin).
pub fn l_minus(oracle: &dyn Chronology, fam: &HandleFamily, enumerated: &[IpHandle], window: &SampleWindow, cfg: &LimitConfig) -> Result<LimitVerdict> {
    let tol = cfg.margin * window.h;
    let lim = set_limits(oracle, fam, window, cfg)?;
    let real = enumerated.par_iter().map(|c| realize(oracle, c, window, cfg.depth)).collect::<Result<Vec<_>>>()?;
    let eroded: Vec<PointSet> = real.iter().map(|r| window.erode(r, tol)).collect();
    let in_sup: Vec<bool> = eroded.iter().map(|e| e.is_subset(&lim.limsup)).collect();
    let mut limits = Vec::new();
    let mut touching = false;
    for i in 0..enumerated.len() {
        if !(eroded[i].is_subset(&lim.liminf) && in_sup[i]) {
            continue;
        }
        // Q ⊆ limsup only holds up to `tol`, so Q counts as strictly larger
        // only when it differs from P by more than twice that
        let dominated = (0..enumerated.len())
            .any(|j| j != i && in_sup[j] && eroded[i].is_subset(&real[j]) && !window.equal_up_to(&real[i], &real[j], 2.0 * tol));
        if !dominated {
            limits.push(enumerated[i].clone());
            touching |= real[i].ones().any(|k| window.neighbors(k, window.h * 1.5).len() < 8 && window.bounds.is_some());
        }
    }
    let mut diagnostics = vec![format!("mode {}", lim.mode), format!("{} enumerated", enumerated.len())];
    if touching {
        diagnostics.push("some limits touch the window edge".into());
    }
    Ok(LimitVerdict { operator: "L-".into(), family: fam.name.clone(), limits, diagnostics })
}

/// PIPs on a grid of pitch `pitch` within `radius` of each center, plus the
/// given boundary TIPs.
pub fn enumerate_near(oracle: &dyn Chronology, centers: &[Point], radius: f64, pitch: f64, extra: &[IpHandle]) -> Vec<IpHandle> {
    let mut out: Vec<IpHandle> = Vec::new();
    let k = (radius / pitch).round() as i64;
    for c in centers {
        for i in -k..=k {
            for j in -k..=k {
                let p = Point::new(c.t + i as f64 * pitch, c.x + j as f64 * pitch);
                if oracle.admissible(&p) && !out.iter().any(|h| h.point() == Some(p)) {
                    out.push(IpHandle::pip(format!("P{p}"), p));
                }
            }
        }
    }
    out.extend(extra.iter().cloned());
    out
}

/// Outcome of the slit warning example.
#[derive(Clone, Debug, Serialize)]
pub struct FirstOrderProbe {
    pub lplus_x: bool,
    pub lplus_y: Vec<bool>,
    pub probe: Point,
    pub witness: Point,
    /// `probe ≪ witness` and `witness ≤ x(n)` for all sampled `n`.
    pub in_liminf_past: bool,
    /// `probe ≪ y^k(l)` for no `k, l ≤ budget`; by push-up the probe then lies
    /// outside `I⁻(limsup)` of every diagonal family with index maps bounded by the budget.
    pub excluded_from_diagonals: bool,
    pub budget: usize,
}

impl FirstOrderProbe {
    pub fn holds(&self) -> bool {
        self.lplus_x && self.lplus_y.iter().all(|&b| b) && self.in_liminf_past && self.excluded_from_diagonals
    }
}

/// `x(n) = (1+1/n, 1+1/n)`, `y^n(k) = (1+1/n, 1+1/n+1/k)` on the slit plane.
pub fn slit_x(n: usize) -> Point {
    let s = 1.0 + 1.0 / n as f64;
    Point::new(s, s)
}

pub fn slit_y(n: usize, k: usize) -> Point {
    let s = 1.0 + 1.0 / n as f64;
    Point::new(s, s + 1.0 / k as f64)
}

/// Runs the warning example: `L₊(x) = {(1,1)}`, `L₊(y^j) = {x(j)}` for `j ≤ ys`,
/// then the probe scan over diagonals bounded by `budget`.
pub fn first_order_probe(oracle: &dyn Chronology, window: &SampleWindow, ys: usize, budget: usize, cfg: &LimitConfig) -> Result<FirstOrderProbe> {
    let xfam = HandleFamily::new("x", |n| IpHandle::pip(format!("x{n}"), slit_x(n + 1)));
    let x_inf = IpHandle::pip("x_inf", Point::new(1.0, 1.0));
    let lplus_x = l_plus(oracle, &xfam, std::slice::from_ref(&x_inf), window, cfg)?.converges_to(&x_inf);
    let lplus_y = (1..=ys)
        .map(|j| {
            let fam = HandleFamily::new(format!("y{j}"), move |k| IpHandle::pip(format!("y{j},{k}"), slit_y(j, k + 1)));
            let target = IpHandle::pip(format!("x{j}"), slit_x(j));
            l_plus(oracle, &fam, std::slice::from_ref(&target), window, cfg).map(|v| v.converges_to(&target))
        })
        .collect::<Result<Vec<_>>>()?;
    let probe = Point::new(-3.0, -1.0);
    let witness = Point::new(-1.0, -0.5);
    let in_liminf_past = oracle.chron(&probe, &witness)
        && (1..=cfg.horizon.max(budget)).all(|n| oracle.causal(&witness, &slit_x(n)).unwrap_or(false));
    let excluded_from_diagonals = (1..=budget).all(|k| (1..=budget).all(|l| !oracle.chron(&probe, &slit_y(k, l))));
    Ok(FirstOrderProbe { lplus_x, lplus_y, probe, witness, in_liminf_past, excluded_from_diagonals, budget })
}

/// The three closure-construction axioms of a sequential limit operator.
#[derive(Clone, Debug, Serialize)]
pub struct FrechetReport {
    pub constant: bool,
    pub subsequence: bool,
    /// For a family not converging to its candidate: an index rule whose
    /// subsequence has no further subsequence converging to it.
    pub non_limit_witness: Option<String>,
}

/// Axiom 1 on `constant`, axiom 2 on the even subsequence of `convergent`,
/// axiom 3 on the even and odd subsequences of `divergent`.
pub fn tau_plus_frechet_axioms(
    oracle: &dyn Chronology,
    constant: &HandleFamily,
    convergent: &HandleFamily,
    divergent: &HandleFamily,
    window: &SampleWindow,
    cfg: &LimitConfig,
) -> Result<FrechetReport> {
    let value = constant.at(0);
    let c = l_plus(oracle, constant, std::slice::from_ref(&value), window, cfg)?.converges_to(&value);
    let target = convergent.candidate.clone().ok_or_else(|| Error::Precondition("convergent family needs a candidate".into()))?;
    let even = convergent.subsequence(format!("{}-even", convergent.name), |m| 2 * m);
    let s = l_plus(oracle, convergent, std::slice::from_ref(&target), window, cfg)?.converges_to(&target)
        && l_plus(oracle, &even, std::slice::from_ref(&target), window, cfg)?.converges_to(&target);
    let bad = divergent.candidate.clone().ok_or_else(|| Error::Precondition("divergent family needs a candidate".into()))?;
    let mut witness = None;
    for (rule, f) in [("even", 0usize), ("odd", 1usize)] {
        let mut sub = divergent.subsequence(format!("{}-{rule}", divergent.name), move |m| 2 * m + f);
        if let Some(t) = &divergent.tail {
            // the tail values along the subsequence
            let reps: Vec<usize> = t.recurring.iter().copied().filter(|r| r % 2 == f).map(|r| (r - f) / 2).collect();
            if !reps.is_empty() {
                sub = sub.with_tail(t.n0 / 2, reps);
            }
        }
        // a subsequence with finite-range constant tail: every further
        // subsequence has the same set limits, so one L₊ evaluation decides
        let is_constant = sub.tail.as_ref().is_some_and(|t| t.recurring.len() == 1);
        if is_constant && !l_plus(oracle, &sub, std::slice::from_ref(&bad), window, cfg)?.converges_to(&bad) {
            witness = Some(format!("{rule} indices"));
            break;
        }
    }
    Ok(FrechetReport { constant: c, subsequence: s, non_limit_witness: witness })
}

/// Exploratory net limits over `ℕ²` with the product order: intersection and
/// union over the tail box `[N/2, N]²`.
pub fn net_limits(sets: &(dyn Fn(usize, usize) -> PointSet + Sync), window: &SampleWindow, n: usize) -> (PointSet, PointSet) {
    let mut inf = window.full_set();
    let mut sup = window.empty_set();
    for i in n / 2..=n {
        for j in n / 2..=n {
            let s = sets(i, j);
            inf.intersect_with(&s);
            sup.union_with(&s);
        }
    }
    (inf, sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{make_space, Flat, FlatKind};
    use crate::point::WindowBounds;

    fn strip(h: f64) -> (Flat, SampleWindow) {
        let s = Flat::new(FlatKind::Strip);
        let w = s.sample(h, &WindowBounds::rect((0.0, 1.0), (0.0, 1.0)));
        (s, w)
    }

    fn cfg() -> LimitConfig {
        LimitConfig { horizon: 64, depth: 64, margin: 2.0 }
    }

    #[test]
    fn constant_family_limits_are_its_value() {
        let (s, w) = strip(1.0 / 32.0);
        let p = IpHandle::pip("p", Point::new(0.5, 0.5));
        let q = p.clone();
        let fam = HandleFamily::new("const", move |_| q.clone()).with_tail(0, vec![0]);
        let lim = set_limits(&s, &fam, &w, &cfg()).unwrap();
        let r = realize(&s, &p, &w, 1).unwrap();
        assert_eq!(lim.liminf, r);
        assert_eq!(lim.limsup, r);
        assert!(l_plus(&s, &fam, std::slice::from_ref(&p), &w, &cfg()).unwrap().converges_to(&p));
        let en = enumerate_near(&s, &[Point::new(0.5, 0.5)], 2.0 / 32.0, 1.0 / 32.0, &[]);
        let lm = l_minus(&s, &fam, &en, &w, &cfg()).unwrap();
        assert!(lm.converges_to(&p), "{:?}", lm.limits.iter().map(|l| &l.label).collect::<Vec<_>>());
    }

    #[test]
    fn oscillating_family_on_minkowski() {
        let m = make_space("minkowski2", 1.0 / 32.0).unwrap();
        let w = m.window_at(1.0 / 32.0, &WindowBounds::rect((-1.0, 0.5), (-1.0, 1.0)));
        let fam = HandleFamily::new("osc", |n| {
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            IpHandle::pip(format!("a{n}"), Point::new(0.0, s / (n as f64 + 1.0)))
        });
        let lim = set_limits(m.oracle.as_ref(), &fam, &w, &cfg()).unwrap();
        assert!(lim.liminf.is_subset(&lim.limsup) && lim.liminf != lim.limsup);
        let target = IpHandle::pip("0", Point::new(0.0, 0.0));
        let v = l_plus(m.oracle.as_ref(), &fam, std::slice::from_ref(&target), &w, &cfg()).unwrap();
        assert!(v.converges_to(&target));
    }

    #[test]
    fn strip_liminf_is_not_past() {
        // a(n) = I⁻((1, 1/2 + 1/n)) keeps points on the null segment from (1, 1/2)
        let (s, w) = strip(1.0 / 32.0);
        let fam = HandleFamily::new("shift", |n| {
            let c = Point::new(1.0, 0.5 + 1.0 / (n as f64 + 1.0));
            IpHandle::tip(format!("a{n}"), crate::ip::ChainSpec::Geometric { start: Point::new(0.5, c.x), target: c, ratio: 0.5 })
        });
        let lim = set_limits(&s, &fam, &w, &LimitConfig { horizon: 4096, depth: 64, margin: 2.0 }).unwrap();
        let past = chron_past(&s, &lim.liminf, &w);
        assert!(past.is_subset(&lim.liminf));
        assert!(lim.liminf.difference(&past).count() > 0);
    }

    #[test]
    fn cylinder_alternating_has_no_lplus_limit() {
        let c = make_space("cylinder", 1.0 / 16.0).unwrap();
        let w = c.window_at(1.0 / 16.0, &WindowBounds::rect((-4.0, 1.0), (-std::f64::consts::PI, std::f64::consts::PI)));
        let fam = HandleFamily::new("alt", |n| IpHandle::pip(format!("a{n}"), Point::new(0.0, if n % 2 == 0 { 1.0 } else { -1.0 })))
            .with_tail(0, vec![0, 1]);
        let cands = vec![
            IpHandle::pip("a0", Point::new(0.0, 1.0)),
            IpHandle::pip("a1", Point::new(0.0, -1.0)),
            IpHandle::pip("mid", Point::new(-1.0, 0.0)),
        ];
        let v = l_plus(c.oracle.as_ref(), &fam, &cands, &w, &cfg()).unwrap();
        assert!(v.limits.is_empty());
        let pm = pm_limits(c.oracle.as_ref(), &fam, &w, &cfg()).unwrap();
        assert!(pm.liminf.is_subset(&pm.limsup) && pm.liminf != pm.limsup);
    }

    #[test]
    fn slit_warning_example() {
        let s = make_space("slit", 1.0 / 16.0).unwrap();
        let w = s.window_at(1.0 / 16.0, &WindowBounds::rect((-1.0, 2.25), (-1.0, 2.25)));
        let r = first_order_probe(s.oracle.as_ref(), &w, 4, 64, &LimitConfig { horizon: 64, depth: 1, margin: 2.0 }).unwrap();
        assert!(r.holds(), "{r:?}");
    }

    #[test]
    fn frechet_axioms_on_small_corpus() {
        let c = make_space("cylinder", 1.0 / 16.0).unwrap();
        let w = c.window_at(1.0 / 16.0, &WindowBounds::rect((-4.0, 1.0), (-std::f64::consts::PI, std::f64::consts::PI)));
        let p = IpHandle::pip("c", Point::new(0.0, 0.0));
        let pc = p.clone();
        let constant = HandleFamily::new("const", move |_| pc.clone()).with_tail(0, vec![0]);
        let conv = HandleFamily::new("down", |n| IpHandle::pip(format!("a{n}"), Point::new(1.0 / (n as f64 + 1.0), 0.0))).with_candidate(p.clone());
        let div = HandleFamily::new("alt", |n| IpHandle::pip(format!("a{n}"), Point::new(0.0, if n % 2 == 0 { 1.0 } else { -1.0 })))
            .with_tail(0, vec![0, 1])
            .with_candidate(p.clone());
        let r = tau_plus_frechet_axioms(c.oracle.as_ref(), &constant, &conv, &div, &w, &cfg()).unwrap();
        assert!(r.constant && r.subsequence);
        assert_eq!(r.non_limit_witness.as_deref(), Some("even indices"));
    }

    #[test]
    fn bad_tail_descriptor_is_caught() {
        let fam = HandleFamily::new("n", |n| IpHandle::pip("a", Point::new(0.5, n as f64))).with_tail(0, vec![0]);
        assert!(fam.check_tail().is_err());
    }
}
