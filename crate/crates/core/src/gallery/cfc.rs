//! The strip as a conformal future compactification inside ℝ^{1,1}, and the
//! check that its endpoint map respects the completion.

use std::sync::Arc;

use serde::Serialize;

use crate::error::Result;
use crate::gallery::flat::{default_bounds, Flat, FlatKind};
use crate::graph::{subgraph_hausdorff, Cones, Subgraph};
use crate::ip::{endpoint_map, realize, s_bar, Cfc, ChainSpec, IpHandle};
use crate::limits::HandleFamily;
use crate::point::Point;
use crate::tfae::{tail_converges, TfaeConfig, TfaeSetup};

fn identity(p: &Point) -> Point {
    *p
}

/// `E`: the inclusion of the strip `(0,1) x ℝ` into ℝ^{1,1}.
pub fn strip_cfc() -> Cfc {
    Cfc {
        name: "strip in R^{1,1}".into(),
        source: Arc::new(Flat::new(FlatKind::Strip)),
        target: Arc::new(Flat::new(FlatKind::Minkowski2)),
        embed: identity,
        inverse: identity,
    }
}

/// The boundary TIP generated by a chain climbing to `(1, c)`.
pub fn strip_tip(c: f64) -> IpHandle {
    IpHandle::tip(format!("tip(1,{c:.4})"), ChainSpec::Geometric { start: Point::new(0.5, c), target: Point::new(1.0, c), ratio: 0.5 })
}

#[derive(Clone, Debug, Serialize)]
pub struct RespectConfig {
    pub h: f64,
    pub depth: usize,
    /// Endpoint and set tolerance, as a multiple of `h`.
    pub margin: f64,
    pub horizon: usize,
    pub tol: f64,
    pub cloud_h: f64,
}

impl Default for RespectConfig {
    fn default() -> Self {
        RespectConfig { h: 1.0 / 64.0, depth: 64, margin: 2.0, horizon: 128, tol: 1e-3, cloud_h: 1.0 / 32.0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundTripRow {
    pub handle: String,
    pub endpoint: Point,
    /// `|ε(s̄(ε(A))) − ε(A)|`.
    pub point_error: f64,
    /// `s̄(ε(A))` realizes the same window set as `A` up to the margin.
    pub same_set: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyRow {
    pub family: String,
    /// Handle `d₁` convergence to the candidate, by tail extrapolation.
    pub d1_converges: bool,
    pub d1_limit: f64,
    /// Euclidean convergence of the endpoints.
    pub endpoint_converges: bool,
    pub endpoint_limit: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RespectReport {
    pub roundtrip: Vec<RoundTripRow>,
    pub families: Vec<FamilyRow>,
    pub tolerance: f64,
}

impl RespectReport {
    pub fn inverse_ok(&self) -> bool {
        self.roundtrip.iter().all(|r| r.same_set && r.point_error <= self.tolerance)
    }

    pub fn families_ok(&self) -> bool {
        self.families.iter().all(|f| f.d1_converges == f.endpoint_converges)
    }

    pub fn holds(&self) -> bool {
        self.inverse_ok() && self.families_ok()
    }
}

/// Six interior PIPs and six boundary TIPs.
pub fn respect_handles() -> Vec<IpHandle> {
    let mut v: Vec<IpHandle> = [(0.2, 0.5), (0.5, 0.5), (0.5, 0.25), (0.75, 0.8), (0.9, 0.1), (0.3, 0.7)]
        .iter()
        .map(|&(t, x)| IpHandle::pip(format!("pip({t},{x})"), Point::new(t, x)))
        .collect();
    v.extend([0.1, 0.25, 0.4, 0.5, 0.65, 0.9].iter().map(|&c| strip_tip(c)));
    v
}

/// Five families with candidates: three converge, two do not.
pub fn respect_families() -> Vec<HandleFamily> {
    let pip = |t: f64, x: f64| IpHandle::pip(format!("pip({t:.4},{x:.4})"), Point::new(t, x));
    let alt = |n: usize| if n % 2 == 0 { 0.2 } else { -0.2 };
    vec![
        HandleFamily::new("boundary TIPs (1, 0.5+0.4/(n+1))", |n| strip_tip(0.5 + 0.4 / (n + 1) as f64)).with_candidate(strip_tip(0.5)),
        HandleFamily::new("rising PIPs to (1, 0.5)", move |n| pip(1.0 - 0.5 / (n + 2) as f64, 0.5)).with_candidate(strip_tip(0.5)),
        HandleFamily::new("constant PIP", move |_| pip(0.5, 0.5)).with_candidate(pip(0.5, 0.5)),
        HandleFamily::new("alternating TIPs (1, 0.5±0.2)", move |n| strip_tip(0.5 + alt(n))).with_tail(0, vec![0, 1]).with_candidate(strip_tip(0.5)),
        HandleFamily::new("alternating PIPs (0.5, 0.5±0.2)", move |n| pip(0.5, 0.5 + alt(n))).with_tail(0, vec![0, 1]).with_candidate(pip(0.5, 0.7)),
    ]
}

fn tail_indices(fam: &HandleFamily, hz: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..8).map(|k| hz / 2 + (hz / 2) * k / 7).collect();
    if let Some(t) = &fam.tail {
        v.extend(&t.recurring);
    }
    v
}

/// Checks that `ε_E` and `s̄` are mutually inverse on `handles`, and that
/// `d₁` convergence of each family matches convergence of its endpoints.
pub fn respect_check(cfc: &Cfc, handles: &[IpHandle], families: &[HandleFamily], cfg: &RespectConfig) -> Result<RespectReport> {
    let src = cfc.source.as_ref();
    let bounds = default_bounds(FlatKind::Strip);
    let w = src.sample(cfg.h, &bounds);
    let tol = cfg.margin * cfg.h;
    let mut roundtrip = Vec::new();
    for a in handles {
        let e = endpoint_map(cfc, a, tol / 16.0)?;
        let back = s_bar(cfc, &e);
        let e2 = endpoint_map(cfc, &back, tol / 16.0)?;
        let ra = realize(src, a, &w, cfg.depth)?;
        let rb = realize(src, &back, &w, cfg.depth)?;
        roundtrip.push(RoundTripRow { handle: a.label.clone(), endpoint: e, point_error: e.euclid(&e2), same_set: w.equal_up_to(&ra, &rb, tol) });
    }

    let tcfg = TfaeConfig { h: cfg.h, depth: cfg.depth, cloud_h: cfg.cloud_h, ..TfaeConfig::default() };
    let setup = TfaeSetup::new(src, &bounds, &tcfg)?;
    let band = |c: &Cones| Subgraph::new(c, setup.band_t.0, setup.band_t.1, setup.band_x.0, setup.band_x.1);
    let step = 1.0 / tcfg.columns_per_unit as f64;
    let mut rows = Vec::new();
    for fam in families {
        let cand = fam.candidate.clone().expect("respect families carry candidates");
        let b_inf = band(&Cones::of_handle(src, &cand, cfg.depth)?);
        let e_inf = endpoint_map(cfc, &cand, tol / 16.0)?;
        let mut d1s = [0.0f64; 3];
        let mut eds = [0.0f64; 3];
        for (j, hz) in [cfg.horizon / 4, cfg.horizon / 2, cfg.horizon].into_iter().enumerate() {
            for n in tail_indices(fam, hz) {
                let a = fam.at(n);
                let b = band(&Cones::of_handle(src, &a, cfg.depth)?);
                let bound = subgraph_hausdorff(&b, &b_inf, step);
                d1s[j] = d1s[j].max(setup.cloud.d1(&b, &b_inf, bound)?);
                eds[j] = eds[j].max(endpoint_map(cfc, &a, tol / 16.0)?.euclid(&e_inf));
            }
        }
        let (dc, dl) = tail_converges(d1s, cfg.tol);
        let (ec, el) = tail_converges(eds, cfg.tol);
        rows.push(FamilyRow { family: fam.name.clone(), d1_converges: dc, d1_limit: dl, endpoint_converges: ec, endpoint_limit: el });
    }
    Ok(RespectReport { roundtrip, families: rows, tolerance: tol })
}

#[derive(Clone, Debug, Serialize)]
pub struct ChartRow {
    pub handle: String,
    pub c: f64,
    pub endpoint_t: f64,
    pub endpoint_x: f64,
    pub error: f64,
}

/// Endpoints of boundary TIPs toward `{1} x (0,1)` at pitch `h`, with the
/// check that the correspondence is monotone and within `2h`.
pub fn strip_boundary_chart(h: f64) -> Result<(Vec<ChartRow>, bool)> {
    let cfc = strip_cfc();
    let m = (1.0 / h).round() as usize;
    let mut rows = Vec::new();
    for k in 1..m {
        let c = k as f64 * h;
        let e = endpoint_map(&cfc, &strip_tip(c), h / 8.0)?;
        rows.push(ChartRow { handle: strip_tip(c).label, c, endpoint_t: e.t, endpoint_x: e.x, error: e.euclid(&Point::new(1.0, c)) });
    }
    let ok = rows.iter().all(|r| r.error <= 2.0 * h) && rows.windows(2).all(|w| w[0].endpoint_x < w[1].endpoint_x);
    Ok((rows, ok))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tip_endpoint_and_inverse() {
        let cfc = strip_cfc();
        let e = endpoint_map(&cfc, &strip_tip(0.5), 1e-4).unwrap();
        assert!(e.euclid(&Point::new(1.0, 0.5)) < 1e-3);
        let p = endpoint_map(&cfc, &IpHandle::pip("p", Point::new(0.5, 0.5)), 1e-4).unwrap();
        assert_eq!(p, Point::new(0.5, 0.5));
        assert!(s_bar(&cfc, &e).chain().is_some());
    }

    #[test]
    fn chart_is_monotone() {
        let (rows, ok) = strip_boundary_chart(1.0 / 16.0).unwrap();
        assert_eq!(rows.len(), 15);
        assert!(ok);
    }

    #[test]
    fn respect_holds_on_the_default_corpus() {
        let cfg = RespectConfig { h: 1.0 / 32.0, horizon: 64, ..RespectConfig::default() };
        let r = respect_check(&strip_cfc(), &respect_handles(), &respect_families(), &cfg).unwrap();
        assert!(r.inverse_ok(), "{:?}", r.roundtrip);
        assert!(r.families_ok(), "{:?}", r.families);
        let conv: Vec<bool> = r.families.iter().map(|f| f.endpoint_converges).collect();
        assert_eq!(conv, vec![true, true, true, false, false]);
    }
}
