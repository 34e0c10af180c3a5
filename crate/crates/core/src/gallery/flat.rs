//! Flat two-dimensional model spacetimes with analytic chronology.

use std::collections::VecDeque;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chron::{Chronology, ProductInfo, CHRON_TOL};
use crate::point::{Point, SampleWindow, WindowBounds};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlatKind {
    /// ℝ^{1,1}.
    Minkowski2,
    /// The time slab (0,1) x ℝ.
    Strip,
    /// ℝ^{1,1} with the origin removed.
    Punctured,
    /// ℝ^{1,1} with the spacelike ray {t = 0, x > 0} removed.
    Slit,
    /// ℝ x S¹ with circumference 2π, angles in [−π, π).
    Cylinder,
}

#[derive(Clone, Debug)]
pub struct Flat {
    pub kind: FlatKind,
}

fn circ(d: f64) -> f64 {
    let d = d.rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

impl Flat {
    pub fn new(kind: FlatKind) -> Self {
        Flat { kind }
    }

    fn dx(&self, p: &Point, q: &Point) -> f64 {
        match self.kind {
            FlatKind::Cylinder => circ(q.x - p.x),
            _ => (q.x - p.x).abs(),
        }
    }

    /// Crossing interval of the time-zero line for curves from `p` (t<0) to `q` (t>0).
    fn slit_window(p: &Point, q: &Point) -> (f64, f64) {
        let lo = (p.x + p.t).max(q.x - q.t);
        let hi = (p.x - p.t).min(q.x + q.t);
        (lo, hi)
    }

    /// Whether the straight segment from `a` to `b` meets the removed set.
    pub fn segment_blocked(&self, a: &Point, b: &Point) -> bool {
        match self.kind {
            FlatKind::Punctured => {
                let (dt, dx) = (b.t - a.t, b.x - a.x);
                let len2 = dt * dt + dx * dx;
                if len2 == 0.0 {
                    return a.t == 0.0 && a.x == 0.0;
                }
                let s = (-(a.t * dt + a.x * dx) / len2).clamp(0.0, 1.0);
                let (ct, cx) = (a.t + s * dt, a.x + s * dx);
                ct.abs() < 1e-12 && cx.abs() < 1e-12
            }
            FlatKind::Slit => {
                if (a.t > 0.0 && b.t > 0.0) || (a.t < 0.0 && b.t < 0.0) {
                    return false;
                }
                if a.t == b.t {
                    return a.t == 0.0 && (a.x > 0.0 || b.x > 0.0);
                }
                let s = -a.t / (b.t - a.t);
                a.x + s * (b.x - a.x) > 0.0
            }
            _ => false,
        }
    }
}

impl Chronology for Flat {
    fn name(&self) -> String {
        match self.kind {
            FlatKind::Minkowski2 => "minkowski2",
            FlatKind::Strip => "strip",
            FlatKind::Punctured => "punctured",
            FlatKind::Slit => "slit",
            FlatKind::Cylinder => "cylinder",
        }
        .into()
    }

    fn dim(&self) -> usize {
        2
    }

    fn admissible(&self, p: &Point) -> bool {
        if !(p.t.is_finite() && p.x.is_finite()) {
            return false;
        }
        match self.kind {
            FlatKind::Strip => p.t > 0.0 && p.t < 1.0,
            FlatKind::Punctured => !(p.t == 0.0 && p.x == 0.0),
            FlatKind::Slit => !(p.t == 0.0 && p.x > 0.0),
            _ => true,
        }
    }

    fn chron(&self, p: &Point, q: &Point) -> bool {
        let dt = q.t - p.t;
        if self.dx(p, q) >= dt - CHRON_TOL {
            return false;
        }
        if self.kind == FlatKind::Slit && p.t < 0.0 && q.t > 0.0 {
            let (lo, hi) = Self::slit_window(p, q);
            return lo < hi && lo < 0.0;
        }
        true
    }

    fn dist(&self, p: &Point, q: &Point) -> f64 {
        let dt = q.t - p.t;
        let dx = self.dx(p, q);
        (dt * dt + dx * dx).sqrt()
    }

    fn periods(&self) -> [Option<f64>; 3] {
        match self.kind {
            FlatKind::Cylinder => [None, Some(2.0 * PI), None],
            _ => [None; 3],
        }
    }

    fn causal(&self, p: &Point, q: &Point) -> Option<bool> {
        if p == q {
            return Some(true);
        }
        let dt = q.t - p.t;
        let dx = self.dx(p, q);
        if dx > dt + CHRON_TOL {
            return Some(false);
        }
        Some(match self.kind {
            // A null pair has the null segment as its only causal curve.
            FlatKind::Punctured => !(dx >= dt - CHRON_TOL && self.segment_blocked(p, q)),
            FlatKind::Slit if p.t < 0.0 && q.t > 0.0 => {
                let (lo, hi) = Self::slit_window(p, q);
                lo <= hi && lo <= 0.0
            }
            _ => true,
        })
    }

    fn alpha(&self, p: &Point, q: &Point) -> Option<bool> {
        match self.kind {
            FlatKind::Slit => None,
            _ => Some(p == q || self.dx(p, q) <= q.t - p.t + CHRON_TOL),
        }
    }

    fn product(&self) -> Option<ProductInfo> {
        let (floor, ceil) = match self.kind {
            FlatKind::Strip => (0.0, 1.0),
            FlatKind::Slit => return None,
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        };
        let period = (self.kind == FlatKind::Cylinder).then_some(2.0 * PI);
        Some(ProductInfo { floor, ceil, spatial_dims: 1, period })
    }

    fn spatial_dist(&self, p: &Point, q: &Point) -> f64 {
        self.dx(p, q)
    }
}

/// Default sampling window for each flat space.
pub fn default_bounds(kind: FlatKind) -> WindowBounds {
    match kind {
        FlatKind::Strip => WindowBounds::rect((0.0, 1.0), (0.0, 1.0)),
        FlatKind::Cylinder => WindowBounds::rect((-2.0, 2.0), (-PI, PI)),
        _ => WindowBounds::rect((-2.0, 2.0), (-2.0, 2.0)),
    }
}

/// Reachability by lattice paths of timelike straight steps that avoid the removed set.
pub fn path_search_chron(space: &Flat, p: &Point, q: &Point, pitch: f64) -> bool {
    if q.t <= p.t || !space.admissible(p) || !space.admissible(q) {
        return false;
    }
    let steps: Vec<(i64, i64)> = (1..=6i64).flat_map(|m| (-(m - 1)..m).map(move |k| (m, k))).collect();
    let tmax = ((q.t - p.t) / pitch).floor() as i64;
    let xr = tmax + 1;
    let width = (2 * xr + 1) as usize;
    let at = |m: i64, k: i64| Point::new(p.t + m as f64 * pitch, p.x + k as f64 * pitch);
    let mut seen = vec![false; (tmax as usize + 1) * width];
    let mut queue = VecDeque::new();
    queue.push_back((0i64, 0i64));
    seen[xr as usize] = true;
    while let Some((m, k)) = queue.pop_front() {
        let r = at(m, k);
        let dt = q.t - r.t;
        if dt > 0.0 && space.dx(&r, q) < dt && !space.segment_blocked(&r, q) && (m > 0 || space.chron(p, q)) {
            return true;
        }
        for &(dm, dk) in &steps {
            let (m2, k2) = (m + dm, k + dk);
            if m2 > tmax || k2.abs() > xr {
                continue;
            }
            let slot = m2 as usize * width + (k2 + xr) as usize;
            let s = at(m2, k2);
            if seen[slot] || !space.admissible(&s) || space.segment_blocked(&r, &s) {
                continue;
            }
            seen[slot] = true;
            queue.push_back((m2, k2));
        }
    }
    false
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossValidation {
    pub pairs: usize,
    pub agree: usize,
    pub disagreements: Vec<(Point, Point)>,
}

/// Compares the analytic predicate with lattice path search on random window pairs.
/// Pairs within `margin` of the null cone are skipped, since lattice paths
/// cannot follow nearly null directions.
pub fn cross_validate(space: &Flat, window: &SampleWindow, pairs: usize, seed: u64, pitch: f64) -> CrossValidation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = window.len();
    let mut out = CrossValidation { pairs: 0, agree: 0, disagreements: Vec::new() };
    let mut attempts = 0;
    while out.pairs < pairs && attempts < pairs * 100 {
        attempts += 1;
        let p = window.points[rng.gen_range(0..n)];
        let q = window.points[rng.gen_range(0..n)];
        let margin = 0.2 * (q.t - p.t).abs() + 2.0 * pitch;
        if (space.dx(&p, &q) - (q.t - p.t)).abs() < margin {
            continue;
        }
        if space.kind == FlatKind::Slit && p.t < 0.0 && q.t > 0.0 {
            let (lo, hi) = Flat::slit_window(&p, &q);
            if (hi - lo).abs() < margin || lo.abs() < margin {
                continue;
            }
        }
        out.pairs += 1;
        if space.chron(&p, &q) == path_search_chron(space, &p, &q, pitch) {
            out.agree += 1;
        } else {
            out.disagreements.push((p, q));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chron::validate_chron;

    #[test]
    fn slit_dodges_through_negative_side() {
        let s = Flat::new(FlatKind::Slit);
        // null separated already in ℝ^{1,1}
        assert!(!s.chron(&Point::new(-1.0, -1.0), &Point::new(1.0, 1.0)));
        assert!(s.chron(&Point::new(-1.0, 0.5), &Point::new(1.0, 0.5)));
        assert!(s.chron(&Point::new(-1.0, -1.0), &Point::new(1.5, 0.5)));
        // every timelike route crosses the slit
        assert!(!s.chron(&Point::new(-1.0, 2.0), &Point::new(1.0, 2.0)));
        // the null segment through the kept origin is causal but not timelike
        assert_eq!(s.causal(&Point::new(-1.0, -1.0), &Point::new(1.0, 1.0)), Some(true));
        // reaching the origin first is causal
        assert_eq!(s.causal(&Point::new(-1.0, 0.0), &Point::new(1.0, 1.0)), Some(true));
        assert_eq!(s.causal(&Point::new(-1.0, 1.5), &Point::new(1.0, 1.0)), Some(false));
    }

    #[test]
    fn punctured_null_route_through_origin() {
        let s = Flat::new(FlatKind::Punctured);
        let (p, q) = (Point::new(-1.0, -1.0), Point::new(1.0, 1.0));
        assert_eq!(s.causal(&p, &q), Some(false));
        assert!(!s.chron(&p, &q));
        assert_eq!(s.alpha(&p, &q), Some(true));
        assert_eq!(s.causal(&Point::new(-1.0, 0.0), &Point::new(1.0, 0.0)), Some(true));
    }

    #[test]
    fn cylinder_wraps() {
        let c = Flat::new(FlatKind::Cylinder);
        assert!(c.chron(&Point::new(0.0, -3.0), &Point::new(0.5, 3.0)));
        assert!(c.chron(&Point::new(0.0, -1.0), &Point::new(2.0, -1.0)));
        assert!(!c.chron(&Point::new(0.0, -1.0), &Point::new(1.0, 1.0)));
    }

    #[test]
    fn gallery_windows_are_chronological_sets_up_to_edges() {
        for kind in [FlatKind::Minkowski2, FlatKind::Strip, FlatKind::Punctured, FlatKind::Slit, FlatKind::Cylinder] {
            let s = Flat::new(kind);
            let w = s.sample(0.25, &default_bounds(kind));
            let rep = validate_chron(&s, &w).unwrap();
            assert!(rep.irreflexive && rep.transitive, "{kind:?}");
        }
    }

    #[test]
    fn strip_eight_by_eight_grid() {
        let s = Flat::new(FlatKind::Strip);
        let w = s.sample(1.0 / 9.0, &WindowBounds::rect((1.0 / 9.0, 8.0 / 9.0), (0.0, 7.0 / 9.0)));
        assert_eq!(w.len(), 64);
        let rep = validate_chron(&s, &w).unwrap();
        assert!(rep.irreflexive && rep.transitive && rep.connex);
    }

    #[test]
    fn analytic_predicates_match_path_search() {
        for kind in [FlatKind::Strip, FlatKind::Punctured, FlatKind::Slit, FlatKind::Cylinder] {
            let s = Flat::new(kind);
            let w = s.sample(0.25, &default_bounds(kind));
            let cv = cross_validate(&s, &w, 100, 7, 1.0 / 32.0);
            assert_eq!(cv.agree, cv.pairs, "{kind:?}: {:?}", cv.disagreements);
        }
    }
}
