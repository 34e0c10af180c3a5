//! Points, sampled windows and window-level set operations.

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

/// A point with a time coordinate and up to two spatial coordinates.
///
/// Two-dimensional spaces leave `y` at zero. Warped spaces store vertex
/// indices in `x` and `y`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub t: f64,
    pub x: f64,
    #[serde(default)]
    pub y: f64,
}

impl Point {
    pub const fn new(t: f64, x: f64) -> Self {
        Point { t, x, y: 0.0 }
    }

    pub const fn new3(t: f64, x: f64, y: f64) -> Self {
        Point { t, x, y }
    }

    pub fn coord(&self, axis: usize) -> f64 {
        match axis {
            0 => self.t,
            1 => self.x,
            _ => self.y,
        }
    }

    pub fn with_coord(mut self, axis: usize, v: f64) -> Self {
        match axis {
            0 => self.t = v,
            1 => self.x = v,
            _ => self.y = v,
        }
        self
    }

    /// Euclidean distance in coordinates.
    pub fn euclid(&self, o: &Point) -> f64 {
        ((self.t - o.t).powi(2) + (self.x - o.x).powi(2) + (self.y - o.y).powi(2)).sqrt()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y == 0.0 {
            write!(f, "({}, {})", self.t, self.x)
        } else {
            write!(f, "({}, {}, {})", self.t, self.x, self.y)
        }
    }
}

/// Subsets of a window, indexed by window position.
pub type PointSet = FixedBitSet;

/// Axis-aligned bounds of a sampling window, one interval per coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowBounds {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl WindowBounds {
    pub fn new(lo: &[f64], hi: &[f64]) -> Self {
        assert_eq!(lo.len(), hi.len());
        WindowBounds { lo: lo.to_vec(), hi: hi.to_vec() }
    }

    /// `[t0,t1] x [x0,x1]`.
    pub fn rect(t: (f64, f64), x: (f64, f64)) -> Self {
        Self::new(&[t.0, x.0], &[t.1, x.1])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }
}

#[derive(Clone, Debug)]
struct Grid {
    h: f64,
    lo: Vec<f64>,
    counts: Vec<usize>,
    /// Flat grid position -> window index (None for excluded positions).
    slot: Vec<Option<u32>>,
    /// Window index -> grid multi-index.
    cell: Vec<Vec<usize>>,
}

/// A finite sample of a space: the arena where sets and metrics are evaluated.
#[derive(Clone, Debug)]
pub struct SampleWindow {
    pub points: Vec<Point>,
    /// Grid pitch; zero for unstructured windows.
    pub h: f64,
    pub bounds: Option<WindowBounds>,
    /// Period per axis (`None` for non-periodic axes).
    pub periods: [Option<f64>; 3],
    /// Grid positions excluded because they are not admissible.
    pub holes: Vec<Point>,
    grid: Option<Grid>,
}

impl SampleWindow {
    /// Unstructured window from a point list.
    pub fn from_points(points: Vec<Point>) -> Self {
        SampleWindow { points, h: 0.0, bounds: None, periods: [None; 3], holes: Vec::new(), grid: None }
    }

    /// Regular grid with pitch `h`. Periodic axes take `period / h` samples
    /// starting at `lo`; other axes include both ends. Points rejected by
    /// `admissible` are recorded as holes.
    pub fn grid(
        bounds: &WindowBounds,
        h: f64,
        periods: [Option<f64>; 3],
        admissible: impl Fn(&Point) -> bool,
    ) -> Self {
        assert!(h > 0.0, "grid pitch must be positive");
        let dim = bounds.dim();
        let mut counts = Vec::with_capacity(dim);
        for a in 0..dim {
            let n = match periods[a] {
                Some(p) => (p / h).round().max(1.0) as usize,
                None => ((bounds.hi[a] - bounds.lo[a]) / h + 1e-9).floor() as usize + 1,
            };
            counts.push(n);
        }
        let total: usize = counts.iter().product();
        let mut points = Vec::new();
        let mut holes = Vec::new();
        let mut slot = vec![None; total];
        let mut cell = Vec::new();
        let mut idx = vec![0usize; dim];
        for flat in 0..total {
            let mut rem = flat;
            for a in (0..dim).rev() {
                idx[a] = rem % counts[a];
                rem /= counts[a];
            }
            let mut p = Point::new(0.0, 0.0);
            for a in 0..dim {
                let step = match periods[a] {
                    Some(per) => per / counts[a] as f64,
                    None => h,
                };
                p = p.with_coord(a, bounds.lo[a] + idx[a] as f64 * step);
            }
            if admissible(&p) {
                slot[flat] = Some(points.len() as u32);
                points.push(p);
                cell.push(idx.clone());
            } else {
                holes.push(p);
            }
        }
        SampleWindow {
            points,
            h,
            bounds: Some(bounds.clone()),
            periods,
            holes,
            grid: Some(Grid { h, lo: bounds.lo.clone(), counts, slot, cell }),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn empty_set(&self) -> PointSet {
        FixedBitSet::with_capacity(self.len())
    }

    pub fn full_set(&self) -> PointSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    pub fn set_from(&self, pred: impl Fn(&Point) -> bool) -> PointSet {
        let mut s = self.empty_set();
        for (i, p) in self.points.iter().enumerate() {
            if pred(p) {
                s.insert(i);
            }
        }
        s
    }

    /// Euclidean coordinate distance with periodic wrap.
    pub fn coord_dist(&self, p: &Point, q: &Point) -> f64 {
        let dim = self.bounds.as_ref().map_or(3, |b| b.dim());
        let mut s = 0.0;
        for a in 0..dim {
            let mut d = (p.coord(a) - q.coord(a)).abs();
            if let Some(per) = self.periods[a] {
                d = d.rem_euclid(per);
                d = d.min(per - d);
            }
            s += d * d;
        }
        s.sqrt()
    }

    /// Window index of the grid position nearest to `p`, if it is sampled.
    pub fn locate(&self, p: &Point) -> Option<usize> {
        let g = self.grid.as_ref()?;
        let mut flat = 0usize;
        for (a, &n) in g.counts.iter().enumerate() {
            let step = match self.periods[a] {
                Some(per) => per / n as f64,
                None => g.h,
            };
            let mut k = ((p.coord(a) - g.lo[a]) / step).round() as i64;
            if self.periods[a].is_some() {
                k = k.rem_euclid(n as i64);
            } else if k < 0 || k >= n as i64 {
                return None;
            }
            flat = flat * n + k as usize;
        }
        g.slot[flat].map(|i| i as usize)
    }

    /// Window indices of the points within coordinate distance `r` of point `i`
    /// (excluding `i`). Grid windows use index offsets; others scan.
    pub fn neighbors(&self, i: usize, r: f64) -> Vec<usize> {
        match &self.grid {
            Some(g) => {
                let dim = g.counts.len();
                let steps: Vec<f64> = (0..dim)
                    .map(|a| match self.periods[a] {
                        Some(per) => per / g.counts[a] as f64,
                        None => g.h,
                    })
                    .collect();
                let reach: Vec<i64> = steps.iter().map(|s| (r / s + 1e-9).floor() as i64).collect();
                let base = &g.cell[i];
                let mut out = Vec::new();
                let mut off = vec![0i64; dim];
                for a in 0..dim {
                    off[a] = -reach[a];
                }
                loop {
                    let d2: f64 = (0..dim).map(|a| (off[a] as f64 * steps[a]).powi(2)).sum();
                    if d2 <= r * r + 1e-12 && off.iter().any(|&o| o != 0) {
                        let mut flat = 0usize;
                        let mut ok = true;
                        for a in 0..dim {
                            let n = g.counts[a] as i64;
                            let mut k = base[a] as i64 + off[a];
                            if self.periods[a].is_some() {
                                k = k.rem_euclid(n);
                            } else if k < 0 || k >= n {
                                ok = false;
                                break;
                            }
                            flat = flat * g.counts[a] + k as usize;
                        }
                        if ok {
                            if let Some(j) = g.slot[flat] {
                                if j as usize != i {
                                    out.push(j as usize);
                                }
                            }
                        }
                    }
                    let mut a = dim;
                    loop {
                        if a == 0 {
                            out.sort_unstable();
                            out.dedup();
                            return out;
                        }
                        a -= 1;
                        if off[a] < reach[a] {
                            off[a] += 1;
                            break;
                        }
                        off[a] = -reach[a];
                    }
                }
            }
            None => (0..self.len())
                .filter(|&j| j != i && self.coord_dist(&self.points[i], &self.points[j]) <= r)
                .collect(),
        }
    }

    /// Points at coordinate distance at least `r` from every non-periodic
    /// window edge and from every hole.
    pub fn interior(&self, r: f64) -> PointSet {
        let mut s = self.empty_set();
        for (i, p) in self.points.iter().enumerate() {
            let mut ok = true;
            if let Some(b) = &self.bounds {
                for a in 0..b.dim() {
                    if self.periods[a].is_none() {
                        let c = p.coord(a);
                        if c - b.lo[a] < r - 1e-12 || b.hi[a] - c < r - 1e-12 {
                            ok = false;
                        }
                    }
                }
            }
            if ok && self.holes.iter().any(|q| self.coord_dist(p, q) < r - 1e-12) {
                ok = false;
            }
            if ok {
                s.insert(i);
            }
        }
        s
    }

    /// Members of `a` whose whole `r`-neighbourhood (inside the window) lies in `a`.
    pub fn erode(&self, a: &PointSet, r: f64) -> PointSet {
        if r <= 0.0 {
            return a.clone();
        }
        let mut out = self.empty_set();
        for i in a.ones() {
            if self.neighbors(i, r).iter().all(|&j| a.contains(j)) {
                out.insert(i);
            }
        }
        out
    }

    /// Points within `r` of some member of `a`.
    pub fn dilate(&self, a: &PointSet, r: f64) -> PointSet {
        let mut out = a.clone();
        for i in a.ones() {
            for j in self.neighbors(i, r) {
                out.insert(j);
            }
        }
        out
    }

    /// `a ⊆ b` after eroding `a` by `r`.
    pub fn subset_up_to(&self, a: &PointSet, b: &PointSet, r: f64) -> bool {
        self.erode(a, r).is_subset(b)
    }

    /// Equality up to the erosion margin in both directions.
    pub fn equal_up_to(&self, a: &PointSet, b: &PointSet, r: f64) -> bool {
        self.subset_up_to(a, b, r) && self.subset_up_to(b, a, r)
    }

    pub fn complement(&self, a: &PointSet) -> PointSet {
        let mut c = self.full_set();
        c.difference_with(a);
        c
    }

    /// CSV export: `id,t,x,y`.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> crate::Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["id", "t", "x", "y"])?;
        for (i, p) in self.points.iter().enumerate() {
            wr.write_record([i.to_string(), p.t.to_string(), p.x.to_string(), p.y.to_string()])?;
        }
        wr.flush()?;
        Ok(())
    }
}
