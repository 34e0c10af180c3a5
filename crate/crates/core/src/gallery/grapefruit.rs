//! The ultrastatic grapefruit-on-a-stick: ℝ x (ℝ², f(y)·g₀) with f = 2 on the
//! stick |y| ≤ 1 and f = 1 for |y| ≥ 2.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::sync::{Arc, Mutex};

use crate::chron::{Chronology, ProductInfo, CHRON_TOL};
use crate::point::{Point, WindowBounds};

/// Conformal factor of the spatial metric.
pub fn profile(y: f64) -> f64 {
    let u = (2.0 - y.abs()).clamp(0.0, 1.0);
    1.0 + u * u * (3.0 - 2.0 * u)
}

/// Refractive index `f^{1/2}`: local length scale against the flat metric.
pub fn index(y: f64) -> f64 {
    profile(y).sqrt()
}

fn g(u: f64) -> f64 {
    let w = 3.0 - 2.0 * u;
    -0.25 * (2.0 * w.powf(1.5) - 0.4 * w.powf(2.5))
}

/// `Φ(y) = ∫₀^y (f − 1)^{1/2}`, the transverse part of the horizontal Busemann functions.
pub fn phi(y: f64) -> f64 {
    let a = y.abs();
    let v = if a <= 1.0 {
        a
    } else if a < 2.0 {
        1.0 + g(1.0) - g(2.0 - a)
    } else {
        1.0 + g(1.0) - g(0.0)
    };
    v.copysign(y)
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

/// Spatial distances come from shortest paths on a grid graph whose stencil
/// holds every primitive step with components up to 4, so the distance is an
/// exact metric on nodes (and the chronology exactly transitive) with
/// anisotropy below one percent. Off-node points snap to the nearest node.
#[derive(Debug)]
pub struct Grapefruit {
    pub pitch: f64,
    pub extent: f64,
    side: usize,
    stencil: Vec<(i64, i64)>,
    cache: Mutex<HashMap<usize, Arc<Vec<f64>>>>,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl Grapefruit {
    /// Spatial domain `[−extent, extent]²` with graph pitch at most 1/8 dividing `h`.
    pub fn new(h: f64, extent: f64) -> Self {
        let pitch = h / (h / 0.125).ceil().max(1.0);
        let side = (2.0 * extent / pitch).round() as usize + 1;
        let mut stencil = Vec::new();
        for a in -4i64..=4 {
            for b in -4i64..=4 {
                if (a, b) != (0, 0) && gcd(a, b) == 1 {
                    stencil.push((a, b));
                }
            }
        }
        Grapefruit { pitch, extent, side, stencil, cache: Mutex::new(HashMap::new()) }
    }

    pub fn default_bounds() -> WindowBounds {
        WindowBounds::new(&[0.0, -2.0, -2.0], &[2.0, 2.0, 2.0])
    }

    fn snap(&self, x: f64, y: f64) -> usize {
        let c = |v: f64| (((v + self.extent) / self.pitch).round().max(0.0) as usize).min(self.side - 1);
        c(y) * self.side + c(x)
    }

    fn coord(&self, k: usize) -> (f64, f64) {
        let (i, j) = (k % self.side, k / self.side);
        (-self.extent + i as f64 * self.pitch, -self.extent + j as f64 * self.pitch)
    }

    fn field(&self, src: usize) -> Arc<Vec<f64>> {
        if let Some(f) = self.cache.lock().unwrap().get(&src) {
            return f.clone();
        }
        let f = Arc::new(self.dijkstra(src));
        self.cache.lock().unwrap().insert(src, f.clone());
        f
    }

    fn dijkstra(&self, src: usize) -> Vec<f64> {
        let n = self.side;
        let mut d = vec![f64::INFINITY; n * n];
        let mut heap = BinaryHeap::new();
        d[src] = 0.0;
        heap.push(Entry(0.0, src));
        while let Some(Entry(v, k)) = heap.pop() {
            if v > d[k] {
                continue;
            }
            let (i, j) = ((k % n) as i64, (k / n) as i64);
            let y0 = -self.extent + j as f64 * self.pitch;
            for &(a, b) in &self.stencil {
                let (i2, j2) = (i + a, j + b);
                if i2 < 0 || j2 < 0 || i2 >= n as i64 || j2 >= n as i64 {
                    continue;
                }
                let y1 = y0 + b as f64 * self.pitch;
                let len = self.pitch * ((a * a + b * b) as f64).sqrt();
                let w = len * (index(y0) + 4.0 * index(0.5 * (y0 + y1)) + index(y1)) / 6.0;
                let m = j2 as usize * n + i2 as usize;
                if v + w < d[m] {
                    d[m] = v + w;
                    heap.push(Entry(v + w, m));
                }
            }
        }
        d
    }

    /// Spatial distance `d_G`.
    pub fn d_g(&self, p: (f64, f64), q: (f64, f64)) -> f64 {
        let (a, b) = (self.snap(p.0, p.1), self.snap(q.0, q.1));
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        self.field(a)[b]
    }

    /// Node coordinates nearest to `(x, y)`.
    pub fn snapped(&self, x: f64, y: f64) -> (f64, f64) {
        self.coord(self.snap(x, y))
    }
}

impl Chronology for Grapefruit {
    fn name(&self) -> String {
        "grapefruit".into()
    }

    fn dim(&self) -> usize {
        3
    }

    fn admissible(&self, p: &Point) -> bool {
        p.t.is_finite() && p.x.abs() <= self.extent && p.y.abs() <= self.extent
    }

    fn chron(&self, p: &Point, q: &Point) -> bool {
        q.t > p.t && self.d_g((p.x, p.y), (q.x, q.y)) < q.t - p.t - CHRON_TOL
    }

    fn dist(&self, p: &Point, q: &Point) -> f64 {
        let s = self.d_g((p.x, p.y), (q.x, q.y));
        ((q.t - p.t).powi(2) + s * s).sqrt()
    }

    fn causal(&self, p: &Point, q: &Point) -> Option<bool> {
        Some(p == q || self.d_g((p.x, p.y), (q.x, q.y)) <= q.t - p.t + CHRON_TOL)
    }

    fn alpha(&self, p: &Point, q: &Point) -> Option<bool> {
        self.causal(p, q)
    }

    fn product(&self) -> Option<ProductInfo> {
        Some(ProductInfo { floor: f64::NEG_INFINITY, ceil: f64::INFINITY, spatial_dims: 2, period: None })
    }

    fn spatial_dist(&self, p: &Point, q: &Point) -> f64 {
        self.d_g((p.x, p.y), (q.x, q.y))
    }
}
