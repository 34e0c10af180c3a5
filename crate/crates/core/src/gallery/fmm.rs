//! First-order fast marching for the eikonal equation |∇u| = n on a planar grid.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Clone, Debug)]
pub struct FmmGrid {
    pub h: f64,
    pub x0: f64,
    pub y0: f64,
    pub nx: usize,
    pub ny: usize,
    /// Refractive index per node.
    pub index: Vec<f64>,
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

#[derive(Clone, Copy, PartialEq)]
enum State {
    Far,
    Trial,
    Known,
}

impl FmmGrid {
    pub fn new(h: f64, xr: (f64, f64), yr: (f64, f64), index: impl Fn(f64, f64) -> f64) -> Self {
        let nx = ((xr.1 - xr.0) / h + 1e-9).floor() as usize + 1;
        let ny = ((yr.1 - yr.0) / h + 1e-9).floor() as usize + 1;
        let mut idx = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                idx.push(index(xr.0 + i as f64 * h, yr.0 + j as f64 * h));
            }
        }
        FmmGrid { h, x0: xr.0, y0: yr.0, nx, ny, index: idx }
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn at(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn node(&self, k: usize) -> (f64, f64) {
        (self.x0 + (k % self.nx) as f64 * self.h, self.y0 + (k / self.nx) as f64 * self.h)
    }

    pub fn nearest(&self, x: f64, y: f64) -> Option<usize> {
        let i = ((x - self.x0) / self.h).round();
        let j = ((y - self.y0) / self.h).round();
        (i >= 0.0 && j >= 0.0 && (i as usize) < self.nx && (j as usize) < self.ny)
            .then(|| self.at(i as usize, j as usize))
    }

    /// Solves from fixed node values; unreached nodes stay infinite.
    pub fn solve(&self, sources: &[(usize, f64)]) -> Vec<f64> {
        let n = self.len();
        let mut u = vec![f64::INFINITY; n];
        let mut state = vec![State::Far; n];
        let mut heap = BinaryHeap::new();
        for &(k, v) in sources {
            if v < u[k] {
                u[k] = v;
                state[k] = State::Trial;
                heap.push(Entry(v, k));
            }
        }
        while let Some(Entry(v, k)) = heap.pop() {
            if state[k] == State::Known || v > u[k] {
                continue;
            }
            state[k] = State::Known;
            let (i, j) = (k % self.nx, k / self.nx);
            let mut nbrs = [usize::MAX; 4];
            if i > 0 {
                nbrs[0] = k - 1;
            }
            if i + 1 < self.nx {
                nbrs[1] = k + 1;
            }
            if j > 0 {
                nbrs[2] = k - self.nx;
            }
            if j + 1 < self.ny {
                nbrs[3] = k + self.nx;
            }
            for &m in nbrs.iter().filter(|&&m| m != usize::MAX) {
                if state[m] == State::Known {
                    continue;
                }
                let cand = self.update(&u, &state, m);
                if cand < u[m] {
                    u[m] = cand;
                    state[m] = State::Trial;
                    heap.push(Entry(cand, m));
                }
            }
        }
        u
    }

    fn update(&self, u: &[f64], state: &[State], k: usize) -> f64 {
        let (i, j) = (k % self.nx, k / self.nx);
        let known = |m: usize| if state[m] == State::Known { u[m] } else { f64::INFINITY };
        let mut a = f64::INFINITY;
        if i > 0 {
            a = a.min(known(k - 1));
        }
        if i + 1 < self.nx {
            a = a.min(known(k + 1));
        }
        let mut b = f64::INFINITY;
        if j > 0 {
            b = b.min(known(k - self.nx));
        }
        if j + 1 < self.ny {
            b = b.min(known(k + self.nx));
        }
        let s = self.index[k] * self.h;
        if a.is_infinite() || b.is_infinite() || (a - b).abs() >= s {
            return a.min(b) + s;
        }
        0.5 * (a + b + (2.0 * s * s - (a - b) * (a - b)).sqrt())
    }

    /// Bilinear interpolation of a node field; infinite outside the grid.
    pub fn interp(&self, field: &[f64], x: f64, y: f64) -> f64 {
        let fx = (x - self.x0) / self.h;
        let fy = (y - self.y0) / self.h;
        if fx < 0.0 || fy < 0.0 || fx > (self.nx - 1) as f64 || fy > (self.ny - 1) as f64 {
            return f64::INFINITY;
        }
        let i = (fx.floor() as usize).min(self.nx.saturating_sub(2));
        let j = (fy.floor() as usize).min(self.ny.saturating_sub(2));
        let (sx, sy) = (fx - i as f64, fy - j as f64);
        let v = |ii: usize, jj: usize| field[self.at(ii.min(self.nx - 1), jj.min(self.ny - 1))];
        (1.0 - sx) * (1.0 - sy) * v(i, j) + sx * (1.0 - sy) * v(i + 1, j) + (1.0 - sx) * sy * v(i, j + 1) + sx * sy * v(i + 1, j + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_wave_is_exact() {
        let g = FmmGrid::new(0.1, (0.0, 2.0), (0.0, 2.0), |_, _| 1.0);
        let src: Vec<(usize, f64)> = (0..g.nx).map(|i| (g.at(i, 0), 0.0)).collect();
        let u = g.solve(&src);
        for k in 0..g.len() {
            let (_, y) = g.node(k);
            assert!((u[k] - y).abs() < 1e-12);
        }
    }

    #[test]
    fn point_source_first_order_accuracy() {
        let g = FmmGrid::new(1.0 / 32.0, (-1.0, 1.0), (-1.0, 1.0), |_, _| 1.0);
        let u = g.solve(&[(g.nearest(0.0, 0.0).unwrap(), 0.0)]);
        let k = g.nearest(0.75, 0.5).unwrap();
        let exact = (0.75f64 * 0.75 + 0.25).sqrt();
        assert!((u[k] - exact).abs() < 0.05, "{} vs {}", u[k], exact);
    }
}
