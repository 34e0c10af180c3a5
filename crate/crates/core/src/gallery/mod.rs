//! Worked example spaces.

pub mod cfc;
pub mod expr;
pub mod flat;
pub mod fmm;
pub mod grapefruit;
pub mod warp;

use std::sync::Arc;

use crate::chron::Chronology;
use crate::error::{Error, Result};
use crate::point::{SampleWindow, WindowBounds};

pub use flat::{Flat, FlatKind};
pub use grapefruit::Grapefruit;
pub use warp::{WarpSpace, WarpSpec};

pub const SPACE_NAMES: [&str; 6] = ["minkowski2", "strip", "punctured", "slit", "cylinder", "grapefruit"];

/// A named space with its default window and resolution.
#[derive(Clone)]
pub struct GallerySpace {
    pub name: String,
    pub oracle: Arc<dyn Chronology>,
    pub h: f64,
    pub bounds: WindowBounds,
}

impl std::fmt::Debug for GallerySpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GallerySpace").field("name", &self.name).field("h", &self.h).finish()
    }
}

impl GallerySpace {
    pub fn window(&self) -> SampleWindow {
        self.oracle.sample(self.h, &self.bounds)
    }

    pub fn window_at(&self, h: f64, bounds: &WindowBounds) -> SampleWindow {
        self.oracle.sample(h, bounds)
    }
}

pub fn describe(name: &str) -> Option<&'static str> {
    Some(match name {
        "minkowski2" => "two-dimensional Minkowski space",
        "strip" => "time slab (0,1) x R with the Minkowski cone; default window (0,1)^2",
        "punctured" => "Minkowski plane with the origin removed",
        "slit" => "Minkowski plane with the spacelike ray {t=0, x>0} removed",
        "cylinder" => "flat Lorentzian cylinder R x S^1 of circumference 2pi",
        "grapefruit" => "ultrastatic R x (R^2, f(y) g0) with a slow stick |y| <= 1",
        _ => return None,
    })
}

/// Builds a named gallery space at resolution `h`.
pub fn make_space(name: &str, h: f64) -> Result<GallerySpace> {
    if !(h > 0.0) {
        return Err(Error::Precondition(format!("resolution must be positive, got {h}")));
    }
    let kind = match name {
        "minkowski2" => FlatKind::Minkowski2,
        "strip" => FlatKind::Strip,
        "punctured" => FlatKind::Punctured,
        "slit" => FlatKind::Slit,
        "cylinder" => FlatKind::Cylinder,
        "grapefruit" => {
            return Ok(GallerySpace {
                name: name.into(),
                oracle: Arc::new(Grapefruit::new(h, 4.0)),
                h,
                bounds: Grapefruit::default_bounds(),
            })
        }
        other => return Err(Error::UnknownSpace(other.into())),
    };
    Ok(GallerySpace { name: name.into(), oracle: Arc::new(Flat::new(kind)), h, bounds: flat::default_bounds(kind) })
}

/// A warped product as a gallery space.
pub fn warp_space(spec: WarpSpec) -> Result<(GallerySpace, Arc<WarpSpace>)> {
    let w = Arc::new(WarpSpace::new(spec)?);
    let (a, b) = w.spec.interval;
    let bounds = WindowBounds::new(&[a, 0.0], &[b, 0.0]);
    let g = GallerySpace { name: "warped".into(), oracle: w.clone(), h: w.spec.dt, bounds };
    Ok((g, w))
}
