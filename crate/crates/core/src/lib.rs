//! Future causal completions of chronological sets: IP handles, limit operators, set metrics, the causal ladder and finite-order chronologies.

pub mod chron;
pub mod error;
pub mod gallery;
pub mod graph;
pub mod ip;
pub mod ladder;
pub mod limits;
pub mod metrics;
pub mod point;
pub mod poset;
pub mod relation;
pub mod tfae;

pub use chron::{Chronology, ExplicitRelation, ProductInfo, RelationReport};
pub use error::{Error, Result};
pub use gallery::{make_space, GallerySpace, WarpSpec};
pub use ip::{ChainSpec, IpHandle};
pub use ladder::{LadderAudit, LadderConfig};
pub use limits::{HandleFamily, LimitConfig};
pub use point::{Point, PointSet, SampleWindow, WindowBounds};
pub use poset::FinitePoset;
pub use relation::RelationMatrix;
pub use tfae::{TfaeConfig, TfaeReport};
