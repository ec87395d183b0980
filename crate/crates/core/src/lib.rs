//! Triangle diagrams assembled from similarity classes of triangles.
//!
//! Angles are exact linear forms in three parameters `a`, `b`, `c` and the
//! full turn `tau`, constrained by `a + b + c = tau/(2n)`. A diagram exists
//! when its triangles fit together as prescribed; this crate decides that
//! symbolically (angle sums and the permutation criterion for holonomy around
//! each interior vertex) and numerically (developing the diagram into the
//! plane and measuring how well glued edges close up).
//!
//! The modules build on each other:
//!
//! - [`angleform`]: exact angle algebra and shapes.
//! - [`holonomy`]: rings of triangles around a vertex, the cyclotomic sine
//!   identity and the corner-fan check.
//! - [`diagram`]: diagram specs, the developing engine, the catalog.
//! - [`doughnut`]: the `n`-sector doughnut, its hole and its asymptotics.
//! - [`search`]: exhaustive search for linear-form fillings of the hole.
//! - [`packing`]: exponential circle packings.
//! - [`render`]: deterministic SVG output.

pub mod angleform;
pub mod diagram;
pub mod doughnut;
pub mod error;
pub mod geometry;
pub mod holonomy;
pub mod packing;
pub mod render;
pub mod search;

pub use angleform::{parse_angle, sector_unit, Assignment, AngleForm, Shape};
pub use diagram::{catalog, develop, verify_existence, DiagramSpec, PlacedDiagram, SeedPose};
pub use error::{Error, Result};
pub use geometry::Point;
pub use holonomy::{ez_check, Ring, RingEntry};
pub use packing::{develop_packing, Packing, PackingParams};
pub use render::{flipbook, to_svg, RenderStyle, Scene};
pub use search::{search_hole_fill, SearchBounds, SearchResult};
