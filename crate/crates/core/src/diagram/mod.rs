//! Diagrams of shaped triangles: specification, development into the plane,
//! existence verdicts and the built-in catalog.

pub mod catalog;
mod develop;
mod spec;
mod verify;

pub use catalog::{catalog, CATALOG_NAMES};
pub use develop::{develop, develop_angles, PlacedDiagram, SeedPose};
pub use spec::{DiagramSpec, Gluing, LabeledTriangle, Triangle, VertexRing};
pub use verify::{
    symbolic_checks, verify_existence, worst_residual, ExistenceReport, ShapeVerdict, SymbolicReport,
    VertexVerdict, EXISTENCE_TOLERANCE,
};
