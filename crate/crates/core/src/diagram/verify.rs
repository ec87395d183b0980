use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::angleform::{shape_sum_check, Assignment};
use crate::error::Result;
use crate::holonomy::ez_check;

use super::develop::{develop, SeedPose};
use super::spec::DiagramSpec;

/// Default existence tolerance on the normalized residual.
pub const EXISTENCE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeVerdict {
    pub triangle: String,
    pub sums_to_half_turn: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexVerdict {
    /// Index into `interior_vertices`.
    pub vertex: usize,
    pub ez_holonomy: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymbolicReport {
    pub shapes: Vec<ShapeVerdict>,
    pub vertices: Vec<VertexVerdict>,
}

impl SymbolicReport {
    pub fn passes(&self) -> bool {
        self.shapes.iter().all(|s| s.sums_to_half_turn) && self.vertices.iter().all(|v| v.ez_holonomy)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExistenceReport {
    pub symbolic: SymbolicReport,
    pub max_residual: f64,
    pub normalized_residual: f64,
    pub tolerance: f64,
    pub exists: bool,
}

pub fn symbolic_checks(spec: &DiagramSpec) -> Result<SymbolicReport> {
    let shapes = spec
        .triangles
        .iter()
        .map(|t| ShapeVerdict {
            triangle: t.id.clone(),
            sums_to_half_turn: shape_sum_check(&t.angles, spec.n),
        })
        .collect();
    let vertices = spec
        .interior_vertices
        .iter()
        .enumerate()
        .map(|(i, ring)| {
            Ok(VertexVerdict {
                vertex: i,
                ez_holonomy: ez_check(&spec.ring(ring)?, spec.n),
            })
        })
        .collect::<Result<_>>()?;
    Ok(SymbolicReport { shapes, vertices })
}

/// Symbolic checks plus a numeric development compared against `tolerance`.
pub fn verify_existence(spec: &DiagramSpec, assignment: &Assignment, tolerance: f64) -> Result<ExistenceReport> {
    let symbolic = symbolic_checks(spec)?;
    let placed = develop(spec, assignment, &SeedPose::default_for(spec))?;
    let normalized_residual = placed.normalized_residual(spec);
    let exists = symbolic.passes() && normalized_residual < tolerance;
    Ok(ExistenceReport {
        symbolic,
        max_residual: placed.max_residual(),
        normalized_residual,
        tolerance,
        exists,
    })
}

/// Worst normalized residual over `trials` random valid assignments.
pub fn worst_residual(spec: &DiagramSpec, trials: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pose = SeedPose::default_for(spec);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let x = Assignment::random(spec.n, &mut rng);
        worst = worst.max(develop(spec, &x, &pose)?.normalized_residual(spec));
    }
    Ok(worst)
}
