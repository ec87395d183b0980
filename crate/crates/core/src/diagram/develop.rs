use std::collections::VecDeque;
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::angleform::Assignment;
use crate::error::{Error, Result};
use crate::geometry::{point, third_vertex, BBox, Point};

use super::spec::DiagramSpec;

/// Which triangle is nailed down first, and where its vertices 0 and 1 go.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedPose {
    pub triangle: String,
    pub anchors: [Point; 2],
}

impl SeedPose {
    pub fn new(triangle: impl Into<String>, v0: Point, v1: Point) -> Self {
        SeedPose {
            triangle: triangle.into(),
            anchors: [v0, v1],
        }
    }

    /// First triangle of the spec, unit edge along the real axis.
    pub fn default_for(spec: &DiagramSpec) -> Self {
        SeedPose::new(spec.triangles[0].id.clone(), point(0.0, 0.0), point(1.0, 0.0))
    }
}

/// A numeric realization of a diagram.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlacedDiagram {
    pub ids: Vec<String>,
    pub placements: Vec<[Point; 3]>,
    /// Per gluing (spec order): the larger endpoint mismatch.
    pub residuals: Vec<f64>,
    /// Per triangle: index of the developed disk it belongs to.
    pub disk: Vec<usize>,
    pub seed: SeedPose,
}

impl PlacedDiagram {
    pub fn placement(&self, id: &str) -> Option<&[Point; 3]> {
        self.ids.iter().position(|t| t == id).map(|i| &self.placements[i])
    }

    pub fn bbox(&self) -> BBox {
        BBox::of(self.placements.iter().flatten()).expect("placed diagrams are nonempty")
    }

    pub fn diameter(&self) -> f64 {
        self.bbox().diagonal()
    }

    pub fn disk_diameter(&self, disk: usize) -> f64 {
        BBox::of(
            self.placements
                .iter()
                .zip(&self.disk)
                .filter(|(_, d)| **d == disk)
                .flat_map(|(p, _)| p.iter()),
        )
        .map(|b| b.diagonal())
        .unwrap_or(0.0)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Largest residual relative to the bounding-box diagonal of its disk.
    pub fn normalized_residual(&self, spec: &DiagramSpec) -> f64 {
        let ids = spec.triangle_index();
        let disks = self.disk.iter().max().map_or(0, |m| m + 1);
        let mut diameters: Vec<Option<f64>> = vec![None; disks];
        let mut worst: f64 = 0.0;
        for (g, r) in spec.gluings.iter().zip(&self.residuals) {
            let disk = self.disk[ids[g.0.as_str()]];
            let d = *diameters[disk].get_or_insert_with(|| self.disk_diameter(disk));
            worst = worst.max(r / d);
        }
        worst
    }

    /// Coordinates of a named vertex (via the spec's `labels` metadata).
    pub fn vertex(&self, spec: &DiagramSpec, name: &str) -> Option<Point> {
        let labels = spec.labels()?;
        for (id, names) in &labels {
            if let Some(k) = names.iter().position(|v| v == name) {
                return self.placement(id).map(|p| p[k]);
            }
        }
        None
    }

    /// Applies `z -> scale * z + shift` to every vertex.
    pub fn transformed(&self, scale: Point, shift: Point) -> PlacedDiagram {
        let mut out = self.clone();
        for tri in &mut out.placements {
            for p in tri.iter_mut() {
                *p = scale * *p + shift;
            }
        }
        for r in &mut out.residuals {
            *r *= scale.norm();
        }
        out.seed.anchors = out.seed.anchors.map(|p| scale * p + shift);
        out
    }
}

/// Placements, per-gluing residuals and per-triangle disk indices.
pub type Development = (Vec<[Point; 3]>, Vec<f64>, Vec<usize>);

/// Developing engine on numeric angle triples. `gluings` holds
/// `(triangle, edge, triangle, edge)` index tuples.
pub fn develop_angles(
    angles: &[[f64; 3]],
    gluings: &[(usize, usize, usize, usize)],
    seed: usize,
    anchors: [Point; 2],
    allow_disks: bool,
) -> Result<Development> {
    let count = angles.len();
    let mut neighbors = vec![[None; 3]; count];
    for &(t, e, u, f) in gluings {
        neighbors[t][e] = Some((u, f));
        neighbors[u][f] = Some((t, e));
    }
    let mut placed: Vec<Option<[Point; 3]>> = vec![None; count];
    let mut disk = vec![usize::MAX; count];
    let seed_length = (anchors[1] - anchors[0]).norm();
    let mut next_seed = Some((seed, anchors));
    let mut disk_id = 0;

    while let Some((start, [v0, v1])) = next_seed.take() {
        placed[start] = Some([v0, v1, third_vertex(v0, v1, angles[start])]);
        disk[start] = disk_id;
        let mut queue = VecDeque::from([start]);
        while let Some(t) = queue.pop_front() {
            let tri = placed[t].expect("queued triangles are placed");
            for e in 0..3 {
                let Some((u, f)) = neighbors[t][e] else { continue };
                if placed[u].is_some() {
                    continue;
                }
                let mut verts = [point(0.0, 0.0); 3];
                let first = (f + 1) % 3;
                let second = (f + 2) % 3;
                verts[first] = tri[(e + 2) % 3];
                verts[second] = tri[(e + 1) % 3];
                let a = angles[u];
                verts[f] = third_vertex(verts[first], verts[second], [a[first], a[second], a[f]]);
                placed[u] = Some(verts);
                disk[u] = disk_id;
                queue.push_back(u);
            }
        }
        if let Some(next) = placed.iter().position(Option::is_none) {
            if !allow_disks {
                let unreached = placed.iter().filter(|p| p.is_none()).count();
                return Err(Error::DisconnectedSpec { unreached });
            }
            let bbox = BBox::of(placed.iter().flatten().flatten()).expect("something is placed");
            let x = bbox.max.re + 0.25 * bbox.width().max(seed_length);
            let origin = point(x, bbox.min.im);
            next_seed = Some((next, [origin, origin + seed_length]));
            disk_id += 1;
        }
    }

    let placements: Vec<[Point; 3]> = placed.into_iter().map(|p| p.expect("all placed")).collect();
    let residuals = gluings
        .iter()
        .map(|&(t, e, u, f)| {
            let p = &placements[t];
            let q = &placements[u];
            let m1 = (p[(e + 1) % 3] - q[(f + 2) % 3]).norm();
            let m2 = (p[(e + 2) % 3] - q[(f + 1) % 3]).norm();
            m1.max(m2)
        })
        .collect();
    Ok((placements, residuals, disk))
}

/// Breadth-first development of a spec from a seed pose.
pub fn develop(spec: &DiagramSpec, assignment: &Assignment, seed: &SeedPose) -> Result<PlacedDiagram> {
    assignment.check(spec.n)?;
    let ids = spec.triangle_index();
    let mut angles = Vec::with_capacity(spec.triangles.len());
    for tri in &spec.triangles {
        let values = tri.angles.values(assignment);
        if let Some(bad) = values.iter().find(|v| !(**v > 0.0 && **v < TAU / 2.0)) {
            return Err(Error::UnrealizableShape {
                id: tri.id.clone(),
                value: *bad,
            });
        }
        angles.push(values);
    }
    let gluings: Vec<_> = spec
        .gluings
        .iter()
        .map(|g| {
            let t = ids.get(g.0.as_str()).copied();
            let u = ids.get(g.2.as_str()).copied();
            match (t, u) {
                (Some(t), Some(u)) => Ok((t, g.1, u, g.3)),
                _ => Err(Error::InvalidSpec(format!("gluing {g:?} references unknown triangle"))),
            }
        })
        .collect::<Result<_>>()?;
    let start = *ids
        .get(seed.triangle.as_str())
        .ok_or_else(|| Error::InvalidArgument(format!("unknown seed triangle {}", seed.triangle)))?;
    let allow_disks = spec.disks().is_some();
    let (placements, residuals, disk) =
        develop_angles(&angles, &gluings, start, seed.anchors, allow_disks)?;
    Ok(PlacedDiagram {
        ids: spec.triangles.iter().map(|t| t.id.clone()).collect(),
        placements,
        residuals,
        disk,
        seed: seed.clone(),
    })
}
