//! Exponential circle packings: hexagonal combinatorics, radii `s^i t^j` at
//! lattice vertex `(i, j)`, two triangle shapes alternating.

use std::collections::HashMap;
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::diagram::{develop_angles, PlacedDiagram, SeedPose};
use crate::error::{Error, Result};
use crate::geometry::{angle_between, point, Point};
use crate::holonomy::numeric_ring_holonomy;

/// Tolerance on angle sums for `vertex_fit_check`.
pub const FIT_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PackingParams {
    pub ratio_s: f64,
    pub ratio_t: f64,
    pub rows: usize,
    pub cols: usize,
}

impl PackingParams {
    pub fn new(ratio_s: f64, ratio_t: f64, rows: usize, cols: usize) -> Result<Self> {
        check_ratios(ratio_s, ratio_t)?;
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument("packing patch needs rows, cols >= 1".into()));
        }
        Ok(PackingParams {
            ratio_s,
            ratio_t,
            rows,
            cols,
        })
    }
}

fn check_ratios(s: f64, t: f64) -> Result<()> {
    if !(s.is_finite() && t.is_finite() && s > 0.0 && t > 0.0) {
        return Err(Error::NotRealizable { s, t });
    }
    Ok(())
}

/// Angles of the triangle on three mutually tangent circles of radii `r`.
pub fn tangent_triangle_angles(r: [f64; 3]) -> [f64; 3] {
    let side = |k: usize| r[(k + 1) % 3] + r[(k + 2) % 3];
    [0, 1, 2].map(|k| {
        let (a, b, c) = (side(k), side((k + 1) % 3), side((k + 2) % 3));
        ((b * b + c * c - a * a) / (2.0 * b * c)).clamp(-1.0, 1.0).acos()
    })
}

/// The up triangle on radii `(1, s, t)` and the down triangle on `(s, st, t)`.
pub fn shapes_from_ratios(ratio_s: f64, ratio_t: f64) -> Result<([f64; 3], [f64; 3])> {
    check_ratios(ratio_s, ratio_t)?;
    let up = tangent_triangle_angles([1.0, ratio_s, ratio_t]);
    let down = tangent_triangle_angles([ratio_s, ratio_s * ratio_t, ratio_t]);
    Ok((up, down))
}

/// The six triangles around a lattice vertex alternate up/down with pivots
/// 0, 0, 1, 1, 2, 2; the arrangement closes iff the ring holonomy is trivial.
pub fn vertex_fit_check(up: [f64; 3], down: [f64; 3]) -> bool {
    let half = TAU / 2.0;
    if (up.iter().sum::<f64>() - half).abs() > FIT_TOLERANCE
        || (down.iter().sum::<f64>() - half).abs() > FIT_TOLERANCE
    {
        return false;
    }
    let ring = [(up, 0), (down, 0), (up, 1), (down, 1), (up, 2), (down, 2)];
    match numeric_ring_holonomy(&ring) {
        Ok(h) => h.is_trivial(FIT_TOLERANCE),
        Err(_) => false,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub lattice: (i64, i64),
    pub center: Point,
    pub radius: f64,
    pub log_radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Packing {
    pub params: PackingParams,
    pub placed: PlacedDiagram,
    /// Lattice vertices of each triangle, in placement order.
    pub vertices: Vec<[(i64, i64); 3]>,
    pub circles: Vec<Circle>,
}

fn up_vertices(i: i64, j: i64) -> [(i64, i64); 3] {
    [(i, j), (i + 1, j), (i, j + 1)]
}

fn down_vertices(i: i64, j: i64) -> [(i64, i64); 3] {
    [(i + 1, j), (i + 1, j + 1), (i, j + 1)]
}

/// Develops the `rows x cols` patch of up/down triangle pairs.
pub fn develop_packing(params: &PackingParams) -> Result<Packing> {
    let (up, down) = shapes_from_ratios(params.ratio_s, params.ratio_t)?;
    let (ls, lt) = (params.ratio_s.ln(), params.ratio_t.ln());
    let mut ids = Vec::new();
    let mut vertices = Vec::new();
    let mut angles = Vec::new();
    for j in 0..params.rows as i64 {
        for i in 0..params.cols as i64 {
            ids.push(format!("U{i}_{j}"));
            vertices.push(up_vertices(i, j));
            angles.push(up);
            ids.push(format!("D{i}_{j}"));
            vertices.push(down_vertices(i, j));
            angles.push(down);
        }
    }
    let mut directed = HashMap::new();
    for (t, v) in vertices.iter().enumerate() {
        for k in 0..3 {
            directed.insert((v[(k + 1) % 3], v[(k + 2) % 3]), (t, k));
        }
    }
    let mut gluings = Vec::new();
    for (&(from, to), &(t, k)) in &directed {
        if let Some(&(u, f)) = directed.get(&(to, from)) {
            if (t, k) < (u, f) {
                gluings.push((t, k, u, f));
            }
        }
    }
    gluings.sort_unstable();

    let anchors = [point(0.0, 0.0), point(1.0 + params.ratio_s, 0.0)];
    let (placements, residuals, disk) = develop_angles(&angles, &gluings, 0, anchors, false)?;

    let mut circles: Vec<Circle> = Vec::new();
    let mut seen = HashMap::new();
    for (t, v) in vertices.iter().enumerate() {
        for k in 0..3 {
            let lattice = v[k];
            if seen.contains_key(&lattice) {
                continue;
            }
            seen.insert(lattice, circles.len());
            let log_radius = lattice.0 as f64 * ls + lattice.1 as f64 * lt;
            circles.push(Circle {
                lattice,
                center: placements[t][k],
                radius: log_radius.exp(),
                log_radius,
            });
        }
    }
    circles.sort_by_key(|c| (c.lattice.1, c.lattice.0));

    Ok(Packing {
        params: *params,
        placed: PlacedDiagram {
            ids: ids.clone(),
            placements,
            residuals,
            disk,
            seed: SeedPose::new(ids[0].clone(), anchors[0], anchors[1]),
        },
        vertices,
        circles,
    })
}

impl Packing {
    fn circle(&self, lattice: (i64, i64)) -> Option<&Circle> {
        self.circles.iter().find(|c| c.lattice == lattice)
    }

    /// Largest `| |c_i - c_j| - (r_i + r_j) | / (r_i + r_j)` over triangle edges.
    pub fn tangency_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (t, v) in self.vertices.iter().enumerate() {
            for k in 0..3 {
                let (p, q) = (v[k], v[(k + 1) % 3]);
                let (cp, cq) = (self.circle(p).expect("vertex circle"), self.circle(q).expect("vertex circle"));
                let placed = &self.placed.placements[t];
                let d = (placed[k] - placed[(k + 1) % 3]).norm();
                let sum = cp.radius + cq.radius;
                worst = worst.max((d - sum).abs() / sum);
            }
        }
        worst
    }

    /// Largest `|sum of incident angles - tau|` over vertices with six incident triangles.
    pub fn flat_vertex_residual(&self) -> f64 {
        let mut sums: HashMap<(i64, i64), (usize, f64)> = HashMap::new();
        for (t, v) in self.vertices.iter().enumerate() {
            let p = &self.placed.placements[t];
            for k in 0..3 {
                let angle = angle_between(p[k], p[(k + 1) % 3], p[(k + 2) % 3]);
                let entry = sums.entry(v[k]).or_insert((0, 0.0));
                entry.0 += 1;
                entry.1 += angle;
            }
        }
        sums.values()
            .filter(|(count, _)| *count == 6)
            .map(|(_, s)| (s - TAU).abs())
            .fold(0.0, f64::max)
    }

    /// Largest mismatch between a vertex's placements in different triangles.
    pub fn closure_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (t, v) in self.vertices.iter().enumerate() {
            for (k, lattice) in v.iter().enumerate() {
                let c = self.circle(*lattice).expect("vertex circle");
                worst = worst.max((self.placed.placements[t][k] - c.center).norm() / c.radius);
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_ratios_are_equilateral() {
        let (up, down) = shapes_from_ratios(1.0, 1.0).unwrap();
        for angle in up.iter().chain(&down) {
            assert!((angle - TAU / 6.0).abs() < 1e-15);
        }
    }

    #[test]
    fn two_one_shapes_from_law_of_cosines() {
        let (up, down) = shapes_from_ratios(2.0, 1.0).unwrap();
        // Up triangle sides opposite its vertices: (3, 2, 3).
        assert!((up[1] - (7.0f64 / 9.0).acos()).abs() < 1e-15);
        assert!((up[0] - (1.0f64 / 3.0).acos()).abs() < 1e-15);
        assert!((up[0] - up[2]).abs() < 1e-15);
        // Down triangle sides: (3, 3, 4); not congruent to the up triangle.
        assert!((down[2] - (1.0f64 / 9.0).acos()).abs() < 1e-15);
        assert!((down[0] - (2.0f64 / 3.0).acos()).abs() < 1e-15);
        assert!((down[0] - down[1]).abs() < 1e-15);
    }

    #[test]
    fn realizability() {
        assert!(shapes_from_ratios(100.0, 1.0).is_ok());
        assert_eq!(shapes_from_ratios(0.0, 1.0), Err(Error::NotRealizable { s: 0.0, t: 1.0 }));
        assert!(shapes_from_ratios(f64::NAN, 1.0).is_err());
        assert!(shapes_from_ratios(1.0, -2.0).is_err());
    }

    #[test]
    fn fit() {
        let eq = [TAU / 6.0; 3];
        assert!(vertex_fit_check(eq, eq));
        let (up, down) = shapes_from_ratios(2.0, 3.0).unwrap();
        assert!(vertex_fit_check(up, down));
        let mut bent = up;
        bent[0] += 1e-3;
        assert!(!vertex_fit_check(bent, down));
    }

    #[test]
    fn hexagonal_packing() {
        let packing = develop_packing(&PackingParams::new(1.0, 1.0, 5, 5).unwrap()).unwrap();
        let w = Point::from_polar(2.0, TAU / 6.0);
        for c in &packing.circles {
            assert_eq!(c.radius, 1.0);
            let expected = point(2.0 * c.lattice.0 as f64, 0.0) + w * c.lattice.1 as f64;
            assert!((c.center - expected).norm() < 1e-12);
        }
        assert_eq!(packing.circles.len(), 36);
    }

    #[test]
    fn generic_patch_is_tangent_and_flat() {
        let packing = develop_packing(&PackingParams::new(1.15, 0.9, 6, 7).unwrap()).unwrap();
        assert!(packing.tangency_residual() < 1e-9);
        assert!(packing.flat_vertex_residual() < 1e-9);
        assert!(packing.closure_residual() < 1e-9);
        assert!(packing.placed.max_residual() < 1e-9 * packing.placed.diameter());
        for c in &packing.circles {
            if let Some(next) = packing.circle((c.lattice.0 + 1, c.lattice.1)) {
                assert!((next.radius / c.radius - 1.15).abs() < 1e-12);
            }
        }
    }
}
