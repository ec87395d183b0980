use std::collections::HashMap;
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::angleform::{AngleForm, Assignment, Shape};
use crate::diagram::{develop, DiagramSpec, LabeledTriangle, PlacedDiagram, SeedPose};
use crate::error::{Error, Result};
use crate::geometry::{cross, polygon_area, triangle_area, triangle_overlap_area, BBox, Point};

use super::{chain_vertex, CORNERS};

/// Relative threshold for overlaps, coincident points and collinear turns.
pub const DEFAULT_MERGE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HolePolygon {
    /// Counter-clockwise; empty when the hole is absent.
    pub vertices: Vec<Point>,
    pub labels: Vec<String>,
    /// Per edge `i -> i+1`: the corner whose fan bounds it, if any.
    pub corner_association: Vec<Option<usize>>,
}

impl HolePolygon {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn area(&self) -> f64 {
        polygon_area(&self.vertices)
    }
}

/// Corner owning a hole-boundary label (`A3` or the fill apex `A3^`).
fn label_corner(label: &str) -> Option<usize> {
    let mut chars = label.chars();
    let first = chars.next()?;
    let rest: String = chars.collect();
    let digits = rest.trim_end_matches('^');
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    CORNERS.iter().position(|c| c.starts_with(first))
}

/// Fails with `OverlappingFans` when two triangles overlap by more than
/// `tolerance * diameter^2`.
pub fn check_overlaps(placed: &PlacedDiagram, tolerance: f64) -> Result<()> {
    let diameter = placed.diameter();
    let limit = tolerance * diameter * diameter;
    let boxes: Vec<BBox> = placed
        .placements
        .iter()
        .map(|t| BBox::of(t.iter()).expect("triangles have vertices"))
        .collect();
    for i in 0..placed.placements.len() {
        for j in i + 1..placed.placements.len() {
            let (p, q) = (&boxes[i], &boxes[j]);
            if p.max.re < q.min.re || q.max.re < p.min.re || p.max.im < q.min.im || q.max.im < p.min.im {
                continue;
            }
            let area = triangle_overlap_area(&placed.placements[i], &placed.placements[j]);
            if area > limit {
                return Err(Error::OverlappingFans {
                    first: placed.ids[i].clone(),
                    second: placed.ids[j].clone(),
                    area,
                });
            }
        }
    }
    Ok(())
}

/// Unglued edges as `(from label, to label, from point, to point)`.
fn boundary_edges(placed: &PlacedDiagram, spec: &DiagramSpec) -> Result<Vec<(String, String, Point, Point)>> {
    let labels = spec
        .labels()
        .ok_or_else(|| Error::InvalidSpec("hole extraction needs vertex labels".into()))?;
    let glued = spec.gluing_index();
    let mut out = Vec::new();
    for (t, tri) in spec.triangles.iter().enumerate() {
        let names = &labels[&tri.id];
        let at = &placed.placements[t];
        for k in 0..3 {
            if glued.contains_key(&(t, k)) {
                continue;
            }
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            out.push((names[i].clone(), names[j].clone(), at[i], at[j]));
        }
    }
    Ok(out)
}

/// Combinatorial hole: vertex names around the unglued inner boundary,
/// counter-clockwise, starting at the smallest name. Empty when the diagram
/// has no boundary besides the outer one through the corner `A`.
pub fn hole_labels(spec: &DiagramSpec) -> Result<Vec<String>> {
    let labels = spec
        .labels()
        .ok_or_else(|| Error::InvalidSpec("hole extraction needs vertex labels".into()))?;
    let glued = spec.gluing_index();
    let mut next: HashMap<String, String> = HashMap::new();
    for (t, tri) in spec.triangles.iter().enumerate() {
        let names = &labels[&tri.id];
        for k in 0..3 {
            if !glued.contains_key(&(t, k)) {
                next.insert(names[(k + 1) % 3].clone(), names[(k + 2) % 3].clone());
            }
        }
    }
    let mut starts: Vec<&String> = next.keys().collect();
    starts.sort();
    let mut seen: Vec<String> = Vec::new();
    for start in starts {
        if seen.contains(start) {
            continue;
        }
        let mut cycle = vec![start.clone()];
        let mut here = start.clone();
        while let Some(to) = next.get(&here) {
            if to == start || cycle.len() > next.len() {
                break;
            }
            cycle.push(to.clone());
            here = to.clone();
        }
        seen.extend(cycle.iter().cloned());
        if !cycle.iter().any(|v| CORNERS.contains(&v.as_str())) {
            cycle.reverse();
            let first = (0..cycle.len()).min_by(|&i, &j| cycle[i].cmp(&cycle[j])).unwrap_or(0);
            cycle.rotate_left(first);
            return Ok(cycle);
        }
    }
    Ok(Vec::new())
}

/// Removes coincident and collinear vertices until none remain.
fn simplify(points: &mut Vec<Point>, labels: &mut Vec<String>, coincidence: f64, turn: f64) {
    loop {
        let len = points.len();
        if len < 3 {
            return;
        }
        let mut removed = false;
        for i in 0..len {
            let prev = points[(i + len - 1) % len];
            let here = points[i];
            let next = points[(i + 1) % len];
            let u = here - prev;
            let v = next - here;
            let coincident = u.norm() < coincidence;
            let straight = !coincident
                && v.norm() >= coincidence
                && cross(u, v).atan2(u.re * v.re + u.im * v.im).abs() < turn;
            if coincident || straight {
                points.remove(i);
                labels.remove(i);
                removed = true;
                break;
            }
        }
        if !removed {
            return;
        }
    }
}

/// The region of the frame not covered by the diagram's triangles.
pub fn hole_polygon(placed: &PlacedDiagram, spec: &DiagramSpec) -> Result<HolePolygon> {
    check_overlaps(placed, DEFAULT_MERGE_TOLERANCE)?;
    let diameter = placed.diameter();
    let edges = boundary_edges(placed, spec)?;
    let mut next: HashMap<&str, usize> = HashMap::new();
    for (i, e) in edges.iter().enumerate() {
        next.insert(e.0.as_str(), i);
    }

    // Cycles of boundary edges; the hole is traversed clockwise.
    let mut used = vec![false; edges.len()];
    let mut best: Option<(f64, Vec<usize>)> = None;
    for start in 0..edges.len() {
        if used[start] {
            continue;
        }
        let mut cycle = vec![];
        let mut e = start;
        while !used[e] {
            used[e] = true;
            cycle.push(e);
            match next.get(edges[e].1.as_str()) {
                Some(&n) => e = n,
                None => break,
            }
        }
        let points: Vec<Point> = cycle.iter().map(|&i| edges[i].2).collect();
        let area = polygon_area(&points);
        if area < 0.0 && best.as_ref().is_none_or(|(a, _)| -area > *a) {
            best = Some((-area, cycle));
        }
    }

    let frame_area = match (placed.vertex(spec, "A"), placed.vertex(spec, "B"), placed.vertex(spec, "C")) {
        (Some(a), Some(b), Some(c)) => triangle_area(&[a, b, c]).abs(),
        _ => diameter * diameter,
    };
    let Some((area, cycle)) = best else {
        return Ok(HolePolygon::default());
    };
    if area < DEFAULT_MERGE_TOLERANCE * frame_area {
        return Ok(HolePolygon::default());
    }
    let mut points: Vec<Point> = cycle.iter().rev().map(|&i| edges[i].3).collect();
    let mut labels: Vec<String> = cycle.iter().rev().map(|&i| edges[i].1.clone()).collect();
    simplify(&mut points, &mut labels, DEFAULT_MERGE_TOLERANCE * diameter, DEFAULT_MERGE_TOLERANCE);
    // Canonical start: the smallest label.
    if let Some(first) = (0..labels.len()).min_by(|&i, &j| labels[i].cmp(&labels[j])) {
        points.rotate_left(first);
        labels.rotate_left(first);
    }
    let len = labels.len();
    let corner_association = (0..len)
        .map(|i| {
            let here = label_corner(&labels[i]);
            let there = label_corner(&labels[(i + 1) % len]);
            if here == there {
                here
            } else {
                None
            }
        })
        .collect();
    Ok(HolePolygon {
        vertices: points,
        labels,
        corner_association,
    })
}

/// Attaches an isosceles triangle with base angles `beta` to every
/// hole-facing fan edge of an `n >= 5` doughnut. The result is developed at
/// `check` and rejected with `ApexCollision` if a new triangle overlaps the
/// diagram or another new triangle.
pub fn isosceles_fill(spec: &DiagramSpec, beta: &AngleForm, check: &Assignment) -> Result<DiagramSpec> {
    let n = spec.n;
    if n < 5 {
        return Err(Error::InvalidArgument(format!("isosceles fill needs n >= 5, got {n}")));
    }
    if beta.is_zero() {
        return Ok(spec.clone());
    }
    let value = beta.eval(check, n)?;
    if value.is_nan() || value <= 0.0 {
        return Err(Error::InvalidArgument(format!("fill angle {beta} is not positive")));
    }
    if value >= TAU / 4.0 {
        return Err(Error::ApexCollision(format!("base angle {value} leaves no apex")));
    }
    let mut triangles = spec.labeled()?;
    let apex_angle = AngleForm::half_turn() - beta.scale_int(2);
    let shape = Shape::new(beta.clone(), beta.clone(), apex_angle);
    let mut added = Vec::new();
    for (corner, name) in CORNERS.iter().enumerate() {
        for k in 2..n - 2 {
            let near = chain_vertex(n, corner, k);
            let far = chain_vertex(n, corner, k + 1);
            let apex = format!("{name}{k}^");
            let id = format!("Z_{name}{k}");
            added.push(id.clone());
            triangles.push(LabeledTriangle::new(id, [&far, &near, &apex], shape.clone()));
        }
    }
    let mut metadata = spec.metadata.clone();
    metadata.insert("fill_beta".into(), json!(beta.to_string()));
    let filled = DiagramSpec::from_labeled(n, triangles, metadata)?;

    let placed = develop(&filled, check, &SeedPose::default_for(&filled))?;
    let diameter = placed.diameter();
    let limit = DEFAULT_MERGE_TOLERANCE * diameter * diameter;
    for id in &added {
        let i = filled.position(id).expect("added triangles exist");
        for j in 0..filled.triangles.len() {
            if i == j {
                continue;
            }
            let overlap = triangle_overlap_area(&placed.placements[i], &placed.placements[j]);
            if overlap > limit {
                return Err(Error::ApexCollision(format!(
                    "{id} overlaps {} by {overlap:e}",
                    filled.triangles[j].id
                )));
            }
        }
    }
    Ok(filled)
}
