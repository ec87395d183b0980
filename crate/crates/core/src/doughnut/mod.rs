//! The `n`-doughnut: three corner fans inside `Δ(na, nb, nc)`, the ears that
//! join neighbouring fans, and the hole they leave.
//!
//! Vertex names: corners `A`, `B`, `C`; the junction of fans A and B on side
//! AB is `AB` (likewise `BC`, `CA`; all three coincide as `I` when `n = 2`);
//! the inner points of fan A are `A2 .. A{n-2}`, ordered from the AB side.

mod asymptotics;
mod hole;

pub use asymptotics::{
    distance_to_curve, limit_curve, limit_exponent, power_transform, renormalized_boundary,
    BoundaryStudy,
};
pub use hole::{check_overlaps, hole_labels, hole_polygon, isosceles_fill, HolePolygon, DEFAULT_MERGE_TOLERANCE};

use serde_json::{json, Map};

use crate::angleform::{AngleForm, Shape};
use crate::diagram::{DiagramSpec, LabeledTriangle};
use crate::error::{Error, Result};

pub(crate) const CORNERS: [&str; 3] = ["A", "B", "C"];

/// Shapes of the fan at `corner`, from the side towards the next corner.
pub fn corner_fan(n: u32, corner: usize) -> Vec<Shape> {
    let unit = AngleForm::turns(1, 2 * i64::from(n));
    (0..i64::from(n))
        .map(|k| {
            let mut shape = Shape::new(
                AngleForm::a(),
                AngleForm::b() + unit.scale_int(k),
                AngleForm::c() + unit.scale_int(i64::from(n) - 1 - k),
            );
            for _ in 0..corner % 3 {
                shape = shape.rotate_symbols();
            }
            shape
        })
        .collect()
}

/// The big triangle `Δ(na, nb, nc)` whose interior the doughnut fills.
pub fn frame_shape(n: u32) -> Shape {
    let n = i64::from(n);
    Shape::new(
        AngleForm::a().scale_int(n),
        AngleForm::b().scale_int(n),
        AngleForm::c().scale_int(n),
    )
}

fn junction(n: u32, first: usize, second: usize) -> String {
    if n == 2 {
        "I".to_string()
    } else {
        format!("{}{}", CORNERS[first], CORNERS[second])
    }
}

/// Vertex `k` (0..=n) of the chain swept by the fan at `corner`.
pub(crate) fn chain_vertex(n: u32, corner: usize, k: u32) -> String {
    let next = (corner + 1) % 3;
    let prev = (corner + 2) % 3;
    match k {
        0 => CORNERS[next].to_string(),
        k if k == n => CORNERS[prev].to_string(),
        1 => junction(n, corner, next),
        k if k == n - 1 => junction(n, prev, corner),
        k => format!("{}{k}", CORNERS[corner]),
    }
}

/// Fan triangle ids are `F{corner}{k}`; the fan's first and last triangles
/// are the side triangles `S_AB` etc. shared with the neighbouring fans.
pub(crate) fn fan_triangle_id(n: u32, corner: usize, k: u32) -> String {
    let next = (corner + 1) % 3;
    let prev = (corner + 2) % 3;
    if k == 0 {
        format!("S_{}{}", CORNERS[corner], CORNERS[next])
    } else if k == n - 1 {
        format!("S_{}{}", CORNERS[prev], CORNERS[corner])
    } else {
        format!("F{}{k}", CORNERS[corner])
    }
}

/// Fans, side triangles and ears as labeled triangles.
pub fn doughnut_triangles(n: u32) -> Result<Vec<LabeledTriangle>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("doughnuts need n >= 2, got {n}")));
    }
    let unit = AngleForm::turns(1, 2 * i64::from(n));
    let mut out = Vec::new();
    for (corner, corner_name) in CORNERS.into_iter().enumerate() {
        let fan = corner_fan(n, corner);
        // The side triangle S_XY is emitted once, by the fan at X.
        for k in 0..n - 1 {
            let v = [
                corner_name.to_string(),
                chain_vertex(n, corner, k),
                chain_vertex(n, corner, k + 1),
            ];
            out.push(LabeledTriangle::new(
                fan_triangle_id(n, corner, k),
                [&v[0], &v[1], &v[2]],
                fan[k as usize].clone(),
            ));
        }
    }
    match n {
        2 => {}
        3 => out.push(LabeledTriangle::new(
            "M",
            ["AB", "BC", "CA"],
            Shape::new(unit.clone(), unit.clone(), unit),
        )),
        _ => {
            let ear = Shape::new(unit.scale_int(i64::from(n) - 2), unit.clone(), unit);
            for corner in 0..3 {
                let next = (corner + 1) % 3;
                let apex = junction(n, corner, next);
                let right = chain_vertex(n, next, n - 2);
                let left = chain_vertex(n, corner, 2);
                out.push(LabeledTriangle::new(
                    format!("E_{apex}"),
                    [&apex, &right, &left],
                    ear.clone(),
                ));
            }
        }
    }
    Ok(out)
}

/// The `n`-doughnut as a diagram spec. The big triangle is the outer
/// boundary; its shape is recorded under the `frame` metadata key.
pub fn build_doughnut(n: u32) -> Result<DiagramSpec> {
    let triangles = doughnut_triangles(n)?;
    let mut metadata = Map::new();
    metadata.insert("name".into(), json!(format!("doughnut-{n}")));
    let frame = frame_shape(n);
    metadata.insert(
        "frame".into(),
        json!([frame.angle(0).to_string(), frame.angle(1).to_string(), frame.angle(2).to_string()]),
    );
    DiagramSpec::from_labeled(n, triangles, metadata)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angleform::{shape_sum_check, Assignment};
    use crate::diagram::{catalog, develop, symbolic_checks, SeedPose};

    fn form(s: &str) -> AngleForm {
        s.parse().unwrap()
    }

    #[test]
    fn fan_examples() {
        let fan = corner_fan(2, 0);
        assert_eq!(fan[0], Shape::new(form("a"), form("b"), form("c + tau/4")));
        assert_eq!(fan[1], Shape::new(form("a"), form("b + tau/4"), form("c")));
        let fan = corner_fan(3, 0);
        assert_eq!(fan[1], Shape::new(form("a"), form("b + tau/6"), form("c + tau/6")));
        let fan = corner_fan(5, 1);
        assert_eq!(fan[0], Shape::new(form("b"), form("c"), form("a + 2/5*tau")));
    }

    #[test]
    fn fan_shapes_are_legal_and_fill_the_corner() {
        for n in 2..=12 {
            for corner in 0..3 {
                let fan = corner_fan(n, corner);
                assert_eq!(fan.len(), n as usize);
                assert!(fan.iter().all(|s| shape_sum_check(s, n)));
                let pivots: AngleForm = fan.iter().map(|s| s.angle(0).clone()).sum();
                assert_eq!(pivots, frame_shape(n).angle(corner).clone());
            }
        }
    }

    #[test]
    fn small_doughnuts_match_catalog_shapes() {
        for (n, name) in [(2, "bisector"), (3, "morley")] {
            let built = build_doughnut(n).unwrap();
            let reference = catalog(name).unwrap();
            let mut ours: Vec<String> = built.triangles.iter().map(|t| t.angles.canonical_key(n)).collect();
            let mut theirs: Vec<String> =
                reference.triangles.iter().map(|t| t.angles.canonical_key(n)).collect();
            ours.sort();
            theirs.sort();
            assert_eq!(ours, theirs, "n = {n}");
            assert_eq!(built.interior_vertices.len(), reference.interior_vertices.len());
        }
    }

    #[test]
    fn counts() {
        for n in 2..=9u32 {
            let spec = build_doughnut(n).unwrap();
            let ears = match n {
                2 => 0,
                _ => 3,
            };
            let fans = 3 * (n as usize - 1);
            assert_eq!(spec.triangles.len(), fans + if n == 3 { 1 } else { ears });
            assert!(symbolic_checks(&spec).unwrap().passes(), "n = {n}");
        }
    }

    #[test]
    fn doughnut_develops() {
        for n in 2..=12 {
            let spec = build_doughnut(n).unwrap();
            let x = Assignment::proportional([4.0, 3.0, 2.0], n).unwrap();
            let placed = develop(&spec, &x, &SeedPose::default_for(&spec)).unwrap();
            assert!(placed.normalized_residual(&spec) < 1e-12, "n = {n}");
        }
    }
}
