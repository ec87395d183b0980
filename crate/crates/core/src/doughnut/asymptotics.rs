use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angleform::Assignment;
use crate::diagram::{develop, SeedPose};
use crate::error::{Error, Result};
use crate::geometry::{cross, Point};

use super::hole::{check_overlaps, DEFAULT_MERGE_TOLERANCE};
use super::{build_doughnut, chain_vertex, CORNERS};

/// Boundary vertices farther than this from the corner (after
/// renormalization) are not part of the corner study.
pub const NEAR_RADIUS: f64 = 4.0;

const CURVE_SAMPLES: usize = 4096;
const GOLDEN_STEPS: usize = 100;

/// `k = tau / (2A)`: the limit curve is `Im(z^k) = 1`.
pub fn limit_exponent(corner_angle: f64) -> f64 {
    TAU / (2.0 * corner_angle)
}

fn check_corner(corner_angle: f64) -> Result<()> {
    if !(corner_angle > 0.0 && corner_angle <= TAU / 2.0) {
        return Err(Error::InvalidArgument(format!(
            "corner angle {corner_angle} outside (0, tau/2]"
        )));
    }
    Ok(())
}

/// The point of `Im(z^k) = 1` at argument `phi`, `0 < phi < A`.
fn curve_point(phi: f64, k: f64) -> Point {
    let r = (1.0 / (k * phi).sin()).powf(1.0 / k);
    Complex64::from_polar(r, phi)
}

/// `samples` points of `Im(z^{tau/(2A)}) = 1` at evenly spaced arguments
/// strictly inside the sector `0 < arg z < A`.
pub fn limit_curve(corner_angle: f64, samples: usize) -> Result<Vec<Point>> {
    check_corner(corner_angle)?;
    let k = limit_exponent(corner_angle);
    Ok((1..=samples)
        .map(|j| curve_point(corner_angle * j as f64 / (samples + 1) as f64, k))
        .collect())
}

/// Euclidean distance from `p` to the limit curve of a corner of angle `A`.
pub fn distance_to_curve(p: Point, corner_angle: f64) -> f64 {
    let k = limit_exponent(corner_angle);
    let dist = |phi: f64| (curve_point(phi, k) - p).norm();
    let step = corner_angle / (CURVE_SAMPLES + 1) as f64;
    let (best, _) = (1..=CURVE_SAMPLES)
        .map(|j| (j, dist(step * j as f64)))
        .fold((1, f64::INFINITY), |acc, (j, d)| if d < acc.1 { (j, d) } else { acc });
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let mut lo = step * (best as f64 - 1.0).max(1e-3);
    let mut hi = (step * (best as f64 + 1.0)).min(corner_angle - step * 1e-3);
    for _ in 0..GOLDEN_STEPS {
        let m1 = hi - golden * (hi - lo);
        let m2 = lo + golden * (hi - lo);
        if dist(m1) < dist(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    dist(0.5 * (lo + hi)).min(dist(step * best as f64))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryStudy {
    pub n: u32,
    pub corner: usize,
    pub corner_angle: f64,
    /// Renormalized hole-boundary vertices near the corner.
    pub points: Vec<Point>,
    pub max_distance: f64,
}

/// Renormalizes the hole boundary near `corner`: the corner goes to the
/// origin with its first side along the positive real axis (so the sector is
/// `0 < arg z < A`), and the boundary vertex nearest the bisector gets
/// modulus 1, the modulus of the limit curve on the bisector.
pub fn renormalized_boundary(n: u32, assignment: &Assignment, corner: usize) -> Result<BoundaryStudy> {
    if n < 4 {
        return Err(Error::HoleAbsent { n });
    }
    let corner = corner % 3;
    let spec = build_doughnut(n)?;
    let placed = develop(&spec, assignment, &SeedPose::default_for(&spec))?;
    check_overlaps(&placed, DEFAULT_MERGE_TOLERANCE)?;
    let at = |name: &str| {
        placed
            .vertex(&spec, name)
            .ok_or_else(|| Error::InvalidSpec(format!("doughnut lacks vertex {name}")))
    };
    let origin = at(CORNERS[corner])?;
    let side = at(&chain_vertex(n, corner, 0))? - origin;
    let other = at(&chain_vertex(n, corner, n))? - origin;
    let corner_angle = cross(side, other).atan2(side.re * other.re + side.im * other.im);
    let frame = side.conj() / side.norm();
    let raw: Vec<Point> = (2..=n - 2)
        .map(|k| at(&chain_vertex(n, corner, k)).map(|p| (p - origin) * frame))
        .collect::<Result<_>>()?;
    let bisector = corner_angle / 2.0;
    let nearest = raw
        .iter()
        .min_by(|p, q| (p.arg() - bisector).abs().total_cmp(&(q.arg() - bisector).abs()))
        .expect("n >= 4 leaves a boundary vertex");
    let scale = 1.0 / nearest.norm();
    let points: Vec<Point> = raw
        .iter()
        .map(|p| p * scale)
        .filter(|p| p.norm() <= NEAR_RADIUS)
        .collect();
    let max_distance = points
        .iter()
        .map(|p| distance_to_curve(*p, corner_angle))
        .fold(0.0, f64::max);
    Ok(BoundaryStudy {
        n,
        corner,
        corner_angle,
        points,
        max_distance,
    })
}

/// Does the segment `p -> q` cross the negative real axis?
fn crosses_cut(p: Point, q: Point) -> bool {
    if (p.im > 0.0 && q.im < 0.0) || (p.im < 0.0 && q.im > 0.0) {
        let t = p.im / (p.im - q.im);
        let x = p.re + t * (q.re - p.re);
        return x < 0.0;
    }
    false
}

/// `p -> (p - center)^exponent` on the principal branch.
pub fn power_transform(points: &[Point], exponent: f64, center: Point) -> Result<Vec<Point>> {
    let centered: Vec<Point> = points.iter().map(|p| p - center).collect();
    if let Some(i) = centered.iter().position(|p| *p == Complex64::new(0.0, 0.0)) {
        return Err(Error::InvalidArgument(format!("point {i} is the transform center")));
    }
    if let Some(i) = centered.windows(2).position(|w| crosses_cut(w[0], w[1])) {
        return Err(Error::BranchCutCrossing { index: i });
    }
    if exponent == 1.0 {
        return Ok(centered);
    }
    Ok(centered.iter().map(|p| p.powf(exponent)).collect())
}
