//! Holonomy of triangles arranged around a vertex.
//!
//! A ring lists triangles counter-clockwise around a shared vertex, each with
//! the index of the angle sitting at that vertex (the pivot). Going around,
//! each triangle rotates the developing map by its pivot angle and scales it
//! by `sin(leading) / sin(trailing)` (law of sines), where the leading angle
//! follows the pivot and the trailing angle precedes it.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::angleform::{AngleForm, Assignment, Shape};
use crate::error::{Error, Result};

/// Angles this close to 0 or `tau/2` are treated as degenerate.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;
/// Rotation holonomy tolerance, radians.
pub const ROTATION_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingEntry {
    pub shape: Shape,
    pub pivot: usize,
}

impl RingEntry {
    pub fn new(shape: Shape, pivot: usize) -> Self {
        RingEntry { shape, pivot }
    }

    pub fn pivot_angle(&self) -> &AngleForm {
        self.shape.angle(self.pivot)
    }

    pub fn leading(&self) -> &AngleForm {
        self.shape.angle(self.pivot + 1)
    }

    pub fn trailing(&self) -> &AngleForm {
        self.shape.angle(self.pivot + 2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ring {
    pub entries: Vec<RingEntry>,
}

impl Ring {
    pub fn new(entries: Vec<RingEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("a ring needs at least one entry".into()));
        }
        if let Some(bad) = entries.iter().find(|e| e.pivot > 2) {
            return Err(Error::InvalidArgument(format!(
                "pivot {} is not an angle index",
                bad.pivot
            )));
        }
        Ok(Ring { entries })
    }

    pub fn pivot_sum(&self) -> AngleForm {
        self.entries.iter().map(RingEntry::pivot_angle).sum()
    }

    /// The ring with its entries cyclically shifted by `by`.
    pub fn rotated(&self, by: usize) -> Ring {
        let len = self.entries.len();
        let entries = (0..len)
            .map(|i| self.entries[(i + by) % len].clone())
            .collect();
        Ring { entries }
    }
}

fn reduced_sorted<'a>(forms: impl Iterator<Item = &'a AngleForm>, n: u32) -> Vec<AngleForm> {
    let mut out: Vec<AngleForm> = forms.map(|f| f.reduce(n)).collect();
    out.sort();
    out
}

/// Symbolic EZ-holonomy test: pivot angles sum to `tau` and the trailing
/// angles are a permutation of the leading angles, modulo the constraint.
pub fn ez_check(ring: &Ring, n: u32) -> bool {
    if !ring.pivot_sum().equivalent(&AngleForm::full_turn(), n) {
        return false;
    }
    let leading = reduced_sorted(ring.entries.iter().map(RingEntry::leading), n);
    let trailing = reduced_sorted(ring.entries.iter().map(RingEntry::trailing), n);
    leading == trailing
}

/// Net similarity accumulated around a ring.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Similarity {
    /// In `(-tau/2, tau/2]`.
    pub rotation: f64,
    pub log_scale: f64,
}

impl Similarity {
    pub fn is_trivial(&self, scale_tolerance: f64) -> bool {
        self.rotation.abs() <= ROTATION_TOLERANCE && self.log_scale.abs() <= scale_tolerance
    }
}

/// Wraps an angle into `(-tau/2, tau/2]`.
pub fn wrap_angle(angle: f64) -> f64 {
    let mut r = angle.rem_euclid(TAU);
    if r > TAU / 2.0 {
        r -= TAU;
    }
    r
}

pub fn check_angle(value: f64) -> Result<f64> {
    if !(value > DEGENERACY_TOLERANCE && value < TAU / 2.0 - DEGENERACY_TOLERANCE) {
        return Err(Error::DegenerateAngle { value });
    }
    Ok(value)
}

/// Holonomy of a ring given numerically as `(angles, pivot)` pairs.
pub fn numeric_ring_holonomy(entries: &[([f64; 3], usize)]) -> Result<Similarity> {
    let mut rotation = 0.0;
    let mut log_scale = 0.0;
    for (angles, pivot) in entries {
        let pivot_angle = check_angle(angles[pivot % 3])?;
        let leading = check_angle(angles[(pivot + 1) % 3])?;
        let trailing = check_angle(angles[(pivot + 2) % 3])?;
        rotation += pivot_angle;
        log_scale += leading.sin().ln() - trailing.sin().ln();
    }
    Ok(Similarity {
        rotation: wrap_angle(rotation),
        log_scale,
    })
}

pub fn numeric_holonomy(ring: &Ring, assignment: &Assignment, n: u32) -> Result<Similarity> {
    assignment.check(n)?;
    let entries: Vec<([f64; 3], usize)> = ring
        .entries
        .iter()
        .map(|e| (e.shape.values(assignment), e.pivot))
        .collect();
    numeric_ring_holonomy(&entries)
}

/// `|sin(n θ) - C ∏_{k<n} sin(θ + k τ/(2n))|` for an arbitrary constant `C`.
pub fn cyclotomic_residual_with_constant(n: u32, theta: f64, constant: f64) -> f64 {
    let step = TAU / (2.0 * f64::from(n));
    let product: f64 = (0..n).map(|k| (theta + f64::from(k) * step).sin()).product();
    ((f64::from(n) * theta).sin() - constant * product).abs()
}

/// Residual of `sin(n θ) = 2^{n-1} ∏_{k<n} sin(θ + k τ/(2n))`.
pub fn cyclotomic_check(n: u32, theta: f64) -> f64 {
    if n == 1 {
        return 0.0;
    }
    cyclotomic_residual_with_constant(n, theta, 2f64.powi(n as i32 - 1))
}

/// Largest cyclotomic residual over `points` interior grid points of `(0, tau/2)`.
pub fn cyclotomic_max_residual(n: u32, points: usize, constant: Option<f64>) -> f64 {
    let constant = constant.unwrap_or_else(|| 2f64.powi(n as i32 - 1));
    (1..=points)
        .map(|j| {
            let theta = (TAU / 2.0) * j as f64 / (points + 1) as f64;
            if constant == 2f64.powi(n as i32 - 1) {
                cyclotomic_check(n, theta)
            } else {
                cyclotomic_residual_with_constant(n, theta, constant)
            }
        })
        .fold(0.0, f64::max)
}

/// Scale holonomy at a corner of the `n`-doughnut: the big triangle's
/// `sin(nb)/sin(nc)` against the product of the fan's side ratios.
pub fn corner_holonomy_check(n: u32, assignment: &Assignment) -> Result<f64> {
    assignment.check(n)?;
    let step = TAU / (2.0 * f64::from(n));
    let nf = f64::from(n);
    let big_b = check_angle(nf * assignment.b)?;
    let big_c = check_angle(nf * assignment.c)?;
    let mut fan = 0.0;
    for k in 0..n {
        let leading = check_angle(assignment.b + f64::from(k) * step)?;
        let trailing = check_angle(assignment.c + f64::from(n - 1 - k) * step)?;
        fan += leading.sin().ln() - trailing.sin().ln();
    }
    Ok(((big_b.sin() / big_c.sin()).ln() - fan).abs())
}
