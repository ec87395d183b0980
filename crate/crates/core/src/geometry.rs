//! Plane geometry on complex numbers.

use num_complex::Complex64;

pub type Point = Complex64;

pub fn point(x: f64, y: f64) -> Point {
    Complex64::new(x, y)
}

pub fn cross(u: Point, v: Point) -> f64 {
    u.re * v.im - u.im * v.re
}

/// Twice the signed area; positive for counter-clockwise triangles.
pub fn orient(p: Point, q: Point, r: Point) -> f64 {
    cross(q - p, r - p)
}

pub fn triangle_area(t: &[Point; 3]) -> f64 {
    0.5 * orient(t[0], t[1], t[2])
}

/// Shoelace area, positive for counter-clockwise polygons.
pub fn polygon_area(points: &[Point]) -> f64 {
    if points.len() < 3 {
        return 0.0;
    }
    let mut twice = 0.0;
    for (i, p) in points.iter().enumerate() {
        let q = points[(i + 1) % points.len()];
        twice += cross(*p, q);
    }
    0.5 * twice
}

/// Places the third vertex of a triangle with angles `angles` (at vertices
/// `i`, `i+1`, `i+2`) given vertices `i` and `i+1`.
pub fn third_vertex(first: Point, second: Point, angles_from_first: [f64; 3]) -> Point {
    let [at_first, at_second, at_third] = angles_from_first;
    let ratio = at_second.sin() / at_third.sin();
    first + (second - first) * ratio * Complex64::from_polar(1.0, at_first)
}

/// Realizes a triangle with the given angles and vertices 0, 1 pinned.
pub fn realize(angles: [f64; 3], v0: Point, v1: Point) -> [Point; 3] {
    [v0, v1, third_vertex(v0, v1, angles)]
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BBox {
    pub min: Point,
    pub max: Point,
}

impl BBox {
    pub fn of<'a, I: IntoIterator<Item = &'a Point>>(points: I) -> Option<BBox> {
        let mut iter = points.into_iter();
        let first = *iter.next()?;
        let mut bbox = BBox {
            min: first,
            max: first,
        };
        for p in iter {
            bbox.include(*p);
        }
        Some(bbox)
    }

    pub fn include(&mut self, p: Point) {
        self.min.re = self.min.re.min(p.re);
        self.min.im = self.min.im.min(p.im);
        self.max.re = self.max.re.max(p.re);
        self.max.im = self.max.im.max(p.im);
    }

    pub fn union(&self, other: &BBox) -> BBox {
        let mut out = *self;
        out.include(other.min);
        out.include(other.max);
        out
    }

    pub fn diagonal(&self) -> f64 {
        (self.max - self.min).norm()
    }

    pub fn width(&self) -> f64 {
        self.max.re - self.min.re
    }

    pub fn height(&self) -> f64 {
        self.max.im - self.min.im
    }
}

/// Intersection of two convex counter-clockwise polygons (Sutherland–Hodgman).
pub fn convex_intersection(subject: &[Point], clip: &[Point]) -> Vec<Point> {
    let mut output: Vec<Point> = subject.to_vec();
    for i in 0..clip.len() {
        if output.is_empty() {
            break;
        }
        let edge_start = clip[i];
        let edge_end = clip[(i + 1) % clip.len()];
        let input = std::mem::take(&mut output);
        let inside = |p: Point| orient(edge_start, edge_end, p) >= 0.0;
        for j in 0..input.len() {
            let current = input[j];
            let previous = input[(j + input.len() - 1) % input.len()];
            let cur_in = inside(current);
            let prev_in = inside(previous);
            if cur_in {
                if !prev_in {
                    output.push(line_intersection(previous, current, edge_start, edge_end));
                }
                output.push(current);
            } else if prev_in {
                output.push(line_intersection(previous, current, edge_start, edge_end));
            }
        }
    }
    output
}

fn line_intersection(p: Point, q: Point, r: Point, s: Point) -> Point {
    let d1 = q - p;
    let d2 = s - r;
    let denom = cross(d1, d2);
    if denom == 0.0 {
        return p;
    }
    let t = cross(r - p, d2) / denom;
    p + d1 * t
}

pub fn triangle_overlap_area(t: &[Point; 3], u: &[Point; 3]) -> f64 {
    polygon_area(&convex_intersection(t, u)).abs()
}

pub fn circumcenter(p: Point, q: Point, r: Point) -> Point {
    let d = 2.0 * orient(p, q, r);
    let (p2, q2, r2) = (p.norm_sqr(), q.norm_sqr(), r.norm_sqr());
    let x = (p2 * (q.im - r.im) + q2 * (r.im - p.im) + r2 * (p.im - q.im)) / d;
    let y = (p2 * (r.re - q.re) + q2 * (p.re - r.re) + r2 * (q.re - p.re)) / d;
    point(x, y)
}

pub fn incenter(p: Point, q: Point, r: Point) -> Point {
    let a = (q - r).norm();
    let b = (r - p).norm();
    let c = (p - q).norm();
    (p * a + q * b + r * c) / (a + b + c)
}

/// Interior angle at `vertex` between the rays to `p` and `q`, in `[0, tau/2]`.
pub fn angle_between(vertex: Point, p: Point, q: Point) -> f64 {
    let u = p - vertex;
    let v = q - vertex;
    cross(u, v).atan2(u.re * v.re + u.im * v.im).abs()
}

/// Distance from `p` to the segment `[q, r]`.
pub fn segment_distance(p: Point, q: Point, r: Point) -> f64 {
    let d = r - q;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - q).norm();
    }
    let t = (((p - q) * d.conj()).re / len2).clamp(0.0, 1.0);
    (p - (q + d * t)).norm()
}
