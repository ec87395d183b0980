//! Deterministic SVG 1.1 emission. All coordinates pass through one
//! similarity (y flipped) and are printed with six fractional digits.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angleform::Assignment;
use crate::diagram::{develop, DiagramSpec, PlacedDiagram, SeedPose};
use crate::doughnut::{build_doughnut, frame_shape, hole_polygon};
use crate::error::{Error, Result};
use crate::geometry::{point, realize, BBox, Point};

/// Weights for `a : b : c` used by the flip book unless overridden.
pub const DEFAULT_FLIPBOOK_WEIGHTS: [f64; 3] = [4.0, 3.0, 2.0];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenderStyle {
    pub stroke_width: f64,
    /// Cycled over shape keys in sorted order.
    pub palette: Vec<String>,
    pub labels: bool,
    pub width: f64,
    pub height: f64,
    /// Fraction of each canvas side left blank on either edge.
    pub margin: f64,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            stroke_width: 1.0,
            palette: [
                "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5",
                "#d9d9d9", "#bc80bd", "#ccebc5", "#ffed6f",
            ]
            .map(String::from)
            .to_vec(),
            labels: false,
            width: 800.0,
            height: 800.0,
            margin: 0.05,
        }
    }
}

impl RenderStyle {
    pub fn validate(&self) -> Result<()> {
        if !(self.width > 0.0 && self.height > 0.0 && self.width.is_finite() && self.height.is_finite()) {
            return Err(Error::InvalidArgument("canvas must be strictly positive".into()));
        }
        if self.palette.is_empty() {
            return Err(Error::InvalidArgument("palette must be nonempty".into()));
        }
        if !(0.0..0.5).contains(&self.margin) {
            return Err(Error::InvalidArgument("margin must lie in [0, 0.5)".into()));
        }
        if self.stroke_width.is_nan() || self.stroke_width < 0.0 {
            return Err(Error::InvalidArgument("stroke width must be nonnegative".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Layer {
    /// One closed path per triangle; `keys` selects the fill color.
    Triangles {
        ids: Vec<String>,
        placements: Vec<[Point; 3]>,
        keys: Vec<String>,
    },
    Circles { circles: Vec<(Point, f64)> },
    Polygon { points: Vec<Point>, class: String },
    Curve { points: Vec<Point>, class: String },
    Points { points: Vec<Point>, class: String },
}

impl Layer {
    /// Paint order: fans, circles, polygons, curves, points.
    fn rank(&self) -> u8 {
        match self {
            Layer::Triangles { .. } => 0,
            Layer::Circles { .. } => 1,
            Layer::Polygon { .. } => 2,
            Layer::Curve { .. } => 3,
            Layer::Points { .. } => 4,
        }
    }

    fn is_empty(&self) -> bool {
        match self {
            Layer::Triangles { placements, .. } => placements.is_empty(),
            Layer::Circles { circles } => circles.is_empty(),
            Layer::Polygon { points, .. } | Layer::Curve { points, .. } | Layer::Points { points, .. } => {
                points.is_empty()
            }
        }
    }

    fn extend_bbox(&self, bbox: &mut Option<BBox>) {
        let mut add = |p: Point| match bbox {
            Some(b) => b.include(p),
            None => *bbox = Some(BBox { min: p, max: p }),
        };
        match self {
            Layer::Triangles { placements, .. } => placements.iter().flatten().for_each(|p| add(*p)),
            Layer::Circles { circles } => {
                for (c, r) in circles {
                    add(*c - point(*r, *r));
                    add(*c + point(*r, *r));
                }
            }
            Layer::Polygon { points, .. } | Layer::Curve { points, .. } | Layer::Points { points, .. } => {
                points.iter().for_each(|p| add(*p))
            }
        }
    }

    fn is_finite(&self) -> bool {
        let ok = |p: &Point| p.re.is_finite() && p.im.is_finite();
        match self {
            Layer::Triangles { placements, .. } => placements.iter().flatten().all(ok),
            Layer::Circles { circles } => circles.iter().all(|(c, r)| ok(c) && r.is_finite()),
            Layer::Polygon { points, .. } | Layer::Curve { points, .. } | Layer::Points { points, .. } => {
                points.iter().all(ok)
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Scene {
    pub layers: Vec<Layer>,
    /// Overrides the fitted bounding box, e.g. to share a frame across documents.
    pub viewport: Option<BBox>,
}

impl Scene {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a placed diagram; with a spec, congruent shapes share a color.
    pub fn with_placed(mut self, placed: &PlacedDiagram, spec: Option<&DiagramSpec>) -> Self {
        let keys = placed
            .ids
            .iter()
            .map(|id| match spec.and_then(|s| s.triangle(id).map(|t| (s.n, t))) {
                Some((n, t)) => t.angles.canonical_key(n),
                None => id.clone(),
            })
            .collect();
        self.layers.push(Layer::Triangles {
            ids: placed.ids.clone(),
            placements: placed.placements.clone(),
            keys,
        });
        self
    }

    pub fn with_polygon(mut self, points: Vec<Point>, class: &str) -> Self {
        self.layers.push(Layer::Polygon {
            points,
            class: class.into(),
        });
        self
    }

    pub fn with_curve(mut self, points: Vec<Point>, class: &str) -> Self {
        self.layers.push(Layer::Curve {
            points,
            class: class.into(),
        });
        self
    }

    pub fn with_points(mut self, points: Vec<Point>, class: &str) -> Self {
        self.layers.push(Layer::Points {
            points,
            class: class.into(),
        });
        self
    }

    pub fn with_circles(mut self, circles: Vec<(Point, f64)>) -> Self {
        self.layers.push(Layer::Circles { circles });
        self
    }

    pub fn with_viewport(mut self, viewport: BBox) -> Self {
        self.viewport = Some(viewport);
        self
    }
}

/// Fixed six-digit formatting; negative zero prints as zero.
fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

struct Frame {
    scale: f64,
    center: Point,
    width: f64,
    height: f64,
}

impl Frame {
    fn map(&self, p: Point) -> (String, String) {
        let x = self.width / 2.0 + self.scale * (p.re - self.center.re);
        let y = self.height / 2.0 - self.scale * (p.im - self.center.im);
        (num(x), num(y))
    }

    fn path(&self, points: &[Point], closed: bool) -> String {
        let mut d = String::new();
        for (i, p) in points.iter().enumerate() {
            let (x, y) = self.map(*p);
            let _ = write!(d, "{}{x} {y}", if i == 0 { "M" } else { " L" });
        }
        if closed {
            d.push_str(" Z");
        }
        d
    }
}

pub fn to_svg(scene: &Scene, style: &RenderStyle) -> Result<String> {
    style.validate()?;
    let mut layers: Vec<&Layer> = scene.layers.iter().filter(|l| !l.is_empty()).collect();
    if layers.is_empty() {
        return Err(Error::EmptyScene);
    }
    if !layers.iter().all(|l| l.is_finite()) {
        return Err(Error::InvalidArgument("scene has non-finite coordinates".into()));
    }
    layers.sort_by_key(|l| l.rank());

    let bbox = match scene.viewport {
        Some(v) => v,
        None => {
            let mut b = None;
            layers.iter().for_each(|l| l.extend_bbox(&mut b));
            b.expect("nonempty layers have a bounding box")
        }
    };
    let inner_w = style.width * (1.0 - 2.0 * style.margin);
    let inner_h = style.height * (1.0 - 2.0 * style.margin);
    let scale = match (bbox.width() > 0.0, bbox.height() > 0.0) {
        (true, true) => (inner_w / bbox.width()).min(inner_h / bbox.height()),
        (true, false) => inner_w / bbox.width(),
        (false, true) => inner_h / bbox.height(),
        (false, false) => 1.0,
    };
    let frame = Frame {
        scale,
        center: (bbox.min + bbox.max) * 0.5,
        width: style.width,
        height: style.height,
    };

    let mut colors: BTreeMap<&str, &str> = BTreeMap::new();
    for layer in &layers {
        if let Layer::Triangles { keys, .. } = layer {
            for k in keys {
                colors.insert(k.as_str(), "");
            }
        }
    }
    for (i, color) in colors.values_mut().enumerate() {
        *color = style.palette[i % style.palette.len()].as_str();
    }

    let sw = num(style.stroke_width);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = num(style.width),
        h = num(style.height)
    );
    for layer in &layers {
        match layer {
            Layer::Triangles { ids, placements, keys } => {
                let _ = writeln!(out, r##"<g class="triangles" stroke="#000000" stroke-width="{sw}" stroke-linejoin="round">"##);
                for ((id, tri), key) in ids.iter().zip(placements).zip(keys) {
                    let _ = writeln!(
                        out,
                        r#"<path id="{}" fill="{}" d="{}"/>"#,
                        escape(id),
                        colors[key.as_str()],
                        frame.path(tri, true)
                    );
                }
                if style.labels {
                    for (id, tri) in ids.iter().zip(placements) {
                        let (x, y) = frame.map((tri[0] + tri[1] + tri[2]) / 3.0);
                        let _ = writeln!(
                            out,
                            r#"<text x="{x}" y="{y}" font-size="{}" text-anchor="middle">{}</text>"#,
                            num(style.stroke_width * 8.0),
                            escape(id)
                        );
                    }
                }
                out.push_str("</g>\n");
            }
            Layer::Circles { circles } => {
                let _ = writeln!(out, r##"<g class="circles" fill="none" stroke="#1f4e79" stroke-width="{sw}">"##);
                for (c, r) in circles {
                    let (x, y) = frame.map(*c);
                    let _ = writeln!(out, r#"<circle cx="{x}" cy="{y}" r="{}"/>"#, num(r * frame.scale));
                }
                out.push_str("</g>\n");
            }
            Layer::Polygon { points, class } => {
                let _ = writeln!(
                    out,
                    r##"<path class="{}" fill="#ffffff" fill-opacity="0.85" stroke="#c00000" stroke-width="{sw}" d="{}"/>"##,
                    escape(class),
                    frame.path(points, true)
                );
            }
            Layer::Curve { points, class } => {
                let _ = writeln!(
                    out,
                    r##"<path class="{}" fill="none" stroke="#0050a0" stroke-width="{sw}" d="{}"/>"##,
                    escape(class),
                    frame.path(points, false)
                );
            }
            Layer::Points { points, class } => {
                let _ = writeln!(out, r##"<g class="{}" fill="#000000">"##, escape(class));
                for p in points {
                    let (x, y) = frame.map(*p);
                    let _ = writeln!(out, r#"<circle cx="{x}" cy="{y}" r="{}"/>"#, num(style.stroke_width * 2.0));
                }
                out.push_str("</g>\n");
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum AssignmentPolicy {
    /// `a : b : c` fixed, scaled to each frame's constraint.
    Proportional([f64; 3]),
}

impl Default for AssignmentPolicy {
    fn default() -> Self {
        AssignmentPolicy::Proportional(DEFAULT_FLIPBOOK_WEIGHTS)
    }
}

impl AssignmentPolicy {
    pub fn equilateral() -> Self {
        AssignmentPolicy::Proportional([1.0, 1.0, 1.0])
    }

    pub fn assignment(&self, n: u32) -> Result<Assignment> {
        match self {
            AssignmentPolicy::Proportional(w) => Assignment::proportional(*w, n),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlipFrame {
    pub n: u32,
    /// The diagram after the similarity sending `A` to 0 and `B` to 1.
    pub placed: PlacedDiagram,
    pub svg: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlipBook {
    pub frames: Vec<FlipFrame>,
    pub failures: Vec<(u32, Error)>,
}

/// The big triangle with `A = 0`, `B = 1`; identical for every `n` because
/// proportional policies fix its angles.
pub fn normalized_frame(policy: &AssignmentPolicy, n: u32) -> Result<[Point; 3]> {
    let assignment = policy.assignment(n)?;
    Ok(realize(frame_shape(n).values(&assignment), point(0.0, 0.0), point(1.0, 0.0)))
}

fn flip_frame(n: u32, policy: &AssignmentPolicy, viewport: BBox, style: &RenderStyle) -> Result<FlipFrame> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("flip-book frames need n >= 2, got {n}")));
    }
    let spec = build_doughnut(n)?;
    let assignment = policy.assignment(n)?;
    let placed = develop(&spec, &assignment, &SeedPose::default_for(&spec))?;
    let a = placed.vertex(&spec, "A").ok_or_else(|| Error::InvalidSpec("missing corner A".into()))?;
    let b = placed.vertex(&spec, "B").ok_or_else(|| Error::InvalidSpec("missing corner B".into()))?;
    let scale = Point::new(1.0, 0.0) / (b - a);
    let placed = placed.transformed(scale, -a * scale);
    let hole = hole_polygon(&placed, &spec)?;
    let mut scene = Scene::new().with_placed(&placed, Some(&spec)).with_viewport(viewport);
    if !hole.is_empty() {
        scene = scene.with_polygon(hole.vertices.clone(), "hole");
    }
    let svg = to_svg(&scene, style)?;
    Ok(FlipFrame { n, placed, svg })
}

/// One frame per requested `n`, in the given order, on a shared canvas.
pub fn flipbook(ns: &[u32], policy: &AssignmentPolicy, style: &RenderStyle) -> Result<FlipBook> {
    style.validate()?;
    let first = *ns.first().ok_or(Error::EmptyScene)?;
    let big = normalized_frame(policy, first.max(2))?;
    let viewport = BBox::of(big.iter()).expect("three points");
    let results: Vec<Result<FlipFrame>> = ns
        .par_iter()
        .map(|&n| flip_frame(n, policy, viewport, style))
        .collect();
    let mut book = FlipBook {
        frames: Vec::new(),
        failures: Vec::new(),
    };
    for (&n, result) in ns.iter().zip(results) {
        match result {
            Ok(frame) => book.frames.push(frame),
            Err(e) => book.failures.push((n, e)),
        }
    }
    Ok(book)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::catalog;

    fn bisector_scene() -> Scene {
        let spec = catalog("bisector").unwrap();
        let placed = develop(&spec, &Assignment::equilateral(spec.n), &SeedPose::default_for(&spec)).unwrap();
        Scene::new().with_placed(&placed, Some(&spec))
    }

    #[test]
    fn bisector_has_three_paths() {
        let svg = to_svg(&bisector_scene(), &RenderStyle::default()).unwrap();
        assert_eq!(svg.matches("<path ").count(), 3);
        assert!(svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(!svg.contains("NaN"));
        // Colors follow symbolic shape classes; the three shapes are distinct.
        let style = RenderStyle::default();
        for color in &style.palette[..3] {
            assert_eq!(svg.matches(&format!(r#"fill="{color}""#)).count(), 1);
        }
    }

    #[test]
    fn deterministic() {
        let style = RenderStyle {
            labels: true,
            ..RenderStyle::default()
        };
        assert_eq!(to_svg(&bisector_scene(), &style).unwrap(), to_svg(&bisector_scene(), &style).unwrap());
    }

    #[test]
    fn empty_and_invalid() {
        assert_eq!(to_svg(&Scene::new(), &RenderStyle::default()), Err(Error::EmptyScene));
        assert_eq!(
            to_svg(&Scene::new().with_points(vec![], "p"), &RenderStyle::default()),
            Err(Error::EmptyScene)
        );
        let bad = RenderStyle {
            palette: vec![],
            ..RenderStyle::default()
        };
        assert!(to_svg(&bisector_scene(), &bad).is_err());
        let nan = Scene::new().with_points(vec![point(f64::NAN, 0.0)], "p");
        assert!(to_svg(&nan, &RenderStyle::default()).is_err());
    }

    #[test]
    fn y_axis_flipped_and_fitted() {
        let scene = Scene::new().with_curve(vec![point(0.0, 0.0), point(1.0, 1.0)], "c");
        let style = RenderStyle {
            width: 100.0,
            height: 100.0,
            margin: 0.1,
            ..RenderStyle::default()
        };
        let svg = to_svg(&scene, &style).unwrap();
        assert!(svg.contains(r#"d="M10.000000 90.000000 L90.000000 10.000000""#));
    }

    #[test]
    fn hole_drawn_above_fans() {
        let mut scene = Scene::new().with_polygon(vec![point(0.2, 0.2), point(0.4, 0.2), point(0.3, 0.3)], "hole");
        scene.layers.extend(bisector_scene().layers);
        let svg = to_svg(&scene, &RenderStyle::default()).unwrap();
        assert!(svg.find("class=\"triangles\"").unwrap() < svg.find("class=\"hole\"").unwrap());
    }

    #[test]
    fn flipbook_frames_share_big_triangle() {
        let ns: Vec<u32> = (2..=8).rev().collect();
        let book = flipbook(&ns, &AssignmentPolicy::default(), &RenderStyle::default()).unwrap();
        assert!(book.failures.is_empty());
        assert_eq!(book.frames.len(), 7);
        assert_eq!(book.frames.iter().map(|f| f.n).collect::<Vec<_>>(), ns);
        let reference = normalized_frame(&AssignmentPolicy::default(), 8).unwrap();
        for frame in &book.frames {
            let spec = build_doughnut(frame.n).unwrap();
            for (name, expected) in ["A", "B", "C"].iter().zip(reference) {
                let got = frame.placed.vertex(&spec, name).unwrap();
                assert!((got - expected).norm() < 1e-9, "n={} corner {name}", frame.n);
            }
            assert!(!frame.svg.contains("NaN"));
        }
    }

    #[test]
    fn single_morley_frame() {
        let book = flipbook(&[3], &AssignmentPolicy::equilateral(), &RenderStyle::default()).unwrap();
        assert_eq!(book.frames.len(), 1);
        assert_eq!(book.frames[0].svg.matches("<path ").count(), 7);
    }

    #[test]
    fn failed_frames_are_reported() {
        let book = flipbook(&[4, 1], &AssignmentPolicy::default(), &RenderStyle::default()).unwrap();
        assert_eq!(book.frames.len(), 1);
        assert_eq!(book.failures.len(), 1);
        assert_eq!(book.failures[0].0, 1);
    }
}
