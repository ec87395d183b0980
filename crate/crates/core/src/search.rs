//! Exhaustive search for fillings of the doughnut hole by triangles whose
//! angles are linear forms with small integer coefficients.
//!
//! Under `a + b + c = u` with `u = tau/(2n)` every candidate form reduces to
//! `alpha*a + beta*b + sigma*u` with integers `(alpha, beta, sigma)`, so the
//! whole search runs in exact integer arithmetic. Angles are forced by the
//! triangle sums and the vertex sums wherever possible; free angles range
//! over the realizable candidates. Complete assignments are then checked for
//! EZ holonomy at every hole vertex, and survivors are spliced into the
//! doughnut and developed numerically as the final gate.

use std::collections::{BTreeSet, HashSet};
use std::ops::Range;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::angleform::{rational, AngleForm, Assignment, Shape};
use crate::diagram::{develop, DiagramSpec, LabeledTriangle, SeedPose};
use crate::doughnut::{build_doughnut, hole_labels};
use crate::error::{Error, Result};

/// Name of the added vertex under the single-interior-vertex policy.
pub const CENTER_LABEL: &str = "Z";

/// `a * alpha + b * beta + sigma * tau/(2n)`; `c` eliminated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntForm {
    pub a: i64,
    pub b: i64,
    pub unit: i64,
}

impl IntForm {
    pub const fn new(a: i64, b: i64, unit: i64) -> Self {
        IntForm { a, b, unit }
    }

    /// The canonical representative of `form`, if its coefficients are integral.
    pub fn from_form(form: &AngleForm, n: u32) -> Option<IntForm> {
        let reduced = form.reduce(n);
        let integral = |q: &num_rational::BigRational| {
            if q.is_integer() {
                q.to_integer().to_i64()
            } else {
                None
            }
        };
        let unit = reduced.coeff_tau.clone() * rational(2 * i64::from(n), 1);
        Some(IntForm {
            a: integral(&reduced.coeff_a)?,
            b: integral(&reduced.coeff_b)?,
            unit: integral(&unit)?,
        })
    }

    pub fn to_form(self, n: u32) -> AngleForm {
        AngleForm::new(
            rational(self.a, 1),
            rational(self.b, 1),
            rational(0, 1),
            rational(self.unit, 2 * i64::from(n)),
        )
    }

    fn add(self, o: IntForm) -> IntForm {
        IntForm::new(self.a + o.a, self.b + o.b, self.unit + o.unit)
    }

    fn sub(self, o: IntForm) -> IntForm {
        IntForm::new(self.a - o.a, self.b - o.b, self.unit - o.unit)
    }

    /// Twenty times the value in units of `u` at the three extreme points of
    /// the sampling simplex `{a, b, c >= u/20}`.
    pub fn corner_values(self) -> [i64; 3] {
        let base = self.a + self.b + 20 * self.unit;
        [base + 17 * self.a, base + 17 * self.b, base]
    }

    /// Value in units of `u` at `a = x u`, `b = y u`.
    pub fn value_at(self, x: f64, y: f64) -> f64 {
        self.a as f64 * x + self.b as f64 * y + self.unit as f64
    }

    /// Every corner value lies strictly between 0 and `count` half turns.
    fn within(self, n: u32, count: i64) -> bool {
        let top = 20 * i64::from(n) * count;
        self.corner_values().iter().all(|v| *v > 0 && *v < top)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TriangulationPolicy {
    NoInteriorVertex,
    SingleInteriorVertex,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    /// Bound on `|p|, |q|, |r|` in `p a + q b + r c + s tau/(2n)`, and on `|s|`.
    pub max_numerator: u32,
    pub max_fill_triangles: usize,
    pub policy: TriangulationPolicy,
    /// Random realizability samples on top of the three simplex corners.
    pub samples: usize,
    /// Random assignments for the numeric closure gate.
    pub numeric_trials: usize,
    pub seed: u64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_numerator: 4,
            max_fill_triangles: 4,
            policy: TriangulationPolicy::NoInteriorVertex,
            samples: 20,
            numeric_trials: 10,
            seed: 0,
        }
    }
}

/// A triangulation of a convex `polygon`-gon whose vertices are `0..polygon`
/// counter-clockwise; vertex `polygon` is the added center, if any.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triangulation {
    pub polygon: usize,
    pub center: bool,
    pub triangles: Vec<[usize; 3]>,
}

impl Triangulation {
    pub fn vertex_count(&self) -> usize {
        self.polygon + usize::from(self.center)
    }
}

fn triangulate_chain(i: usize, j: usize) -> Vec<Vec<[usize; 3]>> {
    if j - i < 2 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for k in i + 1..j {
        for left in triangulate_chain(i, k) {
            for right in triangulate_chain(k, j) {
                let mut tris = vec![[i, k, j]];
                tris.extend(left.iter().copied());
                tris.extend(right.iter().copied());
                out.push(tris);
            }
        }
    }
    out
}

pub fn enumerate_hole_triangulations(vertices: usize, policy: TriangulationPolicy) -> Vec<Triangulation> {
    if vertices < 3 {
        return Vec::new();
    }
    let mut out: Vec<Triangulation> = triangulate_chain(0, vertices - 1)
        .into_iter()
        .map(|triangles| Triangulation {
            polygon: vertices,
            center: false,
            triangles,
        })
        .collect();
    if policy == TriangulationPolicy::SingleInteriorVertex {
        out.push(Triangulation {
            polygon: vertices,
            center: true,
            triangles: (0..vertices).map(|i| [i, (i + 1) % vertices, vertices]).collect(),
        });
    }
    out
}

/// Samples `(x, y)` with `a = x u`, `b = y u`, starting with the simplex corners.
fn sample_points(samples: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut out = vec![(0.9, 0.05), (0.05, 0.9), (0.05, 0.05)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let mut cuts = [rng.gen::<f64>(), rng.gen::<f64>()];
        cuts.sort_by(f64::total_cmp);
        out.push((0.05 + 0.85 * cuts[0], 0.05 + 0.85 * (cuts[1] - cuts[0])));
    }
    out
}

/// Realizable candidate forms, sorted and without duplicates.
pub fn candidate_forms(n: u32, bounds: &SearchBounds) -> Vec<IntForm> {
    let m = i64::from(bounds.max_numerator);
    let mut raw = BTreeSet::new();
    for p in -m..=m {
        for q in -m..=m {
            for r in -m..=m {
                for s in -m..=m {
                    raw.insert(IntForm::new(p - r, q - r, s + r));
                }
            }
        }
    }
    let samples = sample_points(bounds.samples, bounds.seed);
    let half = f64::from(n);
    raw.into_iter()
        .filter(|f| f.within(n, 1))
        .filter(|f| {
            samples.iter().all(|&(x, y)| {
                let v = f.value_at(x, y);
                v > 0.0 && v < half
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FillSolution {
    pub triangulation: usize,
    /// Vertex names of each fill triangle, counter-clockwise.
    pub vertices: Vec<[String; 3]>,
    pub shapes: Vec<Shape>,
    /// Work item that produced it.
    pub cursor: usize,
    pub max_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub n: u32,
    pub hole: Vec<String>,
    pub bounds: SearchBounds,
    pub triangulations: usize,
    pub candidate_forms: usize,
    /// Work items covered, `start..end`.
    pub cursor: Range<usize>,
    pub work_items: usize,
    /// Complete assignments meeting every triangle and vertex angle sum.
    pub candidates_examined: u64,
    /// Of those, how many passed EZ holonomy everywhere.
    pub symbolic_passes: u64,
    pub solutions: Vec<FillSolution>,
}

impl SearchResult {
    pub fn is_complete(&self) -> bool {
        self.cursor == (0..self.work_items)
    }

    /// Concatenates two results over adjacent cursor ranges.
    pub fn merge(mut self, other: SearchResult) -> Result<SearchResult> {
        if self.cursor.end != other.cursor.start || self.n != other.n || self.bounds != other.bounds {
            return Err(Error::InvalidArgument(format!(
                "cannot merge cursor ranges {:?} and {:?}",
                self.cursor, other.cursor
            )));
        }
        self.cursor = self.cursor.start..other.cursor.end;
        self.candidates_examined += other.candidates_examined;
        self.symbolic_passes += other.symbolic_passes;
        self.solutions.extend(other.solutions);
        Ok(self)
    }
}

/// Angle data for one triangulation: slot `3t + i` is corner `i` of fill
/// triangle `t`.
struct Schedule {
    vertex_of: Vec<usize>,
    /// Last slot of its triangle.
    closes_triangle: Vec<bool>,
    /// Last slot at its vertex.
    closes_vertex: Vec<bool>,
    /// Slots at each vertex still open after this slot, per slot.
    vertex_open_after: Vec<i64>,
}

impl Schedule {
    fn new(tri: &Triangulation) -> Schedule {
        let slots = 3 * tri.triangles.len();
        let vertex_of: Vec<usize> = tri.triangles.iter().flat_map(|t| t.iter().copied()).collect();
        let mut closes_vertex = vec![false; slots];
        let mut vertex_open_after = vec![0; slots];
        for s in 0..slots {
            let later = (s + 1..slots).filter(|&r| vertex_of[r] == vertex_of[s]).count();
            closes_vertex[s] = later == 0;
            vertex_open_after[s] = later as i64;
        }
        Schedule {
            vertex_of,
            closes_triangle: (0..slots).map(|s| s % 3 == 2).collect(),
            closes_vertex,
            vertex_open_after,
        }
    }
}

pub struct SearchPlan {
    pub n: u32,
    pub bounds: SearchBounds,
    pub spec: DiagramSpec,
    pub hole: Vec<String>,
    pub candidates: Vec<IntForm>,
    candidate_set: HashSet<IntForm>,
    pub triangulations: Vec<Triangulation>,
    /// Per hole vertex: the angle the fill must supply.
    deficits: Vec<IntForm>,
    leads: Vec<Vec<IntForm>>,
    trails: Vec<Vec<IntForm>>,
}

struct Partial {
    examined: u64,
    passes: u64,
    found: Vec<(usize, usize, Vec<IntForm>)>,
}

impl SearchPlan {
    pub fn new(n: u32, bounds: SearchBounds) -> Result<SearchPlan> {
        if bounds.max_numerator == 0 || bounds.max_fill_triangles == 0 {
            return Err(Error::InvalidArgument("search bounds must be positive".into()));
        }
        let spec = build_doughnut(n)?;
        let hole = hole_labels(&spec)?;
        if hole.is_empty() {
            return Err(Error::HoleAbsent { n });
        }
        let labels = spec.labels().expect("doughnut specs are labeled");
        let full = IntForm::new(0, 0, 2 * i64::from(n));
        let mut deficits = vec![full; hole.len()];
        let mut leads = vec![Vec::new(); hole.len()];
        let mut trails = vec![Vec::new(); hole.len()];
        for tri in &spec.triangles {
            for (pivot, name) in labels[&tri.id].iter().enumerate() {
                let Some(v) = hole.iter().position(|h| h == name) else { continue };
                let form = |k: usize| {
                    IntForm::from_form(tri.angles.angle(k), n).expect("doughnut angles are integral")
                };
                deficits[v] = deficits[v].sub(form(pivot));
                leads[v].push(form(pivot + 1));
                trails[v].push(form(pivot + 2));
            }
        }
        let candidates = candidate_forms(n, &bounds);
        let candidate_set = candidates.iter().copied().collect();
        let triangulations = enumerate_hole_triangulations(hole.len(), bounds.policy)
            .into_iter()
            .filter(|t| t.triangles.len() <= bounds.max_fill_triangles)
            .collect();
        Ok(SearchPlan {
            n,
            bounds,
            spec,
            hole,
            candidates,
            candidate_set,
            triangulations,
            deficits,
            leads,
            trails,
        })
    }

    /// One work item per (triangulation, candidate for its first angle).
    pub fn work_items(&self) -> usize {
        self.triangulations.len() * self.candidates.len()
    }

    fn vertex_label(&self, v: usize) -> String {
        self.hole.get(v).cloned().unwrap_or_else(|| CENTER_LABEL.to_string())
    }

    fn target(&self, v: usize) -> IntForm {
        self.deficits
            .get(v)
            .copied()
            .unwrap_or(IntForm::new(0, 0, 2 * i64::from(self.n)))
    }

    pub fn run(&self, range: Range<usize>) -> SearchResult {
        let range = range.start.min(self.work_items())..range.end.min(self.work_items());
        let parts: Vec<Partial> = range.clone().into_par_iter().map(|item| self.run_item(item)).collect();
        let mut examined = 0;
        let mut passes = 0;
        let mut solutions = Vec::new();
        for (offset, part) in parts.into_iter().enumerate() {
            examined += part.examined;
            passes += part.passes;
            for (cursor, t, values) in part.found {
                debug_assert_eq!(cursor, range.start + offset);
                if let Some(sol) = self.numeric_gate(cursor, t, &values) {
                    solutions.push(sol);
                }
            }
        }
        SearchResult {
            n: self.n,
            hole: self.hole.clone(),
            bounds: self.bounds.clone(),
            triangulations: self.triangulations.len(),
            candidate_forms: self.candidates.len(),
            cursor: range,
            work_items: self.work_items(),
            candidates_examined: examined,
            symbolic_passes: passes,
            solutions,
        }
    }

    pub fn run_all(&self) -> SearchResult {
        self.run(0..self.work_items())
    }

    fn run_item(&self, item: usize) -> Partial {
        let t = item / self.candidates.len();
        let first = self.candidates[item % self.candidates.len()];
        let tri = &self.triangulations[t];
        let schedule = Schedule::new(tri);
        let slots = schedule.vertex_of.len();
        let mut state = Dfs {
            plan: self,
            schedule: &schedule,
            triangulation: tri,
            values: vec![IntForm::default(); slots],
            vertex_sums: vec![IntForm::default(); tri.vertex_count()],
            partial: Partial {
                examined: 0,
                passes: 0,
                found: Vec::new(),
            },
            item,
            t,
        };
        // The first slot: only the item's own candidate, if consistent.
        if let Some(forced) = state.forced(0) {
            if forced != first {
                return state.partial;
            }
        }
        state.assign(0, first);
        state.partial
    }

    fn fill_triangles(&self, tri: &Triangulation, values: &[IntForm]) -> (Vec<[String; 3]>, Vec<Shape>) {
        let vertices = tri
            .triangles
            .iter()
            .map(|t| t.map(|v| self.vertex_label(v)))
            .collect();
        let shapes = values
            .chunks(3)
            .map(|c| Shape::new(c[0].to_form(self.n), c[1].to_form(self.n), c[2].to_form(self.n)))
            .collect();
        (vertices, shapes)
    }

    /// Splices a fill into the doughnut spec.
    pub fn splice(&self, vertices: &[[String; 3]], shapes: &[Shape]) -> Result<DiagramSpec> {
        let mut triangles = self.spec.labeled()?;
        for (i, (v, s)) in vertices.iter().zip(shapes).enumerate() {
            triangles.push(LabeledTriangle::new(format!("fill{i}"), [&v[0], &v[1], &v[2]], s.clone()));
        }
        let mut metadata = self.spec.metadata.clone();
        metadata.insert("name".into(), json!(format!("doughnut-{}-filled", self.n)));
        DiagramSpec::from_labeled(self.n, triangles, metadata)
    }

    fn numeric_gate(&self, cursor: usize, t: usize, values: &[IntForm]) -> Option<FillSolution> {
        let tri = &self.triangulations[t];
        let (vertices, shapes) = self.fill_triangles(tri, values);
        let spec = self.splice(&vertices, &shapes).ok()?;
        let pose = SeedPose::default_for(&spec);
        let mut rng = ChaCha8Rng::seed_from_u64(self.bounds.seed);
        let mut worst: f64 = 0.0;
        for _ in 0..self.bounds.numeric_trials {
            let x = Assignment::random(self.n, &mut rng);
            let placed = develop(&spec, &x, &pose).ok()?;
            worst = worst.max(placed.normalized_residual(&spec));
        }
        (worst < 1e-9).then_some(FillSolution {
            triangulation: t,
            vertices,
            shapes,
            cursor,
            max_residual: worst,
        })
    }
}

struct Dfs<'a> {
    plan: &'a SearchPlan,
    schedule: &'a Schedule,
    triangulation: &'a Triangulation,
    values: Vec<IntForm>,
    vertex_sums: Vec<IntForm>,
    partial: Partial,
    item: usize,
    t: usize,
}

impl Dfs<'_> {
    fn half(&self) -> IntForm {
        IntForm::new(0, 0, i64::from(self.plan.n))
    }

    /// The value a slot must take, if the sums determine it.
    fn forced(&self, slot: usize) -> Option<IntForm> {
        let v = self.schedule.vertex_of[slot];
        let by_vertex = self.plan.target(v).sub(self.vertex_sums[v]);
        if self.schedule.closes_triangle[slot] {
            let base = slot - 2;
            Some(self.half().sub(self.values[base]).sub(self.values[base + 1]))
        } else if self.schedule.closes_vertex[slot] {
            Some(by_vertex)
        } else {
            None
        }
    }

    fn step(&mut self, slot: usize) {
        if slot == self.values.len() {
            self.leaf();
            return;
        }
        match self.forced(slot) {
            Some(value) => {
                if self.plan.candidate_set.contains(&value) {
                    self.assign(slot, value);
                }
            }
            None => {
                for i in 0..self.plan.candidates.len() {
                    self.assign(slot, self.plan.candidates[i]);
                }
            }
        }
    }

    fn assign(&mut self, slot: usize, value: IntForm) {
        let v = self.schedule.vertex_of[slot];
        let n = self.plan.n;
        let sum = self.vertex_sums[v].add(value);
        let rest = self.plan.target(v).sub(sum);
        let open = self.schedule.vertex_open_after[slot];
        if open == 0 {
            if rest != IntForm::default() {
                return;
            }
        } else if !rest.within(n, open) {
            return;
        }
        if slot % 3 == 1 {
            let left = self.half().sub(self.values[slot - 1]).sub(value);
            if !left.within(n, 1) {
                return;
            }
        }
        let saved = self.vertex_sums[v];
        self.vertex_sums[v] = sum;
        self.values[slot] = value;
        self.step(slot + 1);
        self.vertex_sums[v] = saved;
    }

    fn leaf(&mut self) {
        self.partial.examined += 1;
        let plan = self.plan;
        let tri = self.triangulation;
        for v in 0..tri.vertex_count() {
            let mut leads = plan.leads.get(v).cloned().unwrap_or_default();
            let mut trails = plan.trails.get(v).cloned().unwrap_or_default();
            for (t, corners) in tri.triangles.iter().enumerate() {
                if let Some(p) = corners.iter().position(|&c| c == v) {
                    leads.push(self.values[3 * t + (p + 1) % 3]);
                    trails.push(self.values[3 * t + (p + 2) % 3]);
                }
            }
            leads.sort_unstable();
            trails.sort_unstable();
            if leads != trails {
                return;
            }
        }
        self.partial.passes += 1;
        self.partial.found.push((self.item, self.t, self.values.clone()));
    }
}

/// Searches the hole of the `n`-doughnut exhaustively within `bounds`.
pub fn search_hole_fill(n: u32, bounds: &SearchBounds) -> Result<SearchResult> {
    Ok(SearchPlan::new(n, bounds.clone())?.run_all())
}
