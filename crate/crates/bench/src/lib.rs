//! Fixed workloads shared by the criterion benches and their smoke tests.

use doughnut_core::diagram::{catalog, develop, SeedPose};
use doughnut_core::doughnut::{build_doughnut, hole_polygon};
use doughnut_core::holonomy::{cyclotomic_max_residual, ez_check};
use doughnut_core::packing::{develop_packing, PackingParams};
use doughnut_core::render::{to_svg, RenderStyle, Scene};
use doughnut_core::search::{search_hole_fill, SearchBounds};
use doughnut_core::{Assignment, DiagramSpec, PlacedDiagram};

pub struct Fixture {
    pub spec: DiagramSpec,
    pub assignment: Assignment,
}

impl Fixture {
    pub fn catalog(name: &str) -> Fixture {
        let spec = catalog(name).expect("catalog entry");
        let assignment = Assignment::proportional([4.0, 3.0, 2.0], spec.n).expect("valid weights");
        Fixture { spec, assignment }
    }

    pub fn doughnut(n: u32) -> Fixture {
        let spec = build_doughnut(n).expect("n >= 2");
        let assignment = Assignment::proportional([4.0, 3.0, 2.0], n).expect("valid weights");
        Fixture { spec, assignment }
    }

    pub fn develop(&self) -> PlacedDiagram {
        develop(&self.spec, &self.assignment, &SeedPose::default_for(&self.spec)).expect("develops")
    }

    /// Number of interior vertices passing the symbolic holonomy check.
    pub fn ez_all(&self) -> usize {
        self.spec
            .interior_vertices
            .iter()
            .filter(|v| ez_check(&self.spec.ring(v).expect("ring"), self.spec.n))
            .count()
    }

    pub fn hole_vertices(&self) -> usize {
        hole_polygon(&self.develop(), &self.spec).expect("hole").len()
    }

    pub fn svg(&self) -> String {
        let placed = self.develop();
        to_svg(&Scene::new().with_placed(&placed, Some(&self.spec)), &RenderStyle::default()).expect("svg")
    }
}

pub fn identity_sweep(max_n: u32, grid: usize) -> f64 {
    (2..=max_n).map(|n| cyclotomic_max_residual(n, grid, None)).fold(0.0, f64::max)
}

pub fn search_solutions(n: u32) -> usize {
    search_hole_fill(n, &SearchBounds::default()).expect("hole exists").solutions.len()
}

pub fn packing_residual(rows: usize, cols: usize) -> f64 {
    let packing = develop_packing(&PackingParams::new(1.2, 0.9, rows, cols).expect("params")).expect("packing");
    packing.tangency_residual()
}
