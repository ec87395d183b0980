//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::f64::consts::TAU;
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use doughnut_core::diagram::{catalog, develop, symbolic_checks, worst_residual, SeedPose};
use doughnut_core::doughnut::{
    build_doughnut, check_overlaps, hole_polygon, limit_curve, renormalized_boundary, DEFAULT_MERGE_TOLERANCE,
};
use doughnut_core::geometry::{angle_between, circumcenter, incenter, polygon_area, point, Point};
use doughnut_core::holonomy::{corner_holonomy_check, cyclotomic_max_residual};
use doughnut_core::packing::{develop_packing, PackingParams};
use doughnut_core::search::{SearchBounds, SearchPlan};
use doughnut_core::{sector_unit, Assignment};

const TRIALS: usize = 100;
const SEED: u64 = 0;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED)
}

fn existence() -> Verdict {
    let mut worst: f64 = 0.0;
    for name in ["bisector", "morley", "conway", "icos", "icosvar"] {
        let spec = catalog(name).expect("catalog entry");
        if !symbolic_checks(&spec).expect("symbolic checks").passes() {
            return verdict(false, format!("{name}: symbolic checks fail"));
        }
        worst = worst.max(worst_residual(&spec, TRIALS, SEED).expect("develops"));
    }
    verdict(worst < 1e-9, format!("max normalized residual {worst:.2e} (< 1e-9)"))
}

fn doughnut_existence() -> Verdict {
    let mut rng = rng();
    let mut worst: f64 = 0.0;
    let mut worst_small_hole: f64 = 0.0;
    for n in 2..=12u32 {
        let spec = build_doughnut(n).expect("doughnut");
        let pose = SeedPose::default_for(&spec);
        for _ in 0..TRIALS {
            let x = Assignment::random(n, &mut rng);
            let placed = develop(&spec, &x, &pose).expect("develops");
            if let Err(e) = check_overlaps(&placed, DEFAULT_MERGE_TOLERANCE) {
                return verdict(false, format!("n = {n}: {e}"));
            }
            worst = worst.max(placed.normalized_residual(&spec));
            let hole = hole_polygon(&placed, &spec).expect("hole");
            let corners = ["A", "B", "C"].map(|c| placed.vertex(&spec, c).expect("corner"));
            let relative = hole.area() / polygon_area(&corners);
            let expected = match n {
                2 | 3 => 0,
                4 => 3,
                _ => 3 * (n as usize - 3),
            };
            if n <= 3 {
                worst_small_hole = worst_small_hole.max(relative);
            }
            if hole.len() != expected {
                return verdict(false, format!("n = {n}: hole has {} vertices, expected {expected}", hole.len()));
            }
        }
    }
    verdict(
        worst < 1e-9 && worst_small_hole < 1e-9,
        format!("n in 2..=12: residual {worst:.2e}, n <= 3 hole area {worst_small_hole:.2e}, n = 4 triangular"),
    )
}

fn cyclotomic() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut weakest_perturbed = f64::INFINITY;
    for n in 1..=32u32 {
        worst = worst.max(cyclotomic_max_residual(n, 1000, None));
        let perturbed = 2f64.powi(n as i32 - 1) * (1.0 + 1e-6);
        weakest_perturbed = weakest_perturbed.min(cyclotomic_max_residual(n, 1000, Some(perturbed)));
    }
    verdict(
        worst < 1e-12 && weakest_perturbed >= 1e-12,
        format!("max residual {worst:.2e} (< 1e-12); perturbed constant gives >= {weakest_perturbed:.2e}"),
    )
}

fn corner_holonomy() -> Verdict {
    let mut rng = rng();
    let mut worst: f64 = 0.0;
    for n in 2..=12u32 {
        for _ in 0..TRIALS {
            let x = Assignment::random(n, &mut rng);
            worst = worst.max(corner_holonomy_check(n, &x).expect("valid assignment"));
        }
    }
    verdict(worst < 1e-11, format!("max corner holonomy {worst:.2e} (< 1e-11)"))
}

fn asymptotics() -> Verdict {
    let corner = TAU / 4.0;
    let mut distances = Vec::new();
    for n in [10u32, 20, 40] {
        let a = corner / f64::from(n);
        let rest = (sector_unit(n) - a) / 2.0;
        let x = Assignment::new(a, rest, rest, n).expect("valid assignment");
        distances.push(renormalized_boundary(n, &x, 0).expect("hole").max_distance);
    }
    let monotone = distances.windows(2).all(|w| w[1] < w[0]);
    let hyperbola = limit_curve(TAU / 4.0, 1000)
        .expect("curve")
        .iter()
        .map(|p| (2.0 * p.re * p.im - 1.0).abs())
        .fold(0.0, f64::max);
    let monkey = limit_curve(TAU / 6.0, 1000)
        .expect("curve")
        .iter()
        .map(|p| (3.0 * p.re * p.re * p.im - p.im.powi(3) - 1.0).abs())
        .fold(0.0, f64::max);
    verdict(
        monotone && hyperbola < 1e-12 && monkey < 1e-12,
        format!(
            "distances n=10,20,40: {:.2e}, {:.2e}, {:.2e}; curve residuals {hyperbola:.1e}, {monkey:.1e}",
            distances[0], distances[1], distances[2]
        ),
    )
}

fn search() -> Verdict {
    let four = SearchPlan::new(4, SearchBounds::default()).expect("plan").run_all();
    let plan = SearchPlan::new(5, SearchBounds::default()).expect("plan");
    let five = plan.run_all();
    let mid = plan.work_items() / 3;
    let merged = plan.run(0..mid).merge(plan.run(mid..plan.work_items())).expect("adjacent ranges");
    let resumable = merged == five;
    verdict(
        !four.solutions.is_empty() && five.is_complete() && five.solutions.is_empty() && resumable,
        format!(
            "n = 4: {} fill(s); n = 5: {} solutions over {} work items, {} candidates; split/merge equal: {resumable}",
            four.solutions.len(),
            five.solutions.len(),
            five.work_items,
            five.candidates_examined
        ),
    )
}

fn packing() -> Verdict {
    let hex = develop_packing(&PackingParams::new(1.0, 1.0, 8, 8).expect("params")).expect("packing");
    let w = Point::from_polar(2.0, TAU / 6.0);
    let hex_error = hex
        .circles
        .iter()
        .map(|c| {
            let expected = point(2.0 * c.lattice.0 as f64, 0.0) + w * c.lattice.1 as f64;
            (c.center - expected).norm().max((c.radius - 1.0).abs())
        })
        .fold(0.0, f64::max);
    let mut generic: f64 = 0.0;
    for (s, t) in [(1.1, 0.9), (1.3, 1.2), (0.7, 1.05), (2.0, 1.0)] {
        let p = develop_packing(&PackingParams::new(s, t, 8, 8).expect("params")).expect("packing");
        generic = generic.max(p.tangency_residual()).max(p.flat_vertex_residual());
    }
    verdict(
        hex_error < 1e-12 && generic < 1e-9,
        format!("hexagonal error {hex_error:.1e} (< 1e-12); generic residual {generic:.1e} (< 1e-9)"),
    )
}

fn figures() -> Verdict {
    let mut rng = rng();
    let (mut icosvar, mut chopsticks, mut double) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..TRIALS {
        let spec = catalog("icosvar").expect("entry");
        let x = Assignment::random(spec.n, &mut rng);
        let placed = develop(&spec, &x, &SeedPose::default_for(&spec)).expect("develops");
        let v = |s: &str| placed.vertex(&spec, s).expect("vertex");
        let gap = (circumcenter(v("A2"), v("B2"), v("C2")) - incenter(v("A"), v("B"), v("C"))).norm();
        icosvar = icosvar.max(gap / placed.diameter());

        let spec = catalog("chopsticks").expect("entry");
        let x = Assignment::random(spec.n, &mut rng);
        let placed = develop(&spec, &x, &SeedPose::default_for(&spec)).expect("develops");
        let v = |s: &str| placed.vertex(&spec, s).expect("vertex");
        let o = circumcenter(v("A"), v("B"), v("C"));
        let r = (v("A") - o).norm();
        chopsticks = chopsticks.max(((v("D") - o).norm() - r).abs() / r);

        let spec = catalog("centers-circumcenter").expect("entry");
        let x = Assignment::random(spec.n, &mut rng);
        let placed = develop(&spec, &x, &SeedPose::default_for(&spec)).expect("develops");
        let v = |s: &str| placed.vertex(&spec, s).expect("vertex");
        let (a, b, c, o) = (v("A"), v("B"), v("C"), v("O"));
        for (p, q, r) in [(a, b, c), (b, c, a), (c, a, b)] {
            double = double.max((angle_between(o, p, q) - 2.0 * angle_between(r, p, q)).abs());
        }
    }
    verdict(
        icosvar < 1e-9 && chopsticks < 1e-9 && double < 1e-10,
        format!("incenter gap {icosvar:.1e}; concyclicity {chopsticks:.1e}; double angle {double:.1e}"),
    )
}

fn determinism() -> Verdict {
    let bin = env!("CARGO_BIN_EXE_doughnut");
    let runs: [&[&str]; 8] = [
        &["check", "conway", "--seed", "11", "--trials", "25"],
        &["check", "morley", "--a", "30deg", "--b", "20deg", "--c", "10deg", "--out", "svg"],
        &["doughnut", "--n", "9", "--fill"],
        &["doughnut", "--n", "9", "--fill", "--out", "svg"],
        &["asymptote", "--corner-angle", "1/4tau", "--n-list", "10,20", "--out", "svg"],
        &["search", "--n", "4", "--seed", "5"],
        &["pack", "--s", "1.2", "--t", "0.9", "--out", "svg"],
        &["identity", "--n", "17"],
    ];
    for args in runs {
        let once = || Command::new(bin).args(args).env_remove("DOUGHNUTS_OUT_DIR").output().expect("runs");
        let (first, second) = (once(), once());
        if !first.status.success() || first.stdout.is_empty() || first.stdout != second.stdout {
            return verdict(false, format!("{args:?} differs between runs"));
        }
    }
    let frames = |tag: &str| -> Vec<Vec<u8>> {
        let dir: PathBuf = std::env::temp_dir().join(format!("doughnut-acceptance-{}-{tag}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        Command::new(bin)
            .args(["--out-dir", dir.to_str().expect("utf-8 path"), "flipbook", "--from", "6", "--to", "2"])
            .output()
            .expect("runs");
        let mut names: Vec<PathBuf> = std::fs::read_dir(&dir)
            .map(|d| d.map(|e| e.expect("entry").path()).collect())
            .unwrap_or_default();
        names.sort();
        let bytes = names.iter().map(|p| std::fs::read(p).expect("frame")).collect();
        let _ = std::fs::remove_dir_all(&dir);
        bytes
    };
    let (first, second) = (frames("a"), frames("b"));
    verdict(
        first.len() == 5 && first == second,
        format!("{} commands and {} flip-book frames byte-identical", runs.len(), first.len()),
    )
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Verdict, Duration);
    let criteria: [Criterion; 9] = [
        ("1 catalog existence", existence, Duration::from_secs(10)),
        ("2 doughnut existence", doughnut_existence, Duration::from_secs(60)),
        ("3 cyclotomic identity", cyclotomic, Duration::from_secs(5)),
        ("4 corner holonomy", corner_holonomy, Duration::from_secs(5)),
        ("5 asymptotics", asymptotics, Duration::from_secs(30)),
        ("6 search replication", search, Duration::from_secs(30 * 60)),
        ("7 packing", packing, Duration::from_secs(5)),
        ("8 figure checks", figures, Duration::from_secs(10)),
        ("9 determinism", determinism, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let v = check();
        let elapsed = start.elapsed();
        let pass = v.pass && elapsed <= budget;
        failed += usize::from(!pass);
        println!(
            "{} criterion {name}: {} [{:.2}s / budget {}s]",
            if pass { "PASS" } else { "FAIL" },
            v.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if failed == 0 {
        println!("acceptance: all 9 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criterion/criteria failed");
        ExitCode::FAILURE
    }
}
