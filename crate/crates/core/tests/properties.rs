use std::f64::consts::TAU;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use doughnut_core::angleform::{parse_angle, AngleForm, Assignment};
use doughnut_core::diagram::{catalog, develop, SeedPose, CATALOG_NAMES};
use doughnut_core::doughnut::{build_doughnut, power_transform};
use doughnut_core::geometry::{angle_between, point, Point};
use doughnut_core::packing::{develop_packing, shapes_from_ratios, vertex_fit_check, PackingParams};
use doughnut_core::render::{to_svg, RenderStyle, Scene};

fn random_assignment(n: u32, seed: u64) -> Assignment {
    Assignment::random(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn priming_two_n_times_gives_full_turn(n in 1u32..40) {
        let mut form = AngleForm::zero();
        for _ in 0..2 * n {
            form = form.prime(n);
        }
        prop_assert_eq!(form, AngleForm::full_turn());
    }

    #[test]
    fn tau_fractions_parse_exactly(p in -50i64..50, q in 1i64..50) {
        let value = parse_angle(&format!("{p}/{q}tau")).unwrap();
        let g = num_gcd(p.unsigned_abs(), q as u64) as i64;
        let expected = (p / g) as f64 / (q / g) as f64 * TAU;
        prop_assert_eq!(value, expected);
    }

    #[test]
    fn seed_independence(entry in 0usize..CATALOG_NAMES.len(), pick in 0usize..64, seed in 0u64..1000,
                         re in -5.0f64..5.0, im in -5.0f64..5.0, len in 0.1f64..10.0, turn in 0.0f64..TAU) {
        let spec = catalog(CATALOG_NAMES[entry]).unwrap();
        let x = random_assignment(spec.n, seed);
        let first = develop(&spec, &x, &SeedPose::default_for(&spec)).unwrap();
        // Reseed on a triangle of the first disk so one similarity relates both developments.
        let candidates: Vec<usize> = (0..spec.triangles.len()).filter(|&t| first.disk[t] == 0).collect();
        let t = candidates[pick % candidates.len()];
        let v0 = point(re, im);
        let v1 = v0 + Point::from_polar(len, turn);
        let second = develop(&spec, &x, &SeedPose::new(spec.triangles[t].id.clone(), v0, v1)).unwrap();
        let old = first.placements[t];
        let scale = (v1 - v0) / (old[1] - old[0]);
        for (i, (p, q)) in first.placements.iter().zip(&second.placements).enumerate() {
            if first.disk[i] != 0 {
                continue;
            }
            for k in 0..3 {
                let mapped = (p[k] - old[0]) * scale + v0;
                prop_assert!((mapped - q[k]).norm() < 1e-12 * second.diameter().max(1.0));
            }
        }
        let ratio = scale.norm();
        prop_assert!((first.max_residual() * ratio - second.max_residual()).abs() < 1e-12 * ratio.max(1.0));
    }

    #[test]
    fn placed_fans_fill_their_corner(n in 2u32..13, seed in 0u64..1000) {
        let spec = build_doughnut(n).unwrap();
        let x = random_assignment(n, seed);
        let placed = develop(&spec, &x, &SeedPose::default_for(&spec)).unwrap();
        let labels = spec.labels().unwrap();
        for (corner, expected) in ["A", "B", "C"].iter().zip([x.a, x.b, x.c]) {
            let total: f64 = labels
                .iter()
                .filter_map(|(id, names)| names.iter().position(|v| v == corner).map(|k| (id, k)))
                .map(|(id, k)| {
                    let p = placed.placement(id).unwrap();
                    angle_between(p[k], p[(k + 1) % 3], p[(k + 2) % 3])
                })
                .sum();
            prop_assert!((total - f64::from(n) * expected).abs() < 1e-12);
        }
    }

    #[test]
    fn power_round_trip(exponent in 0.3f64..3.0, points in prop::collection::vec((0.1f64..5.0, 0.05f64..1.0), 1..20)) {
        // Points in a narrow sector keep both maps away from the cut.
        let pts: Vec<Point> = points.iter().map(|&(r, t)| Point::from_polar(r, t)).collect();
        let there = power_transform(&pts, exponent, point(0.0, 0.0)).unwrap();
        let back = power_transform(&there, 1.0 / exponent, point(0.0, 0.0)).unwrap();
        for (p, q) in pts.iter().zip(&back) {
            prop_assert!((p - q).norm() < 1e-12 * p.norm().max(1.0));
        }
    }

    #[test]
    fn packings_are_tangent_and_flat(s in 0.5f64..2.0, t in 0.5f64..2.0) {
        let (up, down) = shapes_from_ratios(s, t).unwrap();
        prop_assert!(vertex_fit_check(up, down));
        let packing = develop_packing(&PackingParams::new(s, t, 5, 5).unwrap()).unwrap();
        prop_assert!(packing.tangency_residual() < 1e-9);
        prop_assert!(packing.flat_vertex_residual() < 1e-9);
    }

    #[test]
    fn one_closed_path_per_triangle(n in 2u32..10, seed in 0u64..1000) {
        let spec = build_doughnut(n).unwrap();
        let x = random_assignment(n, seed);
        let placed = develop(&spec, &x, &SeedPose::default_for(&spec)).unwrap();
        let scene = Scene::new().with_placed(&placed, Some(&spec));
        let svg = to_svg(&scene, &RenderStyle::default()).unwrap();
        prop_assert_eq!(svg.matches("<path ").count(), spec.triangles.len());
        prop_assert_eq!(svg.matches(" Z\"").count(), spec.triangles.len());
        prop_assert!(!svg.contains("NaN") && !svg.contains("inf"));
        prop_assert_eq!(to_svg(&scene, &RenderStyle::default()).unwrap(), svg);
    }
}

fn num_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}
