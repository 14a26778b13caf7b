use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use xray_cover::certify::{certify, BodyClass, BodyKind};
use xray_cover::constructions::{
    config_from_json, config_to_json, cross_polytope_config, hexagon_pair_config,
    join_covering_radius, named_config, orthogonal_join, regular_polygon_config, FIXED_NAMES,
};
use xray_cover::covering::{verify_antipodal, AntipodalConfig, CoveringError, Provenance};
use xray_cover::hull::{contains_origin_interior, ConvexHull};
use xray_cover::linalg::{dot, random_orthogonal};
use xray_cover::optimize::{optimize_antipodal_covering, Schedule};
use xray_cover::polytope::{corpus, line_xrays_face, normal_cone, verify_xray_lines, LineSet};
use xray_cover::sphere::{circumcenter, geodesic_distance, min_enclosing_cap, UnitVector};

fn unit_vectors(d: usize, n: usize) -> impl Strategy<Value = Vec<UnitVector>> {
    prop::collection::vec(prop::collection::vec(-1.0f64..1.0, d), n).prop_filter_map(
        "near-zero vector",
        |vs| {
            vs.into_iter()
                .map(|v| (dot(&v, &v) > 1e-4).then(|| UnitVector::new(v).unwrap()))
                .collect()
        },
    )
}

fn config(d: usize, m: usize) -> impl Strategy<Value = AntipodalConfig> {
    unit_vectors(d, m).prop_filter_map("coincident points", move |pts| {
        AntipodalConfig::new(d, pts, Provenance::Loaded("proptest".into())).ok()
    })
}

fn rotation(d: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    any::<u64>().prop_map(move |s| random_orthogonal(d, &mut ChaCha8Rng::seed_from_u64(s)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn sampled_never_exceeds_exact_in_three_dimensions(c in config(3, 7), seed in any::<u64>()) {
        if let Ok(exact) = c.covering_radius_exact() {
            let sampled = c.covering_radius_sampled(4000, seed);
            prop_assert!(sampled.radius <= exact.radius + 1e-9);
        }
    }

    #[test]
    fn sampled_never_exceeds_exact_in_four_dimensions(c in config(4, 9), seed in any::<u64>()) {
        if let Ok(exact) = c.covering_radius_exact() {
            let sampled = c.covering_radius_sampled(4000, seed);
            prop_assert!(sampled.radius <= exact.radius + 1e-9);
        }
    }

    #[test]
    fn exact_radius_is_rotation_invariant(c in config(4, 8), q in rotation(4)) {
        if let Ok(r) = c.covering_radius_exact() {
            let rotated = c.rotated(&q).covering_radius_exact().unwrap();
            prop_assert!((r.radius - rotated.radius).abs() < 1e-8);
        }
    }

    #[test]
    fn radius_below_right_angle_iff_origin_interior(c in config(3, 4)) {
        let coords: Vec<Vec<f64>> = c.expanded().iter().map(|p| p.coords().to_vec()).collect();
        let interior = ConvexHull::new(&coords).map(|h| contains_origin_interior(h.facets())).unwrap_or(false);
        match c.covering_radius_exact() {
            Ok(r) => prop_assert_eq!(r.radius < FRAC_PI_2 - 1e-9, interior),
            Err(CoveringError::OriginNotInterior) => prop_assert!(!interior),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn adding_a_pair_never_increases_the_radius(c in config(3, 6), extra in unit_vectors(3, 1)) {
        let mut pts = c.base_points().to_vec();
        pts.push(extra[0].clone());
        if let (Ok(before), Ok(bigger)) = (
            c.covering_radius_exact(),
            AntipodalConfig::new(3, pts, Provenance::Loaded("plus".into())),
        ) {
            let after = bigger.covering_radius_exact().unwrap();
            prop_assert!(after.radius <= before.radius + 1e-12);
        }
    }

    #[test]
    fn config_json_round_trip_is_identity(c in config(5, 7)) {
        let c = match c.clone().with_exact_radius() { Ok(r) => r, Err(_) => c };
        let text = config_to_json(&c);
        let back = config_from_json(&text).unwrap();
        prop_assert!(back.warnings.is_empty());
        prop_assert_eq!(&back.config, &c);
        prop_assert_eq!(config_to_json(&back.config), text);
    }

    #[test]
    fn triangle_inequality(p in unit_vectors(4, 3)) {
        let d = |a: &UnitVector, b: &UnitVector| geodesic_distance(a, b).unwrap();
        prop_assert!(d(&p[0], &p[2]) <= d(&p[0], &p[1]) + d(&p[1], &p[2]) + 1e-9);
    }

    #[test]
    fn circumcenter_is_equidistant(p in unit_vectors(4, 3)) {
        if let Ok((c, r)) = circumcenter(&p) {
            for x in &p {
                prop_assert!((geodesic_distance(&c, x).unwrap() - r).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn enclosing_cap_contains_and_spans_half_diameter(p in unit_vectors(3, 6)) {
        if let Ok(cap) = min_enclosing_cap(&p) {
            let mut diam = 0.0f64;
            for a in &p {
                prop_assert!(geodesic_distance(&cap.center, a).unwrap() <= cap.radius + 1e-9);
                for b in &p {
                    diam = diam.max(geodesic_distance(a, b).unwrap());
                }
            }
            prop_assert!(cap.radius >= diam / 2.0 - 1e-9);
        }
    }

    #[test]
    fn distances_are_rotation_invariant(p in unit_vectors(5, 2), q in rotation(5)) {
        let before = geodesic_distance(&p[0], &p[1]).unwrap();
        let after = geodesic_distance(&p[0].rotate(&q), &p[1].rotate(&q)).unwrap();
        prop_assert!((before - after).abs() < 1e-9);
    }

    #[test]
    fn hull_contains_every_point(c in config(4, 7)) {
        let coords: Vec<Vec<f64>> = c.expanded().iter().map(|p| p.coords().to_vec()).collect();
        if let Ok(h) = ConvexHull::new(&coords) {
            for f in h.facets() {
                for p in &coords {
                    prop_assert!(dot(f.outward_normal.coords(), p) <= f.support_offset + 1e-8);
                }
            }
        }
    }

    #[test]
    fn hull_combinatorics_survive_rotation(c in config(3, 6), q in rotation(3)) {
        let coords: Vec<Vec<f64>> = c.expanded().iter().map(|p| p.coords().to_vec()).collect();
        let rotated: Vec<Vec<f64>> = c.rotated(&q).expanded().iter().map(|p| p.coords().to_vec()).collect();
        if let (Ok(a), Ok(b)) = (ConvexHull::new(&coords), ConvexHull::new(&rotated)) {
            let sets = |h: &ConvexHull| {
                let mut s: Vec<Vec<usize>> = h.groups().iter().map(|g| g.vertices.clone()).collect();
                s.sort();
                s
            };
            prop_assert_eq!(sets(&a), sets(&b));
        }
    }

    #[test]
    fn join_formula_symmetric_and_monotone(a in 0.01f64..1.5, b in 0.01f64..1.5, t in 0.001f64..0.05) {
        let f = |x, y| join_covering_radius(x, y).unwrap();
        prop_assert!((f(a, b) - f(b, a)).abs() < 1e-14);
        prop_assert!(f(a + t, b) > f(a, b));
        prop_assert!(f(a, b + t) > f(a, b));
    }

    #[test]
    fn certificates_are_rotation_invariant(q in rotation(4)) {
        for (kind, cfg) in [
            (BodyKind::ConstantWidth, hexagon_pair_config()),
            (BodyKind::AlmostSmooth, cross_polytope_config(4).unwrap()),
        ] {
            let class = BodyClass::new(kind, 4).unwrap();
            let a = certify(class, &cfg).unwrap();
            let b = certify(class, &cfg.rotated(&q)).unwrap();
            prop_assert!((a.covering_radius - b.covering_radius).abs() < 1e-8);
            prop_assert!((a.margin - b.margin).abs() < 1e-8);
            prop_assert_eq!((a.valid, a.tight, a.xray_bound, a.illumination_bound),
                            (b.valid, b.tight, b.xray_bound, b.illumination_bound));
        }
    }

    #[test]
    fn lines_are_unoriented(l in unit_vectors(3, 1)) {
        for (_, p) in corpus::all().into_iter().filter(|(_, p)| p.dim() == 3) {
            for v in 0..p.vertex_count() {
                let cone = normal_cone(&p, &[v]).unwrap();
                prop_assert_eq!(line_xrays_face(&cone, &l[0]), line_xrays_face(&cone, &l[0].neg()));
            }
        }
    }

    #[test]
    fn adding_a_line_keeps_coverage(lines in unit_vectors(3, 5), extra in unit_vectors(3, 1)) {
        let p = corpus::cube(3);
        let before = verify_xray_lines(&p, &LineSet::new(3, lines.clone()).unwrap()).unwrap();
        let mut more = lines;
        more.push(extra[0].clone());
        let after = verify_xray_lines(&p, &LineSet::new(3, more).unwrap()).unwrap();
        prop_assert!(!before.covered || after.covered);
        for v in &after.failing_vertices {
            prop_assert!(before.failing_vertices.contains(v));
        }
    }

    #[test]
    fn verified_line_sets_survive_tiny_rotations(seed in any::<u64>(), axis in unit_vectors(3, 1)) {
        // rotation by 1e-6 rad about a random axis (Rodrigues)
        let t = 1e-6f64;
        let k = axis[0].coords();
        let rotate = |v: &[f64]| -> Vec<f64> {
            let kxv = [k[1] * v[2] - k[2] * v[1], k[2] * v[0] - k[0] * v[2], k[0] * v[1] - k[1] * v[0]];
            let kv = dot(k, v);
            (0..3).map(|i| v[i] * t.cos() + kxv[i] * t.sin() + k[i] * kv * (1.0 - t.cos())).collect()
        };
        for (name, p) in corpus::all().into_iter().filter(|(_, p)| p.dim() == 3) {
            let found = xray_cover::polytope::xray_upper_bound(&p, 32, seed).unwrap();
            let report = verify_xray_lines(&p, &found.lines).unwrap();
            prop_assert!(report.covered);
            if !report.marginal_vertices.is_empty() {
                continue;
            }
            let turned = LineSet::new(
                3,
                found.lines.lines.iter().map(|l| UnitVector::new(rotate(l.coords())).unwrap()).collect(),
            ).unwrap();
            prop_assert!(verify_xray_lines(&p, &turned).unwrap().covered, "{}", name);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn optimizer_is_deterministic(seed in any::<u64>(), m in 3usize..6) {
        let schedule = Schedule { budget: 300, restarts: 2, basin_hops: 2, refine_steps: 20, ..Schedule::default() };
        let a = optimize_antipodal_covering(3, m, seed, &schedule).unwrap();
        let b = optimize_antipodal_covering(3, m, seed, &schedule).unwrap();
        prop_assert_eq!(a.to_json(), b.to_json());
        for p in a.best.base_points() {
            prop_assert!((dot(p.coords(), p.coords()).sqrt() - 1.0).abs() < 1e-12);
        }
        let exact = a.best.covering_radius_exact().unwrap().radius;
        prop_assert_eq!(exact.to_bits(), a.best_radius.to_bits());
    }
}

#[test]
fn sampling_gap_on_four_dimensional_constructions() {
    for cfg in [hexagon_pair_config(), cross_polytope_config(4).unwrap()] {
        let exact = cfg.covering_radius_exact().unwrap().radius;
        let sampled = cfg.covering_radius_sampled(1_000_000, 7).radius;
        assert!(sampled <= exact + 1e-12);
        assert!(
            exact - sampled < 0.5 * PI / 180.0,
            "{}",
            (exact - sampled).to_degrees()
        );
    }
}

#[test]
fn shipped_constructions_are_antipodal() {
    for name in FIXED_NAMES
        .iter()
        .copied()
        .chain(["cross-polytope-5", "polygon-16"])
    {
        let cfg = named_config(name).unwrap();
        assert!(verify_antipodal(&cfg.expanded()), "{name}");
    }
}

#[test]
fn rigid_joins_match_the_formula() {
    for k in [6, 16] {
        let polygon = regular_polygon_config(k).unwrap();
        let r = polygon.covering_radius_exact().unwrap().radius;
        let join = orthogonal_join(&polygon, &polygon);
        let exact = join.covering_radius_exact().unwrap().radius;
        assert!(
            (exact - join_covering_radius(r, r).unwrap()).abs() < 1e-6,
            "k={k}"
        );
    }
}
