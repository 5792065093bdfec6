// One-off robustness soak (not part of the test suite): hammers the
// geometry kernel and the zone/simulator agreement across many seeds.
use monotet::geometry::{
    halfspace_intersection, HalfSpace, HalfspaceIntersection, Label, Plane, Vec3,
};
use monotet::tipping::{falling_pattern, tests_support::random_tetra};
use monotet::zones::enumerate_zones;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let seeds: Vec<u64> = (100..112).collect();
    let mut zone_checks = 0u64;
    let mut tetra_roundtrips = 0u64;
    let mut bundles = 0u64;
    let mut loadable = 0u64;

    for &seed in &seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);

        // Facet roundtrip: intersection of a tetra's own facets reproduces
        // its volume.
        for _ in 0..800 {
            let t = random_tetra(&mut rng, 50.0);
            let hs: Vec<HalfSpace> = Label::ALL
                .iter()
                .map(|&l| HalfSpace::new(t.face_plane(l).unwrap()))
                .collect();
            let HalfspaceIntersection::Bounded(poly) = halfspace_intersection(&hs).unwrap() else {
                panic!("tetra facets gave empty intersection: {:?}", t.vertices());
            };
            let rel = (poly.volume_centroid().volume_mm3 - t.volume_mm3()).abs() / t.volume_mm3();
            assert!(rel < 1e-9, "roundtrip error {rel} for {:?}", t.vertices());
            tetra_roundtrips += 1;
        }

        // Random bounded bundles: result is convex-consistent.
        for _ in 0..300 {
            let mut hs: Vec<HalfSpace> = Vec::new();
            for n in [
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(0.0, 1.0, 0.0),
                Vec3::new(0.0, 0.0, 1.0),
            ] {
                hs.push(HalfSpace::new(Plane::new(n, 10.0).unwrap()));
                hs.push(HalfSpace::new(Plane::new(-n, 10.0).unwrap()));
            }
            for _ in 0..10 {
                let n = Vec3::new(
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                );
                if let Some(n) = n.normalized() {
                    hs.push(HalfSpace::new(
                        Plane::new(n, rng.random_range(-2.0..9.0)).unwrap(),
                    ));
                }
            }
            match halfspace_intersection(&hs) {
                Ok(HalfspaceIntersection::Bounded(poly)) => {
                    // Every vertex satisfies every constraint (loosened by
                    // solver tolerance).
                    for v in poly.vertices() {
                        for h in &hs {
                            assert!(
                                h.excess(*v) < 1e-6,
                                "vertex {v:?} violates a constraint by {}",
                                h.excess(*v)
                            );
                        }
                    }
                    bundles += 1;
                }
                Ok(HalfspaceIntersection::Empty) => {}
                Err(e) => panic!("bundle failed: {e}"),
            }
        }

        // Loadability + zone/simulator agreement on fresh shapes.
        for _ in 0..400 {
            let t = random_tetra(&mut rng, 50.0);
            let angles = t.dihedral_angles().unwrap();
            if angles.iter().any(|(_, a)| (a - 90.0).abs() < 0.05) {
                continue;
            }
            let report = enumerate_zones(&t).unwrap();
            assert_eq!(report.loadable, !report.paths.is_empty());
            if !report.loadable {
                continue;
            }
            loadable += 1;
            for zone in &report.zones {
                let region = zone.region.as_ref().unwrap();
                for _ in 0..40 {
                    let p = region.sample_uniform(&mut rng);
                    if region.interior_distance(p) < 1e-7 * t.diameter() {
                        continue;
                    }
                    if let Ok(got) = falling_pattern(&t, p) {
                        assert_eq!(got, zone.pattern, "zone mismatch on {:?}", t.vertices());
                        zone_checks += 1;
                    }
                }
            }
        }
    }
    println!(
        "soak ok: {tetra_roundtrips} facet roundtrips, {bundles} bundles, \
         {loadable} loadable shapes, {zone_checks} zone samples"
    );
}
