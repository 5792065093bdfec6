//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).

use std::path::Path;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use monotet::design::{
    fit_core, min_core_density, min_scale, verify_design, DensityThreshold, FrameSpec, MaterialSpec,
};
use monotet::geometry::{Label, Point3, Tetrahedron};
use monotet::pattern::parse_pattern;
use monotet::scene::load_scene;
use monotet::tipping::{
    face_stability, falling_pattern, tests_support::random_tetra, tumble_tetra, Stability,
    TumbleEnd,
};
use monotet::zones::{enumerate_zones, loading_zone, ZoneType};

fn scenes_dir() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenes"))
}

fn reference_tetra() -> Tetrahedron {
    load_scene(&scenes_dir().join("reference.toml"))
        .expect("reference scene loads")
        .tetrahedron
        .expect("reference scene has a tetrahedron")
}

fn reference_frame() -> FrameSpec {
    load_scene(&scenes_dir().join("reference.toml"))
        .expect("reference scene loads")
        .frame
        .expect("reference scene has a frame")
}

fn pass(n: u32, msg: impl std::fmt::Display) {
    println!("acceptance {n}: PASS - {msg}");
}

#[test]
fn criterion_01_zone_table_reproduction() {
    let start = Instant::now();
    let t = reference_tetra();
    let report = enumerate_zones(&t).unwrap();
    let elapsed = start.elapsed();

    let total_cm3 = report.tetra_volume_cm3();
    assert!(
        (total_cm3 - 668.624).abs() / 668.624 < 0.005,
        "total volume {total_cm3} cm3"
    );

    let expected = [
        ("B->A->D<-C", 1.4318),
        ("C->D->A<-B", 0.5716),
        ("B->A->D->C", 0.0199),
        ("C->D->A->B", 0.0067),
    ];
    assert_eq!(report.zones.len(), 4, "exactly four nonempty zones");
    for (pattern_str, target) in expected {
        let p = parse_pattern(pattern_str).unwrap();
        let zone = report
            .zones
            .iter()
            .find(|z| z.pattern == p)
            .unwrap_or_else(|| panic!("zone {pattern_str} missing"));
        let got = zone.volume_cm3();
        assert!(
            (got - target).abs() / target < 0.02,
            "zone {pattern_str}: {got} cm3 vs {target}"
        );
        // Observational, not fatal: generic zones have four vertices.
        let verts = zone
            .region
            .as_ref()
            .map(|r| r.vertices().len())
            .unwrap_or(0);
        if verts != 4 {
            eprintln!("note: zone {pattern_str} has {verts} vertices (expected 4)");
        }
    }
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    pass(
        1,
        format!("four zone volumes within 2%, total within 0.5%, in {elapsed:?}"),
    );
}

#[test]
fn criterion_02_type_i_dominance() {
    let t = reference_tetra();
    let report = enumerate_zones(&t).unwrap();
    let min_type_i = report
        .zones
        .iter()
        .filter(|z| z.zone_type == Some(ZoneType::I))
        .map(|z| z.volume_mm3)
        .fold(f64::INFINITY, f64::min);
    let max_type_ii = report
        .zones
        .iter()
        .filter(|z| z.zone_type == Some(ZoneType::II))
        .map(|z| z.volume_mm3)
        .fold(0.0, f64::max);
    let ratio = min_type_i / max_type_ii;
    assert!(ratio >= 10.0, "dominance ratio {ratio}");
    pass(2, format!("min Type I / max Type II = {ratio:.1}"));
}

#[test]
fn criterion_03_conway_guy_two_stable_faces() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..10_000 {
        let t = random_tetra(&mut rng, 50.0);
        let com = t.centroid();
        let stable = Label::ALL
            .iter()
            .filter(|&&f| face_stability(&t, com, f).unwrap() == Stability::Stable)
            .count();
        assert!(
            stable >= 2,
            "tetra {i} has {stable} stable faces: {:?}",
            t.vertices()
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    pass(
        3,
        format!("10000 centroid-loaded tetrahedra all rest on >= 2 faces in {elapsed:?}"),
    );
}

#[test]
fn criterion_04_zone_simulator_agreement() {
    let start = Instant::now();
    let t = reference_tetra();
    let report = enumerate_zones(&t).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let samples = 100_000u64;
    let marginal_tol = 1e-7 * t.diameter();
    let mut total_checked = 0u64;
    for zone in &report.zones {
        let region = zone.region.as_ref().unwrap();
        let mut marginal = 0u64;
        for _ in 0..samples {
            let p = region.sample_uniform(&mut rng);
            if region.interior_distance(p) < marginal_tol {
                marginal += 1;
                continue;
            }
            match falling_pattern(&t, p) {
                Ok(got) => assert_eq!(
                    got, zone.pattern,
                    "sample {p:?} in zone {} fell as {got}",
                    zone.pattern
                ),
                Err(_) => marginal += 1,
            }
            total_checked += 1;
        }
        assert!(
            marginal < samples / 100,
            "zone {}: {marginal} marginal samples",
            zone.pattern
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    pass(
        4,
        format!("{total_checked} non-marginal samples agree, in {elapsed:?}"),
    );
}

#[test]
fn criterion_05_loadability_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut loadable_count = 0;
    let mut tested = 0;
    while tested < 1000 {
        let t = random_tetra(&mut rng, 50.0);
        // Obtuseness is defined by a strict inequality; redraw tetrahedra
        // with near-right dihedrals where the classification is not robust.
        let angles = t.dihedral_angles().unwrap();
        if angles.iter().any(|(_, a)| (a - 90.0).abs() < 0.05) {
            continue;
        }
        tested += 1;
        let report = enumerate_zones(&t).unwrap();
        let has_path = !report.paths.is_empty();
        assert_eq!(
            report.loadable, has_path,
            "equivalence violated: zones nonempty = {}, obtuse path = {has_path}",
            report.loadable
        );
        if report.loadable {
            loadable_count += 1;
        }
    }
    assert!(loadable_count > 0, "no loadable tetrahedron in the sample");
    pass(
        5,
        format!("1000 tetrahedra, equivalence holds ({loadable_count} loadable)"),
    );
}

#[test]
fn criterion_06_design_end_to_end() {
    let t = reference_tetra();
    let frame = reference_frame();
    let wc = MaterialSpec::new("tungsten carbide", 14.15).unwrap();
    let target = loading_zone(&t, &parse_pattern("B->A->D<-C").unwrap()).unwrap();
    assert_eq!(target.zone_type, Some(ZoneType::I));
    let fit = fit_core(&t, &frame, &wc, &target).unwrap();
    assert!(fit.margin_mm > 0.0, "margin {}", fit.margin_mm);
    let (_, pattern) = verify_design(&t, &frame, &fit.core).unwrap();
    assert_eq!(pattern.stable_faces(), vec![Label::D], "pattern {pattern}");
    assert!(pattern.is_monostable());
    pass(
        6,
        format!(
            "tungsten-carbide fit margin {:.3} mm, design monostable on D ({pattern})",
            fit.margin_mm
        ),
    );
}

#[test]
fn criterion_07_type_ii_density_threshold() {
    let t = reference_tetra();
    let frame = reference_frame();
    let zone = loading_zone(&t, &parse_pattern("B->A->D->C").unwrap()).unwrap();
    assert_eq!(zone.zone_type, Some(ZoneType::II));
    let threshold = match min_core_density(&t, &frame, &zone).unwrap() {
        DensityThreshold::Reachable(d) => d,
        DensityThreshold::Unreachable => panic!("threshold unreachable"),
    };
    assert!(
        (threshold - 234.0).abs() / 234.0 <= 0.20,
        "threshold {threshold} g/cm3 outside 234 +/- 20%"
    );
    assert!(
        threshold > 22.6,
        "threshold {threshold} not above every earthly density"
    );
    pass(
        7,
        format!("Type II needs {threshold:.1} g/cm3 (within 234 +/- 20%)"),
    );
}

#[test]
fn criterion_08_minimal_size_soft_check() {
    let t = reference_tetra();
    let frame = reference_frame();
    let wc = MaterialSpec::new("tungsten carbide", 14.15).unwrap();
    let zone = loading_zone(&t, &parse_pattern("B->A->D<-C").unwrap()).unwrap();
    let fit = fit_core(&t, &frame, &wc, &zone).unwrap();
    let s = min_scale(&t, &frame, &fit.core, &zone).unwrap();
    if (0.85..=0.95).contains(&s) {
        pass(8, format!("min_scale {s:.4} inside [0.85, 0.95]"));
    } else {
        // Soft criterion: report diagnostics instead of failing.
        println!(
            "acceptance 8: SOFT - min_scale {s:.4} outside [0.85, 0.95]; \
             fit margin {:.4} mm, zone volume {:.4} cm3",
            fit.margin_mm,
            zone.volume_cm3()
        );
    }
}

#[test]
fn criterion_09_energy_monotonicity() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut tumbles = 0u64;
    for _ in 0..10_000 {
        let t = random_tetra(&mut rng, 50.0);
        // Uniform interior com via Dirichlet barycentric weights.
        let mut w = [0.0f64; 4];
        let mut sum = 0.0;
        for wi in &mut w {
            *wi = -rng.random_range(1e-12..1.0f64).ln();
            sum += *wi;
        }
        let verts = t.vertices();
        let mut com = Point3::ZERO;
        for (k, v) in verts.iter().enumerate() {
            com += *v * (w[k] / sum);
        }
        let start = Label::ALL[rng.random_range(0..4)];
        let trace = tumble_tetra(&t, com, start).unwrap();
        for pair in trace.steps.windows(2) {
            assert!(
                pair[1].height_mm < pair[0].height_mm,
                "height rose: {:?} on {:?}",
                pair,
                t.vertices()
            );
        }
        if trace.end == TumbleEnd::Rested && trace.steps.len() > 1 {
            tumbles += 1;
        }
    }
    pass(
        9,
        format!("10000 tumbles strictly descend ({tumbles} multi-step)"),
    );
}

#[test]
fn criterion_10_heppes_two_edge_tumble() {
    // Random search: the same stream as the frozen fixture's discovery.
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut found: Option<(Tetrahedron, Label, u64)> = None;
    'search: for trial in 0..1_000_000u64 {
        let mut v = [Point3::ZERO; 4];
        for p in &mut v {
            *p = Point3::new(
                rng.random_range(-50.0..50.0),
                rng.random_range(-50.0..50.0),
                rng.random_range(-50.0..50.0),
            );
        }
        let Ok(t) = Tetrahedron::new(v) else { continue };
        if t.volume_mm3() < 1000.0 {
            continue;
        }
        let com = t.centroid();
        if falling_pattern(&t, com).is_err() {
            continue;
        }
        for start in Label::ALL {
            let trace = tumble_tetra(&t, com, start).unwrap();
            if trace.end == TumbleEnd::Rested && trace.steps.len() == 3 {
                found = Some((t, start, trial));
                break 'search;
            }
        }
    }
    let (t, start, trial) = found.expect("no two-edge tumble within 1e6 samples");
    let trace = tumble_tetra(&t, t.centroid(), start).unwrap();
    assert_eq!(trace.steps.len(), 3);

    // Regression fixture: the frozen instance keeps showing the phenomenon.
    let frozen = load_scene(&scenes_dir().join("heppes.toml"))
        .unwrap()
        .tetrahedron
        .unwrap();
    let frozen_trace = tumble_tetra(&frozen, frozen.centroid(), Label::B).unwrap();
    assert_eq!(frozen_trace.end, TumbleEnd::Rested);
    let faces: Vec<Label> = frozen_trace.steps.iter().map(|s| s.face).collect();
    assert_eq!(faces, vec![Label::B, Label::C, Label::D]);

    pass(
        10,
        format!("two-edge tumbler found at sample {trial} (start {start}); frozen fixture rolls B->C->D"),
    );
}
