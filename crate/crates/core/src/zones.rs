//! Loading zones: for each falling pattern, the convex set of centre-of-mass
//! positions that realize it, built as a half-space intersection and
//! measured in cm³.

use std::fmt;

use thiserror::Error;

use crate::geometry::{
    halfspace_intersection, ConvexPolytope, GeometryError, HalfSpace, HalfspaceIntersection, Label,
    Point3, Tetrahedron, Vec3, VOLUME_FLOOR_MM3,
};
use crate::pattern::{FaceOutcome, FallingPattern};
use crate::tipping::{obtuse_paths, ObtusePath, TippingError};

/// Zones whose stable face sits in the interior of the rolling chain are
/// Type I; stable chain endpoints give Type II.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZoneType {
    I,
    II,
}

impl fmt::Display for ZoneType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ZoneType::I => "I",
            ZoneType::II => "II",
        })
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ZoneError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Tipping(#[from] TippingError),
    #[error("pattern {pattern} is not a chain over path {path}")]
    NotAChainOverPath { pattern: String, path: String },
}

/// The set of centres of mass realizing one falling pattern.
#[derive(Debug, Clone)]
pub struct LoadingZone {
    pub pattern: FallingPattern,
    /// `None` when the zone is empty (or below the volume floor).
    pub region: Option<ConvexPolytope>,
    pub volume_mm3: f64,
    /// Chain patterns classify as Type I or II; general patterns do not.
    pub zone_type: Option<ZoneType>,
}

impl LoadingZone {
    pub fn volume_cm3(&self) -> f64 {
        self.volume_mm3 / 1000.0
    }

    pub fn is_empty(&self) -> bool {
        self.region.is_none()
    }
}

/// Zones of a tetrahedron, one per realizable chain pattern.
#[derive(Debug, Clone)]
pub struct ZoneReport {
    pub tetra_volume_mm3: f64,
    pub paths: Vec<ObtusePath>,
    /// Nonempty zones, Type I first, then by descending volume.
    pub zones: Vec<LoadingZone>,
    pub loadable: bool,
}

impl ZoneReport {
    pub fn tetra_volume_cm3(&self) -> f64 {
        self.tetra_volume_mm3 / 1000.0
    }
}

/// In-face outward half-space of one face edge: the boundary plane passes
/// through the edge perpendicular to the face, and the interior side
/// contains the face's third vertex.
fn edge_constraint(
    t: &Tetrahedron,
    face: Label,
    edge_u: Label,
    edge_v: Label,
    keep_inside: bool,
) -> Result<HalfSpace, ZoneError> {
    let n = t.face_plane(face)?.normal();
    let a = t.vertex(edge_u);
    let b = t.vertex(edge_v);
    let third = face
        .others()
        .into_iter()
        .find(|l| *l != edge_u && *l != edge_v)
        .expect("face has three vertices");
    let mut out = (b - a)
        .cross(n)
        .normalized()
        .ok_or(GeometryError::DegeneratePlane)?;
    if out.dot(t.vertex(third) - a) > 0.0 {
        out = -out;
    }
    // Inside: out · p ≤ out · a.  Beyond: out · p ≥ out · a.
    let (normal, point): (Vec3, Point3) = if keep_inside { (out, a) } else { (-out, a) };
    Ok(HalfSpace::boundary_through(normal, point)?)
}

/// The half-space system whose intersection is the loading zone of `p`:
/// per unstable face, one "beyond the exit edge" constraint plus two
/// "inside the other edges" constraints; per stable face, three inside
/// constraints; plus the four facet half-spaces of the tetrahedron itself.
pub fn pattern_halfspaces(
    t: &Tetrahedron,
    p: &FallingPattern,
) -> Result<Vec<HalfSpace>, ZoneError> {
    let mut out = Vec::with_capacity(16);
    for face in Label::ALL {
        let verts = face.others();
        match p.outcome(face) {
            FaceOutcome::Stable => {
                for i in 0..3 {
                    out.push(edge_constraint(
                        t,
                        face,
                        verts[i],
                        verts[(i + 1) % 3],
                        true,
                    )?);
                }
            }
            FaceOutcome::TipsTo(next) => {
                // Exit edge: the two vertices shared by `face` and `next`.
                for i in 0..3 {
                    let (u, v) = (verts[i], verts[(i + 1) % 3]);
                    let is_exit = u != next && v != next;
                    out.push(edge_constraint(t, face, u, v, !is_exit)?);
                }
            }
        }
    }
    for face in Label::ALL {
        out.push(HalfSpace::new(t.face_plane(face)?));
    }
    Ok(out)
}

/// Computes the loading zone of a pattern. Empty and measure-zero
/// intersections give volume 0 with no region.
pub fn loading_zone(t: &Tetrahedron, p: &FallingPattern) -> Result<LoadingZone, ZoneError> {
    let hs = pattern_halfspaces(t, p)?;
    let zone_type = classify_pattern(p);
    match halfspace_intersection(&hs)? {
        HalfspaceIntersection::Empty => Ok(LoadingZone {
            pattern: *p,
            region: None,
            volume_mm3: 0.0,
            zone_type,
        }),
        HalfspaceIntersection::Bounded(poly) => {
            let vc = poly.volume_centroid();
            if vc.degenerate || vc.volume_mm3 <= VOLUME_FLOOR_MM3 {
                return Ok(LoadingZone {
                    pattern: *p,
                    region: None,
                    volume_mm3: 0.0,
                    zone_type,
                });
            }
            Ok(LoadingZone {
                pattern: *p,
                region: Some(poly),
                volume_mm3: vc.volume_mm3,
                zone_type,
            })
        }
    }
}

/// Type of a chain pattern relative to an obtuse path: Type I when the
/// stable face is one of the two interior chain faces (the faces opposite
/// the path's first and last vertices), Type II at the endpoints.
pub fn zone_type(p: &FallingPattern, path: &ObtusePath) -> Result<ZoneType, ZoneError> {
    let chain = p.chain().ok_or_else(|| ZoneError::NotAChainOverPath {
        pattern: p.to_string(),
        path: path.to_string(),
    })?;
    let expected = path.face_chain();
    let matches_path =
        chain == expected || chain == [expected[3], expected[2], expected[1], expected[0]];
    if !matches_path {
        return Err(ZoneError::NotAChainOverPath {
            pattern: p.to_string(),
            path: path.to_string(),
        });
    }
    let stable = p.stable_faces()[0];
    let pos = expected.iter().position(|l| *l == stable).unwrap();
    Ok(if pos == 1 || pos == 2 {
        ZoneType::I
    } else {
        ZoneType::II
    })
}

/// Classifies a standalone pattern by recovering its chain, if any; the
/// path is implicit in the chain (interior sink ⇔ Type I).
fn classify_pattern(p: &FallingPattern) -> Option<ZoneType> {
    let chain = p.chain()?;
    let stable = p.stable_faces()[0];
    let pos = chain.iter().position(|l| *l == stable).unwrap();
    Some(if pos == 1 || pos == 2 {
        ZoneType::I
    } else {
        ZoneType::II
    })
}

/// The chain pattern over `face_chain` whose stable face sits at `sink`.
/// Arrows point toward the sink along the chain.
pub fn chain_pattern(face_chain: [Label; 4], sink: usize) -> FallingPattern {
    let mut outcomes = [FaceOutcome::Stable; 4];
    for (i, face) in face_chain.iter().enumerate() {
        if i < sink {
            outcomes[face.index()] = FaceOutcome::TipsTo(face_chain[i + 1]);
        } else if i > sink {
            outcomes[face.index()] = FaceOutcome::TipsTo(face_chain[i - 1]);
        }
    }
    FallingPattern::new(outcomes).expect("chain toward a sink is a valid pattern")
}

/// Enumerates the zones of all chain patterns along every obtuse path,
/// dropping empties. No obtuse path means the tetrahedron is not loadable.
pub fn enumerate_zones(t: &Tetrahedron) -> Result<ZoneReport, ZoneError> {
    let paths = obtuse_paths(t)?;
    let mut zones: Vec<LoadingZone> = Vec::new();
    for path in &paths {
        let chain = path.face_chain();
        for sink in 0..4 {
            let pattern = chain_pattern(chain, sink);
            if zones.iter().any(|z| z.pattern == pattern) {
                continue;
            }
            let zone = loading_zone(t, &pattern)?;
            if !zone.is_empty() {
                zones.push(zone);
            }
        }
    }
    zones.sort_by(|a, b| {
        let key = |z: &LoadingZone| match z.zone_type {
            Some(ZoneType::I) => 0,
            Some(ZoneType::II) => 1,
            None => 2,
        };
        key(a)
            .cmp(&key(b))
            .then(b.volume_mm3.partial_cmp(&a.volume_mm3).unwrap())
            .then_with(|| a.pattern.to_string().cmp(&b.pattern.to_string()))
    });
    let loadable = !zones.is_empty();
    Ok(ZoneReport {
        tetra_volume_mm3: t.volume_mm3(),
        paths,
        zones,
        loadable,
    })
}

/// Enumerates every successor map (each face stable or tipping onto one of
/// its three neighbors, at least one stable) and returns the nonempty
/// zones. Research aid behind the CLI's `--all-patterns` flag; chain zones
/// along obtuse paths are the realizable monostable ones.
pub fn enumerate_all_pattern_zones(t: &Tetrahedron) -> Result<Vec<LoadingZone>, ZoneError> {
    let mut out = Vec::new();
    // Encode per-face choice 0..3: 0 = stable, 1..3 = index into others().
    for code in 0..(4usize.pow(4)) {
        let mut outcomes = [FaceOutcome::Stable; 4];
        let mut digits = code;
        for face in Label::ALL {
            let d = digits % 4;
            digits /= 4;
            outcomes[face.index()] = if d == 0 {
                FaceOutcome::Stable
            } else {
                FaceOutcome::TipsTo(face.others()[d - 1])
            };
        }
        let Ok(pattern) = FallingPattern::new(outcomes) else {
            continue;
        };
        let zone = loading_zone(t, &pattern)?;
        if !zone.is_empty() {
            out.push(zone);
        }
    }
    out.sort_by(|a, b| {
        b.volume_mm3
            .partial_cmp(&a.volume_mm3)
            .unwrap()
            .then_with(|| a.pattern.to_string().cmp(&b.pattern.to_string()))
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::parse_pattern;
    use crate::shapes::{corner_tetrahedron, regular_tetrahedron};
    use crate::tipping::falling_pattern;
    use Label::{A, B, C, D};

    #[test]
    fn sixteen_halfspaces_for_any_full_pattern() {
        let t = regular_tetrahedron(10.0);
        let mono = parse_pattern("B->A->D<-C").unwrap();
        assert_eq!(pattern_halfspaces(&t, &mono).unwrap().len(), 16);
        let all_stable = FallingPattern::new([FaceOutcome::Stable; 4]).unwrap();
        assert_eq!(pattern_halfspaces(&t, &all_stable).unwrap().len(), 16);
    }

    #[test]
    fn all_stable_zone_contains_regular_centroid() {
        let t = regular_tetrahedron(10.0);
        let all_stable = FallingPattern::new([FaceOutcome::Stable; 4]).unwrap();
        let zone = loading_zone(&t, &all_stable).unwrap();
        let region = zone.region.expect("nonempty");
        assert!(region.contains(t.centroid(), 1e-9));
    }

    #[test]
    fn regular_tetra_is_not_loadable() {
        let t = regular_tetrahedron(10.0);
        for s in ["B->A->D<-C", "C->D->A<-B", "B->A->D->C", "C->D->A->B"] {
            let zone = loading_zone(&t, &parse_pattern(s).unwrap()).unwrap();
            assert!(zone.is_empty(), "{s} should be unrealizable");
        }
        let report = enumerate_zones(&t).unwrap();
        assert!(!report.loadable);
        assert!(report.zones.is_empty());
    }

    #[test]
    fn corner_tetra_is_not_loadable() {
        let report = enumerate_zones(&corner_tetrahedron(10.0)).unwrap();
        assert!(!report.loadable);
    }

    #[test]
    fn zone_types_follow_the_sink_position() {
        let b_a_d_c = parse_pattern("B->A->D<-C").unwrap(); // sink D, interior
        let c_d_a_b = parse_pattern("C->D->A<-B").unwrap(); // sink A, interior
        let b_a_d_c2 = parse_pattern("B->A->D->C").unwrap(); // sink C, endpoint
        let c_d_a_b2 = parse_pattern("C->D->A->B").unwrap(); // sink B, endpoint
        assert_eq!(classify_pattern(&b_a_d_c), Some(ZoneType::I));
        assert_eq!(classify_pattern(&c_d_a_b), Some(ZoneType::I));
        assert_eq!(classify_pattern(&b_a_d_c2), Some(ZoneType::II));
        assert_eq!(classify_pattern(&c_d_a_b2), Some(ZoneType::II));
    }

    #[test]
    fn zone_type_requires_matching_path() {
        // Path a-b-c-d has face chain C-D-A-B.
        let t = loadable_fixture();
        let paths = obtuse_paths(&t).unwrap();
        assert!(!paths.is_empty());
        let path = paths[0];
        let sink_d = chain_pattern(path.face_chain(), 2);
        assert_eq!(zone_type(&sink_d, &path).unwrap(), ZoneType::I);
        let star = FallingPattern::new([
            FaceOutcome::TipsTo(D),
            FaceOutcome::TipsTo(D),
            FaceOutcome::TipsTo(D),
            FaceOutcome::Stable,
        ])
        .unwrap();
        assert!(matches!(
            zone_type(&star, &path),
            Err(ZoneError::NotAChainOverPath { .. })
        ));
    }

    /// A loadable integer-coordinate tetrahedron: one obtuse path a-b-c-d
    /// (dihedrals 109.1°, 98.3°, 113.8°) and four nonempty zones.
    fn loadable_fixture() -> Tetrahedron {
        Tetrahedron::new([
            Point3::new(45.0, -60.0, 55.0),
            Point3::new(5.0, 40.0, 5.0),
            Point3::new(10.0, 10.0, 40.0),
            Point3::new(-60.0, 60.0, -60.0),
        ])
        .unwrap()
    }

    #[test]
    fn chain_zone_samples_reproduce_their_pattern() {
        use rand::SeedableRng;
        let t = loadable_fixture();
        let report = enumerate_zones(&t).unwrap();
        if !report.loadable {
            // Fixture drifted; the reconstruction-backed acceptance suite
            // covers this thoroughly, so just require loadability here.
            panic!("fixture should be loadable");
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for zone in &report.zones {
            let region = zone.region.as_ref().unwrap();
            let mut checked = 0;
            for _ in 0..200 {
                let p = region.sample_uniform(&mut rng);
                if region.interior_distance(p) < 1e-6 * t.diameter() {
                    continue; // skip marginal samples
                }
                let got = falling_pattern(&t, p).unwrap();
                assert_eq!(got, zone.pattern, "sample {p:?} disagrees");
                checked += 1;
            }
            assert!(checked > 100, "too few interior samples");
        }
    }

    #[test]
    fn loadability_matches_obtuse_paths_on_random_tetra() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        let mut loadable_seen = 0;
        // Loadable tetrahedra are rare (roughly 1%), so sample plenty.
        for _ in 0..800 {
            let t = crate::tipping::tests_support::random_tetra(&mut rng, 50.0);
            // Skip near-right dihedrals; obtuseness is only meaningful when
            // robust under perturbation.
            let angles = t.dihedral_angles().unwrap();
            if angles.iter().any(|(_, a)| (a - 90.0).abs() < 0.05) {
                continue;
            }
            let report = enumerate_zones(&t).unwrap();
            let has_path = !report.paths.is_empty();
            assert_eq!(report.loadable, has_path);
            if report.loadable {
                loadable_seen += 1;
            }
        }
        assert!(loadable_seen > 0, "no loadable tetrahedron sampled");
    }

    #[test]
    fn stable_d_pattern_for_path_abcd_is_table_row_one() {
        // Chain faces C-D-A-B with sink at D formats as B->A->D<-C.
        let chain = [C, D, A, B];
        let p = chain_pattern(chain, 1);
        assert_eq!(p.to_string(), "B->A->D<-C");
        let p = chain_pattern(chain, 2);
        assert_eq!(p.to_string(), "C->D->A<-B");
        let p = chain_pattern(chain, 0);
        assert_eq!(p.to_string(), "B->A->D->C");
        let p = chain_pattern(chain, 3);
        assert_eq!(p.to_string(), "C->D->A->B");
    }
}
