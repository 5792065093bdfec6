//! Quasi-static statics on a horizontal plane: which faces support rest,
//! which edge a body rolls over when they do not, and the resulting falling
//! patterns and tumble sequences.

use thiserror::Error;

use crate::geometry::{ConvexPolytope, Edge, GeometryError, Label, Plane, Point3, Tetrahedron};
use crate::pattern::{FaceOutcome, FallingPattern, PatternError};

/// Obtuseness of a dihedral angle requires clearing 90° by this much, so a
/// right angle never counts as obtuse.
pub const OBTUSE_TIE_TOL_DEG: f64 = 1e-7;

/// Relative tolerance (times body diameter) for calling a projection
/// marginal when it falls this close to a face boundary.
pub const MARGINAL_REL_TOL: f64 = 1e-9;

/// Tri-state support verdict: a projection within tolerance of the face
/// boundary is reported marginal, never silently stable or unstable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Unstable,
    Marginal,
}

/// Outcome of placing the body on one face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TipOutcome<F, E> {
    /// The face supports rest.
    Stable,
    /// Rolls over `over` onto `next`.
    TipsTo { next: F, over: E },
    /// The projection lies in a vertex's outer wedge; the roll direction is
    /// not determined quasi-statically.
    AmbiguousVertex { vertex: usize },
    /// Within tolerance of a face boundary.
    Marginal,
}

pub type TetraTip = TipOutcome<Label, Edge>;
pub type PolyTip = TipOutcome<usize, (usize, usize)>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum TippingError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error("tip outcome on face {face} is ambiguous or marginal")]
    Ambiguous { face: String },
    #[error("tumble did not terminate (energy descent violated)")]
    NonTerminating,
}

/// An ordered vertex walk `(p1, p2, p3, p4)` whose three edges all have
/// obtuse dihedral angles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ObtusePath {
    vertices: [Label; 4],
}

impl ObtusePath {
    pub fn vertices(&self) -> [Label; 4] {
        self.vertices
    }

    pub fn edges(&self) -> [Edge; 3] {
        let v = self.vertices;
        [
            Edge::new(v[0], v[1]).unwrap(),
            Edge::new(v[1], v[2]).unwrap(),
            Edge::new(v[2], v[3]).unwrap(),
        ]
    }

    /// The faces a body can roll across along this path, in chain order:
    /// consecutive chain faces share exactly the path edges.
    pub fn face_chain(&self) -> [Label; 4] {
        let v = self.vertices;
        [v[2], v[3], v[0], v[1]]
    }
}

impl std::fmt::Display for ObtusePath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let v = self.vertices;
        write!(
            f,
            "{}-{}-{}-{}",
            v[0].to_string().to_lowercase(),
            v[1].to_string().to_lowercase(),
            v[2].to_string().to_lowercase(),
            v[3].to_string().to_lowercase()
        )
    }
}

/// All obtuse paths of the tetrahedron, deduplicated up to reversal and
/// ordered lexicographically.
pub fn obtuse_paths(t: &Tetrahedron) -> Result<Vec<ObtusePath>, TippingError> {
    let mut obtuse = Vec::new();
    for (edge, angle) in t.dihedral_angles()? {
        if angle > 90.0 + OBTUSE_TIE_TOL_DEG {
            obtuse.push(edge);
        }
    }
    let mut paths = Vec::new();
    let labels = Label::ALL;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    let mut seen = [false; 4];
                    for idx in [i, j, k, l] {
                        seen[idx] = true;
                    }
                    if seen != [true; 4] {
                        continue;
                    }
                    // Dedupe reversals: keep the orientation whose first
                    // vertex is the smaller endpoint.
                    if i > l {
                        continue;
                    }
                    let order = [labels[i], labels[j], labels[k], labels[l]];
                    let e01 = Edge::new(order[0], order[1]).unwrap();
                    let e12 = Edge::new(order[1], order[2]).unwrap();
                    let e23 = Edge::new(order[2], order[3]).unwrap();
                    if [e01, e12, e23].iter().all(|e| obtuse.contains(e)) {
                        paths.push(ObtusePath { vertices: order });
                    }
                }
            }
        }
    }
    Ok(paths)
}

/// Per-edge signed excess of the projected centre of mass: positive means
/// the projection lies beyond that edge of the face polygon.
fn edge_excesses(plane: &Plane, polygon: &[Point3], com: Point3) -> Vec<f64> {
    let q = plane.project(com);
    let n = plane.normal();
    let mut centroid = Point3::ZERO;
    for p in polygon {
        centroid += *p;
    }
    centroid = centroid / polygon.len() as f64;
    (0..polygon.len())
        .map(|k| {
            let a = polygon[k];
            let b = polygon[(k + 1) % polygon.len()];
            let mut u = (b - a)
                .cross(n)
                .normalized()
                .expect("face polygon has distinct consecutive vertices");
            if u.dot(centroid - a) > 0.0 {
                u = -u;
            }
            u.dot(q - a)
        })
        .collect()
}

/// Face-level classification shared by the tetrahedron and polytope paths.
/// `marginal_tol` is an absolute length in mm.
fn classify(excesses: &[f64], marginal_tol: f64) -> RawTip {
    let beyond: Vec<usize> = (0..excesses.len())
        .filter(|&k| excesses[k] >= marginal_tol)
        .collect();
    let near: bool = excesses.iter().any(|e| e.abs() < marginal_tol);
    match beyond.len() {
        0 => {
            if near {
                RawTip::Marginal
            } else {
                RawTip::Inside
            }
        }
        1 => {
            if near {
                RawTip::Marginal
            } else {
                RawTip::Beyond(beyond[0])
            }
        }
        _ => {
            // Beyond two edges: in a convex polygon these meet at a vertex,
            // the start of edge `a` when the pair wraps around.
            let (a, b) = (beyond[0], beyond[1]);
            let n = excesses.len();
            let vertex = if (a + 1) % n == b { b } else { a };
            RawTip::Wedge(vertex)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum RawTip {
    Inside,
    Beyond(usize),
    Wedge(usize),
    Marginal,
}

// ---------------------------------------------------------------------------
// Tetrahedron-level operations
// ---------------------------------------------------------------------------

fn tetra_face_polygon(t: &Tetrahedron, face: Label) -> ([Label; 3], Vec<Point3>) {
    let labels = face.others();
    let pts = labels.iter().map(|&l| t.vertex(l)).collect();
    (labels, pts)
}

/// Support verdict for resting on `face` with centre of mass `com`.
pub fn face_stability(
    t: &Tetrahedron,
    com: Point3,
    face: Label,
) -> Result<Stability, TippingError> {
    let plane = t.face_plane(face)?;
    let (_, polygon) = tetra_face_polygon(t, face);
    let tol = MARGINAL_REL_TOL * t.diameter();
    let exc = edge_excesses(&plane, &polygon, com);
    Ok(match classify(&exc, tol) {
        RawTip::Inside => Stability::Stable,
        RawTip::Marginal => Stability::Marginal,
        _ => Stability::Unstable,
    })
}

/// Single quasi-static step from resting on `face`.
pub fn tip_step(t: &Tetrahedron, com: Point3, face: Label) -> Result<TetraTip, TippingError> {
    let plane = t.face_plane(face)?;
    let (labels, polygon) = tetra_face_polygon(t, face);
    let tol = MARGINAL_REL_TOL * t.diameter();
    let exc = edge_excesses(&plane, &polygon, com);
    Ok(match classify(&exc, tol) {
        RawTip::Inside => TipOutcome::Stable,
        RawTip::Marginal => TipOutcome::Marginal,
        RawTip::Wedge(v) => TipOutcome::AmbiguousVertex {
            vertex: labels[v].index(),
        },
        RawTip::Beyond(k) => {
            let u = labels[k];
            let v = labels[(k + 1) % 3];
            let w = labels[(k + 2) % 3]; // third vertex of the face
            TipOutcome::TipsTo {
                next: w,
                over: Edge::new(u, v).unwrap(),
            }
        }
    })
}

/// Whole falling pattern from four tip steps. Any ambiguous or marginal
/// face flags the pattern rather than guessing.
pub fn falling_pattern(t: &Tetrahedron, com: Point3) -> Result<FallingPattern, TippingError> {
    let mut outcomes = [FaceOutcome::Stable; 4];
    for face in Label::ALL {
        outcomes[face.index()] = match tip_step(t, com, face)? {
            TipOutcome::Stable => FaceOutcome::Stable,
            TipOutcome::TipsTo { next, .. } => FaceOutcome::TipsTo(next),
            TipOutcome::AmbiguousVertex { .. } | TipOutcome::Marginal => {
                return Err(TippingError::Ambiguous {
                    face: face.to_string(),
                })
            }
        };
    }
    Ok(FallingPattern::new(outcomes)?)
}

/// Height of the centre of mass above the support plane when resting on
/// `face`.
pub fn resting_height(t: &Tetrahedron, com: Point3, face: Label) -> Result<f64, TippingError> {
    let plane = t.face_plane(face)?;
    Ok(-plane.signed_distance(com))
}

/// One entry of a tumble trace: the face rested on and the centre-of-mass
/// height there.
#[derive(Debug, Clone, PartialEq)]
pub struct TumbleStep<F> {
    pub face: F,
    pub height_mm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TumbleEnd {
    Rested,
    Ambiguous,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TumbleTrace<F> {
    pub steps: Vec<TumbleStep<F>>,
    pub end: TumbleEnd,
}

/// Tumble a tetrahedron from `start` until it rests; heights strictly
/// decrease along the trace.
pub fn tumble_tetra(
    t: &Tetrahedron,
    com: Point3,
    start: Label,
) -> Result<TumbleTrace<Label>, TippingError> {
    let mut steps = Vec::new();
    let mut face = start;
    for _ in 0..Label::ALL.len() + 1 {
        steps.push(TumbleStep {
            face,
            height_mm: resting_height(t, com, face)?,
        });
        match tip_step(t, com, face)? {
            TipOutcome::Stable => {
                return Ok(TumbleTrace {
                    steps,
                    end: TumbleEnd::Rested,
                })
            }
            TipOutcome::TipsTo { next, .. } => face = next,
            TipOutcome::AmbiguousVertex { .. } | TipOutcome::Marginal => {
                return Ok(TumbleTrace {
                    steps,
                    end: TumbleEnd::Ambiguous,
                })
            }
        }
    }
    Err(TippingError::NonTerminating)
}

// ---------------------------------------------------------------------------
// Polytope-level operations (hulls of arbitrary meshes)
// ---------------------------------------------------------------------------

/// Support verdict for resting a convex body on facet `facet`.
pub fn facet_stability(
    body: &ConvexPolytope,
    com: Point3,
    facet: usize,
) -> Result<Stability, TippingError> {
    let f = &body.facets()[facet];
    let polygon = body.facet_polygon(facet);
    let tol = MARGINAL_REL_TOL * body.diameter();
    let exc = edge_excesses(&f.plane, &polygon, com);
    Ok(match classify(&exc, tol) {
        RawTip::Inside => Stability::Stable,
        RawTip::Marginal => Stability::Marginal,
        _ => Stability::Unstable,
    })
}

/// Single tip step on a convex polytope; `next` is the facet index across
/// the exit edge.
pub fn facet_tip_step(
    body: &ConvexPolytope,
    com: Point3,
    facet: usize,
) -> Result<PolyTip, TippingError> {
    let f = &body.facets()[facet];
    let polygon = body.facet_polygon(facet);
    let cycle = &f.vertices;
    let tol = MARGINAL_REL_TOL * body.diameter();
    let exc = edge_excesses(&f.plane, &polygon, com);
    Ok(match classify(&exc, tol) {
        RawTip::Inside => TipOutcome::Stable,
        RawTip::Marginal => TipOutcome::Marginal,
        RawTip::Wedge(v) => TipOutcome::AmbiguousVertex { vertex: cycle[v] },
        RawTip::Beyond(k) => {
            let a = cycle[k];
            let b = cycle[(k + 1) % cycle.len()];
            let key = (a.min(b), a.max(b));
            let adjacency = body.edge_facets();
            let (f1, f2) = adjacency[&key];
            let next = if f1 == facet { f2 } else { f1 };
            TipOutcome::TipsTo { next, over: key }
        }
    })
}

/// Height of the centre of mass above facet `facet`'s plane.
pub fn facet_resting_height(body: &ConvexPolytope, com: Point3, facet: usize) -> f64 {
    -body.facets()[facet].plane.signed_distance(com)
}

/// Tumble a convex body from a starting facet to rest. The sequence is
/// finite because every roll strictly lowers the centre of mass.
pub fn tumble_sequence(
    body: &ConvexPolytope,
    com: Point3,
    start: usize,
) -> Result<TumbleTrace<usize>, TippingError> {
    let mut steps = Vec::new();
    let mut facet = start;
    for _ in 0..body.facets().len() + 1 {
        steps.push(TumbleStep {
            face: facet,
            height_mm: facet_resting_height(body, com, facet),
        });
        match facet_tip_step(body, com, facet)? {
            TipOutcome::Stable => {
                return Ok(TumbleTrace {
                    steps,
                    end: TumbleEnd::Rested,
                })
            }
            TipOutcome::TipsTo { next, .. } => facet = next,
            TipOutcome::AmbiguousVertex { .. } | TipOutcome::Marginal => {
                return Ok(TumbleTrace {
                    steps,
                    end: TumbleEnd::Ambiguous,
                })
            }
        }
    }
    Err(TippingError::NonTerminating)
}


/// Small helpers shared by unit, property and acceptance tests.
pub mod tests_support {
    use rand::Rng;

    use crate::geometry::{Point3, Tetrahedron};

    /// Uniform random tetrahedron in a cube of the given half-width,
    /// re-drawn until it clears a practical volume floor.
    pub fn random_tetra<R: Rng + ?Sized>(rng: &mut R, half: f64) -> Tetrahedron {
        loop {
            let mut v = [Point3::ZERO; 4];
            for p in &mut v {
                *p = Point3::new(
                    rng.random_range(-half..half),
                    rng.random_range(-half..half),
                    rng.random_range(-half..half),
                );
            }
            if let Ok(t) = Tetrahedron::new(v) {
                if t.volume_mm3() > 1e-3 * half * half * half * 1e-3 {
                    return t;
                }
            }
        }
    }
}
