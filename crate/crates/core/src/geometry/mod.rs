//! Geometric primitives: points, planes, labeled tetrahedra, convex
//! polytopes, hulls and half-space intersections. Lengths are millimetres,
//! volumes mm³ unless a name says otherwise.

pub mod halfspace;
pub mod hull;
pub mod plane;
pub mod polytope;
pub mod tetrahedron;
pub mod vec3;

use thiserror::Error;

pub use halfspace::{halfspace_intersection, HalfspaceIntersection};
pub use hull::convex_hull;
pub use plane::{HalfSpace, Plane};
pub use polytope::{on_plane_tolerance, ConvexPolytope, Facet, VolumeCentroid};
pub use tetrahedron::{Edge, Label, Tetrahedron};
pub use vec3::{Point3, Vec3};

/// Volumes at or below this are degenerate: a thin sliver at double
/// precision with bench-scale (hundreds of mm) coordinates.
pub const VOLUME_FLOOR_MM3: f64 = 1e-9;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeometryError {
    #[error("coordinates must be finite")]
    NonFiniteCoordinate,
    #[error("plane normal is degenerate")]
    DegeneratePlane,
    #[error("points are collinear")]
    CollinearPoints,
    #[error("points are coplanar")]
    CoplanarPoints,
    #[error("need at least 4 points, got {got}")]
    TooFewPoints { got: usize },
    #[error("volume {volume} mm³ is at or below the degeneracy floor")]
    DegenerateVolume { volume: f64 },
    #[error("edge endpoints must differ")]
    InvalidEdge,
    #[error("polytope is not full-dimensional")]
    NotFullDimensional,
    #[error("facet {facet} is malformed")]
    BadFacet { facet: usize },
    #[error("vertex {vertex} violates facet {facet} by {excess} mm")]
    NotConvex {
        facet: usize,
        vertex: usize,
        excess: f64,
    },
    #[error("facet graph is not a closed surface")]
    NotClosed,
    #[error("Euler relation violated: V={v} E={e} F={f}")]
    EulerViolation { v: i64, e: i64, f: i64 },
    #[error("convex hull construction failed on degenerate configuration")]
    HullFailure,
    #[error("half-space list is empty")]
    NoHalfSpaces,
    #[error("half-space intersection is unbounded")]
    UnboundedIntersection,
}
